use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// One persistence pair.
///
/// `death` is `f64::INFINITY` for classes still alive at the end of the
/// filtration. Those are either essential (`truncated == false`, only the
/// one surviving component) or cut off by the filtration cap
/// (`truncated == true`: the true death exceeds `max_eps`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
    pub truncated: bool,
}

impl Feature {
    pub fn finite(dim: usize, birth: f64, death: f64) -> Self {
        Self {
            dim,
            birth,
            death,
            truncated: false,
        }
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite() && !self.truncated
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.total_cmp(&other.death))
            .then(self.truncated.cmp(&other.truncated))
    }
}

/// Multiset of features from a Rips filtration capped at `max_eps`.
///
/// Features are kept in canonical order (dimension, birth, death), so two
/// diagrams are equal exactly when their multisets agree bitwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    features: Vec<Feature>,
    max_eps: f64,
}

impl PersistenceDiagram {
    pub fn new(mut features: Vec<Feature>, max_eps: f64) -> Self {
        features.sort_by(Feature::canonical_cmp);
        Self { features, max_eps }
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn max_eps(&self) -> f64 {
        self.max_eps
    }

    pub fn of_dim(&self, dim: usize) -> impl Iterator<Item = &Feature> {
        self.features.iter().filter(move |f| f.dim == dim)
    }

    /// `death - birth`; for truncated features the lower bound `max_eps - birth`.
    pub fn lifetime(&self, f: &Feature) -> f64 {
        if f.truncated {
            self.max_eps - f.birth
        } else {
            f.death - f.birth
        }
    }

    /// Betti numbers `(β0, β1, β2)` at scale `eps`: features with
    /// `birth <= eps < death`.
    pub fn betti_at(&self, eps: f64) -> [usize; 3] {
        let mut betti = [0; 3];
        for f in &self.features {
            if f.dim < 3 && f.birth <= eps && eps < f.death {
                betti[f.dim] += 1;
            }
        }
        betti
    }

    /// Up to `k` non-essential features of dimension `dim`, longest lifetime
    /// first; ties go to the earlier birth.
    pub fn top_k_features(&self, dim: usize, k: usize) -> Vec<Feature> {
        let mut out: Vec<Feature> = self
            .of_dim(dim)
            .filter(|f| !f.is_essential())
            .copied()
            .collect();
        out.sort_by(|a, b| {
            self.lifetime(b)
                .total_cmp(&self.lifetime(a))
                .then(a.birth.total_cmp(&b.birth))
        });
        out.truncate(k);
        out
    }
}

/// See [`PersistenceDiagram::betti_at`].
pub fn betti_at(diagram: &PersistenceDiagram, eps: f64) -> [usize; 3] {
    diagram.betti_at(eps)
}

/// See [`PersistenceDiagram::top_k_features`].
pub fn top_k_features(diagram: &PersistenceDiagram, dim: usize, k: usize) -> Vec<Feature> {
    diagram.top_k_features(dim, k)
}

/// Turn surviving classes into features: one essential component, every
/// other survivor flagged as cut off by the cap.
pub(crate) fn close_unpaired(
    features: &mut Vec<Feature>,
    unpaired: impl IntoIterator<Item = (usize, f64)>,
) {
    let mut essential_component = false;
    for (dim, birth) in unpaired {
        let truncated = if dim == 0 && !essential_component {
            essential_component = true;
            false
        } else {
            true
        };
        features.push(Feature {
            dim,
            birth,
            death: f64::INFINITY,
            truncated,
        });
    }
}
