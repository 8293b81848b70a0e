//! Structural predictions checked against computed diagrams and clouds.

use serde::{Deserialize, Serialize};

use crate::analysis::echo::EchoSupport;
use crate::domain::{euclidean, PointCloud};
use crate::error::{Error, Result};
use crate::rips::{Feature, PersistenceDiagram};

/// Betti numbers of a wedge of `num_echos` spheres of dimension
/// `domain_dim`.
pub fn expected_betti(num_echos: usize, domain_dim: usize) -> Result<[usize; 3]> {
    if !(1..=2).contains(&domain_dim) {
        return Err(Error::domain(format!(
            "domain dimension must be 1 or 2, got {domain_dim}"
        )));
    }
    let mut betti = [1, 0, 0];
    betti[domain_dim] = num_echos;
    Ok(betti)
}

/// Outcome of matching one echo to a persistence feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeathVerdict {
    pub sigma: f64,
    /// `sigma / 2`, before tolerance.
    pub predicted_death_lb: f64,
    pub matched: Option<Feature>,
    pub pass: bool,
}

/// Check that every echo owns a feature dying no earlier than `sigma / 2`.
///
/// Echos sorted by descending `sigma` are paired with the longest-lived
/// `dim`-features in order. A feature passes when its death is at least
/// `(sigma / 2) * (1 - sampling_tolerance)`; a truncated feature passes
/// when the cap itself clears that bound. Echos left without a feature
/// fail. Verdicts come back in the order of `echos`.
pub fn check_death_bound(
    echos: &[EchoSupport],
    diagram: &PersistenceDiagram,
    dim: usize,
    sampling_tolerance: f64,
) -> Vec<DeathVerdict> {
    let sigmas: Vec<f64> = echos.iter().map(|e| e.sigma).collect();
    check_death_bound_sigmas(&sigmas, diagram, dim, sampling_tolerance)
}

/// [`check_death_bound`] on bare cross sections.
pub fn check_death_bound_sigmas(
    sigmas: &[f64],
    diagram: &PersistenceDiagram,
    dim: usize,
    sampling_tolerance: f64,
) -> Vec<DeathVerdict> {
    let mut order: Vec<usize> = (0..sigmas.len()).collect();
    order.sort_by(|&a, &b| sigmas[b].total_cmp(&sigmas[a]).then(a.cmp(&b)));
    let features = diagram.top_k_features(dim, sigmas.len());

    let mut verdicts = vec![None; sigmas.len()];
    for (rank, &i) in order.iter().enumerate() {
        let sigma = sigmas[i];
        let bound = sigma / 2.0 * (1.0 - sampling_tolerance);
        let matched = features.get(rank).copied();
        let pass = match matched {
            Some(f) if f.truncated => diagram.max_eps() >= bound,
            Some(f) => f.death >= bound,
            None => false,
        };
        verdicts[i] = Some(DeathVerdict {
            sigma,
            predicted_death_lb: sigma / 2.0,
            matched,
            pass,
        });
    }
    verdicts.into_iter().map(Option::unwrap).collect()
}

/// Sufficient condition for a generic point-scatterer signal map to be
/// injective: `p` scatterers, `l` sample channels, `d`-dimensional domain.
pub fn injectivity_condition(p: usize, l: usize, d: usize) -> Result<bool> {
    if p == 0 || l == 0 || d == 0 {
        return Err(Error::domain(
            "scatterer, channel and domain counts must be positive",
        ));
    }
    Ok(2 * p.min(l) > d)
}

/// A pair of far-apart look angles whose embedded points nearly coincide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfIntersection {
    pub theta_i: f64,
    pub theta_j: f64,
    pub distance: f64,
    /// Smaller of the two points' norms. Crossings near zero are expected;
    /// crossings far from zero hint at a symmetric, likely artificial target.
    pub min_norm: f64,
}

/// All pairs closer than `codomain_tol` whose angles differ by more than
/// `domain_sep_deg` around the circle.
pub fn self_intersection_scan(
    cloud: &PointCloud,
    codomain_tol: f64,
    domain_sep_deg: f64,
) -> Result<Vec<SelfIntersection>> {
    let angles = cloud
        .labels()
        .and_then(|labels| {
            labels
                .iter()
                .map(|l| l.angle())
                .collect::<Option<Vec<f64>>>()
        })
        .ok_or_else(|| Error::domain("self-intersection scan needs angle labels"))?;
    let norm = |i: usize| cloud.point(i).iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut out = Vec::new();
    for i in 0..cloud.len() {
        for j in i + 1..cloud.len() {
            let gap = (angles[i] - angles[j]).rem_euclid(360.0);
            if gap.min(360.0 - gap) <= domain_sep_deg {
                continue;
            }
            let distance = euclidean(cloud.point(i), cloud.point(j));
            if distance < codomain_tol {
                out.push(SelfIntersection {
                    theta_i: angles[i],
                    theta_j: angles[j],
                    distance,
                    min_norm: norm(i).min(norm(j)),
                });
            }
        }
    }
    Ok(out)
}

/// Per-echo line of an [`EchoReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EchoEntry {
    pub start_deg: f64,
    pub end_deg: f64,
    pub peak_deg: f64,
    pub sigma: f64,
    pub loop_length: f64,
    pub predicted_death_lb: f64,
    /// `None` when no feature was matched or the match outlived the cap.
    pub matched_death: Option<f64>,
    pub matched_truncated: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Echo segmentation together with its predicted and observed topology.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EchoReport {
    pub echos: Vec<EchoEntry>,
    pub expected_betti: [usize; 3],
    /// Absolute magnitude threshold.
    pub threshold: f64,
    pub threshold_fraction: f64,
    pub sampling_tolerance: f64,
}

impl EchoReport {
    pub fn build(
        echos: &[EchoSupport],
        threshold: f64,
        threshold_fraction: f64,
        diagram: &PersistenceDiagram,
        domain_dim: usize,
        sampling_tolerance: f64,
    ) -> Result<Self> {
        let verdicts = check_death_bound(echos, diagram, domain_dim, sampling_tolerance);
        let entries = echos
            .iter()
            .zip(verdicts)
            .map(|(e, v)| EchoEntry {
                start_deg: e.start_deg(),
                end_deg: e.end_deg(),
                peak_deg: e.peak_angle,
                sigma: e.sigma,
                loop_length: e.loop_length,
                predicted_death_lb: v.predicted_death_lb,
                matched_death: v.matched.filter(|f| f.death.is_finite()).map(|f| f.death),
                matched_truncated: v.matched.is_some_and(|f| f.truncated),
                verdict: if v.pass { Verdict::Pass } else { Verdict::Fail },
            })
            .collect();
        Ok(Self {
            echos: entries,
            expected_betti: expected_betti(echos.len(), domain_dim)?,
            threshold,
            threshold_fraction,
            sampling_tolerance,
        })
    }
}
