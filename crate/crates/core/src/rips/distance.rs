use serde::{Deserialize, Serialize};

use crate::domain::{euclidean, PointCloud};
use crate::error::{Error, Result};

/// Which metric produced a distance matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    #[default]
    Euclidean,
    /// Arc length along the closed polyline through the points in label order.
    PolylineGeodesic,
}

/// Dense symmetric distance matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    metric: Metric,
}

impl DistanceMatrix {
    /// Validate a row-major `n x n` matrix.
    pub fn new(n: usize, entries: Vec<f64>, metric: Metric) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "{} entries for a {n} x {n} distance matrix",
                entries.len()
            )));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::domain(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..i {
                let a = entries[i * n + j];
                if !(a.is_finite() && a >= 0.0) {
                    return Err(Error::domain(format!("invalid distance {a} at ({i}, {j})")));
                }
                if a != entries[j * n + i] {
                    return Err(Error::domain(format!("asymmetric entry at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, entries, metric })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest entry; zero for fewer than two points.
    pub fn diameter(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::domain("scale factor must be positive"));
        }
        Self::new(
            self.n,
            self.entries.iter().map(|d| d * factor).collect(),
            self.metric,
        )
    }

    /// Restriction to the points at `indices`.
    pub fn submatrix(&self, indices: &[usize]) -> Result<Self> {
        let m = indices.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j));
            }
        }
        Self::new(m, entries, self.metric)
    }
}

/// Pairwise distances of a point cloud.
pub fn distance_matrix(cloud: &PointCloud, metric: Metric) -> Result<DistanceMatrix> {
    let n = cloud.len();
    if n == 0 {
        return Err(Error::domain("distance matrix of an empty cloud"));
    }
    let mut entries = vec![0.0; n * n];
    match metric {
        Metric::Euclidean => {
            for i in 0..n {
                for j in i + 1..n {
                    let d = euclidean(cloud.point(i), cloud.point(j));
                    entries[i * n + j] = d;
                    entries[j * n + i] = d;
                }
            }
        }
        Metric::PolylineGeodesic => {
            let labels = cloud
                .labels()
                .ok_or_else(|| Error::domain("polyline-geodesic metric needs angle labels"))?;
            let angles = labels
                .iter()
                .map(|l| l.angle())
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| {
                    Error::domain("polyline-geodesic metric needs circle (angle) labels")
                })?;
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
            // arc position of each point along the closed polyline
            let mut arc = vec![0.0; n];
            let mut s = 0.0;
            for w in 1..n {
                s += euclidean(cloud.point(order[w - 1]), cloud.point(order[w]));
                arc[order[w]] = s;
            }
            let total = s + euclidean(cloud.point(order[n - 1]), cloud.point(order[0]));
            for i in 0..n {
                for j in i + 1..n {
                    let along = (arc[i] - arc[j]).abs();
                    let d = along.min(total - along);
                    entries[i * n + j] = d;
                    entries[j * n + i] = d;
                }
            }
        }
    }
    DistanceMatrix::new(n, entries, metric)
}
