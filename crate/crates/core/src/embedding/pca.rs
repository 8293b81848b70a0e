//! Principal component projection via cyclic Jacobi eigen-decomposition.

use crate::domain::PointCloud;
use crate::error::{Error, Result};

const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
///
/// `a` is row-major `d x d`. Returns eigenvalues and row-major
/// eigenvectors (column `j` of the returned matrix pairs with value `j`),
/// unsorted.
pub fn jacobi_eigen(mut a: Vec<f64>, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * d + j] * a[i * d + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOLERANCE * total || off == 0.0 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                let theta = (aqq - app) / (2.0 * apq);
                // signum(0.0) is 1.0, so equal diagonals rotate by 45°
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..d).map(|i| a[i * d + i]).collect(), v)
}

/// Project a cloud onto its `out_dim` leading principal axes.
///
/// Axes are sorted by descending variance and each is signed so its
/// largest-magnitude coordinate is positive. When there are fewer points
/// than dimensions the decomposition runs on the Gram matrix instead.
pub fn pca_project(cloud: &PointCloud, out_dim: usize) -> Result<PointCloud> {
    let d = cloud.ambient_dim();
    let n = cloud.len();
    if n == 0 {
        return Err(Error::domain("PCA needs a nonempty cloud"));
    }
    if out_dim == 0 || out_dim > d {
        return Err(Error::domain(format!(
            "cannot project {d}-dimensional points onto {out_dim} components"
        )));
    }
    let mut mean = vec![0.0; d];
    for p in cloud.points() {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered: Vec<f64> = cloud
        .points()
        .flat_map(|p| p.iter().zip(&mean).map(|(x, m)| x - m).collect::<Vec<_>>())
        .collect();

    let axes = principal_axes(&centered, n, d, out_dim);
    let mut coords = Vec::with_capacity(n * out_dim);
    for row in centered.chunks_exact(d) {
        for axis in &axes {
            coords.push(row.iter().zip(axis).map(|(x, a)| x * a).sum());
        }
    }
    PointCloud::new(out_dim, coords, cloud.labels().map(<[_]>::to_vec))
}

/// Leading `k` unit eigenvectors of the covariance of centered rows.
fn principal_axes(x: &[f64], n: usize, d: usize, k: usize) -> Vec<Vec<f64>> {
    let mut axes: Vec<(f64, Vec<f64>)> = if d <= n {
        let mut cov = vec![0.0; d * d];
        for row in x.chunks_exact(d) {
            for i in 0..d {
                for j in i..d {
                    cov[i * d + j] += row[i] * row[j];
                }
            }
        }
        for i in 0..d {
            for j in 0..i {
                cov[i * d + j] = cov[j * d + i];
            }
        }
        let (vals, vecs) = jacobi_eigen(cov, d);
        (0..d)
            .map(|j| (vals[j], (0..d).map(|i| vecs[i * d + j]).collect()))
            .collect()
    } else {
        // X^T a / sqrt(λ) recovers covariance eigenvectors from Gram ones.
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let g: f64 = x[i * d..(i + 1) * d]
                    .iter()
                    .zip(&x[j * d..(j + 1) * d])
                    .map(|(a, b)| a * b)
                    .sum();
                gram[i * n + j] = g;
                gram[j * n + i] = g;
            }
        }
        let (vals, vecs) = jacobi_eigen(gram, n);
        (0..n)
            .map(|j| {
                let mut axis = vec![0.0; d];
                for i in 0..n {
                    let w = vecs[i * n + j];
                    for (a, xv) in axis.iter_mut().zip(&x[i * d..(i + 1) * d]) {
                        *a += w * xv;
                    }
                }
                let len = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
                if len > 0.0 {
                    axis.iter_mut().for_each(|a| *a /= len);
                }
                (vals[j], axis)
            })
            .collect()
    };
    // descending eigenvalue, ties by original index (sort is stable)
    axes.sort_by(|a, b| b.0.total_cmp(&a.0));
    axes.into_iter()
        .take(k)
        .map(|(_, mut axis)| {
            let lead =
                axis.iter().copied().fold(
                    0.0f64,
                    |best, a| if a.abs() > best.abs() { a } else { best },
                );
            if lead < 0.0 {
                axis.iter_mut().for_each(|a| *a = -*a);
            }
            axis
        })
        .collect()
}
