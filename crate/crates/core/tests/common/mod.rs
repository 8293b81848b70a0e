//! Synthetic inputs shared by the integration tests.

#![allow(dead_code)]

use echotopo::domain::{DomainDescriptor, PointCloud, SignalMap};
use echotopo::rips::PersistenceDiagram;
use echotopo::sim::GaussianStream;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Uniform(ChaCha8Rng);

impl Uniform {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[lo, hi)`.
    pub fn next(&mut self, lo: f64, hi: f64) -> f64 {
        let unit = (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * unit
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

pub fn random_cloud(rng: &mut Uniform, n: usize, dim: usize) -> PointCloud {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.next(-1.0, 1.0)).collect())
        .collect();
    PointCloud::from_points(&pts, None).unwrap()
}

/// Same features with bit-identical values, in canonical order.
pub fn bitwise_equal(a: &PersistenceDiagram, b: &PersistenceDiagram) -> bool {
    a.features().len() == b.features().len()
        && a.features().iter().zip(b.features()).all(|(x, y)| {
            x.dim == y.dim
                && x.birth.to_bits() == y.birth.to_bits()
                && x.death.to_bits() == y.death.to_bits()
                && x.truncated == y.truncated
        })
}

/// `n` nearly uniform points on a sphere (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize, radius: f64, centre: [f64; 3]) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let s = i as f64 + 0.5;
            let z = 1.0 - 2.0 * s / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * s;
            vec![
                centre[0] + radius * r * a.cos(),
                centre[1] + radius * r * a.sin(),
                centre[2] + radius * z,
            ]
        })
        .collect()
}

fn random_orthonormal_pair(g: &mut GaussianStream, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut draw = || -> Vec<f64> { (0..dim).map(|_| g.next_pair().0).collect() };
    let unit = |v: Vec<f64>| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let u = unit(draw());
    let w = draw();
    let dot: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
    let w = unit(w.iter().zip(&u).map(|(b, a)| b - dot * a).collect());
    (u, w)
}

/// `k` disjoint echos on `Circle(n)` mapped into `R^dim`.
///
/// Echo `j` traces `σ_j sin(πt) (cos(πt) u_j + sin(πt) w_j)` for `t` in
/// `(0, 1)` across its support, a circle of diameter `σ_j` through the
/// origin in a random plane. Between echos the signal is zero. Returns the
/// real map and the cross sections.
pub fn wedge_of_loops(k: usize, n: usize, dim: usize, seed: u64) -> (SignalMap, Vec<f64>) {
    let mut rng = Uniform::new(seed);
    let mut g = GaussianStream::new(seed ^ 0x5eed);
    let segment = n / k;
    let gap = 6;
    let mut values = vec![0.0; n * dim];
    let mut sigmas = Vec::with_capacity(k);
    for j in 0..k {
        let sigma = rng.next(0.5, 1.0);
        sigmas.push(sigma);
        let (u, w) = random_orthonormal_pair(&mut g, dim);
        let active = segment - 2 * gap;
        for s in 0..active {
            let t = (s + 1) as f64 / (active + 1) as f64;
            let (sin, cos) = (std::f64::consts::PI * t).sin_cos();
            let row = j * segment + gap + s;
            for c in 0..dim {
                values[row * dim + c] = sigma * sin * (cos * u[c] + sin * w[c]);
            }
        }
    }
    let map = SignalMap::from_real(DomainDescriptor::circle(n).unwrap(), dim, &values).unwrap();
    (map, sigmas)
}
