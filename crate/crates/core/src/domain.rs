//! Shared domain types: sampled domains, signal maps and point clouds.
//!
//! Angles are degrees everywhere in this crate. Radians only appear inside
//! trigonometric kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three sampled domains a signal map can live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    /// Look angle on the full circle, periodic.
    Circle { n_samples: usize },
    /// Azimuth (periodic) by elevation (poles excluded, not periodic).
    SphereGrid {
        n_azimuth: usize,
        n_elevation: usize,
    },
    /// The unit interval `[0, 1]`, endpoints included.
    Interval { n_samples: usize },
}

/// A validated [`DomainKind`]: every count is at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DomainKind", into = "DomainKind")]
pub struct DomainDescriptor(DomainKind);

impl TryFrom<DomainKind> for DomainDescriptor {
    type Error = Error;

    fn try_from(kind: DomainKind) -> Result<Self> {
        let ok = match kind {
            DomainKind::Circle { n_samples } | DomainKind::Interval { n_samples } => n_samples >= 2,
            DomainKind::SphereGrid {
                n_azimuth,
                n_elevation,
            } => n_azimuth >= 2 && n_elevation >= 2,
        };
        if ok {
            Ok(Self(kind))
        } else {
            Err(Error::domain(format!(
                "domain counts must be >= 2, got {kind:?}"
            )))
        }
    }
}

impl From<DomainDescriptor> for DomainKind {
    fn from(d: DomainDescriptor) -> Self {
        d.0
    }
}

impl DomainDescriptor {
    pub fn circle(n_samples: usize) -> Result<Self> {
        DomainKind::Circle { n_samples }.try_into()
    }

    pub fn sphere_grid(n_azimuth: usize, n_elevation: usize) -> Result<Self> {
        DomainKind::SphereGrid {
            n_azimuth,
            n_elevation,
        }
        .try_into()
    }

    pub fn interval(n_samples: usize) -> Result<Self> {
        DomainKind::Interval { n_samples }.try_into()
    }

    pub fn kind(&self) -> DomainKind {
        self.0
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        match self.0 {
            DomainKind::Circle { n_samples } | DomainKind::Interval { n_samples } => n_samples,
            DomainKind::SphereGrid {
                n_azimuth,
                n_elevation,
            } => n_azimuth * n_elevation,
        }
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Intrinsic dimension of the sampled manifold.
    pub fn dim(&self) -> usize {
        match self.0 {
            DomainKind::SphereGrid { .. } => 2,
            _ => 1,
        }
    }

    /// Sample count of a circle domain, if this is one.
    pub fn circle_samples(&self) -> Option<usize> {
        match self.0 {
            DomainKind::Circle { n_samples } => Some(n_samples),
            _ => None,
        }
    }

    /// Grid coordinates in index order.
    ///
    /// Sphere grids are azimuth-major: index `ia * n_elevation + ie`.
    /// Elevations are cell centres of `(-90°, 90°)`, so the poles are never
    /// sampled.
    pub fn grid_points(&self) -> Vec<Label> {
        match self.0 {
            DomainKind::Circle { n_samples } => (0..n_samples)
                .map(|i| Label::Angle(360.0 * i as f64 / n_samples as f64))
                .collect(),
            DomainKind::Interval { n_samples } => (0..n_samples)
                .map(|i| Label::Param(i as f64 / (n_samples - 1) as f64))
                .collect(),
            DomainKind::SphereGrid {
                n_azimuth,
                n_elevation,
            } => {
                let mut out = Vec::with_capacity(n_azimuth * n_elevation);
                for ia in 0..n_azimuth {
                    let azimuth = 360.0 * ia as f64 / n_azimuth as f64;
                    for ie in 0..n_elevation {
                        out.push(Label::AzEl {
                            azimuth,
                            elevation: elevation_deg(ie, n_elevation),
                        });
                    }
                }
                out
            }
        }
    }
}

/// Elevation of row `ie` on a pole-free grid of `n` rows, in degrees.
pub(crate) fn elevation_deg(ie: usize, n: usize) -> f64 {
    -90.0 + 180.0 * (ie as f64 + 0.5) / n as f64
}

/// Domain parameter attached to a sample or an embedded point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    /// Look angle in degrees.
    Angle(f64),
    /// Azimuth and elevation in degrees.
    AzEl { azimuth: f64, elevation: f64 },
    /// Position along the unit interval.
    Param(f64),
}

impl Label {
    /// The look angle of a circle label.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Label::Angle(a) => Some(a),
            _ => None,
        }
    }
}

/// How several channels collapse into magnitudes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reducer {
    /// `|u_c|` for every channel; the channel count is unchanged.
    PerChannel,
    /// `max_c |u_c|`, one output channel.
    Max,
    /// `sqrt(sum_c |u_c|^2)`, one output channel.
    L2,
}

/// Sampled signal over a domain: `samples[i * channels + c]` is channel `c`
/// at grid point `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalMap {
    domain: DomainDescriptor,
    channels: usize,
    samples: Vec<Complex64>,
}

impl SignalMap {
    pub fn new(domain: DomainDescriptor, channels: usize, samples: Vec<Complex64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::Shape(
                "a signal map needs at least one channel".into(),
            ));
        }
        let expected = domain.len() * channels;
        if samples.len() != expected {
            return Err(Error::Shape(format!(
                "expected {} samples ({} grid points x {} channels), got {}",
                expected,
                domain.len(),
                channels,
                samples.len()
            )));
        }
        if let Some(pos) = samples
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::domain(format!(
                "non-finite sample at grid point {}, channel {}",
                pos / channels,
                pos % channels
            )));
        }
        Ok(Self {
            domain,
            channels,
            samples,
        })
    }

    /// Real-valued map; imaginary parts are zero.
    pub fn from_real(domain: DomainDescriptor, channels: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            domain,
            channels,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn domain(&self) -> DomainDescriptor {
        self.domain
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn n_points(&self) -> usize {
        self.domain.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// All channels at grid point `i`.
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.samples[i * self.channels..(i + 1) * self.channels]
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im == 0.0)
    }

    /// Real parts of a single-channel map, one per grid point.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        if self.channels != 1 || !self.is_real() {
            return Err(Error::domain("expected a real single-channel map"));
        }
        Ok(self.samples.iter().map(|z| z.re).collect())
    }

    /// Multiply every sample by a real factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.domain,
            self.channels,
            self.samples.iter().map(|z| z * factor).collect(),
        )
    }

    /// Rotate a circle-domain map by `shift` grid samples: output point `i`
    /// holds input point `i + shift` (mod n).
    pub fn circular_shift(&self, shift: usize) -> Result<Self> {
        let n = self
            .domain
            .circle_samples()
            .ok_or_else(|| Error::domain("circular shift needs a circle domain"))?;
        let mut samples = Vec::with_capacity(self.samples.len());
        for i in 0..n {
            samples.extend_from_slice(self.row((i + shift) % n));
        }
        Self::new(self.domain, self.channels, samples)
    }
}

/// Pointwise magnitude reduction of a signal map.
pub fn magnitude_channel(map: &SignalMap, reducer: Reducer) -> SignalMap {
    let n = map.n_points();
    let (channels, values): (usize, Vec<f64>) = match reducer {
        Reducer::PerChannel => (map.channels, map.samples.iter().map(|z| z.norm()).collect()),
        Reducer::Max => (
            1,
            (0..n)
                .map(|i| map.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max))
                .collect(),
        ),
        Reducer::L2 => (
            1,
            (0..n)
                .map(|i| map.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .collect(),
        ),
    };
    SignalMap {
        domain: map.domain,
        channels,
        samples: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    }
}

/// Finite set of points in `R^ambient_dim`, optionally labelled by domain
/// parameter. Stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    ambient_dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<Label>>,
}

impl PointCloud {
    pub fn new(ambient_dim: usize, coords: Vec<f64>, labels: Option<Vec<Label>>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::domain("ambient dimension must be positive"));
        }
        if !coords.len().is_multiple_of(ambient_dim) {
            return Err(Error::Shape(format!(
                "{} coordinates do not split into points of dimension {}",
                coords.len(),
                ambient_dim
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite coordinate {} of point {}",
                pos % ambient_dim,
                pos / ambient_dim
            )));
        }
        let n = coords.len() / ambient_dim;
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::Shape(format!(
                    "{} labels for {} points",
                    labels.len(),
                    n
                )));
            }
        }
        Ok(Self {
            ambient_dim,
            coords,
            labels,
        })
    }

    /// Build from one vector per point; every vector must have the same length.
    pub fn from_points(points: &[Vec<f64>], labels: Option<Vec<Label>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(1);
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::Shape(format!(
                "point {bad} has length {}, expected {dim}",
                points[bad].len()
            )));
        }
        Self::new(dim, points.concat(), labels)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.ambient_dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.ambient_dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// Keep only the points at `indices`, in that order.
    pub fn subsample(&self, indices: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len() * self.ambient_dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::domain(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        Self::new(self.ambient_dim, coords, labels)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
