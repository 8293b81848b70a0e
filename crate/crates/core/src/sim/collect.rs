use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{magnitude_channel, DomainDescriptor, DomainKind, Label, Reducer, SignalMap};
use crate::error::{Error, Result};
use crate::sim::scene::Scene;

/// Monostatic collection: trajectory, orbit radius (m) and wavenumbers (rad/m).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry")]
pub struct CollectionGeometry {
    trajectory: DomainDescriptor,
    radius: f64,
    wavenumbers: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGeometry {
    trajectory: DomainDescriptor,
    radius: f64,
    wavenumbers: Vec<f64>,
}

impl TryFrom<RawGeometry> for CollectionGeometry {
    type Error = Error;

    fn try_from(raw: RawGeometry) -> Result<Self> {
        Self::new(raw.trajectory, raw.radius, raw.wavenumbers)
    }
}

impl CollectionGeometry {
    pub fn new(trajectory: DomainDescriptor, radius: f64, wavenumbers: Vec<f64>) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!(
                "orbit radius must be positive, got {radius}"
            )));
        }
        if wavenumbers.is_empty() {
            return Err(Error::domain("at least one wavenumber is required"));
        }
        if wavenumbers.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
            return Err(Error::domain("wavenumbers must be positive and finite"));
        }
        if wavenumbers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("wavenumbers must be strictly increasing"));
        }
        Ok(Self {
            trajectory,
            radius,
            wavenumbers,
        })
    }

    /// `count` wavenumbers evenly spaced on `[k_min, k_max]`.
    pub fn uniform_band(
        trajectory: DomainDescriptor,
        radius: f64,
        k_min: f64,
        k_max: f64,
        count: usize,
    ) -> Result<Self> {
        let wavenumbers = match count {
            0 => vec![],
            1 => vec![k_min],
            _ => (0..count)
                .map(|q| k_min + (k_max - k_min) * q as f64 / (count - 1) as f64)
                .collect(),
        };
        Self::new(trajectory, radius, wavenumbers)
    }

    pub fn trajectory(&self) -> DomainDescriptor {
        self.trajectory
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }
}

/// Circular collection: the sensor sits at `(R cos θ, R sin θ, 0)` for each
/// look angle and records one channel per wavenumber.
pub fn csas_collect(scene: &Scene, geometry: &CollectionGeometry) -> Result<SignalMap> {
    let domain = geometry.trajectory;
    if !matches!(domain.kind(), DomainKind::Circle { .. }) {
        return Err(Error::domain(
            "circular collection needs a circle trajectory",
        ));
    }
    let r = geometry.radius;
    let mut samples = Vec::with_capacity(domain.len() * geometry.wavenumbers.len());
    for label in domain.grid_points() {
        let theta = label
            .angle()
            .expect("circle labels are angles")
            .to_radians();
        let sensor = [r * theta.cos(), r * theta.sin(), 0.0];
        samples.extend(scene.response(sensor, &geometry.wavenumbers)?);
    }
    SignalMap::new(domain, geometry.wavenumbers.len(), samples)
}

/// Spherical collection at a single wavenumber; returns the received
/// magnitude `|u(θ, φ)|` with the sensor at `R (cos θ cos φ, sin θ cos φ, sin φ)`.
pub fn sphere_collect(scene: &Scene, geometry: &CollectionGeometry) -> Result<SignalMap> {
    let domain = geometry.trajectory;
    if !matches!(domain.kind(), DomainKind::SphereGrid { .. }) {
        return Err(Error::domain(
            "spherical collection needs a sphere-grid trajectory",
        ));
    }
    if geometry.wavenumbers.len() != 1 {
        return Err(Error::domain(format!(
            "spherical collection uses one wavenumber, got {}",
            geometry.wavenumbers.len()
        )));
    }
    let r = geometry.radius;
    let mut values = Vec::with_capacity(domain.len());
    for label in domain.grid_points() {
        let Label::AzEl { azimuth, elevation } = label else {
            unreachable!("sphere grids carry azimuth/elevation labels")
        };
        let (t, p) = (azimuth.to_radians(), elevation.to_radians());
        let sensor = [r * t.cos() * p.cos(), r * t.sin() * p.cos(), r * p.sin()];
        values.push(scene.response(sensor, &geometry.wavenumbers)?[0].norm());
    }
    SignalMap::from_real(domain, 1, &values)
}

/// Rescale a map so the peak of its `reducer` magnitude equals `target`.
pub fn normalize_peak(map: &SignalMap, reducer: Reducer, target: f64) -> Result<SignalMap> {
    if !(target > 0.0) {
        return Err(Error::domain("normalization target must be positive"));
    }
    let peak = magnitude_channel(map, reducer)
        .samples()
        .iter()
        .map(|z| z.re)
        .fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::domain("cannot normalize an all-zero map"));
    }
    map.scaled(target / peak)
}

/// Multiply every sample by `e^{iα}`.
pub fn apply_global_phase(map: &SignalMap, alpha: f64) -> Result<SignalMap> {
    let w = Complex64::from_polar(1.0, alpha);
    SignalMap::new(
        map.domain(),
        map.channels(),
        map.samples().iter().map(|z| z * w).collect(),
    )
}
