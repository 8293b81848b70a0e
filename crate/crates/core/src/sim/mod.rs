//! Point-scatterer simulation of monostatic sonar collections.

mod collect;
mod noise;
mod scene;

pub use collect::{
    apply_global_phase, csas_collect, normalize_peak, sphere_collect, CollectionGeometry,
};
pub use noise::{add_awgn, snr_db, GaussianStream};
pub use scene::{
    green, pipe_scene, point_scatter_response, three_scatterer_scene, two_scatterer_scene,
    Scatterer, Scene, FREE_SPACE_NORMALIZATION,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainDescriptor, Reducer, SignalMap};
use crate::error::Result;

/// Circular collection of a short pipe segment.
///
/// The pipe sits `offset` meters off the turntable axis, so the echo from
/// the near face (90°) is stronger than the one from the far face (270°).
/// The map is rescaled so its peak L2-over-channels magnitude equals
/// `peak_cross_section`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipeSimulation {
    pub length: f64,
    pub width: f64,
    pub scatterers_per_side: usize,
    pub offset: [f64; 3],
    pub radius: f64,
    pub k_min: f64,
    pub k_max: f64,
    /// Number of wavenumbers, one per range cell.
    pub channels: usize,
    pub look_angles: usize,
    pub peak_cross_section: f64,
}

impl Default for PipeSimulation {
    fn default() -> Self {
        Self {
            length: 0.5,
            width: 0.1,
            scatterers_per_side: 25,
            offset: [0.0, 0.6, 0.0],
            radius: 2.0,
            k_min: 30.0,
            k_max: 60.0,
            channels: 100,
            look_angles: 360,
            peak_cross_section: 0.7,
        }
    }
}

impl PipeSimulation {
    pub fn scene(&self) -> Result<Scene> {
        Ok(pipe_scene(
            self.length,
            self.width,
            self.scatterers_per_side,
            Complex64::new(1.0, 0.0),
        )?
        .translated(self.offset))
    }

    pub fn geometry(&self) -> Result<CollectionGeometry> {
        CollectionGeometry::uniform_band(
            DomainDescriptor::circle(self.look_angles)?,
            self.radius,
            self.k_min,
            self.k_max,
            self.channels,
        )
    }

    /// Noiseless, normalized complex map with one channel per wavenumber.
    pub fn collect(&self) -> Result<SignalMap> {
        let raw = csas_collect(&self.scene()?, &self.geometry()?)?;
        normalize_peak(&raw, Reducer::L2, self.peak_cross_section)
    }
}
