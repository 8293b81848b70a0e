use serde::{Deserialize, Serialize};

use crate::domain::{magnitude_channel, PointCloud, Reducer, SignalMap};
use crate::error::{Error, Result};

/// What each lagged copy contributes to an embedded point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelReducer {
    /// Every channel as-is: `(re, im)` pairs for complex maps, real parts
    /// for real maps.
    #[default]
    Identity,
    PerChannel,
    Max,
    L2,
}

impl ChannelReducer {
    fn magnitude(self) -> Option<Reducer> {
        match self {
            ChannelReducer::Identity => None,
            ChannelReducer::PerChannel => Some(Reducer::PerChannel),
            ChannelReducer::Max => Some(Reducer::Max),
            ChannelReducer::L2 => Some(Reducer::L2),
        }
    }
}

/// Angular offsets `τ_1..τ_N` (degrees) and the per-offset channel reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayConfig {
    pub offsets_deg: Vec<f64>,
    #[serde(default)]
    pub reducer: ChannelReducer,
    /// Half-open channel range `[start, end)` kept before reduction.
    #[serde(default)]
    pub range_gate: Option<[usize; 2]>,
}

impl DelayConfig {
    pub fn new(offsets_deg: Vec<f64>, reducer: ChannelReducer) -> Result<Self> {
        let cfg = Self {
            offsets_deg,
            reducer,
            range_gate: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_range_gate(mut self, start: usize, end: usize) -> Self {
        self.range_gate = Some([start, end]);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.offsets_deg.is_empty() {
            return Err(Error::domain("delay embedding needs at least one offset"));
        }
        if let Some(bad) = self.offsets_deg.iter().find(|t| !(0.0..360.0).contains(*t)) {
            return Err(Error::domain(format!(
                "offset {bad}° is outside [0°, 360°)"
            )));
        }
        if let Some([start, end]) = self.range_gate {
            if start >= end {
                return Err(Error::domain(format!("empty range gate [{start}, {end})")));
            }
        }
        Ok(())
    }

    /// Check the offsets and range gate against a map shape without
    /// embedding anything.
    pub fn check_grid(&self, n_samples: usize, channels: usize) -> Result<()> {
        self.validate()?;
        for &t in &self.offsets_deg {
            offset_shift(t, n_samples)?;
        }
        match self.range_gate {
            Some([start, end]) if end > channels => Err(Error::domain(format!(
                "range gate [{start}, {end}) exceeds {channels} channels"
            ))),
            _ => Ok(()),
        }
    }
}

/// Grid shift for an offset; errors unless `τ·n/360` is an integer.
fn offset_shift(offset_deg: f64, n: usize) -> Result<usize> {
    let exact = offset_deg * n as f64 / 360.0;
    let rounded = exact.round();
    if (exact - rounded).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "offset {offset_deg}° is not a whole number of {}° grid steps",
            360.0 / n as f64
        )));
    }
    Ok(rounded as usize % n)
}

fn gate(map: &SignalMap, range_gate: Option<[usize; 2]>) -> Result<SignalMap> {
    let Some([start, end]) = range_gate else {
        return Ok(map.clone());
    };
    if end > map.channels() {
        return Err(Error::domain(format!(
            "range gate [{start}, {end}) exceeds {} channels",
            map.channels()
        )));
    }
    let samples = (0..map.n_points())
        .flat_map(|i| map.row(i)[start..end].iter().copied())
        .collect();
    SignalMap::new(map.domain(), end - start, samples)
}

/// Delay embedding `Φ(θ) = (u(θ+τ_1), …, u(θ+τ_N))` of a circle-domain map.
///
/// One point per look angle, labelled with that angle.
pub fn delay_embed(map: &SignalMap, config: &DelayConfig) -> Result<PointCloud> {
    config.validate()?;
    let n = map
        .domain()
        .circle_samples()
        .ok_or_else(|| Error::domain("delay embedding needs a circle-domain map"))?;
    let shifts = config
        .offsets_deg
        .iter()
        .map(|&t| offset_shift(t, n))
        .collect::<Result<Vec<_>>>()?;

    let gated = gate(map, config.range_gate)?;
    let reduced = match config.reducer.magnitude() {
        Some(r) => magnitude_channel(&gated, r),
        None => gated,
    };
    let complex = !reduced.is_real();
    let per_offset = reduced.channels() * if complex { 2 } else { 1 };
    let dim = per_offset * shifts.len();

    let mut coords = Vec::with_capacity(n * dim);
    for i in 0..n {
        for &s in &shifts {
            for z in reduced.row((i + s) % n) {
                coords.push(z.re);
                if complex {
                    coords.push(z.im);
                }
            }
        }
    }
    PointCloud::new(dim, coords, Some(map.domain().grid_points()))
}
