//! Threshold segmentation of a circular collection into prominent echos.

use serde::{Deserialize, Serialize};

use crate::domain::{magnitude_channel, Reducer, SignalMap};
use crate::error::{Error, Result};

/// One prominent echo: a run of consecutive look angles above threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EchoSupport {
    /// First grid index of the run.
    pub start: usize,
    /// Number of grid samples in the run; the run may wrap past index 0.
    pub len: usize,
    /// Number of samples on the whole circle.
    pub n_samples: usize,
    pub peak_angle: f64,
    /// Cross section: the largest magnitude inside the run.
    pub sigma: f64,
    /// Length of the closed polyline through the run's samples and the origin.
    pub loop_length: f64,
}

impl EchoSupport {
    /// Grid indices covered, in circular order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |k| (self.start + k) % self.n_samples)
    }

    /// Half-open index range `[start, end)`, with `end` taken modulo the
    /// circle so a wrapping run has `end <= start`.
    pub fn interval(&self) -> (usize, usize) {
        (self.start, (self.start + self.len) % self.n_samples)
    }

    pub fn start_deg(&self) -> f64 {
        360.0 * self.start as f64 / self.n_samples as f64
    }

    pub fn end_deg(&self) -> f64 {
        360.0 * ((self.start + self.len) % self.n_samples) as f64 / self.n_samples as f64
    }

    pub fn contains(&self, index: usize) -> bool {
        (index + self.n_samples - self.start) % self.n_samples < self.len
    }
}

/// Find the prominent echos of a map over a circle.
///
/// Magnitudes are the L2 norm over channels, so a single real nonnegative
/// channel is used as is. Runs of samples strictly above
/// `threshold_fraction * max` become echos, merged across 0°. The result is
/// sorted by peak angle. An all-zero map has no echos.
pub fn detect_prominent_echos(
    map: &SignalMap,
    threshold_fraction: f64,
) -> Result<Vec<EchoSupport>> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::domain(format!(
            "threshold fraction must lie in (0, 1), got {threshold_fraction}"
        )));
    }
    let n = map
        .domain()
        .circle_samples()
        .ok_or_else(|| Error::domain("echo detection needs a circle domain"))?;
    let magnitude: Vec<f64> = magnitude_channel(map, Reducer::L2)
        .samples()
        .iter()
        .map(|z| z.re)
        .collect();
    let max = magnitude.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(Vec::new());
    }
    let threshold = threshold_fraction * max;
    let above: Vec<bool> = magnitude.iter().map(|&m| m > threshold).collect();

    let mut echos = Vec::new();
    match above.iter().position(|&a| !a) {
        None => echos.push(summarize(map, &magnitude, 0, n)),
        Some(first_below) => {
            // walk once around the circle starting at a quiet sample so no
            // run is split by the 0° seam
            let mut k = 0;
            while k < n {
                let i = (first_below + k) % n;
                if above[i] {
                    let mut len = 0;
                    while len < n && above[(i + len) % n] {
                        len += 1;
                    }
                    echos.push(summarize(map, &magnitude, i, len));
                    k += len;
                } else {
                    k += 1;
                }
            }
        }
    }
    echos.sort_by(|a, b| a.peak_angle.total_cmp(&b.peak_angle));
    Ok(echos)
}

fn summarize(map: &SignalMap, magnitude: &[f64], start: usize, len: usize) -> EchoSupport {
    let n = magnitude.len();
    let indices: Vec<usize> = (0..len).map(|k| (start + k) % n).collect();
    let mut peak = indices[0];
    for &i in &indices {
        if magnitude[i] > magnitude[peak] || (magnitude[i] == magnitude[peak] && i < peak) {
            peak = i;
        }
    }
    let distance = |a: usize, b: usize| {
        map.row(a)
            .iter()
            .zip(map.row(b))
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let radius = |a: usize| map.row(a).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut loop_length = radius(indices[0]) + radius(indices[len - 1]);
    for w in indices.windows(2) {
        loop_length += distance(w[0], w[1]);
    }
    EchoSupport {
        start,
        len,
        n_samples: n,
        peak_angle: 360.0 * peak as f64 / n as f64,
        sigma: magnitude[peak],
        loop_length,
    }
}
