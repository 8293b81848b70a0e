//! Connected regions of a thresholded magnitude field.

use crate::domain::{magnitude_channel, DomainKind, Reducer, SignalMap};
use crate::error::{Error, Result};

/// Which side of the threshold to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// Number of connected regions where the L2 magnitude is strictly above
/// (or strictly below) `threshold_fraction * max`.
///
/// Grid neighbours are the four axis-aligned cells. Azimuth wraps around;
/// elevation does not, since the grid never samples the poles.
pub fn threshold_regions(map: &SignalMap, threshold_fraction: f64, side: Side) -> Result<usize> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::domain(format!(
            "threshold fraction must lie in (0, 1), got {threshold_fraction}"
        )));
    }
    let (rows, cols, wrap) = match map.domain().kind() {
        DomainKind::Circle { n_samples } => (n_samples, 1, true),
        DomainKind::Interval { n_samples } => (n_samples, 1, false),
        DomainKind::SphereGrid {
            n_azimuth,
            n_elevation,
        } => (n_azimuth, n_elevation, true),
    };
    let magnitude: Vec<f64> = magnitude_channel(map, Reducer::L2)
        .samples()
        .iter()
        .map(|z| z.re)
        .collect();
    let max = magnitude.iter().copied().fold(0.0, f64::max);
    let t = threshold_fraction * max;
    let keep: Vec<bool> = magnitude
        .iter()
        .map(|&m| match side {
            Side::Above => m > t,
            Side::Below => m < t,
        })
        .collect();

    let mut seen = vec![false; keep.len()];
    let mut regions = 0;
    let mut stack = Vec::new();
    for seed in 0..keep.len() {
        if !keep[seed] || seen[seed] {
            continue;
        }
        regions += 1;
        seen[seed] = true;
        stack.push(seed);
        while let Some(cell) = stack.pop() {
            let (r, c) = (cell / cols, cell % cols);
            let mut neighbours = Vec::with_capacity(4);
            if r + 1 < rows {
                neighbours.push((r + 1) * cols + c);
            } else if wrap {
                neighbours.push(c);
            }
            if r > 0 {
                neighbours.push((r - 1) * cols + c);
            } else if wrap {
                neighbours.push((rows - 1) * cols + c);
            }
            if c + 1 < cols {
                neighbours.push(cell + 1);
            }
            if c > 0 {
                neighbours.push(cell - 1);
            }
            for nb in neighbours {
                if keep[nb] && !seen[nb] {
                    seen[nb] = true;
                    stack.push(nb);
                }
            }
        }
    }
    Ok(regions)
}
