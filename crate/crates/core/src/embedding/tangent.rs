use crate::domain::{DomainKind, PointCloud, SignalMap};
use crate::error::{Error, Result};

/// Tangent map `Tu(θ, φ) = (u, ∂u/∂φ, ∂u/∂θ)` of a real field on a sphere grid.
///
/// Derivatives are per radian. Azimuth uses periodic central differences.
/// Elevation uses central differences inside and second-order one-sided
/// stencils on the first and last rows (first-order when only two rows).
pub fn tangent_map(map: &SignalMap) -> Result<PointCloud> {
    let DomainKind::SphereGrid {
        n_azimuth,
        n_elevation,
    } = map.domain().kind()
    else {
        return Err(Error::domain("tangent map needs a sphere-grid map"));
    };
    if map.channels() != 1 || !map.is_real() {
        return Err(Error::domain(
            "tangent map needs a real single-channel map (reduce complex data first)",
        ));
    }
    let u: Vec<f64> = map.samples().iter().map(|z| z.re).collect();
    let at = |ia: usize, ie: usize| u[ia * n_elevation + ie];
    let d_az = (360.0 / n_azimuth as f64).to_radians();
    let d_el = (180.0 / n_elevation as f64).to_radians();

    let mut coords = Vec::with_capacity(3 * u.len());
    for ia in 0..n_azimuth {
        let next = (ia + 1) % n_azimuth;
        let prev = (ia + n_azimuth - 1) % n_azimuth;
        for ie in 0..n_elevation {
            let du_az = (at(next, ie) - at(prev, ie)) / (2.0 * d_az);
            let du_el = if n_elevation == 2 {
                (at(ia, 1) - at(ia, 0)) / d_el
            } else if ie == 0 {
                (-3.0 * at(ia, 0) + 4.0 * at(ia, 1) - at(ia, 2)) / (2.0 * d_el)
            } else if ie == n_elevation - 1 {
                (3.0 * at(ia, ie) - 4.0 * at(ia, ie - 1) + at(ia, ie - 2)) / (2.0 * d_el)
            } else {
                (at(ia, ie + 1) - at(ia, ie - 1)) / (2.0 * d_el)
            };
            coords.extend_from_slice(&[at(ia, ie), du_el, du_az]);
        }
    }
    PointCloud::new(3, coords, Some(map.domain().grid_points()))
}
