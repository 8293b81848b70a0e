use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Free-space normalization `1/(4π)` of the 3D Helmholtz Green's function.
pub const FREE_SPACE_NORMALIZATION: f64 = 1.0 / (4.0 * std::f64::consts::PI);

/// Outgoing Green's function `c_g · e^{-ikr} / r`.
pub fn green(k: f64, r: f64, normalization: f64) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!(
            "sensor coincides with scatterer (distance {r})"
        )));
    }
    if !(k > 0.0) {
        return Err(Error::domain(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let phase = k * r;
    Ok(Complex64::new(phase.cos(), -phase.sin()) * (normalization / r))
}

/// A point scatterer: position in meters and a complex reflectivity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    pub position: [f64; 3],
    pub reflectivity: Complex64,
}

impl Scatterer {
    pub fn new(position: [f64; 3], reflectivity: Complex64) -> Self {
        Self {
            position,
            reflectivity,
        }
    }
}

/// A nonempty superposition of point scatterers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    scatterers: Vec<Scatterer>,
    green_normalization: f64,
}

impl Scene {
    /// Scene with the free-space `1/(4π)` normalization.
    pub fn new(scatterers: Vec<Scatterer>) -> Result<Self> {
        Self::with_normalization(scatterers, FREE_SPACE_NORMALIZATION)
    }

    pub fn with_normalization(
        scatterers: Vec<Scatterer>,
        green_normalization: f64,
    ) -> Result<Self> {
        if scatterers.is_empty() {
            return Err(Error::domain("a scene needs at least one scatterer"));
        }
        let finite = scatterers.iter().all(|s| {
            s.position.iter().all(|c| c.is_finite())
                && s.reflectivity.re.is_finite()
                && s.reflectivity.im.is_finite()
        });
        if !finite || !green_normalization.is_finite() {
            return Err(Error::domain("scene contains non-finite values"));
        }
        Ok(Self {
            scatterers,
            green_normalization,
        })
    }

    pub fn scatterers(&self) -> &[Scatterer] {
        &self.scatterers
    }

    pub fn green_normalization(&self) -> f64 {
        self.green_normalization
    }

    /// Both scenes' scatterers; the normalization of `self` is kept.
    pub fn union(&self, other: &Scene) -> Scene {
        let mut scatterers = self.scatterers.clone();
        scatterers.extend_from_slice(&other.scatterers);
        Scene {
            scatterers,
            green_normalization: self.green_normalization,
        }
    }

    /// Rigid translation of every scatterer.
    pub fn translated(&self, offset: [f64; 3]) -> Scene {
        Scene {
            scatterers: self
                .scatterers
                .iter()
                .map(|s| {
                    let p = s.position;
                    Scatterer::new(
                        [p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]],
                        s.reflectivity,
                    )
                })
                .collect(),
            green_normalization: self.green_normalization,
        }
    }

    /// Every reflectivity multiplied by `factor`.
    pub fn with_reflectivity_factor(&self, factor: Complex64) -> Scene {
        Scene {
            scatterers: self
                .scatterers
                .iter()
                .map(|s| Scatterer::new(s.position, s.reflectivity * factor))
                .collect(),
            green_normalization: self.green_normalization,
        }
    }

    /// Received signal at `sensor`, one entry per wavenumber:
    /// `v_q = Σ_j a_j g_{k_q}(‖x_j − y‖)`.
    pub fn response(&self, sensor: [f64; 3], wavenumbers: &[f64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); wavenumbers.len()];
        for s in &self.scatterers {
            let r = distance(s.position, sensor);
            for (acc, &k) in out.iter_mut().zip(wavenumbers) {
                *acc += s.reflectivity * green(k, r, self.green_normalization)?;
            }
        }
        Ok(out)
    }
}

/// Same as [`Scene::response`].
pub fn point_scatter_response(
    scene: &Scene,
    sensor: [f64; 3],
    wavenumbers: &[f64],
) -> Result<Vec<Complex64>> {
    scene.response(sensor, wavenumbers)
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Scatterers of equal reflectivity spaced uniformly along the two long
/// sides of a `length x width` rectangle centred at the origin in the z = 0
/// plane. The long axis is x, so broadside looks are at 90° and 270°.
pub fn pipe_scene(
    length: f64,
    width: f64,
    scatterers_per_side: usize,
    reflectivity: Complex64,
) -> Result<Scene> {
    if !(width > 0.0 && length > width && length.is_finite()) {
        return Err(Error::domain(format!(
            "pipe needs length > width > 0, got length {length}, width {width}"
        )));
    }
    if scatterers_per_side < 2 {
        return Err(Error::domain("pipe needs at least 2 scatterers per side"));
    }
    let n = scatterers_per_side;
    let step = length / (n - 1) as f64;
    // mirrored explicitly so the 180° rotation maps the scene onto itself exactly
    let mut xs = vec![0.0; n];
    for i in 0..n / 2 {
        xs[i] = -0.5 * length + i as f64 * step;
        xs[n - 1 - i] = -xs[i];
    }
    let mut scatterers = Vec::with_capacity(2 * n);
    for side in [0.5 * width, -0.5 * width] {
        for &x in &xs {
            scatterers.push(Scatterer::new([x, side, 0.0], reflectivity));
        }
    }
    Scene::new(scatterers)
}

/// The two-scatterer scene: reflectivities 1 and −0.5 at the origin and at
/// (2, 0, 0) m.
pub fn two_scatterer_scene() -> Scene {
    Scene::new(vec![
        Scatterer::new([0.0, 0.0, 0.0], Complex64::new(1.0, 0.0)),
        Scatterer::new([2.0, 0.0, 0.0], Complex64::new(-0.5, 0.0)),
    ])
    .expect("static scene is valid")
}

/// [`two_scatterer_scene`] plus reflectivity 0.75 at (0, 1, 0) m.
pub fn three_scatterer_scene() -> Scene {
    two_scatterer_scene().union(
        &Scene::new(vec![Scatterer::new(
            [0.0, 1.0, 0.0],
            Complex64::new(0.75, 0.0),
        )])
        .expect("static scene is valid"),
    )
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn green_examples() {
        let g = green(PI / 2.0, 4.0, 1.0).unwrap();
        assert!(close(g, Complex64::new(0.25, 0.0), 1e-15));
        for k in [0.1, 1.0, 7.3] {
            assert!((green(k, 1.0, 1.0).unwrap().norm() - 1.0).abs() < 1e-15);
        }
        let g = green(PI / 2.0, 2.0, FREE_SPACE_NORMALIZATION).unwrap();
        assert!(close(g, Complex64::new(-1.0 / (8.0 * PI), 0.0), 1e-15));
    }

    #[test]
    fn green_rejects_coincident_sensor() {
        assert!(matches!(green(1.0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(green(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn single_scatterer_response_is_green() {
        let scene = Scene::with_normalization(
            vec![Scatterer::new([0.0; 3], Complex64::new(1.0, 0.0))],
            1.0,
        )
        .unwrap();
        let v = scene.response([0.0, 3.0, 0.0], &[2.0]).unwrap();
        assert_eq!(v, vec![green(2.0, 3.0, 1.0).unwrap()]);
    }

    #[test]
    fn two_scatterer_worked_value() {
        // Independent direct evaluation: 1/(4π·4)·e^{-2πi} − 0.5/(4π·2)·e^{-πi}
        let r1: f64 = 4.0;
        let r2: f64 = 2.0;
        let k = PI / 2.0;
        let direct = Complex64::from_polar(1.0 / (4.0 * PI * r1), -k * r1)
            - Complex64::from_polar(0.5 / (4.0 * PI * r2), -k * r2);
        let v = two_scatterer_scene()
            .response([4.0, 0.0, 0.0], &[k])
            .unwrap();
        assert!(close(v[0], direct, 1e-15));
        assert!((v[0].re - 1.0 / (8.0 * PI)).abs() < 1e-15);
        assert!((v[0].re - 0.0398).abs() < 5e-5);
    }

    #[test]
    fn coincident_sensor_is_error() {
        let scene = two_scatterer_scene();
        assert!(scene.response([2.0, 0.0, 0.0], &[1.0]).is_err());
    }

    #[test]
    fn pipe_corners_and_symmetry() {
        let s = pipe_scene(1.0, 0.2, 2, Complex64::new(1.0, 0.0)).unwrap();
        let mut pos: Vec<[f64; 3]> = s.scatterers().iter().map(|s| s.position).collect();
        pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            pos,
            vec![
                [-0.5, -0.1, 0.0],
                [-0.5, 0.1, 0.0],
                [0.5, -0.1, 0.0],
                [0.5, 0.1, 0.0]
            ]
        );
        let s = pipe_scene(0.7, 0.1, 9, Complex64::new(1.0, 0.5)).unwrap();
        for a in s.scatterers() {
            let rotated = [-a.position[0], -a.position[1], a.position[2]];
            assert!(s
                .scatterers()
                .iter()
                .any(|b| b.position == rotated && b.reflectivity == a.reflectivity));
        }
    }

    #[test]
    fn pipe_rejects_degenerate() {
        let one = Complex64::new(1.0, 0.0);
        assert!(pipe_scene(0.1, 0.1, 4, one).is_err());
        assert!(pipe_scene(1.0, 0.0, 4, one).is_err());
        assert!(pipe_scene(1.0, 0.1, 1, one).is_err());
    }

    #[test]
    fn empty_scene_rejected() {
        assert!(Scene::new(vec![]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_scatterer() -> impl Strategy<Value = Scatterer> {
            (
                (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
                (-2.0f64..2.0, -2.0f64..2.0),
            )
                .prop_map(|((x, y, z), (re, im))| Scatterer::new([x, y, z], Complex64::new(re, im)))
        }

        proptest! {
            #[test]
            fn green_magnitude_is_inverse_distance(k in 0.01f64..100.0, r in 1e-3f64..1e3) {
                let g = green(k, r, 1.0).unwrap();
                prop_assert!((g.norm() * r - 1.0).abs() < 1e-12);
            }

            #[test]
            fn response_is_linear_in_scene(
                a in proptest::collection::vec(arb_scatterer(), 1..6),
                b in proptest::collection::vec(arb_scatterer(), 1..6),
                theta in 0.0f64..std::f64::consts::TAU,
            ) {
                let sa = Scene::new(a).unwrap();
                let sb = Scene::new(b).unwrap();
                let sensor = [5.0 * theta.cos(), 5.0 * theta.sin(), 0.3];
                let ks = [1.0, 2.5, 7.0];
                let ra = sa.response(sensor, &ks).unwrap();
                let rb = sb.response(sensor, &ks).unwrap();
                let rab = sa.union(&sb).response(sensor, &ks).unwrap();
                for q in 0..ks.len() {
                    let sum = ra[q] + rb[q];
                    let scale = ra[q].norm() + rb[q].norm();
                    prop_assert!((rab[q] - sum).norm() <= 1e-12 * scale.max(1e-300));
                }
            }
        }
    }
}
