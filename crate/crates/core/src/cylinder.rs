//! Exact fields of a round wire of radius R carrying a current I in a
//! transverse bias field.
//!
//! The wire axis sits at (0, −R) so its top touches z = 0. Polar angle θ is
//! measured from +z towards +x: r̂ = (sin θ, cos θ), θ̂ = (cos θ, −sin θ).
//! The bias points along −x so that it cancels the current's field above
//! the wire, where θ = 0.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{CylinderGeometry, Vec2};
use crate::physics::MU0;
use crate::sheet::FieldSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireState {
    Superconducting,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderScene {
    pub geom: CylinderGeometry,
    pub current: f64,
    /// Bias magnitude; the vector is (−bias, 0).
    pub bias: f64,
    pub state: WireState,
}

impl CylinderScene {
    pub fn new(geom: CylinderGeometry, current: f64, bias: f64, state: WireState) -> Result<Self> {
        if current < 0.0 || bias < 0.0 {
            return Err(Error::InvalidArgument("cylinder scene needs I ≥ 0 and B0 ≥ 0".into()));
        }
        Ok(Self {
            geom,
            current,
            bias,
            state,
        })
    }

    pub fn centre(&self) -> Vec2 {
        Vec2::new(0.0, -self.geom.radius)
    }
}

/// Field of a line current `current` along +y located at `centre`.
pub fn line_current_field(current: f64, centre: Vec2, p: Vec2) -> Vec2 {
    let d = p - centre;
    let r2 = d.norm_squared();
    MU0 * current / (2.0 * PI * r2) * Vec2::new(d.y, -d.x)
}

/// Uniform field `bias` outside a flux-excluding cylinder:
/// B = b + (R²/r²)(b − 2(b·r̂) r̂). Includes the applied field.
pub fn screened_uniform_field(radius: f64, centre: Vec2, bias: Vec2, p: Vec2) -> Vec2 {
    let d = p - centre;
    let r2 = d.norm_squared();
    let rhat = d / r2.sqrt();
    bias + radius * radius / r2 * (bias - 2.0 * bias.dot(&rhat) * rhat)
}

/// Polar components (B_r, B_θ) at (r, θ) about the wire axis.
pub fn cylinder_field_polar(scene: &CylinderScene, r: f64, theta: f64) -> Result<(f64, f64)> {
    let big_r = scene.geom.radius;
    if r < big_r {
        return Err(Error::InteriorPoint { r, radius: big_r });
    }
    let b0 = scene.bias;
    let q = match scene.state {
        WireState::Superconducting => big_r * big_r / (r * r),
        WireState::Normal => 0.0,
    };
    let (s, c) = theta.sin_cos();
    let b_r = -b0 * (1.0 - q) * s;
    let b_theta = -b0 * (1.0 + q) * c + MU0 * scene.current / (2.0 * PI * r);
    Ok((b_r, b_theta))
}

/// Cartesian field sample at polar position (r, θ).
pub fn cylinder_field(scene: &CylinderScene, r: f64, theta: f64) -> Result<FieldSample> {
    let (b_r, b_t) = cylinder_field_polar(scene, r, theta)?;
    let (s, c) = theta.sin_cos();
    let rhat = Vec2::new(s, c);
    let that = Vec2::new(c, -s);
    Ok(FieldSample {
        position: scene.centre() + r * rhat,
        b: b_r * rhat + b_t * that,
    })
}

/// Field at a Cartesian point.
pub fn cylinder_field_at(scene: &CylinderScene, p: Vec2) -> Result<FieldSample> {
    let d = p - scene.centre();
    let r = d.norm();
    let theta = d.x.atan2(d.y);
    let mut f = cylinder_field(scene, r, theta)?;
    f.position = p;
    Ok(f)
}

/// h = 2πR·B0/(μ0 I).
pub fn reduced_bias(current: f64, bias: f64, radius: f64) -> f64 {
    2.0 * PI * radius * bias / (MU0 * current)
}

/// Trap height above a normal wire, μ0 I/(2π B0) − R.
pub fn trap_height_normal(current: f64, bias: f64, radius: f64) -> Result<f64> {
    if !(current > 0.0 && bias > 0.0) {
        return Err(Error::NoTrap("a trap needs positive current and bias".into()));
    }
    let r = MU0 * current / (2.0 * PI * bias);
    if r < radius {
        return Err(Error::NoTrap(format!(
            "bias {bias} T exceeds the surface field {} T",
            MU0 * current / (2.0 * PI * radius)
        )));
    }
    Ok(r - radius)
}

/// Trap height above a superconducting wire: outer root of
/// r² − (R/h) r + R² = 0, minus R.
pub fn trap_height_superconducting(current: f64, bias: f64, radius: f64) -> Result<f64> {
    if !(current > 0.0 && bias > 0.0) {
        return Err(Error::NoTrap("a trap needs positive current and bias".into()));
    }
    let h = reduced_bias(current, bias, radius);
    if h > 0.5 {
        return Err(Error::NoTrap(format!("reduced bias h = {h} exceeds 1/2")));
    }
    let root = (1.0 - 4.0 * h * h).max(0.0).sqrt();
    Ok(radius * (1.0 + root) / (2.0 * h) - radius)
}

/// Bias that places the trap at height `z_t`.
pub fn required_bias_cylinder(z_t: f64, current: f64, radius: f64, state: WireState) -> Result<f64> {
    if !(z_t >= 0.0) {
        return Err(Error::InvalidArgument(format!("trap height must be non-negative, got {z_t}")));
    }
    let r = z_t + radius;
    Ok(match state {
        WireState::Superconducting => MU0 * current * r / (2.0 * PI * (r * r + radius * radius)),
        WireState::Normal => MU0 * current / (2.0 * PI * r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scene(current: f64, bias: f64, state: WireState) -> CylinderScene {
        CylinderScene::new(CylinderGeometry::new(1.0).unwrap(), current, bias, state).unwrap()
    }

    #[test]
    fn flux_exclusion_at_surface() {
        let s = scene(0.3, 1e-3, WireState::Superconducting);
        for k in 0..12 {
            let th = k as f64 * PI / 6.0;
            let (b_r, _) = cylinder_field_polar(&s, 1.0, th).unwrap();
            assert!(b_r.abs() < 1e-18);
        }
    }

    #[test]
    fn equator_doubling_and_far_field() {
        let s = scene(0.0, 1e-3, WireState::Superconducting);
        let f = cylinder_field(&s, 1.0, 0.0).unwrap();
        assert!((f.magnitude() - 2e-3).abs() < 1e-15);
        let far = cylinder_field(&s, 1e6, 0.7).unwrap();
        assert!((far.b - Vec2::new(-1e-3, 0.0)).norm() < 1e-14);
        assert!(matches!(cylinder_field(&s, 0.5, 0.0), Err(Error::InteriorPoint { .. })));
    }

    #[test]
    fn polar_form_matches_vector_form() {
        let s = scene(0.7, 2e-4, WireState::Superconducting);
        for &(r, th) in &[(1.1, 0.3), (2.0, -2.0), (5.0, 3.0)] {
            let f = cylinder_field(&s, r, th).unwrap();
            let c = s.centre();
            let v = screened_uniform_field(1.0, c, Vec2::new(-2e-4, 0.0), f.position) + line_current_field(0.7, c, f.position);
            assert!((f.b - v).norm() < 1e-15);
            let g = cylinder_field_at(&s, f.position).unwrap();
            assert!((g.b - f.b).norm() < 1e-15);
        }
    }

    #[test]
    fn heights() {
        let (i, r) = (1.0, 1.0);
        let unit = MU0 * i / (2.0 * PI * r);
        assert!((trap_height_normal(i, unit / 2.0, r).unwrap() - r).abs() < 1e-12);
        assert!(trap_height_normal(i, unit, r).unwrap().abs() < 1e-12);
        assert!(trap_height_normal(i, 1.01 * unit, r).is_err());
        assert!((trap_height_superconducting(i, 0.4 * unit, r).unwrap() - r).abs() < 1e-12);
        assert!(trap_height_superconducting(i, 0.5 * unit, r).unwrap().abs() < 1e-12);
        assert!(matches!(trap_height_superconducting(i, 0.6 * unit, r), Err(Error::NoTrap(_))));
        let h = 1e-3;
        let sc = trap_height_superconducting(i, h * unit, r).unwrap();
        let n = trap_height_normal(i, h * unit, r).unwrap();
        assert!((sc - n).abs() / n < 1e-5);
    }

    #[test]
    fn trap_is_a_true_zero() {
        let unit = MU0 / (2.0 * PI);
        let s = scene(1.0, 0.3 * unit, WireState::Superconducting);
        let z = trap_height_superconducting(1.0, s.bias, 1.0).unwrap();
        let f = cylinder_field(&s, 1.0 + z, 0.0).unwrap();
        assert!(f.magnitude() < 1e-12 * s.bias);
    }

    #[test]
    fn bias_ratio_limits() {
        let ratio = |z: f64| {
            required_bias_cylinder(z, 1.0, 1.0, WireState::Superconducting).unwrap()
                / required_bias_cylinder(z, 1.0, 1.0, WireState::Normal).unwrap()
        };
        assert!((ratio(0.0) - 0.5).abs() < 1e-15);
        assert!(ratio(0.5) < ratio(2.0));
        assert!((ratio(3.0) - 16.0 / 17.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn round_trips(z in 1e-3f64..50.0, i in 0.01f64..10.0, r in 1e-6f64..1e-2) {
            let zt = z * r;
            for state in [WireState::Superconducting, WireState::Normal] {
                let b = required_bias_cylinder(zt, i, r, state).unwrap();
                let back = match state {
                    WireState::Superconducting => trap_height_superconducting(i, b, r).unwrap(),
                    WireState::Normal => trap_height_normal(i, b, r).unwrap(),
                };
                prop_assert!((back - zt).abs() <= 1e-10 * zt.max(r));
            }
        }
    }
}
