//! Thin-strip sheet currents and their magnetic fields.
//!
//! A strip of half-width `w` lies in the plane z = 0 and carries a sheet
//! current J(x) (A/m) along +y. Fields follow from Biot–Savart:
//!
//! ```text
//! Bx(x, z) =  μ0/2π ∫ J(x') z        / ((x − x')² + z²) dx'
//! Bz(x, z) = −μ0/2π ∫ J(x') (x − x') / ((x − x')² + z²) dx'
//! ```
//!
//! Integration runs in φ with x' = w·sin φ. That removes the inverse square
//! root edge singularities of Meissner-state profiles.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::bean::bean_sheet_current;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::physics::MU0;
use crate::quadrature::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Meissner,
    Normal,
    BeanVirgin,
    BeanRemnant,
    VerticalScreen,
    Tabulated,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::Meissner => "meissner",
            ProfileKind::Normal => "normal",
            ProfileKind::BeanVirgin => "bean-virgin",
            ProfileKind::BeanRemnant => "bean-remnant",
            ProfileKind::VerticalScreen => "vertical-screen",
            ProfileKind::Tabulated => "tabulated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Meissner,
    Normal,
    VerticalScreen { b0z: f64 },
    BeanVirgin { jc_sheet: f64 },
    /// Ramp to `peak`, then down to the profile's total current.
    BeanCycle { jc_sheet: f64, peak: f64 },
    Tabulated { x: Vec<f64>, j: Vec<f64> },
}

/// Current per unit width J(x) on `[-w, w]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetCurrentProfile {
    half_width: f64,
    total_current: f64,
    shape: Shape,
}

fn check_width(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!("half-width must be positive, got {w}")))
    }
}

/// J(x) = (I/π)/√(w² − x²).
pub fn meissner_profile(current: f64, half_width: f64) -> Result<SheetCurrentProfile> {
    check_width(half_width)?;
    Ok(SheetCurrentProfile {
        half_width,
        total_current: current,
        shape: Shape::Meissner,
    })
}

/// Uniform J = I/2w.
pub fn normal_profile(current: f64, half_width: f64) -> Result<SheetCurrentProfile> {
    check_width(half_width)?;
    Ok(SheetCurrentProfile {
        half_width,
        total_current: current,
        shape: Shape::Normal,
    })
}

/// Screening current of a Meissner strip in a perpendicular field `b0z`:
/// J(x) = −(2 b0z/μ0)·x/√(w² − x²). Carries no net current.
pub fn vertical_screen_profile(b0z: f64, half_width: f64) -> Result<SheetCurrentProfile> {
    check_width(half_width)?;
    Ok(SheetCurrentProfile {
        half_width,
        total_current: 0.0,
        shape: Shape::VerticalScreen { b0z },
    })
}

impl SheetCurrentProfile {
    pub(crate) fn bean_virgin(half_width: f64, jc_sheet: f64, current: f64) -> Self {
        Self {
            half_width,
            total_current: current,
            shape: Shape::BeanVirgin { jc_sheet },
        }
    }

    pub(crate) fn bean_cycle(half_width: f64, jc_sheet: f64, peak: f64, current: f64) -> Self {
        Self {
            half_width,
            total_current: current,
            shape: Shape::BeanCycle { jc_sheet, peak },
        }
    }

    /// Piecewise-linear profile through `(x, J)` nodes covering `[-w, w]`.
    pub fn tabulated(half_width: f64, x: Vec<f64>, j: Vec<f64>) -> Result<Self> {
        check_width(half_width)?;
        if x.len() != j.len() || x.len() < 2 {
            return Err(Error::InvalidArgument("tabulated profile needs matching x/J with at least two nodes".into()));
        }
        if x.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidArgument("tabulated x nodes must be strictly increasing".into()));
        }
        let tol = 1e-12 * half_width;
        if (x[0] + half_width).abs() > tol || (x[x.len() - 1] - half_width).abs() > tol {
            return Err(Error::InvalidArgument("tabulated nodes must span [-w, w]".into()));
        }
        let total: f64 = x.windows(2).zip(j.windows(2)).map(|(xs, js)| 0.5 * (js[0] + js[1]) * (xs[1] - xs[0])).sum();
        Ok(Self {
            half_width,
            total_current: total,
            shape: Shape::Tabulated { x, j },
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn total_current(&self) -> f64 {
        self.total_current
    }

    pub fn kind(&self) -> ProfileKind {
        match &self.shape {
            Shape::Meissner => ProfileKind::Meissner,
            Shape::Normal => ProfileKind::Normal,
            Shape::VerticalScreen { .. } => ProfileKind::VerticalScreen,
            Shape::BeanVirgin { .. } => ProfileKind::BeanVirgin,
            Shape::BeanCycle { .. } => ProfileKind::BeanRemnant,
            Shape::Tabulated { .. } => ProfileKind::Tabulated,
        }
    }

    /// J(x) in A/m; zero outside the strip.
    pub fn evaluate(&self, x: f64) -> f64 {
        let w = self.half_width;
        if x.abs() > w {
            return 0.0;
        }
        let i = self.total_current;
        match &self.shape {
            Shape::Meissner => i / PI / ((w - x) * (w + x)).sqrt(),
            Shape::Normal => i / (2.0 * w),
            Shape::VerticalScreen { b0z } => -(2.0 * b0z / MU0) * x / ((w - x) * (w + x)).sqrt(),
            Shape::BeanVirgin { jc_sheet } => bean_sheet_current(x, w, *jc_sheet, i),
            Shape::BeanCycle { jc_sheet, peak } => {
                bean_sheet_current(x, w, *jc_sheet, *peak) - bean_sheet_current(x, w, 2.0 * jc_sheet, peak - i)
            }
            Shape::Tabulated { x: xs, j } => interp(xs, j, x),
        }
    }

    /// J(w sin φ)·w cos φ, the integrand after the edge substitution.
    pub fn weighted(&self, phi: f64) -> f64 {
        let w = self.half_width;
        let (s, c) = phi.sin_cos();
        match &self.shape {
            Shape::Meissner => self.total_current / PI,
            Shape::VerticalScreen { b0z } => -(2.0 * b0z / MU0) * w * s,
            _ => self.evaluate(w * s) * w * c,
        }
    }

    /// Kinks of J in the φ variable, used to seed the adaptive quadrature.
    fn breakpoints(&self) -> Vec<f64> {
        let w = self.half_width;
        let asin = |b: f64| (b / w).clamp(-1.0, 1.0).asin();
        let both = |b: f64| [-asin(b), asin(b)];
        match &self.shape {
            Shape::BeanVirgin { jc_sheet } => both(penetration(w, *jc_sheet, self.total_current)).to_vec(),
            Shape::BeanCycle { jc_sheet, peak } => {
                let mut v = both(penetration(w, *jc_sheet, *peak)).to_vec();
                v.extend(both(penetration(w, 2.0 * jc_sheet, peak - self.total_current)));
                v
            }
            Shape::Tabulated { x, .. } => x.iter().map(|&xi| asin(xi)).collect(),
            _ => Vec::new(),
        }
    }

    /// ∫ J dx by quadrature; should reproduce [`Self::total_current`].
    pub fn integrated_current(&self) -> Result<f64> {
        let opts = QuadOptions {
            rel_tol: 1e-12,
            ..Default::default()
        };
        integrate(|phi| [self.weighted(phi)], -FRAC_PI_2, FRAC_PI_2, &self.breakpoints(), opts).map(|v| v[0])
    }
}

fn penetration(w: f64, jc_sheet: f64, current: f64) -> f64 {
    let ratio = (current / (2.0 * w * jc_sheet)).clamp(0.0, 1.0);
    w * (1.0 - ratio * ratio).max(0.0).sqrt()
}

fn interp(xs: &[f64], js: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[k - 1], xs[k]);
    let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
    js[k - 1] * (1.0 - t) + js[k] * t
}

/// A point and the field there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub position: Vec2,
    pub b: Vec2,
}

impl FieldSample {
    pub fn magnitude(&self) -> f64 {
        self.b.norm()
    }
}

/// Points closer than this fraction of `w` to the sheet are rejected.
pub const ON_SHEET_TOLERANCE: f64 = 1e-6;

/// Field of a sheet current at `(x, z)` by adaptive quadrature to relative `opts.rel_tol`.
pub fn field_from_profile_with(profile: &SheetCurrentProfile, x: f64, z: f64, opts: QuadOptions) -> Result<FieldSample> {
    let w = profile.half_width;
    if z.abs() < ON_SHEET_TOLERANCE * w && x.abs() <= w {
        return Err(Error::OnSheet { x, z });
    }
    let mut breaks = profile.breakpoints();
    if x.abs() < w {
        breaks.push((x / w).asin());
    }
    let v = integrate(
        |phi| {
            let xp = w * phi.sin();
            let g = profile.weighted(phi);
            let dx = x - xp;
            let r2 = dx * dx + z * z;
            [g * z / r2, -g * dx / r2]
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        &breaks,
        opts,
    )?;
    let k = MU0 / (2.0 * PI);
    Ok(FieldSample {
        position: Vec2::new(x, z),
        b: Vec2::new(k * v[0], k * v[1]),
    })
}

pub fn field_from_profile(profile: &SheetCurrentProfile, x: f64, z: f64) -> Result<FieldSample> {
    field_from_profile_with(profile, x, z, QuadOptions::default())
}

/// Meissner strip field above its centre: μ0 I / (2π √(w² + z²)).
pub fn on_axis_meissner(current: f64, half_width: f64, z: f64) -> f64 {
    MU0 * current / (2.0 * PI * half_width.hypot(z))
}

/// Uniform strip above its centre: μ0 I/(2π w)·arctan(w/z).
pub fn on_axis_normal(current: f64, half_width: f64, z: f64) -> f64 {
    MU0 * current / (2.0 * PI * half_width) * half_width.atan2(z)
}

/// μ0 I/(2π² w), the field unit used for strip plots.
pub fn field_unit(current: f64, half_width: f64) -> f64 {
    MU0 * current / (2.0 * PI * PI * half_width)
}

// Closed forms via the complex field F = Bz + i·Bx, analytic off the strip.

fn complex_to_field(f: Complex64) -> Vec2 {
    Vec2::new(f.im, f.re)
}

fn sqrt_strip(zeta: Complex64, w: f64) -> Complex64 {
    // branch with √(ζ² − w²) ~ ζ at infinity in both half planes
    (zeta - w).sqrt() * (zeta + w).sqrt()
}

/// Field of the Meissner profile anywhere off the strip, F = −μ0 I/(2π √(ζ² − w²)).
pub fn meissner_field(current: f64, half_width: f64, x: f64, z: f64) -> Vec2 {
    let zeta = Complex64::new(x, z);
    complex_to_field(-MU0 * current / (2.0 * PI) / sqrt_strip(zeta, half_width))
}

/// Field of the uniform profile, F = −μ0 I/(4π w)·log((ζ + w)/(ζ − w)).
pub fn normal_field(current: f64, half_width: f64, x: f64, z: f64) -> Vec2 {
    let zeta = Complex64::new(x, z);
    let w = half_width;
    let log = (zeta + w).ln() - (zeta - w).ln();
    complex_to_field(-MU0 * current / (4.0 * PI * w) * log)
}

/// Total field of a thin Meissner strip in a perpendicular bias `b0z`,
/// F = b0z·ζ/√(ζ² − w²). Includes the applied field.
pub fn screened_vertical_field(b0z: f64, half_width: f64, x: f64, z: f64) -> Vec2 {
    let zeta = Complex64::new(x, z);
    complex_to_field(b0z * zeta / sqrt_strip(zeta, half_width))
}
