//! Side-guide traps: a wire field plus a homogeneous bias, with gravity.
//!
//! The trapping potential is U = μ|B| − m g ĝ·r. Field sources are anything
//! implementing [`FieldSource`]; the bias enters linearly, which lets the
//! required bias for a given trap height be found without root finding.

use std::sync::Arc;

use rayon::prelude::*;

use crate::bem::{BemSolution, NEAR_SURFACE_CUTOFF};
use crate::cylinder::{line_current_field, screened_uniform_field, WireState};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::physics::{AtomSpecies, Material, G_ACCEL, KB, MU0};
use crate::sheet::{
    field_from_profile, meissner_field, normal_field, screened_vertical_field, ProfileKind, SheetCurrentProfile,
};

/// Anything that produces a wire field and knows how a bias is modified by the wire.
pub trait FieldSource: Send + Sync {
    /// Field of the wire alone.
    fn current_field(&self, p: Vec2) -> Result<Vec2>;

    /// Wire field plus bias, including any screening of the bias by the wire.
    /// Must be affine in `bias`.
    fn total_field(&self, p: Vec2, bias: Vec2) -> Result<Vec2> {
        Ok(self.current_field(p)? + bias)
    }

    /// Characteristic size: half-width or radius.
    fn length_scale(&self) -> f64;

    /// z of the wire's top surface.
    fn surface_level(&self) -> f64 {
        0.0
    }

    /// Closest distance to the surface at which the field may be evaluated.
    fn approach_limit(&self) -> f64 {
        0.0
    }

    fn transport_current(&self) -> f64;

    /// Largest |B| on the conductor surface, when the model resolves it.
    fn max_surface_field(&self, _bias: Vec2) -> Option<f64> {
        None
    }

    /// Conductor cross-section, when known.
    fn cross_section_area(&self) -> Option<f64> {
        None
    }

    fn label(&self) -> String;
}

/// A thin strip described by its sheet current. Meissner and normal profiles
/// use their closed forms; a Meissner strip also screens the vertical part of the bias.
#[derive(Debug, Clone)]
pub struct SheetSource {
    profile: SheetCurrentProfile,
    thickness: Option<f64>,
}

impl SheetSource {
    pub fn new(profile: SheetCurrentProfile) -> Self {
        Self {
            profile,
            thickness: None,
        }
    }

    /// Thickness used only for the critical-current check.
    pub fn with_thickness(mut self, thickness: f64) -> Self {
        self.thickness = Some(thickness);
        self
    }

    pub fn profile(&self) -> &SheetCurrentProfile {
        &self.profile
    }
}

impl FieldSource for SheetSource {
    fn current_field(&self, p: Vec2) -> Result<Vec2> {
        let (w, i) = (self.profile.half_width(), self.profile.total_current());
        if p.y.abs() < crate::sheet::ON_SHEET_TOLERANCE * w && p.x.abs() <= w {
            return Err(Error::OnSheet { x: p.x, z: p.y });
        }
        match self.profile.kind() {
            ProfileKind::Meissner => Ok(meissner_field(i, w, p.x, p.y)),
            ProfileKind::Normal => Ok(normal_field(i, w, p.x, p.y)),
            _ => field_from_profile(&self.profile, p.x, p.y).map(|f| f.b),
        }
    }

    fn total_field(&self, p: Vec2, bias: Vec2) -> Result<Vec2> {
        let wire = self.current_field(p)?;
        if self.profile.kind() == ProfileKind::Meissner {
            let w = self.profile.half_width();
            let vertical = screened_vertical_field(bias.y, w, p.x, p.y);
            Ok(wire + Vec2::new(bias.x, 0.0) + vertical)
        } else {
            Ok(wire + bias)
        }
    }

    fn length_scale(&self) -> f64 {
        self.profile.half_width()
    }

    fn transport_current(&self) -> f64 {
        self.profile.total_current()
    }

    fn cross_section_area(&self) -> Option<f64> {
        self.thickness.map(|d| 2.0 * self.profile.half_width() * d)
    }

    fn label(&self) -> String {
        format!("thin {}", self.profile.kind().as_str())
    }
}

/// Round wire with its axis at (0, −R).
#[derive(Debug, Clone, Copy)]
pub struct CylinderSource {
    pub radius: f64,
    pub current: f64,
    pub state: WireState,
}

impl CylinderSource {
    fn centre(&self) -> Vec2 {
        Vec2::new(0.0, -self.radius)
    }

    fn check(&self, p: Vec2) -> Result<()> {
        let r = (p - self.centre()).norm();
        if r < self.radius {
            return Err(Error::InteriorPoint { r, radius: self.radius });
        }
        Ok(())
    }
}

impl FieldSource for CylinderSource {
    fn current_field(&self, p: Vec2) -> Result<Vec2> {
        self.check(p)?;
        Ok(line_current_field(self.current, self.centre(), p))
    }

    fn total_field(&self, p: Vec2, bias: Vec2) -> Result<Vec2> {
        let wire = self.current_field(p)?;
        Ok(match self.state {
            WireState::Superconducting => wire + screened_uniform_field(self.radius, self.centre(), bias, p),
            WireState::Normal => wire + bias,
        })
    }

    fn length_scale(&self) -> f64 {
        self.radius
    }

    fn transport_current(&self) -> f64 {
        self.current
    }

    fn max_surface_field(&self, bias: Vec2) -> Option<f64> {
        match self.state {
            WireState::Superconducting => {
                Some(MU0 * self.current.abs() / (2.0 * std::f64::consts::PI * self.radius) + 2.0 * bias.norm())
            }
            WireState::Normal => None,
        }
    }

    fn cross_section_area(&self) -> Option<f64> {
        Some(std::f64::consts::PI * self.radius * self.radius)
    }

    fn label(&self) -> String {
        match self.state {
            WireState::Superconducting => "superconducting cylinder".into(),
            WireState::Normal => "normal cylinder".into(),
        }
    }
}

/// A solved boundary-element wire.
#[derive(Debug, Clone)]
pub struct BemSource {
    solution: BemSolution,
    half_width: f64,
}

impl BemSource {
    pub fn new(solution: BemSolution) -> Self {
        let half_width = solution
            .mesh()
            .panels()
            .iter()
            .map(|p| p.midpoint.x.abs())
            .fold(0.0, f64::max);
        Self { solution, half_width }
    }

    pub fn solution(&self) -> &BemSolution {
        &self.solution
    }
}

impl FieldSource for BemSource {
    fn current_field(&self, p: Vec2) -> Result<Vec2> {
        self.solution.field_with(p, Vec2::zeros(), self.solution.current())
    }

    fn total_field(&self, p: Vec2, bias: Vec2) -> Result<Vec2> {
        self.solution.field_with(p, bias, self.solution.current())
    }

    fn length_scale(&self) -> f64 {
        self.half_width
    }

    fn surface_level(&self) -> f64 {
        self.solution.mesh().top()
    }

    fn approach_limit(&self) -> f64 {
        // a little beyond the evaluation cutoff
        2.0 * NEAR_SURFACE_CUTOFF * self.solution.mesh().min_panel_length()
    }

    fn transport_current(&self) -> f64 {
        self.solution.current()
    }

    fn max_surface_field(&self, bias: Vec2) -> Option<f64> {
        Some(self.solution.max_surface_field_with(bias, self.solution.current()))
    }

    fn cross_section_area(&self) -> Option<f64> {
        Some(self.solution.cross_section_area())
    }

    fn label(&self) -> String {
        format!("boundary elements ({} panels)", self.solution.mesh().len())
    }
}

#[derive(Clone)]
pub struct TrapScene {
    pub source: Arc<dyn FieldSource>,
    pub bias: Vec2,
    pub atom: AtomSpecies,
    /// Unit vector of gravitational acceleration; `None` switches gravity off.
    pub gravity: Option<Vec2>,
}

impl std::fmt::Debug for TrapScene {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TrapScene")
            .field("source", &self.source.label())
            .field("bias", &self.bias)
            .field("atom", &self.atom.name)
            .field("gravity", &self.gravity)
            .finish()
    }
}

impl TrapScene {
    /// Rb-87 |2,2⟩ below an upside-down chip: gravity along +z, away from the surface.
    pub fn new(source: Arc<dyn FieldSource>, bias: Vec2) -> Self {
        Self {
            source,
            bias,
            atom: AtomSpecies::rb87(),
            gravity: Some(Vec2::new(0.0, 1.0)),
        }
    }

    pub fn with_bias(&self, bias: Vec2) -> Self {
        Self { bias, ..self.clone() }
    }

    pub fn with_atom(mut self, atom: AtomSpecies) -> Self {
        self.atom = atom;
        self
    }

    pub fn with_gravity(mut self, gravity: Option<Vec2>) -> Result<Self> {
        if let Some(g) = gravity {
            if (g.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("gravity direction must be a unit vector, got {g:?}")));
            }
        }
        self.gravity = gravity;
        Ok(self)
    }

    pub fn field(&self, p: Vec2) -> Result<Vec2> {
        self.source.total_field(p, self.bias)
    }

    fn length(&self) -> f64 {
        self.source.length_scale()
    }
}

/// U = μ|B| − m g ĝ·r (J).
pub fn total_potential(scene: &TrapScene, p: Vec2) -> Result<f64> {
    let b = scene.field(p)?;
    let grav = scene.gravity.map_or(0.0, |g| scene.atom.mass * G_ACCEL * g.dot(&p));
    Ok(scene.atom.magnetic_moment() * b.norm() - grav)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    TowardSurface,
    Away,
    Lateral,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::TowardSurface => "toward-surface",
            Direction::Away => "away",
            Direction::Lateral => "lateral",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Validity {
    Valid,
    Invalid(Vec<String>),
    /// Current check passed (or was unavailable) but the surface field is not modelled.
    Unresolved(String),
}

impl Validity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Validity::Valid => "yes",
            Validity::Invalid(_) => "no",
            Validity::Unresolved(_) => "unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeissnerVerdict {
    pub max_surface_field: Option<f64>,
    pub bc1: f64,
    pub current: f64,
    pub critical_current: Option<f64>,
    pub validity: Validity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrapReport {
    pub position: Vec2,
    pub field_at_min: f64,
    /// |∂B⃗/∂x| and |∂B⃗/∂z| at the trap (T/m).
    pub gradient_x: f64,
    pub gradient_z: f64,
    /// Depth as a temperature (K).
    pub depth: f64,
    pub limiting_direction: Direction,
    pub bias_used: Vec2,
    pub validity: Option<Validity>,
}

fn golden<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64, maximise: bool) -> Result<(f64, f64)> {
    let sign = if maximise { -1.0 } else { 1.0 };
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = sign * f(c)?;
    let mut fd = sign * f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = sign * f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = sign * f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, sign * f(x)?))
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Central-difference gradients |B⃗(p + hê) − B⃗(p − hê)|/2h along x and z.
pub fn field_gradients(scene: &TrapScene, p: Vec2, h: f64) -> Result<(f64, f64)> {
    let ex = Vec2::new(h, 0.0);
    let ez = Vec2::new(0.0, h);
    let gx = (scene.field(p + ex)? - scene.field(p - ex)?).norm() / (2.0 * h);
    let gz = (scene.field(p + ez)? - scene.field(p - ez)?).norm() / (2.0 * h);
    Ok((gx, gz))
}

/// Newton iteration on B⃗ = 0 starting at `p`.
fn refine_zero(scene: &TrapScene, mut p: Vec2) -> Option<Vec2> {
    let l = scene.length();
    let h = 1e-6 * l.max(p.y.abs());
    let scale = scene.bias.norm().max(1e-300);
    for _ in 0..40 {
        let b = scene.field(p).ok()?;
        if b.norm() <= 1e-15 * scale {
            return Some(p);
        }
        let jx = (scene.field(p + Vec2::new(h, 0.0)).ok()? - scene.field(p - Vec2::new(h, 0.0)).ok()?) / (2.0 * h);
        let jz = (scene.field(p + Vec2::new(0.0, h)).ok()? - scene.field(p - Vec2::new(0.0, h)).ok()?) / (2.0 * h);
        let det = jx.x * jz.y - jz.x * jx.y;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let step = Vec2::new((b.x * jz.y - jz.x * b.y) / det, (jx.x * b.y - b.x * jx.y) / det);
        p -= step;
        if step.norm() <= 1e-14 * l.max(p.norm()) {
            return scene.field(p).ok().map(|_| p);
        }
    }
    None
}

/// Locates the trap: scans |B| along x = 0, refines with a golden-section
/// search and then Newton on B⃗ = 0, and checks that U has a local minimum.
pub fn locate_trap(scene: &TrapScene) -> Result<Vec2> {
    let l = scene.length();
    let s = scene.source.surface_level();
    let h_min = (1e-4 * l).max(1.5 * scene.source.approach_limit());
    let heights = geomspace(h_min, 1e4 * l, 800);
    let mags: Vec<f64> = heights
        .par_iter()
        .map(|&h| scene.field(Vec2::new(0.0, s + h)).map(|b| b.norm()).unwrap_or(f64::INFINITY))
        .collect();
    let mut best: Option<usize> = None;
    for k in 1..heights.len() - 1 {
        if mags[k] <= mags[k - 1] && mags[k] <= mags[k + 1] && best.is_none_or(|b| mags[k] < mags[b]) {
            best = Some(k);
        }
    }
    let k = best.ok_or_else(|| Error::NoMinimum("|B| has no interior minimum along the axis".into()))?;
    let (a, b) = (heights[k - 1], heights[k + 1]);
    let (h, _) = golden(
        |h| scene.field(Vec2::new(0.0, s + h)).map(|b| b.norm()),
        a,
        b,
        1e-12 * l,
        false,
    )?;
    let axis = Vec2::new(0.0, s + h);
    let p = refine_zero(scene, axis).filter(|q| (q - axis).norm() < 0.1 * (b - a) + 1e-3 * l).unwrap_or(axis);
    // the potential must rise in every principal direction
    let u0 = total_potential(scene, p)?;
    let step = 1e-4 * l.min(p.y - s);
    for e in [Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.0, -1.0)] {
        if total_potential(scene, p + e * step)? <= u0 {
            return Err(Error::NoMinimum(format!(
                "U at ({:.6e}, {:.6e}) m is not a local minimum (gravity exceeds the magnetic force?)",
                p.x, p.y
            )));
        }
    }
    Ok(p)
}

/// Largest U along `path` (parameter values `ts` mapped to points), refined by
/// golden section around an interior maximum. `None` if U never rises.
fn barrier_along<F>(scene: &TrapScene, ts: &[f64], point: F) -> Result<Option<f64>>
where
    F: Fn(f64) -> Vec2 + Sync,
{
    let us: Vec<Option<f64>> = ts.par_iter().map(|&t| total_potential(scene, point(t)).ok()).collect();
    // stop at the first point that cannot be evaluated
    let n = us.iter().position(Option::is_none).unwrap_or(us.len());
    if n < 2 {
        return Ok(None);
    }
    let us: Vec<f64> = us[..n].iter().map(|u| u.unwrap()).collect();
    let (k, &umax) = us
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if k == 0 {
        return Ok(None);
    }
    if k + 1 < n {
        let (_, u) = golden(
            |t| total_potential(scene, point(t)),
            ts[k - 1],
            ts[k + 1],
            1e-9 * (ts[k + 1] - ts[k - 1]).abs(),
            true,
        )?;
        return Ok(Some(u.max(umax)));
    }
    Ok(Some(umax))
}

/// Minimum potential barrier (K) from the trap at `p` along ±x, toward the
/// surface and away from it.
pub fn trap_depth_at(scene: &TrapScene, p: Vec2) -> Result<(f64, Direction)> {
    let l = scene.length();
    let s = scene.source.surface_level();
    let u0 = total_potential(scene, p)?;
    let h_t = p.y - s;
    let far = (100.0 * l).max(100.0 * h_t);

    let away_ts = geomspace(1e-6 * h_t.min(l), far, 600);
    let away = barrier_along(scene, &away_ts, |t| p + Vec2::new(0.0, t))?
        .ok_or_else(|| Error::UnboundedDirection("potential falls away from the surface".into()))?;

    let stop = s + (0.05 * l).min(0.5 * h_t).max(scene.source.approach_limit());
    let toward = if p.y > stop {
        let ts: Vec<f64> = (0..=400).map(|k| p.y - (p.y - stop) * k as f64 / 400.0).collect();
        barrier_along(scene, &ts, |z| Vec2::new(p.x, z))?
    } else {
        None
    };

    let lat_ts = geomspace(1e-6 * h_t.min(l), far, 600);
    let right = barrier_along(scene, &lat_ts, |t| p + Vec2::new(t, 0.0))?;
    let left = barrier_along(scene, &lat_ts, |t| p - Vec2::new(t, 0.0))?;
    let lateral = match (right, left) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };

    let mut best = (away - u0, Direction::Away);
    let candidates = [(toward, Direction::TowardSurface), (lateral, Direction::Lateral)];
    for (u, dir) in candidates {
        let barrier = u.map_or(0.0, |u| u - u0);
        if barrier < best.0 {
            best = (barrier, dir);
        }
    }
    Ok((best.0.max(0.0) / KB, best.1))
}

pub fn trap_depth(scene: &TrapScene, report: &TrapReport) -> Result<f64> {
    trap_depth_at(scene, report.position).map(|d| d.0)
}

/// Full trap analysis for the scene's bias.
pub fn find_trap(scene: &TrapScene) -> Result<TrapReport> {
    let p = locate_trap(scene)?;
    let l = scene.length();
    let b = scene.field(p)?.norm();
    let (gx, gz) = field_gradients(scene, p, 1e-4 * l)?;
    let (depth, dir) = trap_depth_at(scene, p)?;
    Ok(TrapReport {
        position: p,
        field_at_min: b,
        gradient_x: gx,
        gradient_z: gz,
        depth,
        limiting_direction: dir,
        bias_used: scene.bias,
        validity: None,
    })
}

/// Bias (along −x, returned as a magnitude) that puts the field zero at
/// height `z_target` above the surface on the axis. Uses linearity in bias.
pub fn required_bias(scene: &TrapScene, z_target: f64) -> Result<f64> {
    if !(z_target > 0.0) {
        return Err(Error::InvalidArgument(format!("trap height must be positive, got {z_target}")));
    }
    let p = Vec2::new(0.0, scene.source.surface_level() + z_target);
    let wire = scene.source.total_field(p, Vec2::zeros())?;
    let response = scene.source.total_field(p, Vec2::new(-1.0, 0.0))? - wire;
    if response.x == 0.0 {
        return Err(Error::RootNotBracketed("bias has no effect at the target point".into()));
    }
    let b0 = -wire.x / response.x;
    if !(b0 > 0.0) || !b0.is_finite() {
        return Err(Error::RootNotBracketed(format!(
            "no positive bias along -x cancels the wire field at z = {z_target:e} m"
        )));
    }
    Ok(b0)
}

/// Meissner-state check: surface field below Bc1 and current below jc·area.
pub fn meissner_validity(source: &dyn FieldSource, bias: Vec2, material: &Material) -> MeissnerVerdict {
    let current = source.transport_current().abs();
    let critical = source.cross_section_area().map(|a| a * material.jc);
    let surface = source.max_surface_field(bias);
    let mut reasons = Vec::new();
    if let Some(ic) = critical {
        if current > ic {
            reasons.push("critical current exceeded".to_string());
        }
    }
    if let Some(b) = surface {
        if b > material.bc1 {
            reasons.push("edge field exceeds Bc1".to_string());
        }
    }
    let validity = if !reasons.is_empty() {
        Validity::Invalid(reasons)
    } else if surface.is_none() {
        Validity::Unresolved("surface field not resolved by this model".into())
    } else {
        Validity::Valid
    };
    MeissnerVerdict {
        max_surface_field: surface,
        bc1: material.bc1,
        current,
        critical_current: critical,
        validity,
    }
}

/// One row of a trap-height scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub z_target: f64,
    pub result: Result<TrapReport>,
}

/// For each target height: required bias, trap, gradients and depth.
/// Rows that fail keep their error and the scan continues.
pub fn scan_trap_parameters(scene: &TrapScene, heights: &[f64], material: Option<&Material>) -> Result<Vec<ScanRow>> {
    if heights.windows(2).any(|h| h[1] <= h[0]) {
        return Err(Error::InvalidArgument("scan heights must increase strictly".into()));
    }
    Ok(heights
        .par_iter()
        .map(|&z| {
            let result = required_bias(scene, z).and_then(|b0| {
                let biased = scene.with_bias(Vec2::new(-b0, 0.0));
                let mut report = find_trap(&biased)?;
                report.validity = material.map(|m| meissner_validity(scene.source.as_ref(), biased.bias, m).validity);
                Ok(report)
            });
            ScanRow { z_target: z, result }
        })
        .collect())
}

/// Heights where depth ≥ `min_depth` (K) and |∂B/∂z| ≥ `min_gradient` (T/m).
pub fn trap_window(rows: &[ScanRow], min_depth: f64, min_gradient: f64) -> Option<(f64, f64)> {
    let ok: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.result.as_ref().ok().map(|t| (r.z_target, t)))
        .filter(|(_, t)| t.depth >= min_depth && t.gradient_z >= min_gradient)
        .map(|(z, _)| z)
        .collect();
    Some((*ok.first()?, *ok.last()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::{trap_height_normal, trap_height_superconducting};
    use crate::physics::gravity_gradient_threshold;
    use crate::sheet::{field_unit, meissner_profile, normal_profile, on_axis_meissner, on_axis_normal};
    use std::f64::consts::PI;

    fn thin(kind: ProfileKind) -> Arc<dyn FieldSource> {
        let p = match kind {
            ProfileKind::Normal => normal_profile(1.0, 1e-3).unwrap(),
            _ => meissner_profile(1.0, 1e-3).unwrap(),
        };
        Arc::new(SheetSource::new(p))
    }

    #[test]
    fn potential_basics() {
        let src = thin(ProfileKind::Meissner);
        let scene = TrapScene::new(src, Vec2::zeros()).with_gravity(None).unwrap();
        let far = total_potential(&scene, Vec2::new(0.0, 1e6)).unwrap();
        assert!(far.abs() < 1e-30);
        assert!(TrapScene::new(thin(ProfileKind::Normal), Vec2::zeros()).with_gravity(Some(Vec2::new(0.0, 2.0))).is_err());
    }

    #[test]
    fn thin_meissner_trap_height() {
        let w = 1e-3;
        let b0 = 2.5 * field_unit(1.0, w);
        let scene = TrapScene::new(thin(ProfileKind::Meissner), Vec2::new(-b0, 0.0)).with_gravity(None).unwrap();
        let t = find_trap(&scene).unwrap();
        // axis field equals b0 at z = √((μ0 I/2π b0)² − w²)
        let z_exact = ((MU0 / (2.0 * PI * b0)).powi(2) - w * w).sqrt();
        assert!((t.position.y - z_exact).abs() < 1e-6 * w, "{} vs {z_exact}", t.position.y);
        assert!((t.position.y / w - 0.76).abs() < 0.005);
        assert!(t.position.x.abs() < 1e-8 * w);
        assert!(t.field_at_min < 1e-12 * b0);
        assert!(t.depth > 0.0);
    }

    #[test]
    fn required_bias_matches_closed_forms() {
        let w = 1e-3;
        let sc = TrapScene::new(thin(ProfileKind::Meissner), Vec2::zeros());
        let n = TrapScene::new(thin(ProfileKind::Normal), Vec2::zeros());
        for z in [1e-3 * w, 0.3 * w, 2.0 * w] {
            let a = required_bias(&sc, z).unwrap();
            assert!((a - on_axis_meissner(1.0, w, z)).abs() < 1e-12 * a);
            let b = required_bias(&n, z).unwrap();
            assert!((b - on_axis_normal(1.0, w, z)).abs() < 1e-12 * b);
        }
        let ratio = required_bias(&sc, 1e-3 * w).unwrap() / required_bias(&n, 1e-3 * w).unwrap();
        assert!((ratio - 2.0 / PI).abs() < 1e-3);
    }

    #[test]
    fn cylinder_traps_match_closed_forms() {
        let r = 1e-4;
        let unit = MU0 / (2.0 * PI * r);
        for state in [WireState::Normal, WireState::Superconducting] {
            let src = Arc::new(CylinderSource {
                radius: r,
                current: 1.0,
                state,
            });
            let b0 = 0.3 * unit;
            let scene = TrapScene::new(src, Vec2::new(-b0, 0.0));
            let t = find_trap(&scene).unwrap();
            let exact = match state {
                WireState::Normal => trap_height_normal(1.0, b0, r).unwrap(),
                WireState::Superconducting => trap_height_superconducting(1.0, b0, r).unwrap(),
            };
            assert!((t.position.y - exact).abs() < 1e-6 * r);
        }
    }

    #[test]
    fn gradients_are_second_order() {
        let w = 1e-3;
        let scene = TrapScene::new(thin(ProfileKind::Meissner), Vec2::new(-2.5 * field_unit(1.0, w), 0.0))
            .with_gravity(None)
            .unwrap();
        let p = locate_trap(&scene).unwrap();
        let hs = [4e-3 * w, 2e-3 * w, 1e-3 * w];
        let g: Vec<f64> = hs.iter().map(|&h| field_gradients(&scene, p, h).unwrap().1).collect();
        let ratio = (g[0] - g[1]) / (g[1] - g[2]);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn gravity_can_destroy_the_trap() {
        let w = 1e-6;
        // tiny current: gradient far below the gravity threshold
        let p = meissner_profile(1e-9, w).unwrap();
        let scene = TrapScene::new(Arc::new(SheetSource::new(p)), Vec2::zeros());
        let b0 = required_bias(&scene, 50.0 * w).unwrap();
        let scene = scene.with_bias(Vec2::new(-b0, 0.0));
        let (_, gz) = field_gradients(&scene, Vec2::new(0.0, 50.0 * w), 1e-4 * w).unwrap();
        assert!(gz < gravity_gradient_threshold(&scene.atom).unwrap());
        assert!(matches!(find_trap(&scene), Err(Error::NoMinimum(_))));
    }

    #[test]
    fn depth_without_gravity_tracks_bias() {
        let w = 1e-3;
        let scene = TrapScene::new(thin(ProfileKind::Meissner), Vec2::zeros()).with_gravity(None).unwrap();
        let b0 = required_bias(&scene, 3.0 * w).unwrap();
        let scene = scene.with_bias(Vec2::new(-b0, 0.0));
        let t = find_trap(&scene).unwrap();
        // far from the wire |B| approaches the bias; the barrier cannot exceed it
        let mu = scene.atom.magnetic_moment();
        assert!(t.depth * KB <= mu * b0 * (1.0 + 1e-9));
        assert!(t.depth * KB > 0.5 * mu * b0);
    }

    #[test]
    fn validity_verdicts() {
        let nb = crate::physics::lookup_material("Nb").unwrap();
        let src = SheetSource::new(meissner_profile(1.0, 5e-6).unwrap()).with_thickness(1e-6);
        let v = meissner_validity(&src, Vec2::zeros(), &nb);
        assert!(matches!(v.validity, Validity::Invalid(ref r) if r[0] == "critical current exceeded"));
        let src = SheetSource::new(meissner_profile(1e-3, 5e-6).unwrap()).with_thickness(1e-6);
        let v = meissner_validity(&src, Vec2::zeros(), &nb);
        assert!(matches!(v.validity, Validity::Unresolved(_)));
        let cyl = CylinderSource {
            radius: 1e-5,
            current: 1e-3,
            state: WireState::Superconducting,
        };
        assert_eq!(meissner_validity(&cyl, Vec2::new(0.01, 0.0), &nb).validity, Validity::Valid);
        let v = meissner_validity(&cyl, Vec2::new(0.1, 0.0), &nb);
        assert!(matches!(v.validity, Validity::Invalid(ref r) if r[0] == "edge field exceeds Bc1"));
    }

    #[test]
    fn scan_rows_and_window() {
        let w = 5e-6;
        let src = Arc::new(SheetSource::new(meissner_profile(0.2, w).unwrap()));
        let scene = TrapScene::new(src, Vec2::zeros());
        let zs: Vec<f64> = [1.0, 10.0, 100.0].iter().map(|z| z * 1e-6).collect();
        let rows = scan_trap_parameters(&scene, &zs, None).unwrap();
        for r in &rows {
            let t = r.result.as_ref().unwrap();
            assert!((t.position.y - r.z_target).abs() < 1e-6 * w);
        }
        let (lo, hi) = trap_window(&rows, 1e-5, 0.15).unwrap();
        assert_eq!((lo, hi), (zs[0], zs[2]));
        assert!(scan_trap_parameters(&scene, &[2.0, 1.0], None).is_err());
    }
}
