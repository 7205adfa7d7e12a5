//! Scenario configuration: TOML sections with unit-carrying values.
//!
//! ```toml
//! [wire]
//! model = "meissner-thin"   # meissner-thin | normal-thin | bean | cylinder | bem
//! half_width = "5 um"
//! current = "200 mA"
//!
//! [bias]
//! x = "-2.5 unit"           # or: trap_height = "10 um" for an automatic bias
//! ```
//!
//! Quantities are numbers in SI units or strings `"<number> <unit>"`. Lengths
//! may use `w` (the wire half-width or radius); fields may use `unit`, the
//! strip normalisation μ0 I/(2π² w).

use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::cylinder::WireState;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::physics::{gravity_gradient_threshold, AtomSpecies, Material, MaterialDb, GAUSS, MU0};

/// Converts a TOML error into a config error carrying a 1-based line number.
pub fn toml_error(text: &str, e: &toml::de::Error) -> Error {
    let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(0);
    Error::Config {
        line,
        message: e.message().to_string(),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Current,
    Field,
    Gradient,
    Temperature,
    CurrentDensity,
}

impl Dimension {
    fn name(&self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Current => "current",
            Dimension::Field => "field",
            Dimension::Gradient => "field gradient",
            Dimension::Temperature => "temperature",
            Dimension::CurrentDensity => "current density",
        }
    }
}

/// Scale factors that depend on the scenario: the half-width behind `w` and
/// the field unit behind `unit`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitContext {
    pub length: Option<f64>,
    pub field: Option<f64>,
}

/// Parses `"<number> <unit>"` (or a bare number, taken as SI) into SI.
pub fn parse_quantity(text: &str, dim: Dimension, ctx: &UnitContext) -> Result<f64> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-' || ((c == 'e' || c == 'E') && i > 0 && next_is_numeric(t, i)))
        })
        .map_or(t.len(), |(i, _)| i);
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Unit(format!("`{text}` does not start with a number")))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    let scale = unit_scale(unit, dim, ctx)?;
    Ok(value * scale)
}

fn next_is_numeric(t: &str, i: usize) -> bool {
    t[i + 1..].chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+')
}

fn unit_scale(unit: &str, dim: Dimension, ctx: &UnitContext) -> Result<f64> {
    let micro = |u: &str| u.replace(['µ', 'μ'], "u");
    let u = micro(unit);
    let s = match (dim, u.as_str()) {
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "mm") => 1e-3,
        (Dimension::Length, "um") => 1e-6,
        (Dimension::Length, "nm") => 1e-9,
        (Dimension::Length, "w") => ctx
            .length
            .ok_or_else(|| Error::Unit("`w` needs the wire half-width or radius".into()))?,
        (Dimension::Current, "A") => 1.0,
        (Dimension::Current, "mA") => 1e-3,
        (Dimension::Current, "uA") => 1e-6,
        (Dimension::Current, "kA") => 1e3,
        (Dimension::Field, "T") => 1.0,
        (Dimension::Field, "mT") => 1e-3,
        (Dimension::Field, "uT") => 1e-6,
        (Dimension::Field, "G") => GAUSS,
        (Dimension::Field, "mG") => 1e-3 * GAUSS,
        (Dimension::Field, "unit") => ctx
            .field
            .ok_or_else(|| Error::Unit("`unit` needs the wire current and half-width".into()))?,
        (Dimension::Gradient, "T/m") => 1.0,
        (Dimension::Gradient, "G/cm") => GAUSS / 1e-2,
        (Dimension::Temperature, "K") => 1.0,
        (Dimension::Temperature, "mK") => 1e-3,
        (Dimension::Temperature, "uK") => 1e-6,
        (Dimension::Temperature, "nK") => 1e-9,
        (Dimension::CurrentDensity, "A/m2" | "A/m^2") => 1.0,
        (Dimension::CurrentDensity, "A/cm2" | "A/cm^2") => 1e4,
        _ => {
            return Err(Error::Unit(format!("`{unit}` is not a {} unit", dim.name())));
        }
    };
    Ok(s)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawQuantity {
    Number(f64),
    Text(String),
}

type Q = Spanned<RawQuantity>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    wire: RawWire,
    bias: Option<RawBias>,
    material: Option<RawMaterial>,
    atom: Option<RawAtom>,
    grid: Option<RawGrid>,
    polar: Option<RawPolar>,
    bean: Option<RawBean>,
    scan: Option<RawScan>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWire {
    model: Spanned<String>,
    current: Option<Q>,
    half_width: Option<Q>,
    thickness: Option<Q>,
    corner_radius: Option<Q>,
    radius: Option<Q>,
    panels: Option<Spanned<i64>>,
    state: Option<Spanned<String>>,
    jc: Option<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBias {
    x: Option<Q>,
    z: Option<Q>,
    trap_height: Option<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    name: Option<Spanned<String>>,
    file: Option<String>,
    jc: Option<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    name: Option<Spanned<String>>,
    gravity: Option<bool>,
    gravity_direction: Option<Spanned<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: Q,
    x_max: Q,
    nx: Spanned<i64>,
    z_min: Q,
    z_max: Q,
    nz: Spanned<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolar {
    r_min: Q,
    r_max: Q,
    nr: Spanned<i64>,
    ntheta: Spanned<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBean {
    ratios: Option<Vec<f64>>,
    points: Option<Spanned<i64>>,
    peak_ratio: Option<f64>,
    heights: Option<Vec<Q>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    z_min: Q,
    z_max: Q,
    n: Spanned<i64>,
    min_depth: Option<Q>,
    min_gradient: Option<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
    normalized: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireModel {
    MeissnerThin,
    NormalThin,
    Bean,
    Cylinder,
    Bem,
}

impl WireModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            WireModel::MeissnerThin => "meissner-thin",
            WireModel::NormalThin => "normal-thin",
            WireModel::Bean => "bean",
            WireModel::Cylinder => "cylinder",
            WireModel::Bem => "bem",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WireConfig {
    pub model: WireModel,
    pub current: f64,
    /// Half-width for strips, radius for cylinders.
    pub half_width: f64,
    pub thickness: Option<f64>,
    pub corner_radius: Option<f64>,
    pub panels: usize,
    pub state: WireState,
    /// Critical current density (A/m²) from the material or an override.
    pub jc: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BiasSpec {
    Fixed(Vec2),
    /// Choose the bias that places the trap at this height.
    Auto { trap_height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x: (f64, f64, usize),
    pub z: (f64, f64, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    pub r: (f64, f64, usize),
    pub ntheta: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeanConfig {
    pub ratios: Vec<f64>,
    pub points: usize,
    pub peak_ratio: f64,
    pub heights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub n: usize,
    pub min_depth: f64,
    pub min_gradient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub normalized: bool,
}

/// Validated scenario with every quantity in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub wire: WireConfig,
    pub bias: BiasSpec,
    pub material: Option<Material>,
    /// Built-in materials plus any loaded from `material.file`.
    pub materials: MaterialDb,
    pub atom: AtomSpecies,
    pub gravity: Option<Vec2>,
    pub grid: Option<Grid>,
    pub polar: Option<PolarGrid>,
    pub bean: BeanConfig,
    pub scan: Option<ScanConfig>,
    pub output: OutputConfig,
}

struct Ctx<'a> {
    text: &'a str,
    units: UnitContext,
}

impl Ctx<'_> {
    fn line(&self, span: std::ops::Range<usize>) -> usize {
        line_of(self.text, span.start)
    }

    fn err(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Error {
        Error::Config {
            line: self.line(span),
            message: message.into(),
        }
    }

    fn quantity(&self, q: &Q, dim: Dimension) -> Result<f64> {
        let v = match q.get_ref() {
            RawQuantity::Number(v) => Ok(*v),
            RawQuantity::Text(s) => parse_quantity(s, dim, &self.units),
        };
        v.map_err(|e| match e {
            Error::Unit(m) => Error::Unit(format!("line {}: {m}", self.line(q.span()))),
            other => other,
        })
    }

    fn opt(&self, q: &Option<Q>, dim: Dimension) -> Result<Option<f64>> {
        q.as_ref().map(|q| self.quantity(q, dim)).transpose()
    }

    fn count(&self, v: &Spanned<i64>, min: i64, what: &str) -> Result<usize> {
        let n = *v.get_ref();
        if n < min {
            return Err(self.err(v.span(), format!("{what} must be at least {min}, got {n}")));
        }
        Ok(n as usize)
    }

    fn positive(&self, q: &Q, value: f64, what: &str) -> Result<f64> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(self.err(q.span(), format!("{what} must be positive")));
        }
        Ok(value)
    }
}

/// Parses and validates a scenario. `base` resolves relative file paths.
pub fn parse_config_in(text: &str, base: Option<&Path>) -> Result<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| toml_error(text, &e))?;
    let mut ctx = Ctx {
        text,
        units: UnitContext::default(),
    };

    let model_name = raw.wire.model.get_ref().as_str();
    let model = match model_name {
        "meissner-thin" => WireModel::MeissnerThin,
        "normal-thin" => WireModel::NormalThin,
        "bean" => WireModel::Bean,
        "cylinder" => WireModel::Cylinder,
        "bem" => WireModel::Bem,
        other => {
            return Err(ctx.err(
                raw.wire.model.span(),
                format!("unknown model `{other}` (expected meissner-thin, normal-thin, bean, cylinder or bem)"),
            ))
        }
    };

    // lengths first: `w` inside other quantities refers to them
    let w = &raw.wire;
    let size_key = if model == WireModel::Cylinder { &w.radius } else { &w.half_width };
    let size_name = if model == WireModel::Cylinder { "radius" } else { "half_width" };
    let misplaced = if model == WireModel::Cylinder { &w.half_width } else { &w.radius };
    if let Some(q) = misplaced {
        let key = if model == WireModel::Cylinder { "half_width" } else { "radius" };
        return Err(ctx.err(q.span(), format!("`{key}` does not apply to model `{model_name}`")));
    }
    let size_q = size_key
        .as_ref()
        .ok_or_else(|| ctx.err(raw.wire.model.span(), format!("model `{model_name}` needs wire.{size_name}")))?;
    let size = ctx.quantity(size_q, Dimension::Length)?;
    let size = ctx.positive(size_q, size, size_name)?;
    ctx.units.length = Some(size);

    let current = match &w.current {
        Some(q) => ctx.quantity(q, Dimension::Current)?,
        None => return Err(ctx.err(raw.wire.model.span(), "wire.current is required")),
    };
    if current < 0.0 {
        return Err(ctx.err(w.current.as_ref().unwrap().span(), "current must be non-negative"));
    }
    ctx.units.field = Some(MU0 * current / (2.0 * std::f64::consts::PI.powi(2) * size));

    let thickness = ctx.opt(&w.thickness, Dimension::Length)?;
    if let (Some(t), Some(q)) = (thickness, &w.thickness) {
        ctx.positive(q, t, "thickness")?;
    }
    let corner_radius = match &w.corner_radius {
        Some(q) if matches!(q.get_ref(), RawQuantity::Text(s) if s.trim() == "auto") => None,
        other => ctx.opt(other, Dimension::Length)?,
    };
    let panels = match &w.panels {
        Some(p) => ctx.count(p, 16, "panels")?,
        None => 420,
    };
    let state = match &w.state {
        None => WireState::Superconducting,
        Some(s) => match s.get_ref().as_str() {
            "superconducting" => WireState::Superconducting,
            "normal" => WireState::Normal,
            other => return Err(ctx.err(s.span(), format!("unknown state `{other}` (superconducting or normal)"))),
        },
    };
    if matches!(model, WireModel::Bean | WireModel::Bem) && thickness.is_none() {
        return Err(ctx.err(raw.wire.model.span(), format!("model `{model_name}` needs wire.thickness")));
    }

    // materials
    let mut db = MaterialDb::builtin();
    let mut material = None;
    let mut jc = ctx.opt(&w.jc, Dimension::CurrentDensity)?;
    if let Some(m) = &raw.material {
        if let Some(file) = &m.file {
            let path = base.map_or_else(|| PathBuf::from(file), |b| b.join(file));
            db.load_file(&path)?;
        }
        if let Some(name) = &m.name {
            let mut mat = db.lookup(name.get_ref())?;
            if let Some(j) = ctx.opt(&m.jc, Dimension::CurrentDensity)? {
                mat = mat.with_jc(j)?;
            }
            jc = jc.or(Some(mat.jc));
            material = Some(mat);
        } else if let Some(q) = &m.jc {
            jc = jc.or(Some(ctx.quantity(q, Dimension::CurrentDensity)?));
        }
    }
    if model == WireModel::Bean && jc.is_none() {
        return Err(ctx.err(raw.wire.model.span(), "model `bean` needs a critical current density (wire.jc or [material])"));
    }

    let bias = match &raw.bias {
        None => BiasSpec::Fixed(Vec2::zeros()),
        Some(b) => match (&b.trap_height, &b.x, &b.z) {
            (Some(h), None, None) => {
                let v = ctx.quantity(h, Dimension::Length)?;
                BiasSpec::Auto {
                    trap_height: ctx.positive(h, v, "trap_height")?,
                }
            }
            (Some(h), _, _) => {
                return Err(ctx.err(h.span(), "bias.trap_height conflicts with explicit bias components"));
            }
            (None, x, z) => BiasSpec::Fixed(Vec2::new(
                ctx.opt(x, Dimension::Field)?.unwrap_or(0.0),
                ctx.opt(z, Dimension::Field)?.unwrap_or(0.0),
            )),
        },
    };

    let mut atom = AtomSpecies::rb87();
    let mut gravity = Some(Vec2::new(0.0, 1.0));
    if let Some(a) = &raw.atom {
        if let Some(n) = &a.name {
            atom = AtomSpecies::by_name(n.get_ref())?;
        }
        if let Some(d) = &a.gravity_direction {
            let v = d.get_ref();
            if v.len() != 2 {
                return Err(ctx.err(d.span(), "gravity_direction needs two components [gx, gz]"));
            }
            let g = Vec2::new(v[0], v[1]);
            if !(g.norm() > 0.0) {
                return Err(ctx.err(d.span(), "gravity_direction must be non-zero"));
            }
            gravity = Some(g.normalize());
        }
        if a.gravity == Some(false) {
            gravity = None;
        }
    }

    let grid = match &raw.grid {
        None => None,
        Some(g) => {
            let x = (
                ctx.quantity(&g.x_min, Dimension::Length)?,
                ctx.quantity(&g.x_max, Dimension::Length)?,
                ctx.count(&g.nx, 2, "nx")?,
            );
            let z = (
                ctx.quantity(&g.z_min, Dimension::Length)?,
                ctx.quantity(&g.z_max, Dimension::Length)?,
                ctx.count(&g.nz, 2, "nz")?,
            );
            if !(x.1 > x.0) {
                return Err(ctx.err(g.x_max.span(), "x_max must exceed x_min"));
            }
            if !(z.1 > z.0) {
                return Err(ctx.err(g.z_max.span(), "z_max must exceed z_min"));
            }
            Some(Grid { x, z })
        }
    };

    let polar = match &raw.polar {
        None => None,
        Some(p) => {
            let r = (
                ctx.quantity(&p.r_min, Dimension::Length)?,
                ctx.quantity(&p.r_max, Dimension::Length)?,
                ctx.count(&p.nr, 2, "nr")?,
            );
            if !(r.1 > r.0) {
                return Err(ctx.err(p.r_max.span(), "r_max must exceed r_min"));
            }
            Some(PolarGrid {
                r,
                ntheta: ctx.count(&p.ntheta, 2, "ntheta")?,
            })
        }
    };

    let mut bean = BeanConfig {
        ratios: vec![0.2, 0.5, 0.85, 0.95],
        points: 201,
        peak_ratio: 0.85,
        heights: [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0].iter().map(|h| h * size).collect(),
    };
    if let Some(b) = &raw.bean {
        if let Some(r) = &b.ratios {
            if r.is_empty() || r.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Config {
                    line: 0,
                    message: "bean.ratios must be non-empty fractions of Ic in [0, 1]".into(),
                });
            }
            bean.ratios = r.clone();
        }
        if let Some(p) = &b.points {
            bean.points = ctx.count(p, 2, "bean.points")?;
        }
        if let Some(p) = b.peak_ratio {
            if !(0.0..=1.0).contains(&p) || p == 0.0 {
                return Err(Error::Config {
                    line: 0,
                    message: "bean.peak_ratio must lie in (0, 1]".into(),
                });
            }
            bean.peak_ratio = p;
        }
        if let Some(h) = &b.heights {
            let mut hs = Vec::with_capacity(h.len());
            for q in h {
                let v = ctx.quantity(q, Dimension::Length)?;
                hs.push(ctx.positive(q, v, "bean height")?);
            }
            bean.heights = hs;
        }
    }

    let scan = match &raw.scan {
        None => None,
        Some(s) => {
            let z_min = ctx.quantity(&s.z_min, Dimension::Length)?;
            let z_min = ctx.positive(&s.z_min, z_min, "z_min")?;
            let z_max = ctx.quantity(&s.z_max, Dimension::Length)?;
            if !(z_max > z_min) {
                return Err(ctx.err(s.z_max.span(), "z_max must exceed z_min"));
            }
            Some(ScanConfig {
                z_min,
                z_max,
                n: ctx.count(&s.n, 2, "scan.n")?,
                min_depth: ctx.opt(&s.min_depth, Dimension::Temperature)?.unwrap_or(10e-6),
                min_gradient: match ctx.opt(&s.min_gradient, Dimension::Gradient)? {
                    Some(g) => g,
                    None => gravity_gradient_threshold(&atom)?,
                },
            })
        }
    };

    let output = OutputConfig {
        dir: raw
            .output
            .as_ref()
            .and_then(|o| o.dir.clone())
            .map_or_else(|| PathBuf::from("."), PathBuf::from),
        normalized: raw.output.as_ref().and_then(|o| o.normalized).unwrap_or(false),
    };

    Ok(ScenarioConfig {
        wire: WireConfig {
            model,
            current,
            half_width: size,
            thickness,
            corner_radius,
            panels,
            state,
            jc,
        },
        bias,
        material,
        materials: db,
        atom,
        gravity,
        grid,
        polar,
        bean,
        scan,
        output,
    })
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_in(text, None)
}

/// Reads and parses a config file; relative paths inside resolve against its directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_in(&text, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const MINIMAL: &str = "[wire]\nmodel = \"meissner-thin\"\nhalf_width = \"1 mm\"\ncurrent = \"1 A\"\n";

    #[test]
    fn minimal_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.wire.model, WireModel::MeissnerThin);
        assert_eq!(c.wire.half_width, 1e-3);
        assert_eq!(c.wire.current, 1.0);
        assert_eq!(c.bias, BiasSpec::Fixed(Vec2::zeros()));
        assert_eq!(c.atom.name, "Rb87");
        assert_eq!(c.gravity, Some(Vec2::new(0.0, 1.0)));
        assert_eq!(c.output.dir, PathBuf::from("."));
        assert_eq!(c.bean.ratios, vec![0.2, 0.5, 0.85, 0.95]);
    }

    #[test]
    fn normalised_bias_unit() {
        let c = parse_config(&format!("{MINIMAL}[bias]\nx = \"-2.5 unit\"\n")).unwrap();
        let unit = MU0 / (2.0 * PI * PI * 1e-3);
        match c.bias {
            BiasSpec::Fixed(b) => assert!((b.x + 2.5 * unit).abs() < 1e-18),
            _ => panic!(),
        }
    }

    #[test]
    fn quantities() {
        let ctx = UnitContext {
            length: Some(5e-6),
            field: None,
        };
        let q = |s: &str, d| parse_quantity(s, d, &ctx).unwrap();
        assert_eq!(q("200 mA", Dimension::Current), 0.2);
        assert!((q("15.3 G/cm", Dimension::Gradient) - 0.153).abs() < 1e-15);
        assert!((q("10 uK", Dimension::Temperature) - 1e-5).abs() < 1e-20);
        assert_eq!(q("10 µK", Dimension::Temperature), q("10 uK", Dimension::Temperature));
        assert_eq!(q("0.5 w", Dimension::Length), 2.5e-6);
        assert_eq!(q("3e-7", Dimension::Length), 3e-7);
        assert_eq!(q("7.2e11 A/m2", Dimension::CurrentDensity), 7.2e11);
        assert!(matches!(parse_quantity("2 unit", Dimension::Field, &ctx), Err(Error::Unit(_))));
        assert!(matches!(parse_quantity("3 kg", Dimension::Length, &ctx), Err(Error::Unit(_))));
        assert!(matches!(parse_quantity("mA", Dimension::Current, &ctx), Err(Error::Unit(_))));
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = format!("{MINIMAL}halfwidth = 3\n");
        match parse_config(&text) {
            Err(Error::Config { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("halfwidth"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_model_is_rejected() {
        let text = format!("{MINIMAL}model = \"bem\"\n");
        assert!(matches!(parse_config(&text), Err(Error::Config { line: 5, .. })));
    }

    #[test]
    fn unit_error_carries_line() {
        let text = "[wire]\nmodel = \"meissner-thin\"\nhalf_width = \"1 parsec\"\ncurrent = 1\n";
        match parse_config(text) {
            Err(Error::Unit(m)) => assert!(m.starts_with("line 3"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn model_requirements() {
        let bem = "[wire]\nmodel = \"bem\"\nhalf_width = 1\ncurrent = 1\n";
        assert!(parse_config(bem).is_err());
        let bean = "[wire]\nmodel = \"bean\"\nhalf_width = \"5 um\"\nthickness = \"1 um\"\ncurrent = 0\n";
        assert!(parse_config(bean).is_err());
        let bean = format!("{bean}[material]\nname = \"YBCO\"\n");
        let c = parse_config(&bean).unwrap();
        assert_eq!(c.wire.jc, Some(7.2e11));
        let cyl = "[wire]\nmodel = \"cylinder\"\nradius = \"10 um\"\ncurrent = 1\nstate = \"normal\"\n";
        assert_eq!(parse_config(cyl).unwrap().wire.state, WireState::Normal);
        let wrong = "[wire]\nmodel = \"cylinder\"\nhalf_width = 1\nradius = 1\ncurrent = 1\n";
        assert!(parse_config(wrong).is_err());
        let unknown = "[wire]\nmodel = \"superthin\"\nhalf_width = 1\ncurrent = 1\n";
        assert!(matches!(parse_config(unknown), Err(Error::Config { line: 2, .. })));
    }

    #[test]
    fn grid_and_auto_bias() {
        let text = format!(
            "{MINIMAL}[bias]\ntrap_height = \"0.76 w\"\n[grid]\nx_min = \"-2 w\"\nx_max = \"2 w\"\nnx = 5\nz_min = \"0.1 w\"\nz_max = \"2 w\"\nnz = 1\n"
        );
        assert!(matches!(parse_config(&text), Err(Error::Config { line: 13, .. })));
        let ok = text.replace("nz = 1", "nz = 3");
        let c = parse_config(&ok).unwrap();
        assert_eq!(c.bias, BiasSpec::Auto { trap_height: 0.76e-3 });
        assert_eq!(c.grid.unwrap().x, (-2e-3, 2e-3, 5));
        let conflict = format!("{MINIMAL}[bias]\nx = 1\ntrap_height = 1\n");
        assert!(parse_config(&conflict).is_err());
    }

    #[test]
    fn scan_defaults_follow_atom() {
        let text = format!("{MINIMAL}[scan]\nz_min = \"1 um\"\nz_max = \"1 mm\"\nn = 10\n");
        let s = parse_config(&text).unwrap().scan.unwrap();
        assert_eq!(s.min_depth, 1e-5);
        assert!((s.min_gradient - 0.1526).abs() < 1e-3);
    }
}
