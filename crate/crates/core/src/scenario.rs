//! Runs one configured scenario and writes its CSV files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use crate::bean::BeanStripState;
use crate::bem::{self, BemProblem};
use crate::config::{BiasSpec, ScenarioConfig, WireModel};
use crate::error::{Error, Result};
use crate::geometry::{mesh_rounded_rectangle, StripGeometry, Vec2};
use crate::physics::{tesla_per_m_to_gauss_per_cm, tesla_to_gauss, MaterialDb, KB, MU_B};
use crate::sheet::{field_from_profile, field_unit, meissner_profile, normal_profile};
use crate::table::{Cell, CsvTable};
use crate::trap::{
    find_trap, meissner_validity, required_bias, scan_trap_parameters, trap_window, BemSource, CylinderSource,
    FieldSource, SheetSource, TrapScene,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    FieldMap,
    Trap,
    TrapScan,
    BeanProfile,
    Remnant,
    Cylinder,
    Bem,
    Materials,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::FieldMap,
        Subcommand::Trap,
        Subcommand::TrapScan,
        Subcommand::BeanProfile,
        Subcommand::Remnant,
        Subcommand::Cylinder,
        Subcommand::Bem,
        Subcommand::Materials,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::FieldMap => "field-map",
            Subcommand::Trap => "trap",
            Subcommand::TrapScan => "trap-scan",
            Subcommand::BeanProfile => "bean-profile",
            Subcommand::Remnant => "remnant",
            Subcommand::Cylinder => "cylinder",
            Subcommand::Bem => "bem",
            Subcommand::Materials => "materials",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Process exit code for an error.
///
/// | code | meaning |
/// |------|---------|
/// | 0 | success |
/// | 2 | configuration or usage error |
/// | 3 | unit error |
/// | 4 | file I/O error |
/// | 5 | invalid physical input (geometry, currents, evaluation points) |
/// | 6 | numerical failure (quadrature, singular system, root finding) |
/// | 7 | no trap |
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::UnknownMaterial { .. } | Error::UnknownAtom(_) => 2,
        Error::Unit(_) => 3,
        Error::Io(_) => 4,
        Error::InvalidGeometry(_)
        | Error::TooCoarse { .. }
        | Error::InvalidArgument(_)
        | Error::ZeroMoment(_)
        | Error::OnSheet { .. }
        | Error::CurrentExceedsCritical { .. }
        | Error::NonMonotonicHistory
        | Error::OrderingViolation { .. }
        | Error::InteriorPoint { .. }
        | Error::TooCloseToSurface { .. }
        | Error::InsideConductor { .. } => 5,
        Error::QuadratureNonConvergence { .. } | Error::SingularSystem { .. } | Error::RootNotBracketed(_) => 6,
        Error::NoTrap(_) | Error::NoMinimum(_) | Error::UnboundedDirection(_) => 7,
    }
}

/// Files written and a short human-readable summary.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn usage(message: impl Into<String>) -> Error {
    Error::Config {
        line: 0,
        message: message.into(),
    }
}

fn require<'a, T>(value: &'a Option<T>, section: &str, cmd: Subcommand) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| usage(format!("`{}` needs a [{section}] section", cmd.name())))
}

fn require_model(cfg: &ScenarioConfig, models: &[WireModel], cmd: Subcommand) -> Result<()> {
    if models.contains(&cfg.wire.model) {
        return Ok(());
    }
    let names: Vec<&str> = models.iter().map(WireModel::as_str).collect();
    Err(usage(format!(
        "`{}` needs wire.model = {}, got `{}`",
        cmd.name(),
        names.join(" or "),
        cfg.wire.model.as_str()
    )))
}

fn bean_state(cfg: &ScenarioConfig) -> Result<BeanStripState> {
    let d = cfg.wire.thickness.ok_or_else(|| usage("the bean model needs wire.thickness"))?;
    let jc = cfg.wire.jc.ok_or_else(|| usage("the bean model needs a critical current density"))?;
    BeanStripState::new(cfg.wire.half_width, d, jc)
}

/// Field source for the configured wire (solving the boundary-element problem if needed).
pub fn build_source(cfg: &ScenarioConfig) -> Result<Arc<dyn FieldSource>> {
    let w = &cfg.wire;
    let with_thickness = |s: SheetSource| match w.thickness {
        Some(d) => s.with_thickness(d),
        None => s,
    };
    Ok(match w.model {
        WireModel::MeissnerThin => Arc::new(with_thickness(SheetSource::new(meissner_profile(w.current, w.half_width)?))),
        WireModel::NormalThin => Arc::new(with_thickness(SheetSource::new(normal_profile(w.current, w.half_width)?))),
        WireModel::Bean => {
            let state = bean_state(cfg)?;
            Arc::new(SheetSource::new(state.virgin_profile(w.current)?).with_thickness(state.thickness()))
        }
        WireModel::Cylinder => Arc::new(CylinderSource {
            radius: w.half_width,
            current: w.current,
            state: w.state,
        }),
        WireModel::Bem => Arc::new(BemSource::new(solve_bem(cfg)?)),
    })
}

fn solve_bem(cfg: &ScenarioConfig) -> Result<bem::BemSolution> {
    let w = &cfg.wire;
    let d = w.thickness.ok_or_else(|| usage("the bem model needs wire.thickness"))?;
    let geom = match w.corner_radius {
        Some(r) => StripGeometry::new(w.half_width, d, r)?,
        None => StripGeometry::with_default_corners(w.half_width, d)?,
    };
    let mesh = mesh_rounded_rectangle(&geom, w.panels)?;
    bem::solve(&BemProblem::new(mesh, Vec2::zeros(), w.current))
}

/// Trap scene with the configured bias resolved (automatic bias solved for).
pub fn build_scene(cfg: &ScenarioConfig, source: Arc<dyn FieldSource>) -> Result<TrapScene> {
    let scene = TrapScene::new(source, Vec2::zeros())
        .with_atom(cfg.atom.clone())
        .with_gravity(cfg.gravity)?;
    let bias = match cfg.bias {
        BiasSpec::Fixed(b) => b,
        BiasSpec::Auto { trap_height } => Vec2::new(-required_bias(&scene, trap_height)?, 0.0),
    };
    Ok(scene.with_bias(bias))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
}

fn normalisation(cfg: &ScenarioConfig) -> Result<Option<(f64, f64)>> {
    if !cfg.output.normalized {
        return Ok(None);
    }
    if cfg.wire.current == 0.0 {
        return Err(usage("normalized output needs a non-zero current"));
    }
    Ok(Some((cfg.wire.half_width, field_unit(cfg.wire.current, cfg.wire.half_width))))
}

/// |B| on a rectangular grid, x varying fastest. Points where the field is
/// undefined (on a sheet, inside or too close to a conductor) are written as NaN.
fn field_map_table(cfg: &ScenarioConfig, scene: &TrapScene) -> Result<CsvTable> {
    let grid = require(&cfg.grid, "grid", Subcommand::FieldMap)?;
    let xs = linspace(grid.x.0, grid.x.1, grid.x.2);
    let zs = linspace(grid.z.0, grid.z.1, grid.z.2);
    let points: Vec<Vec2> = zs.iter().flat_map(|&z| xs.iter().map(move |&x| Vec2::new(x, z))).collect();
    let fields: Vec<Result<Vec2>> = points.par_iter().map(|&p| scene.field(p)).collect();
    let norm = normalisation(cfg)?;
    let mut cols = vec![("x", "m"), ("z", "m"), ("Bx", "T"), ("Bz", "T"), ("Bmod", "T")];
    if norm.is_some() {
        cols.extend([("x_w", "w"), ("z_w", "w"), ("Bmod_unit", "mu0*I/(2*pi^2*w)")]);
    }
    let mut table = CsvTable::new(&cols);
    for (p, f) in points.iter().zip(fields) {
        let b = match f {
            Ok(b) => b,
            Err(e) if exit_code(&e) == 5 => Vec2::new(f64::NAN, f64::NAN),
            Err(e) => return Err(e),
        };
        let mut row: Vec<Cell> = vec![p.x.into(), p.y.into(), b.x.into(), b.y.into(), b.norm().into()];
        if let Some((w, unit)) = norm {
            row.extend([(p.x / w).into(), (p.y / w).into(), (b.norm() / unit).into()]);
        }
        table.push(row);
    }
    Ok(table)
}

struct Writer {
    dir: PathBuf,
    out: RunOutput,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            out: RunOutput::default(),
        })
    }

    fn write(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        let path = self.dir.join(name);
        table
            .write(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.out.files.push(path);
        Ok(())
    }

    fn say(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.out.summary, "{}", line.as_ref());
    }
}

/// Runs `cmd` for `cfg`, writing into `out_dir` (or the configured output directory).
pub fn run_scenario(cmd: Subcommand, cfg: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutput> {
    let dir = out_dir.map_or_else(|| cfg.output.dir.clone(), Path::to_path_buf);
    let mut w = Writer::new(&dir)?;
    match cmd {
        Subcommand::FieldMap => {
            let scene = build_scene(cfg, build_source(cfg)?)?;
            let table = field_map_table(cfg, &scene)?;
            w.say(format!("{} points, bias ({:e}, {:e}) T", table.rows.len(), scene.bias.x, scene.bias.y));
            w.write("field_map.csv", &table)?;
        }
        Subcommand::Trap => run_trap(cfg, &mut w)?,
        Subcommand::TrapScan => run_trap_scan(cfg, &mut w)?,
        Subcommand::BeanProfile => run_bean_profile(cfg, &mut w)?,
        Subcommand::Remnant => run_remnant(cfg, &mut w)?,
        Subcommand::Cylinder => run_cylinder(cfg, &mut w)?,
        Subcommand::Bem => run_bem(cfg, &mut w)?,
        Subcommand::Materials => run_materials(cfg, &mut w)?,
    }
    Ok(w.out)
}

fn run_trap(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    let scene = build_scene(cfg, build_source(cfg)?)?;
    let mut report = find_trap(&scene)?;
    if let Some(m) = &cfg.material {
        report.validity = Some(meissner_validity(scene.source.as_ref(), scene.bias, m).validity);
    }
    let height = report.position.y - scene.source.surface_level();
    let valid = report.validity.as_ref().map_or("unchecked", |v| v.as_str());
    let mut table = CsvTable::new(&[
        ("x_t", "m"),
        ("z_t", "m"),
        ("bias_x", "T"),
        ("bias_z", "T"),
        ("B_min", "T"),
        ("grad_x", "T/m"),
        ("grad_z", "T/m"),
        ("depth", "K"),
        ("limiting_direction", "-"),
        ("valid", "-"),
    ]);
    table.push(vec![
        report.position.x.into(),
        height.into(),
        scene.bias.x.into(),
        scene.bias.y.into(),
        report.field_at_min.into(),
        report.gradient_x.into(),
        report.gradient_z.into(),
        report.depth.into(),
        report.limiting_direction.as_str().into(),
        valid.into(),
    ]);
    w.say(format!(
        "trap at z_t = {:.4e} m ({:.4} w), grad_z = {:.4} G/cm, depth = {:.4} uK ({}), valid: {valid}",
        height,
        height / scene.source.length_scale(),
        tesla_per_m_to_gauss_per_cm(report.gradient_z),
        report.depth / 1e-6,
        report.limiting_direction.as_str(),
    ));
    w.write("trap.csv", &table)
}

fn run_trap_scan(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    let scan = require(&cfg.scan, "scan", Subcommand::TrapScan)?;
    let scene = build_scene(cfg, build_source(cfg)?)?;
    let heights = logspace(scan.z_min, scan.z_max, scan.n);
    let rows = scan_trap_parameters(&scene, &heights, cfg.material.as_ref())?;
    let mut table = CsvTable::new(&[
        ("z_t", "m"),
        ("bias_G", "G"),
        ("grad_Gpercm", "G/cm"),
        ("depth_uK", "uK"),
        ("limiting_direction", "-"),
        ("valid", "-"),
    ]);
    let mut failed = 0;
    for r in &rows {
        match &r.result {
            Ok(t) => table.push(vec![
                r.z_target.into(),
                tesla_to_gauss(-t.bias_used.x).into(),
                tesla_per_m_to_gauss_per_cm(t.gradient_z).into(),
                (t.depth / 1e-6).into(),
                t.limiting_direction.as_str().into(),
                t.validity.as_ref().map_or("unchecked", |v| v.as_str()).into(),
            ]),
            Err(e) => {
                failed += 1;
                table.push(vec![
                    r.z_target.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    "none".into(),
                    format!("error: {e}").into(),
                ]);
            }
        }
    }
    match trap_window(&rows, scan.min_depth, scan.min_gradient) {
        Some((lo, hi)) => w.say(format!("trap window {lo:.4e} m .. {hi:.4e} m")),
        None => w.say("no height satisfies the depth and gradient limits"),
    }
    if failed > 0 {
        w.say(format!("{failed} of {} heights have no trap", rows.len()));
    }
    w.write("trap_scan.csv", &table)
}

fn run_bean_profile(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    require_model(cfg, &[WireModel::Bean], Subcommand::BeanProfile)?;
    let state = bean_state(cfg)?;
    let (half, ic, kc) = (state.half_width(), state.critical_current(), state.sheet_critical_current());
    let mut table = CsvTable::new(&[("I_Ic", "1"), ("x_w", "w"), ("J_Jc", "1")]);
    let xs = linspace(-1.0, 1.0, cfg.bean.points);
    for &ratio in &cfg.bean.ratios {
        let profile = state.virgin_profile(ratio * ic)?;
        for &x in &xs {
            table.push(vec![ratio.into(), x.into(), (profile.evaluate(x * half) / kc).into()]);
        }
    }
    w.say(format!("Ic = {ic:.6e} A, {} profiles", cfg.bean.ratios.len()));
    w.write("bean_profile.csv", &table)
}

fn run_remnant(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    require_model(cfg, &[WireModel::Bean], Subcommand::Remnant)?;
    let state = bean_state(cfg)?;
    let half = state.half_width();
    let kc = state.sheet_critical_current();
    let peak = cfg.bean.peak_ratio * state.critical_current();
    let at_peak = state.virgin_profile(peak)?;
    let remnant = state.cycle_profile(peak, 0.0)?;

    let mut profile = CsvTable::new(&[("x_w", "w"), ("J_Jc_peak", "1"), ("J_Jc_remnant", "1")]);
    for x in linspace(-1.0, 1.0, cfg.bean.points) {
        profile.push(vec![
            x.into(),
            (at_peak.evaluate(x * half) / kc).into(),
            (remnant.evaluate(x * half) / kc).into(),
        ]);
    }

    let rows: Vec<Result<(f64, f64, f64)>> = cfg
        .bean
        .heights
        .par_iter()
        .map(|&z| {
            let bp = field_from_profile(&at_peak, 0.0, z)?.magnitude();
            let br = field_from_profile(&remnant, 0.0, z)?.magnitude();
            Ok((z, bp, br))
        })
        .collect();
    let mut field = CsvTable::new(&[
        ("z", "m"),
        ("z_w", "w"),
        ("B_peak", "T"),
        ("B_remnant", "T"),
        ("ratio", "1"),
        ("ratio_z2", "w^2"),
    ]);
    for r in rows {
        let (z, bp, br) = r?;
        let ratio = br / bp;
        let zw = z / half;
        field.push(vec![z.into(), zw.into(), bp.into(), br.into(), ratio.into(), (ratio * zw * zw).into()]);
    }
    w.say(format!("cycle 0 -> {:.3} Ic -> 0", cfg.bean.peak_ratio));
    w.write("remnant_profile.csv", &profile)?;
    w.write("remnant_field.csv", &field)
}

fn run_cylinder(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    require_model(cfg, &[WireModel::Cylinder], Subcommand::Cylinder)?;
    let polar = require(&cfg.polar, "polar", Subcommand::Cylinder)?;
    let scene = build_scene(cfg, build_source(cfg)?)?;
    let radius = cfg.wire.half_width;
    let centre = Vec2::new(0.0, -radius);
    let rs = linspace(polar.r.0, polar.r.1, polar.r.2);
    let thetas: Vec<f64> = (0..polar.ntheta)
        .map(|k| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / polar.ntheta as f64)
        .collect();
    let mut table = CsvTable::new(&[("r", "m"), ("theta", "rad"), ("Br", "T"), ("Btheta", "T"), ("Bmod", "T")]);
    for &r in &rs {
        for &th in &thetas {
            let (s, c) = th.sin_cos();
            let rhat = Vec2::new(s, c);
            let that = Vec2::new(c, -s);
            let b = match scene.field(centre + r * rhat) {
                Ok(b) => b,
                Err(e) if exit_code(&e) == 5 => Vec2::new(f64::NAN, f64::NAN),
                Err(e) => return Err(e),
            };
            table.push(vec![r.into(), th.into(), b.dot(&rhat).into(), b.dot(&that).into(), b.norm().into()]);
        }
    }
    w.say(format!("{} polar points around R = {radius:.4e} m", table.rows.len()));
    match find_trap(&scene) {
        Ok(t) => w.say(format!("trap at z_t = {:.4e} m", t.position.y)),
        Err(e) => w.say(format!("no trap: {e}")),
    }
    w.write("cylinder.csv", &table)
}

fn run_bem(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    require_model(cfg, &[WireModel::Bem], Subcommand::Bem)?;
    let solution = solve_bem(cfg)?;
    let source: Arc<dyn FieldSource> = Arc::new(BemSource::new(solution.clone()));
    let scene = build_scene(cfg, source)?;
    let loaded = solution.with_loads(scene.bias, cfg.wire.current);

    let mut surface = CsvTable::new(&[
        ("panel", "-"),
        ("arclength", "m"),
        ("psi", "T*m"),
        ("dAdn", "T"),
        ("sheet_current", "A/m"),
    ]);
    for (i, s, psi, dadn, k) in bem::surface_table(&loaded) {
        surface.push(vec![(i as f64).into(), s.into(), psi.into(), dadn.into(), k.into()]);
    }
    w.say(format!(
        "{} panels, rcond = {:.3e}, enclosed current = {:.6e} A",
        loaded.mesh().len(),
        loaded.rcond(),
        loaded.enclosed_current()
    ));
    w.write("bem_surface.csv", &surface)?;
    if cfg.grid.is_some() {
        let table = field_map_table(cfg, &scene)?;
        w.write("bem_field_map.csv", &table)?;
    }
    Ok(())
}

fn run_materials(cfg: &ScenarioConfig, w: &mut Writer) -> Result<()> {
    write_materials(&cfg.materials, w)
}

fn write_materials(db: &MaterialDb, w: &mut Writer) -> Result<()> {
    let mut table = CsvTable::new(&[
        ("name", "-"),
        ("Tc", "K"),
        ("Bc1", "T"),
        ("Bc1_c", "T"),
        ("Bc2", "T"),
        ("jc", "A/m2"),
        ("depth_limit", "K"),
    ]);
    for m in db.iter() {
        table.push(vec![
            m.name.as_str().into(),
            m.tc.into(),
            m.bc1.into(),
            m.bc1_c.unwrap_or(f64::NAN).into(),
            m.bc2.into(),
            m.jc.into(),
            // trap depth cannot exceed μ_B·Bc1 for a Meissner-state wire
            (MU_B * m.bc1 / KB).into(),
        ]);
    }
    w.say(format!("{} materials", table.rows.len()));
    w.write("materials.csv", &table)
}

/// Lists the material table without a scenario file.
pub fn run_materials_default(out_dir: &Path) -> Result<RunOutput> {
    let mut w = Writer::new(out_dir)?;
    write_materials(&MaterialDb::builtin(), &mut w)?;
    Ok(w.out)
}
