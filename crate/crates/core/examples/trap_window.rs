//! Heights where a YBCO wire gives a deep and tight enough trap against gravity.

use std::sync::Arc;

use scmag::geometry::Vec2;
use scmag::physics::{lookup_material, tesla_per_m_to_gauss_per_cm};
use scmag::sheet::meissner_profile;
use scmag::trap::{scan_trap_parameters, trap_window, SheetSource, TrapScene};

fn main() -> scmag::Result<()> {
    let ybco = lookup_material("YBCO")?;
    let source = SheetSource::new(meissner_profile(0.2, 5e-6)?).with_thickness(300e-9);
    let scene = TrapScene::new(Arc::new(source), Vec2::zeros());
    let heights: Vec<f64> = (0..25).map(|k| 1e-7 * 10f64.powf(k as f64 / 6.0)).collect();
    let rows = scan_trap_parameters(&scene, &heights, Some(&ybco))?;
    for r in &rows {
        match &r.result {
            Ok(t) => println!(
                "z_t = {:9.3e} m  grad {:10.1} G/cm  depth {:8.1} uK",
                r.z_target,
                tesla_per_m_to_gauss_per_cm(t.gradient_z),
                t.depth * 1e6
            ),
            Err(e) => println!("z_t = {:9.3e} m  {e}", r.z_target),
        }
    }
    match trap_window(&rows, 10e-6, 0.153) {
        Some((lo, hi)) => println!("window: {lo:.2e} m .. {hi:.2e} m"),
        None => println!("no usable heights"),
    }
    Ok(())
}
