//! Trap analysis for a thin superconducting strip in a horizontal bias.

use std::sync::Arc;

use scmag::geometry::Vec2;
use scmag::physics::tesla_per_m_to_gauss_per_cm;
use scmag::sheet::{field_unit, meissner_profile, normal_profile};
use scmag::trap::{find_trap, SheetSource, TrapScene};

fn main() -> scmag::Result<()> {
    let (i, w) = (1.0, 1e-3);
    let bias = Vec2::new(-2.5 * field_unit(i, w), 0.0);
    for (name, profile) in [("superconducting", meissner_profile(i, w)?), ("normal", normal_profile(i, w)?)] {
        let scene = TrapScene::new(Arc::new(SheetSource::new(profile)), bias).with_gravity(None)?;
        let t = find_trap(&scene)?;
        println!(
            "{name:>15}: z_t = {:.4} w, grad x/z = {:.3}/{:.3} G/cm, depth {:.2} uK ({})",
            t.position.y / w,
            tesla_per_m_to_gauss_per_cm(t.gradient_x),
            tesla_per_m_to_gauss_per_cm(t.gradient_z),
            t.depth * 1e6,
            t.limiting_direction.as_str()
        );
    }
    Ok(())
}
