//! Round wire: trap height and required bias, superconducting versus normal.

use scmag::cylinder::{required_bias_cylinder, trap_height_superconducting, WireState};
use scmag::physics::tesla_to_gauss;

fn main() -> scmag::Result<()> {
    let (i, r) = (1.0, 10e-6);
    println!("{:>6} {:>12} {:>12} {:>10}", "z_t/R", "B_sc [G]", "B_n [G]", "reduction");
    for z in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let sc = required_bias_cylinder(z * r, i, r, WireState::Superconducting)?;
        let n = required_bias_cylinder(z * r, i, r, WireState::Normal)?;
        assert!((trap_height_superconducting(i, sc, r)? - z * r).abs() < 1e-9 * r);
        println!("{z:6.2} {:12.3} {:12.3} {:9.1}%", tesla_to_gauss(sc), tesla_to_gauss(n), 100.0 * (1.0 - sc / n));
    }
    Ok(())
}
