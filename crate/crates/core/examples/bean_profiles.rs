//! Critical-state current profiles and the remnant field after a current cycle.

use scmag::bean::BeanStripState;
use scmag::physics::tesla_to_gauss;
use scmag::sheet::field_from_profile;

fn main() -> scmag::Result<()> {
    let (w, d, jc) = (5e-6, 1e-6, 1e11);
    let strip = BeanStripState::new(w, d, jc)?;
    let ic = strip.critical_current();
    println!("Ic = {ic:.4} A");
    for ratio in [0.2, 0.5, 0.85, 1.0] {
        let b = strip.penetration_boundary(ratio * ic)?;
        let p = strip.virgin_profile(ratio * ic)?;
        let field = field_from_profile(&p, 0.0, 1e-3 * w)?.magnitude();
        println!(
            "I/Ic = {ratio:4.2}: flux front at |x| = {:.3} w, surface field {:.2} G",
            b / w,
            tesla_to_gauss(field)
        );
    }
    let peak = 0.85 * ic;
    for z in [0.1, 1.0, 3.0] {
        println!("remnant/peak at z = {z} w: {:.4}", strip.remnant_field_ratio(peak, z * w)?);
    }
    Ok(())
}
