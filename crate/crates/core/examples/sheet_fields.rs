//! On-axis field of a thin strip: Meissner versus uniform current.

use scmag::physics::tesla_to_gauss;
use scmag::sheet::{field_from_profile, field_unit, meissner_profile, on_axis_meissner, on_axis_normal};

fn main() -> scmag::Result<()> {
    let (i, w) = (1.0, 1e-3);
    println!("field unit mu0 I/(2 pi^2 w) = {:.6} G", tesla_to_gauss(field_unit(i, w)));
    let profile = meissner_profile(i, w)?;
    println!("{:>8} {:>14} {:>14} {:>14}", "z/w", "Meissner [G]", "quadrature", "normal [G]");
    for z in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let zm = z * w;
        let numeric = field_from_profile(&profile, 0.0, zm)?.magnitude();
        println!(
            "{z:8.2} {:14.6} {:14.6} {:14.6}",
            tesla_to_gauss(on_axis_meissner(i, w, zm)),
            tesla_to_gauss(numeric),
            tesla_to_gauss(on_axis_normal(i, w, zm))
        );
    }
    Ok(())
}
