//! Boundary-element solution for a strip of finite thickness, compared with the thin strip.

use scmag::bem::{solve, BemProblem};
use scmag::geometry::{mesh_rounded_rectangle, StripGeometry, Vec2};
use scmag::sheet::{field_unit, on_axis_meissner};

fn main() -> scmag::Result<()> {
    let (i, w) = (1.0, 1.0);
    let geom = StripGeometry::new(w, 0.08 * w, 0.031 * w)?;
    let mesh = mesh_rounded_rectangle(&geom, 420)?;
    let sol = solve(&BemProblem::new(mesh, Vec2::zeros(), i))?;
    println!("rcond = {:.3e}, enclosed current = {:.9} A", sol.rcond(), sol.enclosed_current());
    let unit = field_unit(i, w);
    println!("{:>6} {:>12} {:>12}", "z/w", "BEM", "thin");
    for z in [0.1, 0.25, 0.5, 1.0, 2.0] {
        let b = sol.evaluate_field(Vec2::new(0.0, z * w))?.norm();
        println!("{z:6.2} {:12.6} {:12.6}", b / unit, on_axis_meissner(i, w, z * w) / unit);
    }
    let k = sol.surface_current();
    let kmax = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!("peak sheet current {kmax:.3} A/m over {} panels", k.len());
    Ok(())
}
