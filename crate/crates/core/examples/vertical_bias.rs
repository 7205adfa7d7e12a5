//! A vertical bias is screened by a superconducting strip: B(0, z) = B0 z/sqrt(z² + w²).

use scmag::sheet::screened_vertical_field;

fn main() {
    let (b0, w) = (1.0, 1.0);
    println!("{:>6} {:>10} {:>14}", "z/w", "B/B0 axis", "max |B|/B0 - 1");
    for z in [0.25, 0.5, 1.0, 1.5, 3.0] {
        let axis = screened_vertical_field(b0, w, 0.0, z).norm();
        let peak = (0..=4000)
            .map(|k| screened_vertical_field(b0, w, -4.0 + 8.0 * k as f64 / 4000.0, z).norm())
            .fold(0.0, f64::max);
        println!("{z:6.2} {axis:10.6} {:14.6}", peak - 1.0);
    }
}
