//! Cavity eigenfrequencies of a slab filled with a layered, partly dispersive
//! dielectric, and the thickness-weighted G factor at each root.

use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::modes::{solve_dispersion, Geometry, ModeIndex};
use purcell2d::units::{rad_s_to_mev, um_to_cm};

fn main() -> purcell2d::Result<()> {
    let w0 = 5e14;
    let stack = DielectricStack::from_thicknesses(&[
        (um_to_cm(0.04), DispersionModel::constant(12.0)),
        (um_to_cm(0.06), DispersionModel::lorentz(10.0, 3e14, w0)),
        (um_to_cm(0.04), DispersionModel::constant(12.0)),
    ])?;
    let geom = Geometry::for_stack(um_to_cm(2.0), um_to_cm(2.0), &stack)?;
    println!("{:>3} {:>14} {:>10} {:>12} {:>8}", "N", "omega (rad/s)", "hw (meV)", "G (cm)", "eps_bar");
    for n in 1..=4 {
        // the bracket must sit below the Lorentz pole
        let sol = solve_dispersion(&stack, &geom, ModeIndex::cavity(n)?, Some((1e12, 0.99 * w0)))?;
        println!(
            "{n:>3} {:>14.6e} {:>10.3} {:>12.5e} {:>8.4}",
            sol.omega,
            rad_s_to_mev(sol.omega),
            sol.g,
            sol.eps_bar
        );
    }
    Ok(())
}
