//! Sum rules of the transverse overlap factors: Σ|Y|² → 1/2, Σ|X|² → 1/2 and
//! their product → 1/4, as the momentum window widens.

use purcell2d::coupling::{parseval_sum, parseval_x, parseval_y};
use purcell2d::modes::{Geometry, ModeIndex};
use purcell2d::units::um_to_cm;
use std::f64::consts::PI;

fn main() -> purcell2d::Result<()> {
    let g = Geometry::new(um_to_cm(2.7), um_to_cm(1.9), um_to_cm(0.1))?;
    let (kx, ky) = (0.37 * PI / g.lx, -0.61 * PI / g.ly);
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "lobes", "Y", "X (N=1)", "X (N=2)", "cavity N=1");
    for lobes in [40, 80, 160, 320] {
        println!(
            "{lobes:>6} {:>14.10} {:>14.10} {:>14.10} {:>14.10}",
            parseval_y(ky, g.ly, lobes)?,
            parseval_x(kx, g.lx, 1, lobes)?,
            parseval_x(kx, g.lx, 2, lobes)?,
            parseval_sum(&ModeIndex::cavity(1)?, &g, (kx, ky), lobes)?
        );
    }
    Ok(())
}
