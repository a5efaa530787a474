//! Mid-infrared estimates: the outcoupling-limited effective Q for 100 and
//! 200 meV transitions with a 10 meV line, and the subwavelength geometric
//! enhancement of a few small cavities.

use purcell2d::langevin::{geometric_factor, q_eff_outcoupling_limit, q_eff_resonant};
use purcell2d::modes::Geometry;
use purcell2d::units::{mev_to_rad_s, um_to_cm, C_LIGHT};
use std::f64::consts::PI;

fn main() -> purcell2d::Result<()> {
    let gamma21 = mev_to_rad_s(5.0);
    for e21 in [100.0, 200.0] {
        let w21 = mev_to_rad_s(e21);
        print!("hw21 = {e21} meV: Q_eff(Gamma_r -> 0) = {:.3}", q_eff_outcoupling_limit(w21, gamma21, 0.0));
        for gr in [1.0, 5.0, 20.0] {
            print!(", {gr} meV: {:.3}", q_eff_resonant(w21, gamma21, mev_to_rad_s(gr), 0.0));
        }
        println!();
    }
    let eps: f64 = 10.0;
    let lambda = um_to_cm(10.0);
    let omega = 2.0 * PI * C_LIGHT / lambda;
    for (lx, lz) in [(3.0, 0.2), (2.0, 0.1), (1.5, 0.05)] {
        let g = Geometry::new(um_to_cm(lx), um_to_cm(lx), um_to_cm(lz))?;
        println!(
            "{lx} x {lx} x {lz} um, lambda = 10 um, eps = {eps}: geometric factor {:.2}",
            geometric_factor(&g, g.lz, omega, eps)
        );
    }
    Ok(())
}
