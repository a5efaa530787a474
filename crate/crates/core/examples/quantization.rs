//! Field normalization of the strip-line, waveguide and cavity modes. In a
//! uniform filling the mode-averaged |E|² reduces to 2πħω/(Vε).

use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::modes::{normalization_d2, zeta_norm_integral, Geometry, ModeIndex};
use purcell2d::units::{um_to_cm, HBAR};
use std::f64::consts::PI;

fn main() -> purcell2d::Result<()> {
    let eps = 10.0;
    let lz = um_to_cm(0.1);
    let stack = DielectricStack::uniform(DispersionModel::constant(eps), lz)?;
    let geom = Geometry::new(um_to_cm(3.0), um_to_cm(2.0), lz)?;
    let omega = 1.5e14;
    let reference = 2.0 * PI * HBAR * omega / (geom.volume() * eps);
    for mode in [
        ModeIndex::PlaneWave { qx: 2e4, qy: 0.0 },
        ModeIndex::Waveguide { qx: 2e4 },
        ModeIndex::cavity(1)?,
    ] {
        let d2 = normalization_d2(&stack, &geom, &mode, omega)?;
        let mean_e2 = d2 / (eps * eps) * zeta_norm_integral(&mode, &geom) / geom.area();
        println!(
            "{:<10} |D|^2 = {d2:.6e} erg/cm^3   <|E|^2>/(2 pi hbar w/V eps) = {:.15}",
            mode.name(),
            mean_e2 / reference
        );
    }
    Ok(())
}
