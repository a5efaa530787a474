//! Golden-rule rates into the strip line, waveguide and cavity, and the
//! cavity enhancement over emission into a bulk dielectric.

use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::golden_rule::{purcell_ratio, rate_cavity_with_dipole, rate_free_space, rate_planewave_with_dipole, rate_waveguide_with_dipole};
use purcell2d::modes::{solve_dispersion, Geometry, ModeIndex};
use purcell2d::units::{e_nm_to_esu_cm, um_to_cm};

fn main() -> purcell2d::Result<()> {
    let eps = 10.0;
    let lz = um_to_cm(0.1);
    let stack = DielectricStack::uniform(DispersionModel::constant(eps), lz)?;
    let geom = Geometry::new(um_to_cm(2.0), um_to_cm(2.0), lz)?;
    let d = e_nm_to_esu_cm(2.0);
    let d_eff = d / eps;

    let sol = solve_dispersion(&stack, &geom, ModeIndex::cavity(1)?, None)?;
    let w = sol.omega;
    let dw = w / 20.0;
    println!("mode frequency     {w:.5e} rad/s, Q = 20");
    println!("free space         {:.4e} 1/s", rate_free_space(d, w, eps)?);
    println!("strip line         {:.4e} 1/s", rate_planewave_with_dipole(d_eff, &stack, w)?.rate);
    println!("waveguide          {:.4e} 1/s", rate_waveguide_with_dipole(d_eff, &stack, &geom, w)?.rate);
    println!("cavity             {:.4e} 1/s", rate_cavity_with_dipole(d_eff, sol.g, &geom, w, dw)?.rate);

    let p = purcell_ratio(&geom, &stack, w, dw)?;
    println!("enhancement        {:.6} (closed form {:.6})", p.direct_quotient, p.formula);
    Ok(())
}
