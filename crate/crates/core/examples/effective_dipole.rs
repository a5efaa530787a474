//! Screened intersubband dipole of an infinite well placed across a
//! dielectric interface, against the bare dipole and its uniform-medium value.

use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::emitter::{EmitterSheet, Envelope, KProfile, Subband};
use purcell2d::units::{mev_to_erg, mev_to_rad_s, nm_to_cm, um_to_cm, E_CHARGE, M_ELECTRON};

fn main() -> purcell2d::Result<()> {
    let width = nm_to_cm(10.0);
    let m = 0.067 * M_ELECTRON;
    let lower = Subband::new(0.0, m, Envelope::infinite_well(1, width)?)?;
    let upper = Subband::new(mev_to_erg(120.0), m, Envelope::infinite_well(2, width)?)?;
    let k = KProfile::uniform_grid(6e6, 64);
    let profile = KProfile {
        n1: vec![1.0; k.len()],
        n2: vec![0.0; k.len()],
        gamma21: vec![mev_to_rad_s(5.0); k.len()],
        k,
    };
    let sheet = EmitterSheet::new(lower, upper, 2.0, profile)?;
    let omega = mev_to_rad_s(120.0);
    let bare = sheet.bare_dipole()?;
    println!("bare dipole        {:.6} e*nm", bare / E_CHARGE / nm_to_cm(1.0));

    for (label, stack) in [
        ("uniform eps=12.9", DielectricStack::uniform(DispersionModel::constant(12.9), um_to_cm(0.1))?),
        (
            "GaAs | AlAs split",
            DielectricStack::from_thicknesses(&[
                (um_to_cm(0.05), DispersionModel::constant(12.9)),
                (um_to_cm(0.05), DispersionModel::constant(10.1)),
            ])?,
        ),
    ] {
        let d = sheet.effective_dipole(&stack, omega)?;
        println!("{label:<18} {:.6} e*nm  (d_eff/d_bare = {:.6})", d / E_CHARGE / nm_to_cm(1.0), d / bare);
    }
    Ok(())
}
