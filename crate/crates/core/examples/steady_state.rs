//! Steady-state photon number and outcoupled power of an inverted quantum-well
//! sheet in a resonant cavity, including the medium gain and the limit forms.

use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::emitter::{EmitterSheet, Envelope, Subband};
use purcell2d::langevin::{steady_state, LangevinParams};
use purcell2d::modes::{solve_dispersion, Geometry, ModeIndex};
use purcell2d::units::{mev_to_erg, mev_to_rad_s, nm_to_cm, rad_s_to_mev, um_to_cm, M_ELECTRON};

fn main() -> purcell2d::Result<()> {
    let lz = um_to_cm(0.15);
    let stack = DielectricStack::uniform(DispersionModel::constant(10.0), lz)?;
    let geom = Geometry::for_stack(um_to_cm(2.31), um_to_cm(2.31), &stack)?;
    let mode = solve_dispersion(&stack, &geom, ModeIndex::cavity(1)?, None)?;

    let width = nm_to_cm(10.0);
    let m = 0.067 * M_ELECTRON;
    let lower = Subband::new(0.0, m, Envelope::infinite_well(1, width)?)?;
    let upper = Subband::new(mev_to_erg(120.0), m, Envelope::infinite_well(2, width)?)?;
    let k = purcell2d::emitter::KProfile::uniform_grid(6e6, 256);
    let profile = EmitterSheet::fermi_profile(
        &lower,
        &upper,
        k,
        mev_to_erg(-50.0),
        mev_to_erg(125.0),
        mev_to_erg(2.0),
        mev_to_rad_s(5.0),
    );
    let sheet = EmitterSheet::new(lower, upper, 2.0, profile)?;
    let ens = sheet.ensemble(&geom)?;
    let rabi2 = mode.rabi_squared(sheet.effective_dipole(&stack, mode.omega)?, &geom);
    println!("cavity {:.2} meV, <hw21> {:.2} meV, N2 = {:.3e}", rad_s_to_mev(mode.omega), rad_s_to_mev(ens.mean_omega21()), ens.total_n2());

    for gr in [0.5, 5.0, 50.0] {
        let p = LangevinParams::new(mev_to_rad_s(gr), mev_to_rad_s(1.0), 0.0, 0.0)?;
        let s = steady_state(&ens, rabi2, mode.omega, &p, false)?;
        println!(
            "Gamma_r {gr:>5} meV: gamma {:+.3e} 1/s, <n> {:.4e}, P {:.4e} W, Q_eff {:.2}, regime {:?}",
            s.gamma_medium,
            s.photon_number,
            s.power * 1e-7,
            s.q_eff,
            s.regime
        );
    }
    Ok(())
}
