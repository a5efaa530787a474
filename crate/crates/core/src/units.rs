//! Physical constants and practical-unit conversions.
//!
//! Everything inside the crate is Gaussian-CGS: cm, s, g, erg, esu.
//! Inputs and outputs in μm, nm, meV and e·nm are converted once at the
//! boundary with the helpers below.

/// Speed of light, cm/s.
pub const C_LIGHT: f64 = 2.997_924_58e10;
/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;
/// Elementary charge, esu (statcoulomb).
pub const E_CHARGE: f64 = 4.803_204_712_570_263e-10;
/// Free electron mass, g.
pub const M_ELECTRON: f64 = 9.109_383_701_5e-28;
/// One electron-volt in erg.
pub const EV: f64 = 1.602_176_634e-12;
/// One milli-electron-volt in erg.
pub const MEV: f64 = 1.602_176_634e-15;

pub const UM: f64 = 1e-4;
pub const NM: f64 = 1e-7;

#[inline]
pub fn um_to_cm(x: f64) -> f64 {
    x * UM
}

#[inline]
pub fn nm_to_cm(x: f64) -> f64 {
    x * NM
}

#[inline]
pub fn cm_to_um(x: f64) -> f64 {
    x / UM
}

/// Energy in meV to erg.
#[inline]
pub fn mev_to_erg(e: f64) -> f64 {
    e * MEV
}

/// Photon energy in meV to angular frequency in rad/s.
#[inline]
pub fn mev_to_rad_s(e: f64) -> f64 {
    e * MEV / HBAR
}

/// Angular frequency (or rate) in rad/s to ħω in meV.
#[inline]
pub fn rad_s_to_mev(w: f64) -> f64 {
    w * HBAR / MEV
}

/// Rate given in ps⁻¹ to s⁻¹.
#[inline]
pub fn per_ps_to_per_s(r: f64) -> f64 {
    r * 1e12
}

/// Dipole in e·nm to esu·cm.
#[inline]
pub fn e_nm_to_esu_cm(d: f64) -> f64 {
    d * E_CHARGE * NM
}

/// Wavenumber in nm⁻¹ to cm⁻¹.
#[inline]
pub fn per_nm_to_per_cm(k: f64) -> f64 {
    k / NM
}

/// Bose occupation 1/(e^{ħω/T} − 1); zero for T = 0.
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / temperature).exp_m1()
}

/// Fermi-Dirac occupation at energy `e` for chemical potential `mu` and temperature `t` (all erg).
pub fn fermi_occupation(e: f64, mu: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return if e < mu {
            1.0
        } else if e > mu {
            0.0
        } else {
            0.5
        };
    }
    let x = (e - mu) / t;
    if x > 0.0 {
        let ex = (-x).exp();
        ex / (1.0 + ex)
    } else {
        1.0 / (1.0 + x.exp())
    }
}
