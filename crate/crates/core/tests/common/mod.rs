#![allow(dead_code)]

use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::emitter::{EmitterSheet, Envelope, KProfile, Subband};
use purcell2d::quadrature::Adaptive;
use purcell2d::units::{mev_to_erg, nm_to_cm, per_nm_to_per_cm, M_ELECTRON};

pub fn uniform(eps: f64, lz: f64) -> DielectricStack {
    DielectricStack::uniform(DispersionModel::constant(eps), lz).unwrap()
}

/// Two lowest levels of an infinite well of `width_nm`, equal masses, flat occupations.
pub fn well_sheet(width_nm: f64, delta_e_mev: f64, n1: f64, n2: f64, gamma21: f64) -> EmitterSheet {
    let w = nm_to_cm(width_nm);
    let m = 0.067 * M_ELECTRON;
    let lower = Subband::new(0.0, m, Envelope::infinite_well(1, w).unwrap()).unwrap();
    let upper = Subband::new(mev_to_erg(delta_e_mev), m, Envelope::infinite_well(2, w).unwrap()).unwrap();
    let k = KProfile::uniform_grid(per_nm_to_per_cm(0.5), 64);
    let len = k.len();
    let profile = KProfile {
        k,
        n1: vec![n1; len],
        n2: vec![n2; len],
        gamma21: vec![gamma21; len],
    };
    EmitterSheet::new(lower, upper, 2.0, profile).unwrap()
}

/// Adaptive quadrature over the whole real line of a function peaked near
/// `peaks` with width `scale`.
pub fn real_line(f: impl FnMut(f64) -> f64, peaks: &[f64], scale: f64) -> f64 {
    let center = peaks.iter().sum::<f64>() / peaks.len() as f64;
    Adaptive::with_rel_tol(1e-13)
        .integrate_real_line(f, center, scale, peaks)
        .unwrap()
        .value
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
