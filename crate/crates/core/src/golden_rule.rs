//! Golden-rule spontaneous emission rates for the strip line, waveguide and
//! cavity, the free-space reference and the cavity-to-free-space ratio.

use crate::dielectric::DielectricStack;
use crate::emitter::EmitterSheet;
use crate::error::{Error, Result};
use crate::modes::{dispersion_slope, Geometry, ModeIndex, ModeSolution};
use crate::units::{C_LIGHT, HBAR};
use serde::Serialize;
use std::f64::consts::PI;

/// Group velocities below this fraction of c are treated as the cutoff itself.
pub const AT_CUTOFF_VG: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    /// Rate, 1/s.
    pub rate: f64,
    pub variant: &'static str,
    pub omega_used: f64,
    /// Effective dipole at `omega_used`, esu·cm.
    pub d_eff: f64,
    /// G(Lz, ω), cm.
    pub g: f64,
    /// ∂ω/∂q, cm/s (propagating variants only).
    pub group_velocity: Option<f64>,
    /// |q| or qx, 1/cm (propagating variants only).
    pub wavenumber: Option<f64>,
}

/// Group velocity from implicit differentiation of ω²ε̄(ω) = K²c².
fn group_velocity(stack: &DielectricStack, omega: f64, q: f64) -> Result<f64> {
    let slope = dispersion_slope(stack, omega)?;
    let vg = 2.0 * C_LIGHT * C_LIGHT * q / slope;
    if !(vg.is_finite() && vg > 0.0) {
        return Err(Error::ZeroGroupVelocity { omega });
    }
    Ok(vg)
}

/// Strip-line rate 2π|d̃|²ω|q| / (ħ·v_g·G).
pub fn rate_planewave(sheet: &EmitterSheet, stack: &DielectricStack, omega21: f64) -> Result<RateResult> {
    let d = sheet.effective_dipole(stack, omega21)?;
    rate_planewave_with_dipole(d, stack, omega21)
}

pub fn rate_planewave_with_dipole(d_eff: f64, stack: &DielectricStack, omega21: f64) -> Result<RateResult> {
    if !(omega21 > 0.0) {
        return Err(Error::NoPropagatingMode { omega: omega21 });
    }
    let eps_bar = stack.eps_bar(omega21)?;
    let q = omega21 * eps_bar.sqrt() / C_LIGHT;
    let vg = group_velocity(stack, omega21, q)?;
    let g = stack.g_factor(omega21)?;
    Ok(RateResult {
        rate: 2.0 * PI * d_eff * d_eff * omega21 * q / (HBAR * vg * g),
        variant: "planewave",
        omega_used: omega21,
        d_eff,
        g,
        group_velocity: Some(vg),
        wavenumber: Some(q),
    })
}

/// Cutoff estimate πc/(Ly·√ε̄) with ε̄ frozen at `omega`.
fn cutoff_at(stack: &DielectricStack, geometry: &Geometry, omega: f64) -> Result<f64> {
    Ok(PI * C_LIGHT / (geometry.ly * stack.eps_bar(omega)?.sqrt()))
}

/// Waveguide rate 2π|d̃|²ω / (ħ·v_g·Ly·G).
pub fn rate_waveguide(
    sheet: &EmitterSheet,
    stack: &DielectricStack,
    geometry: &Geometry,
    omega21: f64,
) -> Result<RateResult> {
    let d = sheet.effective_dipole(stack, omega21)?;
    rate_waveguide_with_dipole(d, stack, geometry, omega21)
}

pub fn rate_waveguide_with_dipole(
    d_eff: f64,
    stack: &DielectricStack,
    geometry: &Geometry,
    omega21: f64,
) -> Result<RateResult> {
    let eps_bar = stack.eps_bar(omega21)?;
    let ky = PI / geometry.ly;
    let qx2 = omega21 * omega21 * eps_bar / (C_LIGHT * C_LIGHT) - ky * ky;
    if qx2 < 0.0 {
        return Err(Error::BelowCutoff {
            omega: omega21,
            cutoff: cutoff_at(stack, geometry, omega21)?,
        });
    }
    let qx = qx2.sqrt();
    let slope = dispersion_slope(stack, omega21)?;
    let vg = 2.0 * C_LIGHT * C_LIGHT * qx / slope;
    if !(vg.is_finite()) || vg < AT_CUTOFF_VG * C_LIGHT {
        return Err(Error::AtCutoff { omega: omega21 });
    }
    let g = stack.g_factor(omega21)?;
    Ok(RateResult {
        rate: 2.0 * PI * d_eff * d_eff * omega21 / (HBAR * vg * geometry.ly * g),
        variant: "waveguide",
        omega_used: omega21,
        d_eff,
        g,
        group_velocity: Some(vg),
        wavenumber: Some(qx),
    })
}

/// Cavity rate 2π|d̃|²(4ω/Δω) / (ħ·Lx·Ly·G), evaluated at the solved mode frequency.
pub fn rate_cavity(
    sheet: &EmitterSheet,
    stack: &DielectricStack,
    geometry: &Geometry,
    solution: &ModeSolution,
    delta_omega: f64,
) -> Result<RateResult> {
    if !matches!(solution.mode, ModeIndex::Cavity { .. }) {
        return Err(Error::InvalidInput("rate_cavity needs a cavity mode".into()));
    }
    let d = sheet.effective_dipole(stack, solution.omega)?;
    rate_cavity_with_dipole(d, solution.g, geometry, solution.omega, delta_omega)
}

pub fn rate_cavity_with_dipole(
    d_eff: f64,
    g: f64,
    geometry: &Geometry,
    omega: f64,
    delta_omega: f64,
) -> Result<RateResult> {
    if !(delta_omega > 0.0 && delta_omega.is_finite()) {
        return Err(Error::InvalidInput("cavity linewidth must be > 0".into()));
    }
    Ok(RateResult {
        rate: 2.0 * PI * d_eff * d_eff * (4.0 * omega / delta_omega) / (HBAR * geometry.area() * g),
        variant: "cavity",
        omega_used: omega,
        d_eff,
        g,
        group_velocity: None,
        wavenumber: None,
    })
}

/// Bulk-medium rate 4ω³|d|²√ε / (3ħc³).
pub fn rate_free_space(d: f64, omega: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && omega > 0.0) {
        return Err(Error::InvalidInput("free-space rate needs eps > 0 and omega > 0".into()));
    }
    Ok(4.0 * omega.powi(3) * d * d * eps.sqrt() / (3.0 * HBAR * C_LIGHT.powi(3)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurcellRatio {
    /// (3π/2)(c/ω√ε)³/V · (4ω/Δω).
    pub formula: f64,
    /// rate_cavity / rate_free_space for a unit dipole.
    pub direct_quotient: f64,
}

/// Cavity-to-bulk enhancement in a uniform nondispersive filling.
pub fn purcell_ratio(
    geometry: &Geometry,
    stack: &DielectricStack,
    omega21: f64,
    delta_omega: f64,
) -> Result<PurcellRatio> {
    let eps = stack.uniform_constant_eps().ok_or(Error::NonUniformStack)?;
    let v = geometry.area() * stack.lz();
    let formula = 1.5 * PI * (C_LIGHT / (omega21 * eps.sqrt())).powi(3) / v * (4.0 * omega21 / delta_omega);
    let d = 1.0;
    let cavity = rate_cavity_with_dipole(d / eps, stack.g_factor(omega21)?, geometry, omega21, delta_omega)?;
    let direct_quotient = cavity.rate / rate_free_space(d, omega21, eps)?;
    Ok(PurcellRatio {
        formula,
        direct_quotient,
    })
}
