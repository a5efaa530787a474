//! Steady state of the coupled cavity-field / polarization Langevin system:
//! medium response, photon number, outcoupled power, effective linewidth and
//! the narrow/wide transition-line limits.

use crate::dielectric::DielectricStack;
use crate::emitter::{EmitterSheet, Ensemble, KBin};
use crate::error::{Error, Result};
use crate::golden_rule::rate_free_space;
use crate::modes::Geometry;
use crate::units::{bose_occupation, C_LIGHT, HBAR};
use serde::Serialize;
use std::f64::consts::PI;

/// Γt/⟨γ21⟩ at or above this is the narrow-line regime.
pub const NARROW_RATIO: f64 = 10.0;
/// Γt/⟨γ21⟩ at or below this is the wide-line regime.
pub const WIDE_RATIO: f64 = 0.1;

/// Cavity losses and reservoir temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LangevinParams {
    /// Γr, rad/s.
    pub gamma_r: f64,
    /// Γσ, rad/s.
    pub gamma_sigma: f64,
    /// T_r, erg.
    pub t_r: f64,
    /// T_σ, erg.
    pub t_sigma: f64,
}

impl LangevinParams {
    pub fn new(gamma_r: f64, gamma_sigma: f64, t_r: f64, t_sigma: f64) -> Result<Self> {
        for (name, v) in [
            ("gamma_r", gamma_r),
            ("gamma_sigma", gamma_sigma),
            ("t_r", t_r),
            ("t_sigma", t_sigma),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be finite and >= 0")));
            }
        }
        Ok(Self {
            gamma_r,
            gamma_sigma,
            t_r,
            t_sigma,
        })
    }

    /// Cold-cavity loss Γr + Γσ.
    pub fn cavity_loss(&self) -> f64 {
        self.gamma_r + self.gamma_sigma
    }

    /// Γt = Γr + Γσ + γ; rejects the unstable (amplifying) case.
    pub fn total_loss(&self, gamma_medium: f64) -> Result<f64> {
        let gt = self.gamma_r + self.gamma_sigma + gamma_medium;
        if !(gt > 0.0) {
            return Err(Error::Unstable { gamma_total: gt });
        }
        Ok(gt)
    }
}

/// ∫dω / ([(ω−a)²+A²][(ω−b)²+B²]) = π(A+B) / (AB((a−b)²+(A+B)²)).
pub fn lorentzian_product_integral(detuning: f64, a_width: f64, b_width: f64) -> f64 {
    let s = a_width + b_width;
    PI * s / (a_width * b_width * (detuning * detuning + s * s))
}

/// Shift δω and absorption γ of the cavity mode due to the electrons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumResponse {
    /// δω, rad/s.
    pub delta_omega: f64,
    /// γ, rad/s; negative under inversion.
    pub gamma: f64,
    pub inverted: bool,
}

/// δω + iγ = Ω² Σ_k (n1k − n2k)/((ω21k − ων) − iγ21k).
pub fn medium_response(ensemble: &Ensemble, rabi2: f64, omega_nu: f64) -> MediumResponse {
    let (mut re, mut im) = (0.0, 0.0);
    for b in &ensemble.bins {
        let det = b.omega21 - omega_nu;
        let den = det * det + b.gamma21 * b.gamma21;
        let dn = b.weight * (b.n1 - b.n2);
        re += dn * det / den;
        im += dn * b.gamma21 / den;
    }
    let gamma = rabi2 * im;
    MediumResponse {
        delta_omega: rabi2 * re,
        gamma,
        inverted: gamma < 0.0,
    }
}

/// Per-state emission contribution to ⟨c†c⟩:
/// Ω²·n2·(Γt+γ21) / (Γt·(Δ² + (Γt+γ21)²)).
pub fn photon_term(bin: &KBin, rabi2: f64, omega_nu: f64, gamma_total: f64) -> f64 {
    let det = bin.omega21 - omega_nu;
    let s = gamma_total + bin.gamma21;
    rabi2 * bin.n2 * s / (gamma_total * (det * det + s * s))
}

/// Σ_k of [`photon_term`], without thermal photons.
pub fn emission_photon_number(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, gamma_total: f64) -> f64 {
    ensemble
        .bins
        .iter()
        .map(|b| b.weight * photon_term(b, rabi2, omega_nu, gamma_total))
        .sum()
}

/// Γr·nT(Tr)/Γt + Γσ·nT(Tσ)/Γt.
pub fn thermal_photon_number(params: &LangevinParams, omega_nu: f64, gamma_total: f64) -> f64 {
    (params.gamma_r * bose_occupation(omega_nu, params.t_r)
        + params.gamma_sigma * bose_occupation(omega_nu, params.t_sigma))
        / gamma_total
}

/// Steady-state ⟨c†c⟩ including the thermal terms. γ is taken from the ensemble.
pub fn photon_number(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, params: &LangevinParams) -> Result<f64> {
    let resp = medium_response(ensemble, rabi2, omega_nu);
    let gt = params.total_loss(resp.gamma)?;
    Ok(emission_photon_number(ensemble, rabi2, omega_nu, gt) + thermal_photon_number(params, omega_nu, gt))
}

/// P = 2Γr·ħων·⟨c†c⟩ with the thermal terms dropped, erg/s.
pub fn emitted_power(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, params: &LangevinParams) -> Result<f64> {
    let resp = medium_response(ensemble, rabi2, omega_nu);
    let gt = params.total_loss(resp.gamma)?;
    Ok(2.0 * params.gamma_r * HBAR * omega_nu * emission_photon_number(ensemble, rabi2, omega_nu, gt))
}

/// Δω_eff from the exact overlap of the cavity and transition Lorentzians:
/// 1/Δω_eff = Γr(Γt+γ21) / (2Γt(Δ² + (Γt+γ21)²)).
pub fn effective_linewidth(
    gamma21: f64,
    omega21: f64,
    omega_nu: f64,
    params: &LangevinParams,
    gamma_medium: f64,
) -> Result<f64> {
    let gt = params.total_loss(gamma_medium)?;
    let det = omega21 - omega_nu;
    let s = gt + gamma21;
    Ok(2.0 * gt * (det * det + s * s) / (params.gamma_r * s))
}

/// Q_norm = 2γ21/Δω_eff with Γt = Γr + g, g = Γσ + γ.
pub fn q_norm(gamma21: f64, detuning: f64, gamma_r: f64, g: f64) -> f64 {
    let gt = gamma_r + g;
    let s = gt + gamma21;
    gamma21 * gamma_r * s / (gt * (detuning * detuning + s * s))
}

/// Resonant Q_eff = ω21Γr / (2Γt(Γt+γ21)) with Γt = Γr + g.
pub fn q_eff_resonant(omega21: f64, gamma21: f64, gamma_r: f64, g: f64) -> f64 {
    let gt = gamma_r + g;
    omega21 * gamma_r / (2.0 * gt * (gt + gamma21))
}

/// Q_eff for Γr ≫ Γσ + γ: ω21 / (2(γ21 + Γr)).
pub fn q_eff_outcoupling_limit(omega21: f64, gamma21: f64, gamma_r: f64) -> f64 {
    omega21 / (2.0 * (gamma21 + gamma_r))
}

/// Γr maximizing the resonant Q_norm at fixed g > 0: sqrt(g(g+γ21)).
pub fn q_norm_argmax(gamma21: f64, g: f64) -> f64 {
    (g * (g + gamma21)).sqrt()
}

/// Q_norm over Γr/γ21 on a log grid from 1e-2 to 1e2 at resonance.
pub fn fig2_curve(gamma21: f64, g: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::InvalidInput("fig2 needs at least 2 points".into()));
    }
    if !(g >= 0.0) || !(gamma21 > 0.0) {
        return Err(Error::InvalidInput("fig2 needs gamma21 > 0 and g >= 0".into()));
    }
    Ok((0..points)
        .map(|i| {
            let x = 10f64.powf(-2.0 + 4.0 * i as f64 / (points - 1) as f64);
            (x, q_norm(gamma21, 0.0, x * gamma21, g))
        })
        .collect())
}

/// Q_norm over (ω21−ων)/γ21 ∈ [−5, 5] at Γr = γ21.
pub fn fig2_inset(gamma21: f64, g: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::InvalidInput("fig2 inset needs at least 2 points".into()));
    }
    Ok((0..points)
        .map(|i| {
            let x = -5.0 + 10.0 * i as f64 / (points - 1) as f64;
            (x, q_norm(gamma21, x * gamma21, gamma21, g))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Narrow,
    Intermediate,
    Wide,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitPowers {
    /// Transition line much narrower than the cavity line, erg/s.
    pub narrow: f64,
    /// Transition line much wider than the cavity line, erg/s.
    pub wide: f64,
    pub regime: Regime,
    /// Γt/⟨γ21⟩.
    pub ratio: f64,
}

/// Both limit formulas, evaluated regardless of regime.
pub fn limit_powers(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, params: &LangevinParams) -> Result<LimitPowers> {
    let resp = medium_response(ensemble, rabi2, omega_nu);
    let gt = params.total_loss(resp.gamma)?;
    let pref = HBAR * omega_nu * rabi2 * 2.0 * params.gamma_r;
    let (mut narrow, mut wide) = (0.0, 0.0);
    for b in &ensemble.bins {
        let det = b.omega21 - omega_nu;
        narrow += b.weight * b.n2 / (det * det + gt * gt);
        wide += b.weight * b.gamma21 * b.n2 / (det * det + b.gamma21 * b.gamma21);
    }
    let ratio = gt / ensemble.mean_gamma21();
    let regime = if ratio >= NARROW_RATIO {
        Regime::Narrow
    } else if ratio <= WIDE_RATIO {
        Regime::Wide
    } else {
        Regime::Intermediate
    };
    Ok(LimitPowers {
        narrow: pref * narrow,
        wide: pref * wide / gt,
        regime,
        ratio,
    })
}

/// (6/π²)(λ/2√ε)³/V with λ = 2πc/ω.
pub fn geometric_factor(geometry: &Geometry, lz: f64, omega: f64, eps: f64) -> f64 {
    let half_lambda = PI * C_LIGHT / (omega * eps.sqrt());
    6.0 / (PI * PI) * half_lambda.powi(3) / (geometry.area() * lz)
}

/// Power written as free-space emission × geometric enhancement × Q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeSpaceBreakdown {
    /// ħω·A0·Σn2, erg/s.
    pub free_space_power: f64,
    /// (6/π²)(λ/2√ε)³/V.
    pub geometric_factor: f64,
    /// ων/Δω_eff.
    pub q_factor: f64,
    pub product: f64,
}

/// Breakdown for a uniform nondispersive filling and k-independent γ21.
pub fn power_free_space_reference(
    sheet: &EmitterSheet,
    ensemble: &Ensemble,
    geometry: &Geometry,
    stack: &DielectricStack,
    rabi2: f64,
    omega_nu: f64,
    params: &LangevinParams,
) -> Result<FreeSpaceBreakdown> {
    let eps = stack.uniform_constant_eps().ok_or(Error::NonUniformStack)?;
    let d = sheet.bare_dipole()?;
    let resp = medium_response(ensemble, rabi2, omega_nu);
    let a0 = rate_free_space(d, omega_nu, eps)?;
    let free_space_power = HBAR * omega_nu * a0 * ensemble.total_n2();
    let geo = geometric_factor(geometry, stack.lz(), omega_nu, eps);
    let dw = effective_linewidth(
        ensemble.mean_gamma21(),
        ensemble.mean_omega21(),
        omega_nu,
        params,
        resp.gamma,
    )?;
    let q = omega_nu / dw;
    Ok(FreeSpaceBreakdown {
        free_space_power,
        geometric_factor: geo,
        q_factor: q,
        product: free_space_power * geo * q,
    })
}

/// Everything the steady state reports for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    /// δω, rad/s.
    pub delta_omega_shift: f64,
    /// γ, rad/s.
    pub gamma_medium: f64,
    pub inverted: bool,
    /// Γt = Γr + Γσ + γ, rad/s.
    pub gamma_total: f64,
    /// Cavity frequency used in the emission formulas (ων or ων − δω), rad/s.
    pub omega_nu_used: f64,
    /// ⟨c†c⟩ including thermal photons.
    pub photon_number: f64,
    /// ⟨c†c⟩ from emission only.
    pub photon_number_emission: f64,
    /// P, erg/s.
    pub power: f64,
    /// Δω_eff defined through P = ħων·A(Δω_eff)·Σn2, rad/s.
    pub delta_omega_eff: f64,
    /// ⟨ω21⟩/Δω_eff.
    pub q_eff: f64,
    /// 2⟨γ21⟩/Δω_eff.
    pub q_norm: f64,
    pub limit_narrow: f64,
    pub limit_wide: f64,
    pub regime: Regime,
}

/// Full steady state. With `absorb_shift` the emission formulas use ων − δω.
pub fn steady_state(
    ensemble: &Ensemble,
    rabi2: f64,
    omega_nu: f64,
    params: &LangevinParams,
    absorb_shift: bool,
) -> Result<SpectralResult> {
    let resp = medium_response(ensemble, rabi2, omega_nu);
    let gt = params.total_loss(resp.gamma)?;
    let w = if absorb_shift {
        omega_nu - resp.delta_omega
    } else {
        omega_nu
    };
    let emission = emission_photon_number(ensemble, rabi2, w, gt);
    let thermal = thermal_photon_number(params, w, gt);
    let power = 2.0 * params.gamma_r * HBAR * w * emission;
    let n2 = ensemble.total_n2();
    let delta_omega_eff = if power > 0.0 {
        4.0 * rabi2 * HBAR * w * n2 / power
    } else {
        f64::INFINITY
    };
    let mut narrow = 0.0;
    let mut wide = 0.0;
    for b in &ensemble.bins {
        let det = b.omega21 - w;
        narrow += b.weight * b.n2 / (det * det + gt * gt);
        wide += b.weight * b.gamma21 * b.n2 / (det * det + b.gamma21 * b.gamma21);
    }
    let pref = HBAR * w * rabi2 * 2.0 * params.gamma_r;
    let ratio = gt / ensemble.mean_gamma21();
    Ok(SpectralResult {
        delta_omega_shift: resp.delta_omega,
        gamma_medium: resp.gamma,
        inverted: resp.inverted,
        gamma_total: gt,
        omega_nu_used: w,
        photon_number: emission + thermal,
        photon_number_emission: emission,
        power,
        delta_omega_eff,
        q_eff: ensemble.mean_omega21() / delta_omega_eff,
        q_norm: 2.0 * ensemble.mean_gamma21() / delta_omega_eff,
        limit_narrow: pref * narrow,
        limit_wide: pref * wide / gt,
        regime: if ratio >= NARROW_RATIO {
            Regime::Narrow
        } else if ratio <= WIDE_RATIO {
            Regime::Wide
        } else {
            Regime::Intermediate
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::Adaptive;

    fn reference() -> (Ensemble, LangevinParams) {
        (
            Ensemble::single(100.0, 1.0, 1.0, 1.0, 5.0).unwrap(),
            LangevinParams::new(1.0, 0.0, 0.0, 0.0).unwrap(),
        )
    }

    #[test]
    fn reference_case_photon_number_and_power() {
        let (e, p) = reference();
        let n = photon_number(&e, 0.01, 5.0, &p).unwrap();
        assert!((n - 0.5).abs() < 1e-15);
        // ħων = 1 in the same arbitrary units
        let pw = emitted_power(&e, 0.01, 1.0 / HBAR, &p).unwrap();
        let e1 = Ensemble::single(100.0, 1.0, 1.0, 1.0, 1.0 / HBAR).unwrap();
        let pw1 = emitted_power(&e1, 0.01, 1.0 / HBAR, &p).unwrap();
        assert!((pw1 - 1.0).abs() < 1e-12);
        assert!(pw < pw1);
    }

    #[test]
    fn lorentzian_product_matches_quadrature() {
        for (d, a, b) in [(0.0f64, 1.0f64, 1.0f64), (3.0, 0.5, 2.0), (-7.0, 0.1, 0.3)] {
            let q = Adaptive::with_rel_tol(1e-13)
                .integrate_real_line(
                    |w| 1.0 / (((w - d) * (w - d) + a * a) * (w * w + b * b)),
                    0.5 * d,
                    a.max(b),
                    &[0.0, d],
                )
                .unwrap();
            let c = lorentzian_product_integral(d, a, b);
            assert!((q.value / c - 1.0).abs() < 1e-9, "{} {}", q.value, c);
        }
    }

    #[test]
    fn transparency_and_inversion() {
        let e = Ensemble::single(10.0, 0.5, 0.5, 1.0, 3.0).unwrap();
        let r = medium_response(&e, 2.0, 2.0);
        assert_eq!((r.delta_omega, r.gamma), (0.0, 0.0));
        let e = Ensemble::single(10.0, 0.2, 0.7, 1.0, 3.0).unwrap();
        let r = medium_response(&e, 2.0, 2.0);
        assert!(r.gamma < 0.0 && r.inverted);
        let e = Ensemble::single(10.0, 0.7, 0.2, 2.0, 3.0).unwrap();
        let r = medium_response(&e, 2.0, 3.0);
        assert_eq!(r.delta_omega, 0.0);
        assert!((r.gamma - 2.0 * 10.0 * 0.5 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn unstable_is_rejected() {
        let e = Ensemble::single(1000.0, 0.0, 1.0, 1.0, 3.0).unwrap();
        let p = LangevinParams::new(0.1, 0.0, 0.0, 0.0).unwrap();
        let err = photon_number(&e, 1.0, 3.0, &p).unwrap_err();
        assert!(matches!(err, Error::Unstable { .. }));
        assert!(err.to_string().starts_with("Unstable"));
    }

    #[test]
    fn thermal_only_cavity() {
        let e = Ensemble::single(10.0, 0.0, 0.0, 1.0, 3.0).unwrap();
        let w = 1e14;
        let t = HBAR * w / 0.7;
        let p = LangevinParams::new(1e12, 0.0, t, 0.0).unwrap();
        let n = photon_number(&e, 0.0, w, &p).unwrap();
        assert!((n - 1.0 / 0.7f64.exp_m1()).abs() < 1e-14);
        let p0 = LangevinParams::new(1e12, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(photon_number(&e, 1e20, w, &p0).unwrap(), 0.0);
    }

    #[test]
    fn resonant_q_eff() {
        let g21 = 1e13;
        let w21 = 2e14;
        let p = LangevinParams::new(g21, 0.0, 0.0, 0.0).unwrap();
        let dw = effective_linewidth(g21, w21, w21, &p, 0.0).unwrap();
        assert!((w21 / dw / (w21 / (4.0 * g21)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn power_matches_golden_rule_form() {
        let e = Ensemble::single(50.0, 0.3, 0.6, 2.0, 9.0).unwrap();
        let p = LangevinParams::new(1.5, 0.5, 0.0, 0.0).unwrap();
        let rabi2 = 1e-3;
        let s = steady_state(&e, rabi2, 8.0, &p, false).unwrap();
        let dw = effective_linewidth(2.0, 9.0, 8.0, &p, s.gamma_medium).unwrap();
        assert!((s.delta_omega_eff / dw - 1.0).abs() < 1e-12);
        let a = 4.0 * rabi2 / dw;
        assert!((s.power / (HBAR * 8.0 * a * e.total_n2()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fig2_zero_g_is_monotone_from_one() {
        let c = fig2_curve(1.0, 0.0, 201).unwrap();
        assert!(c.windows(2).all(|w| w[1].1 < w[0].1));
        assert!((c[0].1 - 1.0 / 1.01).abs() < 1e-14);
        let inset = fig2_inset(1.0, 0.3, 101).unwrap();
        for i in 0..101 {
            assert!((inset[i].1 - inset[100 - i].1).abs() < 1e-15);
        }
    }
}
