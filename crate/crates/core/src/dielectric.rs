//! Layered, frequency-dispersive, lossless dielectric fillings.
//!
//! A [`DielectricStack`] tiles the slab `[-Lz/2, Lz/2]` with layers whose
//! permittivity depends on frequency but not on `z` inside a layer, so every
//! z-integral the rest of the crate needs is a closed-form sum over layers.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Real permittivity model of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DispersionModel {
    Constant {
        eps: f64,
    },
    /// ε(ω) = ε∞ + ωp²/(ω0² − ω²)
    Lorentz {
        eps_inf: f64,
        plasma_freq: f64,
        resonance_freq: f64,
    },
}

impl DispersionModel {
    pub fn constant(eps: f64) -> Self {
        DispersionModel::Constant { eps }
    }

    pub fn lorentz(eps_inf: f64, plasma_freq: f64, resonance_freq: f64) -> Self {
        DispersionModel::Lorentz {
            eps_inf,
            plasma_freq,
            resonance_freq,
        }
    }

    pub fn is_dispersive(&self) -> bool {
        matches!(self, DispersionModel::Lorentz { .. })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DispersionModel::Constant { eps } => {
                if !(eps.is_finite() && eps > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "constant permittivity must be finite and positive, got {eps}"
                    )));
                }
            }
            DispersionModel::Lorentz {
                eps_inf,
                plasma_freq,
                resonance_freq,
            } => {
                if !(eps_inf.is_finite() && plasma_freq.is_finite() && resonance_freq.is_finite())
                    || resonance_freq <= 0.0
                    || plasma_freq < 0.0
                {
                    return Err(Error::InvalidInput(
                        "Lorentz model needs finite parameters with resonance_freq > 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Permittivity without the transparency check; `None` at the pole.
    fn raw(&self, omega: f64) -> Option<f64> {
        match *self {
            DispersionModel::Constant { eps } => Some(eps),
            DispersionModel::Lorentz {
                eps_inf,
                plasma_freq,
                resonance_freq,
            } => {
                let den = resonance_freq * resonance_freq - omega * omega;
                if den == 0.0 {
                    None
                } else {
                    Some(eps_inf + plasma_freq * plasma_freq / den)
                }
            }
        }
    }

    /// ∂ε/∂ω.
    fn raw_derivative(&self, omega: f64) -> f64 {
        match *self {
            DispersionModel::Constant { .. } => 0.0,
            DispersionModel::Lorentz {
                plasma_freq,
                resonance_freq,
                ..
            } => {
                let den = resonance_freq * resonance_freq - omega * omega;
                2.0 * plasma_freq * plasma_freq * omega / (den * den)
            }
        }
    }

    /// ε(ω), rejecting frequencies outside a transparency window.
    pub fn eps(&self, omega: f64) -> Result<f64> {
        let eps = self.raw(omega).ok_or_else(|| Error::NonTransparent {
            omega,
            reason: "pole of the Lorentz model".into(),
        })?;
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::NonTransparent {
                omega,
                reason: format!("eps = {eps:e} <= 0"),
            });
        }
        let energy = 2.0 * omega * eps + omega * omega * self.raw_derivative(omega);
        if !(energy > 0.0) {
            return Err(Error::NonTransparent {
                omega,
                reason: format!("d(w^2 eps)/dw = {energy:e} <= 0"),
            });
        }
        Ok(eps)
    }

    /// ∂ε/∂ω at a transparent frequency.
    pub fn deps_domega(&self, omega: f64) -> Result<f64> {
        self.eps(omega)?;
        Ok(self.raw_derivative(omega))
    }

    /// ∂(ω²ε)/∂ω, evaluated analytically.
    pub fn denergy_domega(&self, omega: f64) -> Result<f64> {
        let eps = self.eps(omega)?;
        Ok(2.0 * omega * eps + omega * omega * self.raw_derivative(omega))
    }

    /// Frequencies in `[lo, hi]` where the model has no transparency, if any.
    ///
    /// For the Lorentz model this is the band `[ω0, ωL]`, ωL² = ω0² + ωp²/ε∞
    /// (unbounded above when ε∞ ≤ 0).
    pub fn opaque_band(&self) -> Option<(f64, f64)> {
        match *self {
            DispersionModel::Constant { .. } => None,
            DispersionModel::Lorentz {
                eps_inf,
                plasma_freq,
                resonance_freq,
            } => {
                let upper = if eps_inf > 0.0 {
                    (resonance_freq * resonance_freq + plasma_freq * plasma_freq / eps_inf).sqrt()
                } else {
                    f64::INFINITY
                };
                Some((resonance_freq, upper))
            }
        }
    }

    /// Error unless the whole interval `[lo, hi]` lies in one transparency window.
    pub fn check_window(&self, lo: f64, hi: f64) -> Result<()> {
        if let Some((a, b)) = self.opaque_band() {
            if hi >= a && lo <= b {
                return Err(Error::NonTransparent {
                    omega: a,
                    reason: format!(
                        "interval [{lo:e}, {hi:e}] intersects the opaque band [{a:e}, {b:e}]"
                    ),
                });
            }
        }
        self.eps(lo)?;
        self.eps(hi)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub z_lo: f64,
    pub z_hi: f64,
    pub model: DispersionModel,
}

impl Layer {
    pub fn thickness(&self) -> f64 {
        self.z_hi - self.z_lo
    }
}

/// Ordered layers tiling `[-Lz/2, Lz/2]` (lengths in cm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DielectricStack {
    layers: Vec<Layer>,
    lz: f64,
}

impl DielectricStack {
    /// Validates that `layers` tile `[-Lz/2, Lz/2]` without gaps or overlaps.
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::InvalidInput("stack needs at least one layer".into()))?;
        let last = layers.last().expect("non-empty");
        let lz = last.z_hi - first.z_lo;
        if !(lz.is_finite() && lz > 0.0) {
            return Err(Error::InvalidInput(format!("slab thickness must be > 0, got {lz}")));
        }
        let tol = 1e-12 * lz;
        if (first.z_lo + 0.5 * lz).abs() > tol || (last.z_hi - 0.5 * lz).abs() > tol {
            return Err(Error::InvalidInput(
                "layers must span [-Lz/2, Lz/2] symmetrically".into(),
            ));
        }
        for (i, layer) in layers.iter().enumerate() {
            layer.model.validate()?;
            if !(layer.z_hi > layer.z_lo) {
                return Err(Error::InvalidInput(format!("layer {i} has non-positive thickness")));
            }
            if i > 0 && (layer.z_lo - layers[i - 1].z_hi).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "layer {i} does not start where layer {} ends",
                    i - 1
                )));
            }
        }
        Ok(Self { layers, lz })
    }

    /// Builds a stack from bottom-to-top `(thickness, model)` pairs centered on z = 0.
    pub fn from_thicknesses(parts: &[(f64, DispersionModel)]) -> Result<Self> {
        let lz: f64 = parts.iter().map(|p| p.0).sum();
        let mut z = -0.5 * lz;
        let n = parts.len();
        let mut layers = Vec::with_capacity(n);
        for (i, &(t, model)) in parts.iter().enumerate() {
            let z_hi = if i + 1 == n { 0.5 * lz } else { z + t };
            layers.push(Layer {
                z_lo: z,
                z_hi,
                model,
            });
            z = z_hi;
        }
        Self::new(layers)
    }

    pub fn uniform(model: DispersionModel, lz: f64) -> Result<Self> {
        Self::from_thicknesses(&[(lz, model)])
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn lz(&self) -> f64 {
        self.lz
    }

    /// Interior layer interfaces, bottom to top.
    pub fn interfaces(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().skip(1).map(|l| l.z_lo)
    }

    pub fn is_dispersive(&self) -> bool {
        self.layers.iter().any(|l| l.model.is_dispersive())
    }

    /// ε when every layer is the same nondispersive constant.
    pub fn uniform_constant_eps(&self) -> Option<f64> {
        let mut eps = None;
        for l in &self.layers {
            match l.model {
                DispersionModel::Constant { eps: e } => match eps {
                    None => eps = Some(e),
                    Some(prev) if prev == e => {}
                    Some(_) => return None,
                },
                DispersionModel::Lorentz { .. } => return None,
            }
        }
        eps
    }

    fn layer_index(&self, z: f64) -> Result<usize> {
        let half = 0.5 * self.lz;
        if !(z >= -half && z <= half) {
            return Err(Error::OutOfDomain {
                z,
                lo: -half,
                hi: half,
            });
        }
        // boundaries belong to the upper layer; z = +Lz/2 to the top layer
        let idx = self.layers.partition_point(|l| l.z_lo <= z);
        Ok(idx.saturating_sub(1))
    }

    pub fn eval_eps(&self, omega: f64, z: f64) -> Result<f64> {
        let i = self.layer_index(z)?;
        self.layers[i].model.eps(omega)
    }

    /// ∫ dz/ε(ω, z) over the slab.
    pub fn inv_eps_integral(&self, omega: f64) -> Result<f64> {
        self.layers
            .iter()
            .map(|l| Ok(l.thickness() / l.model.eps(omega)?))
            .sum()
    }

    /// ∂/∂ω of [`inv_eps_integral`](Self::inv_eps_integral).
    pub fn d_inv_eps_integral(&self, omega: f64) -> Result<f64> {
        self.layers
            .iter()
            .map(|l| {
                let eps = l.model.eps(omega)?;
                Ok(-l.thickness() * l.model.deps_domega(omega)? / (eps * eps))
            })
            .sum()
    }

    /// ∫_{z_from}^{z_to} dz'/ε(ω, z'), exact piecewise.
    pub fn inv_eps_between(&self, omega: f64, z_from: f64, z_to: f64) -> Result<f64> {
        self.layer_index(z_from)?;
        self.layer_index(z_to)?;
        let (a, b, sign) = if z_to >= z_from {
            (z_from, z_to, 1.0)
        } else {
            (z_to, z_from, -1.0)
        };
        let mut acc = 0.0;
        for l in &self.layers {
            let lo = l.z_lo.max(a);
            let hi = l.z_hi.min(b);
            if hi > lo {
                acc += (hi - lo) / l.model.eps(omega)?;
            }
        }
        Ok(sign * acc)
    }

    /// G(Lz, ω) = ∫ dz · ∂(ω²ε)/∂ω / (2ε²ω).
    pub fn g_factor(&self, omega: f64) -> Result<f64> {
        self.layers
            .iter()
            .map(|l| {
                let eps = l.model.eps(omega)?;
                let de = l.model.denergy_domega(omega)?;
                Ok(l.thickness() * de / (2.0 * eps * eps * omega))
            })
            .sum()
    }

    /// Thickness-averaged permittivity ε̄ = Lz / ∫dz/ε.
    pub fn eps_bar(&self, omega: f64) -> Result<f64> {
        Ok(self.lz / self.inv_eps_integral(omega)?)
    }

    /// Error unless `[lo, hi]` lies in a transparency window of every layer.
    pub fn check_window(&self, lo: f64, hi: f64) -> Result<()> {
        self.layers
            .iter()
            .try_for_each(|l| l.model.check_window(lo, hi))
    }

    /// Same stack with layer `index` split at `z` into two identical-model sublayers.
    pub fn split_layer(&self, index: usize, z: f64) -> Result<Self> {
        let l = *self
            .layers
            .get(index)
            .ok_or_else(|| Error::InvalidInput(format!("no layer {index}")))?;
        if !(z > l.z_lo && z < l.z_hi) {
            return Err(Error::InvalidInput("split point must be inside the layer".into()));
        }
        let mut layers = self.layers.clone();
        layers[index].z_hi = z;
        layers.insert(
            index + 1,
            Layer {
                z_lo: z,
                z_hi: l.z_hi,
                model: l.model,
            },
        );
        Self::new(layers)
    }

    /// Every layer boundary multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(
            self.layers
                .iter()
                .map(|l| Layer {
                    z_lo: l.z_lo * s,
                    z_hi: l.z_hi * s,
                    model: l.model,
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::um_to_cm;

    fn lorentz() -> DispersionModel {
        DispersionModel::lorentz(1.0, 1e14, 2e14)
    }

    #[test]
    fn constant_identity() {
        let s = DielectricStack::uniform(DispersionModel::constant(4.0), um_to_cm(2.0)).unwrap();
        assert_eq!(s.eval_eps(3e14, 0.0).unwrap(), 4.0);
    }

    #[test]
    fn lorentz_substitution() {
        let eps = lorentz().eps(1e14).unwrap();
        assert!((eps - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lorentz_pole_is_rejected() {
        assert!(matches!(lorentz().eps(2e14), Err(Error::NonTransparent { .. })));
        // inside the opaque band ε < 0
        assert!(matches!(lorentz().eps(2.1e14), Err(Error::NonTransparent { .. })));
        // above the band it is transparent again
        assert!(lorentz().eps(3e14).is_ok());
    }

    #[test]
    fn out_of_domain() {
        let s = DielectricStack::uniform(DispersionModel::constant(4.0), 1e-4).unwrap();
        assert!(matches!(s.eval_eps(1e14, 0.6e-4), Err(Error::OutOfDomain { .. })));
        assert!(s.eval_eps(1e14, 0.5e-4).is_ok());
    }

    #[test]
    fn boundary_resolves_upward() {
        let s = DielectricStack::from_thicknesses(&[
            (1e-4, DispersionModel::constant(2.0)),
            (1e-4, DispersionModel::constant(4.0)),
        ])
        .unwrap();
        assert_eq!(s.eval_eps(1e14, 0.0).unwrap(), 4.0);
        assert_eq!(s.eval_eps(1e14, 1e-4).unwrap(), 4.0);
        assert_eq!(s.eval_eps(1e14, -1e-4).unwrap(), 2.0);
    }

    #[test]
    fn inv_eps_uniform_and_layered() {
        let s = DielectricStack::uniform(DispersionModel::constant(4.0), um_to_cm(2.0)).unwrap();
        assert!((s.inv_eps_integral(1e14).unwrap() - 5e-5).abs() < 1e-18);
        let s = DielectricStack::from_thicknesses(&[
            (um_to_cm(1.0), DispersionModel::constant(2.0)),
            (um_to_cm(1.0), DispersionModel::constant(4.0)),
        ])
        .unwrap();
        assert!((s.inv_eps_integral(1e14).unwrap() - um_to_cm(0.75)).abs() < 1e-18);
    }

    #[test]
    fn g_factor_nondispersive() {
        let s = DielectricStack::uniform(DispersionModel::constant(1.0), um_to_cm(1.0)).unwrap();
        assert!((s.g_factor(2e14).unwrap() - um_to_cm(1.0)).abs() < 1e-18);
        let s = DielectricStack::uniform(DispersionModel::constant(12.0), um_to_cm(0.3)).unwrap();
        let g = s.g_factor(2e14).unwrap();
        assert!((g / (um_to_cm(0.3) / 12.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tiling_is_validated() {
        let bad = DielectricStack::new(vec![
            Layer {
                z_lo: -1.0,
                z_hi: 0.0,
                model: DispersionModel::constant(1.0),
            },
            Layer {
                z_lo: 0.1,
                z_hi: 1.0,
                model: DispersionModel::constant(1.0),
            },
        ]);
        assert!(bad.is_err());
        assert!(DielectricStack::new(vec![]).is_err());
        assert!(DielectricStack::uniform(DispersionModel::constant(-1.0), 1.0).is_err());
    }

    #[test]
    fn window_check_rejects_opaque_band() {
        let s = DielectricStack::uniform(lorentz(), 1e-5).unwrap();
        assert!(s.check_window(0.5e14, 1.5e14).is_ok());
        assert!(s.check_window(1.5e14, 2.5e14).is_err());
        assert!(s.check_window(2.3e14, 4e14).is_ok());
    }

    #[test]
    fn inv_eps_between_is_signed_and_additive() {
        let s = DielectricStack::from_thicknesses(&[
            (1.0, DispersionModel::constant(2.0)),
            (1.0, DispersionModel::constant(4.0)),
        ])
        .unwrap();
        let a = s.inv_eps_between(1.0, -0.5, 0.5).unwrap();
        assert!((a - (0.25 + 0.125)).abs() < 1e-15);
        let b = s.inv_eps_between(1.0, 0.5, -0.5).unwrap();
        assert_eq!(a, -b);
    }
}
