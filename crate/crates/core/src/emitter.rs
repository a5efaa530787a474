//! Two-subband 2D emitter sheet: envelope functions, effective dipole,
//! transition dispersion, populations and k-space sums.

use crate::dielectric::DielectricStack;
use crate::error::{Error, Result};
use crate::modes::Geometry;
use crate::quadrature::GaussLegendre;
use crate::units::{fermi_occupation, E_CHARGE, HBAR};
use serde::Serialize;
use std::f64::consts::PI;

const DIPOLE_GL_ORDER: usize = 16;
const DIPOLE_START_PANELS: usize = 16;
const DIPOLE_MAX_DOUBLINGS: usize = 12;
const DIPOLE_REL_TOL: f64 = 1e-9;

/// Envelope function ψ(z) (1/√cm), real valued.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Envelope {
    /// Particle-in-a-box state `n` of a well of width `width` centered at z = 0.
    InfiniteWell { n: u32, width: f64 },
    /// Linear interpolation through samples; normalized on construction.
    Sampled { z: Vec<f64>, values: Vec<f64> },
}

impl Envelope {
    pub fn infinite_well(n: u32, width: f64) -> Result<Self> {
        if n == 0 || !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidInput(
                "infinite well needs n >= 1 and a positive width".into(),
            ));
        }
        Ok(Envelope::InfiniteWell { n, width })
    }

    /// Sampled envelope, renormalized so that ∫|ψ|²dz = 1 under linear interpolation.
    pub fn sampled(z: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if z.len() != values.len() || z.len() < 2 {
            return Err(Error::InvalidInput(
                "sampled envelope needs matching z/value arrays with >= 2 points".into(),
            ));
        }
        if !z.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidInput("sample grid must be strictly increasing".into()));
        }
        // ∫ of a squared linear interpolant is exact per segment
        let norm: f64 = z
            .windows(2)
            .zip(values.windows(2))
            .map(|(zz, v)| (zz[1] - zz[0]) * (v[0] * v[0] + v[0] * v[1] + v[1] * v[1]) / 3.0)
            .sum();
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("sampled envelope has zero norm".into()));
        }
        let s = norm.sqrt().recip();
        Ok(Envelope::Sampled {
            z,
            values: values.into_iter().map(|v| v * s).collect(),
        })
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Envelope::InfiniteWell { width, .. } => (-0.5 * width, 0.5 * width),
            Envelope::Sampled { z, .. } => (z[0], z[z.len() - 1]),
        }
    }

    pub fn value(&self, zq: f64) -> f64 {
        match self {
            Envelope::InfiniteWell { n, width } => {
                let half = 0.5 * width;
                if zq < -half || zq > half {
                    0.0
                } else {
                    (2.0 / width).sqrt() * (*n as f64 * PI * (zq + half) / width).sin()
                }
            }
            Envelope::Sampled { z, values } => {
                if zq < z[0] || zq > z[z.len() - 1] {
                    return 0.0;
                }
                let i = z.partition_point(|&p| p <= zq).clamp(1, z.len() - 1);
                let t = (zq - z[i - 1]) / (z[i] - z[i - 1]);
                values[i - 1] + t * (values[i] - values[i - 1])
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            Envelope::InfiniteWell { .. } => Vec::new(),
            Envelope::Sampled { z, .. } => z.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subband {
    /// Band-edge energy, erg.
    pub edge_energy: f64,
    /// In-plane effective mass, g.
    pub effective_mass: f64,
    pub psi: Envelope,
}

impl Subband {
    pub fn new(edge_energy: f64, effective_mass: f64, psi: Envelope) -> Result<Self> {
        if !(effective_mass.is_finite() && effective_mass > 0.0) || !edge_energy.is_finite() {
            return Err(Error::InvalidInput("subband needs a finite edge and mass > 0".into()));
        }
        Ok(Self {
            edge_energy,
            effective_mass,
            psi,
        })
    }

    /// W_m(k) = edge + ħ²k²/2m.
    pub fn energy(&self, k: f64) -> f64 {
        self.edge_energy + HBAR * HBAR * k * k / (2.0 * self.effective_mass)
    }
}

/// Radial k-grid with populations and dephasing on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KProfile {
    /// |k| grid, 1/cm, strictly increasing.
    pub k: Vec<f64>,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    /// γ21(k), rad/s.
    pub gamma21: Vec<f64>,
}

pub const MIN_K_POINTS: usize = 16;

impl KProfile {
    pub fn validate(&self) -> Result<()> {
        let n = self.k.len();
        if n < MIN_K_POINTS {
            return Err(Error::InvalidInput(format!(
                "k grid needs at least {MIN_K_POINTS} points, got {n}"
            )));
        }
        if self.n1.len() != n || self.n2.len() != n || self.gamma21.len() != n {
            return Err(Error::InvalidInput("k-profile arrays differ in length".into()));
        }
        if self.k[0] < 0.0 || !self.k.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidInput("k grid must be non-negative and strictly increasing".into()));
        }
        for (name, arr) in [("n1", &self.n1), ("n2", &self.n2)] {
            if arr.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::InvalidInput(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.gamma21.iter().any(|&g| !(g.is_finite() && g > 0.0)) {
            return Err(Error::InvalidInput("gamma21 must be finite and > 0".into()));
        }
        Ok(())
    }

    /// Uniform grid on [0, k_max].
    pub fn uniform_grid(k_max: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| k_max * i as f64 / (points - 1) as f64)
            .collect()
    }
}

/// Two-subband emitter sheet centered at z = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmitterSheet {
    pub lower: Subband,
    pub upper: Subband,
    /// Spin × valley degeneracy.
    pub degeneracy: f64,
    pub profile: KProfile,
}

impl EmitterSheet {
    pub fn new(lower: Subband, upper: Subband, degeneracy: f64, profile: KProfile) -> Result<Self> {
        profile.validate()?;
        if !(degeneracy.is_finite() && degeneracy > 0.0) {
            return Err(Error::InvalidInput("degeneracy must be > 0".into()));
        }
        Ok(Self {
            lower,
            upper,
            degeneracy,
            profile,
        })
    }

    /// Populations from Fermi functions with separate quasi-Fermi levels (erg).
    /// Equal levels give thermal equilibrium.
    pub fn fermi_profile(
        lower: &Subband,
        upper: &Subband,
        k: Vec<f64>,
        mu_lower: f64,
        mu_upper: f64,
        temperature: f64,
        gamma21: f64,
    ) -> KProfile {
        let n1 = k
            .iter()
            .map(|&kk| fermi_occupation(lower.energy(kk), mu_lower, temperature))
            .collect();
        let n2 = k
            .iter()
            .map(|&kk| fermi_occupation(upper.energy(kk), mu_upper, temperature))
            .collect();
        let gamma = vec![gamma21; k.len()];
        KProfile {
            k,
            n1,
            n2,
            gamma21: gamma,
        }
    }

    /// Well must fit inside the slab.
    pub fn check_fits(&self, stack: &DielectricStack) -> Result<()> {
        let half = 0.5 * stack.lz();
        for sb in [&self.lower, &self.upper] {
            let (lo, hi) = sb.psi.support();
            if lo < -half * (1.0 + 1e-12) || hi > half * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "envelope support [{lo:e}, {hi:e}] cm exceeds the slab"
                )));
            }
        }
        Ok(())
    }

    fn support(&self) -> (f64, f64) {
        let (a1, b1) = self.lower.psi.support();
        let (a2, b2) = self.upper.psi.support();
        (a1.min(a2), b1.max(b2))
    }

    /// ω21(k) = (W2k − W1k)/ħ.
    pub fn transition_freq(&self, k: f64) -> Result<f64> {
        let w = (self.upper.energy(k) - self.lower.energy(k)) / HBAR;
        if !(w > 0.0) {
            return Err(Error::NonPositiveFrequency { k });
        }
        Ok(w)
    }

    /// Effective dipole d̃21 = −e ∫ψ2(z)[∫_{−l/2}^{z} dz'/ε(ω,z')]ψ1(z) dz, esu·cm.
    pub fn effective_dipole(&self, stack: &DielectricStack, omega: f64) -> Result<f64> {
        self.check_fits(stack)?;
        let (lo, hi) = self.support();
        let mut breaks: Vec<f64> = stack
            .interfaces()
            .chain(self.lower.psi.kinks())
            .chain(self.upper.psi.kinks())
            .filter(|&z| z > lo && z < hi)
            .collect();
        breaks.push(lo);
        breaks.push(hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let integrand = |z: f64| -> Result<f64> {
            let inner = stack.inv_eps_between(omega, lo, z)?;
            Ok(self.upper.psi.value(z) * inner * self.lower.psi.value(z))
        };
        // layer permittivities are checked once up front
        stack.inv_eps_integral(omega)?;
        let integral = composite_over_segments(&breaks, |z| integrand(z).unwrap_or(f64::NAN))?;
        Ok(-E_CHARGE * integral)
    }

    /// Bare dipole d21 = −e⟨2|z|1⟩ (esu·cm).
    pub fn bare_dipole(&self) -> Result<f64> {
        let (lo, hi) = self.support();
        let mut breaks: Vec<f64> = self
            .lower
            .psi
            .kinks()
            .into_iter()
            .chain(self.upper.psi.kinks())
            .filter(|&z| z > lo && z < hi)
            .collect();
        breaks.push(lo);
        breaks.push(hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let integral = composite_over_segments(&breaks, |z| {
            self.upper.psi.value(z) * z * self.lower.psi.value(z)
        })?;
        Ok(-E_CHARGE * integral)
    }

    /// Trapezoid weights w_i such that Σ_k f(k) ≈ Σ_i w_i f(k_i).
    pub fn k_weights(&self, geometry: &Geometry) -> Vec<f64> {
        let k = &self.profile.k;
        let n = k.len();
        let pref = self.degeneracy * geometry.area() / (2.0 * PI);
        (0..n)
            .map(|i| {
                let left = if i > 0 { k[i] - k[i - 1] } else { 0.0 };
                let right = if i + 1 < n { k[i + 1] - k[i] } else { 0.0 };
                pref * k[i] * 0.5 * (left + right)
            })
            .collect()
    }

    /// Σ_k f(k) ≈ g·S/(2π)·∫ f(k) k dk on the radial grid.
    pub fn k_sum<F: FnMut(usize, f64) -> f64>(&self, geometry: &Geometry, mut f: F) -> f64 {
        self.k_weights(geometry)
            .iter()
            .zip(&self.profile.k)
            .enumerate()
            .map(|(i, (w, &k))| w * f(i, k))
            .sum()
    }

    /// Discrete k-ensemble on this sheet's grid (exactly the k_sum weights).
    pub fn ensemble(&self, geometry: &Geometry) -> Result<Ensemble> {
        let w = self.k_weights(geometry);
        let p = &self.profile;
        let bins = (0..p.k.len())
            .filter(|&i| w[i] > 0.0)
            .map(|i| {
                Ok(KBin {
                    weight: w[i],
                    n1: p.n1[i],
                    n2: p.n2[i],
                    gamma21: p.gamma21[i],
                    omega21: self.transition_freq(p.k[i])?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(bins)
    }
}

fn composite_over_segments<F: FnMut(f64) -> f64>(breaks: &[f64], mut f: F) -> Result<f64> {
    let gl = GaussLegendre::new(DIPOLE_GL_ORDER);
    let total = breaks[breaks.len() - 1] - breaks[0];
    let eval = |panels: usize, f: &mut F| -> f64 {
        breaks
            .windows(2)
            .map(|seg| {
                let share = ((seg[1] - seg[0]) / total * panels as f64).ceil().max(1.0) as usize;
                gl.integrate_composite(seg[0], seg[1], share, &mut *f)
            })
            .sum()
    };
    let mut panels = DIPOLE_START_PANELS;
    let mut prev = eval(panels, &mut f);
    let mut rel = f64::INFINITY;
    for _ in 0..DIPOLE_MAX_DOUBLINGS {
        panels *= 2;
        let next = eval(panels, &mut f);
        if !next.is_finite() {
            return Err(Error::QuadratureNotConverged { rel_change: f64::NAN });
        }
        let scale = next.abs().max(prev.abs());
        rel = if scale == 0.0 { 0.0 } else { (next - prev).abs() / scale };
        // envelopes that are (numerically) orthogonal give sums at round-off level
        if rel < DIPOLE_REL_TOL || (next - prev).abs() < 1e-14 * total {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged { rel_change: rel })
}

/// One k-space bin of the emitter ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KBin {
    /// Number of k-states represented (includes degeneracy and S/(2π)² measure).
    pub weight: f64,
    pub n1: f64,
    pub n2: f64,
    /// γ21, rad/s.
    pub gamma21: f64,
    /// ω21, rad/s.
    pub omega21: f64,
}

/// Discretized k-space ensemble consumed by the Langevin and Monte Carlo code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ensemble {
    pub bins: Vec<KBin>,
}

impl Ensemble {
    pub fn new(bins: Vec<KBin>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::InvalidInput("ensemble needs at least one bin".into()));
        }
        for b in &bins {
            if !(b.weight.is_finite() && b.weight >= 0.0) {
                return Err(Error::InvalidInput("bin weight must be >= 0".into()));
            }
            if !(0.0..=1.0).contains(&b.n1) || !(0.0..=1.0).contains(&b.n2) {
                return Err(Error::InvalidInput("bin populations must lie in [0, 1]".into()));
            }
            if !(b.gamma21.is_finite() && b.gamma21 > 0.0) {
                return Err(Error::InvalidInput("bin gamma21 must be > 0".into()));
            }
            if !b.omega21.is_finite() {
                return Err(Error::InvalidInput("bin omega21 must be finite".into()));
            }
        }
        Ok(Self { bins })
    }

    pub fn single(weight: f64, n1: f64, n2: f64, gamma21: f64, omega21: f64) -> Result<Self> {
        Self::new(vec![KBin {
            weight,
            n1,
            n2,
            gamma21,
            omega21,
        }])
    }

    /// Σ_k n2k.
    pub fn total_n2(&self) -> f64 {
        self.bins.iter().map(|b| b.weight * b.n2).sum()
    }

    /// Σ_k (n1k − n2k).
    pub fn total_inversion(&self) -> f64 {
        self.bins.iter().map(|b| b.weight * (b.n1 - b.n2)).sum()
    }

    fn n2_weighted_mean(&self, f: impl Fn(&KBin) -> f64) -> f64 {
        let w: f64 = self.total_n2();
        if w > 0.0 {
            self.bins.iter().map(|b| b.weight * b.n2 * f(b)).sum::<f64>() / w
        } else {
            let w: f64 = self.bins.iter().map(|b| b.weight).sum();
            self.bins.iter().map(|b| b.weight * f(b)).sum::<f64>() / w
        }
    }

    /// ⟨γ21⟩ weighted by the upper-subband population.
    pub fn mean_gamma21(&self) -> f64 {
        self.n2_weighted_mean(|b| b.gamma21)
    }

    /// ⟨ω21⟩ weighted by the upper-subband population.
    pub fn mean_omega21(&self) -> f64 {
        self.n2_weighted_mean(|b| b.omega21)
    }

    pub fn max_gamma21(&self) -> f64 {
        self.bins.iter().map(|b| b.gamma21).fold(0.0, f64::max)
    }

    pub fn min_gamma21(&self) -> f64 {
        self.bins.iter().map(|b| b.gamma21).fold(f64::INFINITY, f64::min)
    }

    /// Merges consecutive bins so at most `max_bins` remain.
    ///
    /// Populations are weight-averaged; γ21 and ω21 are averaged with weight·n2
    /// (weight alone when a group is empty).
    pub fn coarsen(&self, max_bins: usize) -> Result<Self> {
        let n = self.bins.len();
        if max_bins == 0 {
            return Err(Error::InvalidInput("max_bins must be >= 1".into()));
        }
        if n <= max_bins {
            return Ok(self.clone());
        }
        let bins = (0..max_bins)
            .map(|g| {
                let group = &self.bins[g * n / max_bins..(g + 1) * n / max_bins];
                let w: f64 = group.iter().map(|b| b.weight).sum();
                let wn2: f64 = group.iter().map(|b| b.weight * b.n2).sum();
                let avg = |f: &dyn Fn(&KBin) -> f64| -> f64 {
                    if wn2 > 0.0 {
                        group.iter().map(|b| b.weight * b.n2 * f(b)).sum::<f64>() / wn2
                    } else if w > 0.0 {
                        group.iter().map(|b| b.weight * f(b)).sum::<f64>() / w
                    } else {
                        group.iter().map(f).sum::<f64>() / group.len() as f64
                    }
                };
                let mean_w = |f: &dyn Fn(&KBin) -> f64| -> f64 {
                    if w > 0.0 {
                        group.iter().map(|b| b.weight * f(b)).sum::<f64>() / w
                    } else {
                        0.0
                    }
                };
                KBin {
                    weight: w,
                    n1: mean_w(&|b| b.n1),
                    n2: mean_w(&|b| b.n2),
                    gamma21: avg(&|b| b.gamma21),
                    omega21: avg(&|b| b.omega21),
                }
            })
            .collect();
        Self::new(bins)
    }
}
