//! Stochastic cross-check of the analytic steady state.
//!
//! The field amplitude c and the bin polarizations P_b are integrated as
//! c-numbers in the frame rotating at ων. Because the system is linear, noise
//! with the normal-ordered covariance makes E|c|² equal to ⟨c†c⟩.

use crate::emitter::Ensemble;
use crate::error::{Error, Result};
use crate::langevin::{medium_response, LangevinParams};
use crate::units::bose_occupation;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_BINS: usize = 64;
pub const MIN_TRAJECTORIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdeConfig {
    /// Step, s.
    pub dt: f64,
    /// Trajectory length, s.
    pub t_end: f64,
    /// Discarded initial transient, s.
    pub burn_in: f64,
    pub n_trajectories: usize,
    pub seed: u64,
    /// Number of k bins simulated (≤ 64); finer ensembles are coarsened.
    pub k_modes: usize,
}

impl SdeConfig {
    /// Checks the step and burn-in against the fastest and slowest rates.
    pub fn validate(&self, ensemble: &Ensemble, omega_nu: f64, gamma_total: f64) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > 0.0 && self.burn_in >= 0.0) {
            return Err(Error::InvalidInput("dt, t_end must be > 0 and burn_in >= 0".into()));
        }
        if self.t_end <= self.burn_in + self.dt {
            return Err(Error::InvalidInput("t_end must exceed burn_in by at least one step".into()));
        }
        if self.n_trajectories < MIN_TRAJECTORIES {
            return Err(Error::InvalidInput(format!(
                "n_trajectories must be >= {MIN_TRAJECTORIES}"
            )));
        }
        if self.k_modes == 0 || self.k_modes > MAX_BINS {
            return Err(Error::InvalidInput(format!("k_modes must lie in 1..={MAX_BINS}")));
        }
        let max_det = ensemble
            .bins
            .iter()
            .map(|b| (b.omega21 - omega_nu).abs())
            .fold(0.0, f64::max);
        let fastest = ensemble.max_gamma21().max(gamma_total).max(max_det);
        let limit = 0.1 / fastest;
        if self.dt >= limit {
            return Err(Error::StepTooLarge { dt: self.dt, limit });
        }
        let slowest = ensemble.min_gamma21().min(gamma_total);
        if self.burn_in < 5.0 / slowest {
            return Err(Error::InvalidInput(format!(
                "burn_in {:e} s must be at least 5/min(gamma21, Gamma_t) = {:e} s",
                self.burn_in,
                5.0 / slowest
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn burn_in_steps(&self) -> usize {
        (self.burn_in / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub photon_number_mean: f64,
    /// 1σ standard error from the spread of per-trajectory means.
    pub std_error: f64,
    /// Independent samples behind the error bar (trajectories).
    pub n_effective_samples: usize,
    /// Time samples averaged per trajectory.
    pub samples_per_trajectory: usize,
}

impl McEstimate {
    /// |mean − reference| in units of σ (∞ if σ = 0 and they differ).
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.photon_number_mean - reference).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Linear Euler-Maruyama map x' = M x + ξ with E[ξξ†] = diag(q), state
/// ordered as (c, P_1, …, P_B).
struct EmSystem {
    /// Per-bin 1 + dt(−iΔ − γ21).
    a_bin: Vec<Complex64>,
    /// Per-bin i·g·(n1 − n2)·W·dt.
    k_bin: Vec<Complex64>,
    /// Per-bin noise amplitude sqrt(γ21 n2 W dt) per quadrature.
    s_bin: Vec<f64>,
    a_c: f64,
    /// i·g·dt.
    k_c: Complex64,
    s_c: f64,
}

impl EmSystem {
    fn new(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, params: &LangevinParams, dt: f64) -> Self {
        let g = rabi2.sqrt();
        let a_bin = ensemble
            .bins
            .iter()
            .map(|b| Complex64::new(1.0 - b.gamma21 * dt, -(b.omega21 - omega_nu) * dt))
            .collect();
        let k_bin = ensemble
            .bins
            .iter()
            .map(|b| Complex64::new(0.0, g * (b.n1 - b.n2) * b.weight * dt))
            .collect();
        let s_bin = ensemble
            .bins
            .iter()
            .map(|b| (b.gamma21 * b.n2 * b.weight * dt).sqrt())
            .collect();
        let thermal = params.gamma_r * bose_occupation(omega_nu, params.t_r)
            + params.gamma_sigma * bose_occupation(omega_nu, params.t_sigma);
        Self {
            a_bin,
            k_bin,
            s_bin,
            a_c: 1.0 - params.cavity_loss() * dt,
            k_c: Complex64::new(0.0, g * dt),
            s_c: (thermal * dt).sqrt(),
        }
    }

    fn step(&self, c: &mut Complex64, p: &mut [Complex64], rng: &mut ChaCha8Rng) {
        let mut sum_p = Complex64::new(0.0, 0.0);
        let c_old = *c;
        for (i, pb) in p.iter_mut().enumerate() {
            sum_p += *pb;
            let mut next = self.a_bin[i] * *pb + self.k_bin[i] * c_old;
            let s = self.s_bin[i];
            if s > 0.0 {
                next += Complex64::new(s * rng.sample::<f64, _>(StandardNormal), s * rng.sample::<f64, _>(StandardNormal));
            }
            *pb = next;
        }
        let mut next = self.a_c * c_old + self.k_c * sum_p;
        if self.s_c > 0.0 {
            next += Complex64::new(
                self.s_c * rng.sample::<f64, _>(StandardNormal),
                self.s_c * rng.sample::<f64, _>(StandardNormal),
            );
        }
        *c = next;
    }

    fn transition_matrix(&self) -> DMatrix<Complex64> {
        let n = self.a_bin.len() + 1;
        let mut m = DMatrix::zeros(n, n);
        m[(0, 0)] = Complex64::new(self.a_c, 0.0);
        for i in 0..self.a_bin.len() {
            m[(0, i + 1)] = self.k_c;
            m[(i + 1, 0)] = self.k_bin[i];
            m[(i + 1, i + 1)] = self.a_bin[i];
        }
        m
    }

    fn noise_covariance(&self) -> DMatrix<Complex64> {
        let n = self.a_bin.len() + 1;
        let mut q = DMatrix::zeros(n, n);
        q[(0, 0)] = Complex64::new(2.0 * self.s_c * self.s_c, 0.0);
        for (i, s) in self.s_bin.iter().enumerate() {
            q[(i + 1, i + 1)] = Complex64::new(2.0 * s * s, 0.0);
        }
        q
    }
}

fn trajectory_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn prepare(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, params: &LangevinParams, cfg: &SdeConfig) -> Result<Ensemble> {
    let binned = ensemble.coarsen(cfg.k_modes.min(MAX_BINS))?;
    let gamma = medium_response(&binned, rabi2, omega_nu).gamma;
    let gt = params.total_loss(gamma)?;
    // the fed-back polarization damps the field at rate γ, so the step bound uses Γt
    cfg.validate(&binned, omega_nu, gt)?;
    Ok(binned)
}

/// Time-averaged |c|² after burn-in, averaged over independent trajectories.
///
/// Trajectory i draws from the ChaCha8 stream (seed, i); per-trajectory
/// means are reduced in index order, so results do not depend on threading.
pub fn simulate_steady_state(
    ensemble: &Ensemble,
    rabi2: f64,
    omega_nu: f64,
    params: &LangevinParams,
    cfg: &SdeConfig,
) -> Result<McEstimate> {
    let binned = prepare(ensemble, rabi2, omega_nu, params, cfg)?;
    let sys = EmSystem::new(&binned, rabi2, omega_nu, params, cfg.dt);
    let steps = cfg.steps();
    let burn = cfg.burn_in_steps();
    let kept = steps - burn;
    let means: Vec<f64> = (0..cfg.n_trajectories)
        .into_par_iter()
        .map(|i| {
            let mut rng = trajectory_rng(cfg.seed, i);
            let mut c = Complex64::new(0.0, 0.0);
            let mut p = vec![Complex64::new(0.0, 0.0); binned.bins.len()];
            for _ in 0..burn {
                sys.step(&mut c, &mut p, &mut rng);
            }
            let mut acc = 0.0;
            for _ in 0..kept {
                sys.step(&mut c, &mut p, &mut rng);
                acc += c.norm_sqr();
            }
            acc / kept as f64
        })
        .collect();
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let var = means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        photon_number_mean: mean,
        std_error: (var / n).sqrt(),
        n_effective_samples: means.len(),
        samples_per_trajectory: kept,
    })
}

/// Exact stationary E|c|² of the Euler-Maruyama chain at step `dt`, from
/// the discrete Lyapunov equation Σ = MΣM† + Q solved by doubling.
pub fn em_stationary_moment(ensemble: &Ensemble, rabi2: f64, omega_nu: f64, params: &LangevinParams, dt: f64) -> Result<f64> {
    let gamma = medium_response(ensemble, rabi2, omega_nu).gamma;
    params.total_loss(gamma)?;
    let sys = EmSystem::new(ensemble, rabi2, omega_nu, params, dt);
    let mut a = sys.transition_matrix();
    let mut sigma = sys.noise_covariance();
    for _ in 0..200 {
        let incr = &a * &sigma * a.adjoint();
        let done = incr[(0, 0)].norm() <= 1e-17 * sigma[(0, 0)].norm() && a.norm() < 1e-8;
        sigma += incr;
        a = &a * &a;
        if done {
            return Ok(sigma[(0, 0)].re);
        }
        if !a.iter().all(|v| v.is_finite()) {
            break;
        }
    }
    Err(Error::Unstable {
        gamma_total: params.total_loss(gamma).unwrap_or(f64::NAN),
    })
}

/// Least-squares slope of log(error) against log(dt).
pub fn log_log_slope(dts: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseReport {
    /// Configured 2Γn.
    pub configured: f64,
    /// Sample mean of |dW|²/dt.
    pub empirical: f64,
    pub std_error: f64,
    /// Anti-normal minus normal covariance per step, divided by 2Γdt.
    pub commutator_ratio: f64,
    /// Sample mean of dWr*·dWσ/dt between two independent streams.
    pub cross_covariance: Complex64,
    pub cross_std_error: f64,
    pub pass: bool,
}

/// Draws `steps` increments of a reservoir stream with rate `gamma` and
/// occupation `occupation` and checks its normal-ordered covariance, the
/// commutator shadow and independence from a second stream.
pub fn check_noise_correlators(gamma: f64, occupation: f64, dt: f64, steps: usize, seed: u64) -> Result<NoiseReport> {
    if !(gamma >= 0.0 && occupation >= 0.0 && dt > 0.0) || steps < 2 {
        return Err(Error::InvalidInput("noise check needs gamma, occupation >= 0, dt > 0, steps >= 2".into()));
    }
    let normal = 2.0 * gamma * occupation * dt;
    let anti = 2.0 * gamma * (occupation + 1.0) * dt;
    let s = (0.5 * normal).sqrt();
    let mut rng_a = trajectory_rng(seed, 0);
    let mut rng_b = trajectory_rng(seed, 1);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut cross = Complex64::new(0.0, 0.0);
    for _ in 0..steps {
        let a = Complex64::new(s * rng_a.sample::<f64, _>(StandardNormal), s * rng_a.sample::<f64, _>(StandardNormal));
        let b = Complex64::new(s * rng_b.sample::<f64, _>(StandardNormal), s * rng_b.sample::<f64, _>(StandardNormal));
        let v = a.norm_sqr() / dt;
        sum += v;
        sum_sq += v * v;
        cross += a.conj() * b / dt;
    }
    let n = steps as f64;
    let empirical = sum / n;
    let var = (sum_sq / n - empirical * empirical).max(0.0) * n / (n - 1.0);
    let std_error = (var / n).sqrt();
    let cross = cross / n;
    // each quadrature of a product of independent complex Gaussians has variance (normal/dt)²/2
    let cross_std_error = (normal / dt) / (2.0 * n).sqrt();
    let configured = normal / dt;
    let commutator_ratio = if gamma > 0.0 { (anti - normal) / (2.0 * gamma * dt) } else { 1.0 };
    let within = |d: f64, se: f64| if se == 0.0 { d == 0.0 } else { d <= 5.0 * se };
    let pass = within((empirical - configured).abs(), std_error)
        && (commutator_ratio - 1.0).abs() < 1e-12
        && within(cross.re.abs(), cross_std_error)
        && within(cross.im.abs(), cross_std_error);
    Ok(NoiseReport {
        configured,
        empirical,
        std_error,
        commutator_ratio,
        cross_covariance: cross,
        cross_std_error,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    pub amplitude: f64,
    pub exact_amplitude: f64,
    /// |amplitude − exact| / exact.
    pub rel_error: f64,
    /// First-order bound dt·(Γ² + Δ²)·t on the relative error.
    pub bound: f64,
    /// Fitted phase slope, rad/s (clockwise rotation is negative).
    pub phase_slope: f64,
    pub pass: bool,
}

/// Noise-free field decay dc = −(Γ + iΔ)c dt from c(0) = 1, stepped exactly
/// as in [`simulate_steady_state`].
pub fn check_decay_without_noise(gamma: f64, detuning: f64, t: f64, dt: f64) -> Result<DecayReport> {
    if !(gamma >= 0.0 && t > 0.0 && dt > 0.0) {
        return Err(Error::InvalidInput("decay check needs gamma >= 0, t > 0, dt > 0".into()));
    }
    let steps = (t / dt).round() as usize;
    let a = Complex64::new(1.0 - gamma * dt, -detuning * dt);
    let mut c = Complex64::new(1.0, 0.0);
    // unwrapped phase, fitted through the origin
    let (mut phase, mut sxy, mut sxx) = (0.0, 0.0, 0.0);
    for n in 1..=steps {
        let next = a * c;
        phase += (next / c).arg();
        c = next;
        let tn = n as f64 * dt;
        sxy += tn * phase;
        sxx += tn * tn;
    }
    let exact = (-gamma * t).exp();
    let amplitude = c.norm();
    let rel_error = (amplitude - exact).abs() / exact;
    let bound = dt * (gamma * gamma + detuning * detuning) * t;
    Ok(DecayReport {
        amplitude,
        exact_amplitude: exact,
        rel_error,
        bound,
        phase_slope: sxy / sxx,
        pass: rel_error <= bound.max(1e-12),
    })
}

/// A named stochastic test case in units where γ21 = 1.
#[derive(Debug, Clone)]
pub struct McCase {
    pub name: &'static str,
    pub ensemble: Ensemble,
    pub rabi2: f64,
    pub omega_nu: f64,
    pub params: LangevinParams,
}

impl McCase {
    /// Analytic steady-state photon number for the same binned ensemble.
    pub fn analytic(&self) -> Result<f64> {
        crate::langevin::photon_number(&self.ensemble, self.rabi2, self.omega_nu, &self.params)
    }

    pub fn simulate(&self, cfg: &SdeConfig) -> Result<McEstimate> {
        simulate_steady_state(&self.ensemble, self.rabi2, self.omega_nu, &self.params, cfg)
    }
}

/// Single resonant bin: Ω² = 0.01, Σn2 = 100, Γt = γ21 = 1. Expected 0.5.
pub fn single_bin_case() -> McCase {
    McCase {
        name: "single_bin",
        ensemble: Ensemble::single(100.0, 1.0, 1.0, 1.0, 1.0).expect("valid bin"),
        rabi2: 0.01,
        omega_nu: 1.0,
        params: LangevinParams::new(1.0, 0.0, 0.0, 0.0).expect("valid params"),
    }
}

/// Sixteen bins with detunings in [−1.875, 1.875] and graded populations.
pub fn detuned_ensemble_case() -> McCase {
    let bins = (0..16)
        .map(|b| {
            let n = 0.3 + 0.04 * b as f64;
            crate::emitter::KBin {
                weight: 10.0,
                n1: n,
                n2: n,
                gamma21: 0.8 + 0.025 * b as f64,
                omega21: 1.0 + 0.25 * (b as f64 - 7.5),
            }
        })
        .collect();
    McCase {
        name: "detuned_16_bins",
        ensemble: Ensemble::new(bins).expect("valid bins"),
        rabi2: 0.01,
        omega_nu: 1.0,
        params: LangevinParams::new(1.0, 0.0, 0.0, 0.0).expect("valid params"),
    }
}

/// No emitters, radiative reservoir at occupation 1.
pub fn thermal_case() -> McCase {
    let omega_nu = 1.0;
    let t_r = crate::units::HBAR * omega_nu / std::f64::consts::LN_2;
    McCase {
        name: "thermal",
        ensemble: Ensemble::single(1.0, 0.0, 0.0, 1.0, omega_nu).expect("valid bin"),
        rabi2: 0.01,
        omega_nu,
        params: LangevinParams::new(1.0, 0.0, t_r, 0.0).expect("valid params"),
    }
}

/// Default stochastic settings in units of 1/γ21.
pub fn default_sde_config(dt: f64, n_trajectories: usize, seed: u64) -> SdeConfig {
    SdeConfig {
        dt,
        t_end: 50.0,
        burn_in: 10.0,
        n_trajectories,
        seed,
        k_modes: 16,
    }
}
