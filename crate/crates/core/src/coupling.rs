//! Interaction matrix elements between in-plane electron states for the
//! waveguide and cavity mode profiles, and their direct-transition weights.

use crate::error::{Error, Result};
use crate::modes::{zeta_norm_integral, Geometry, ModeIndex, Parity};
use crate::quadrature::Adaptive;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Below this |s·L| the half-sinc switches to its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Minimum number of sinc lobes per side for [`parseval_sum`].
pub const MIN_LOBES: usize = 40;

/// sin(sL/2)/(sL), finite at s = 0.
fn half_sinc(s: f64, l: f64) -> f64 {
    let x = s * l;
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        0.5 - x2 / 48.0 + x2 * x2 / 3840.0
    } else {
        (0.5 * x).sin() / x
    }
}

/// Y factor of the lowest transverse mode: (1/Ly)∫ e^{i(ky−ky')y} cos(πy/Ly) dy.
pub fn y_factor(ky: f64, ky_prime: f64, ly: f64) -> f64 {
    let b = PI / ly;
    half_sinc(ky + b - ky_prime, ly) + half_sinc(ky_prime + b - ky, ly)
}

/// X factor of cavity mode N: (1/Lx)∫ e^{i(kx−kx')x} {cos, sin}(Nπx/Lx) dx.
///
/// Odd N is real; even N is purely imaginary.
pub fn x_factor(kx: f64, kx_prime: f64, lx: f64, n: u32) -> Complex64 {
    let b = n as f64 * PI / lx;
    let tu = half_sinc(kx + b - kx_prime, lx);
    let tv = half_sinc(kx_prime + b - kx, lx);
    if n % 2 == 1 {
        Complex64::new(tu + tv, 0.0)
    } else {
        Complex64::new(0.0, tv - tu)
    }
}

/// (L/2π)∫|F(k, k')|²dk' over a window of `lobes` sinc lobes on each side of
/// the two main peaks; `factor` is one transverse factor.
fn parseval_1d<F: Fn(f64) -> f64>(k: f64, l: f64, b: f64, lobes: usize, factor2: F) -> Result<f64> {
    if lobes < MIN_LOBES {
        return Err(Error::WindowTooNarrow {
            lobes,
            min: MIN_LOBES,
        });
    }
    let step = 2.0 * PI / l;
    let half = lobes as f64 * step;
    let (a, z) = (k - b - half, k + b + half);
    // zeros of both half-sincs are spaced by 2π/L
    let first = k + b;
    let m_lo = ((a - first) / step).ceil() as i64;
    let m_hi = ((z - first) / step).floor() as i64;
    let breaks: Vec<f64> = (m_lo..=m_hi).map(|m| first + m as f64 * step).collect();
    let q = Adaptive::with_rel_tol(1e-12).integrate_with_breaks(factor2, a, z, &breaks)?;
    Ok(l / (2.0 * PI) * q.value)
}

/// Σ_{k'y} |Y|² as a truncated integral; tends to 1/2.
pub fn parseval_y(ky: f64, ly: f64, lobes: usize) -> Result<f64> {
    parseval_1d(ky, ly, PI / ly, lobes, |kp| y_factor(ky, kp, ly).powi(2))
}

/// Σ_{k'x} |X|² as a truncated integral; tends to 1/2 for either parity.
pub fn parseval_x(kx: f64, lx: f64, n: u32, lobes: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("cavity index N must be >= 1".into()));
    }
    parseval_1d(kx, lx, n as f64 * PI / lx, lobes, |kp| {
        x_factor(kx, kp, lx, n).norm_sqr()
    })
}

/// Σ_{k'} ζ_{k'k} ζ†_{kk'} for the mode: 1 for plane waves, the Y sum for the
/// waveguide and the X·Y product for the cavity.
pub fn parseval_sum(mode: &ModeIndex, geometry: &Geometry, k: (f64, f64), lobes: usize) -> Result<f64> {
    match *mode {
        ModeIndex::PlaneWave { .. } => Ok(1.0),
        ModeIndex::Waveguide { .. } => parseval_y(k.1, geometry.ly, lobes),
        ModeIndex::Cavity { n } => {
            Ok(parseval_x(k.0, geometry.lx, n, lobes)? * parseval_y(k.1, geometry.ly, lobes)?)
        }
    }
}

/// Direct-transition weight α_ν = sqrt(S⁻¹∫ζζ*): 1, 1/√2, 1/2.
pub fn alpha(mode: &ModeIndex, geometry: &Geometry) -> f64 {
    (zeta_norm_integral(mode, geometry) / geometry.area()).sqrt()
}

/// ζ^(ν)_{k'k} for in-plane wavevectors k = (kx, ky) and k' = (kx', ky').
///
/// Kronecker deltas over quasi-continuous momenta use a relative tolerance.
pub fn matrix_element(mode: &ModeIndex, geometry: &Geometry, k: (f64, f64), kp: (f64, f64)) -> Complex64 {
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    match *mode {
        ModeIndex::PlaneWave { qx, qy } => {
            if same(kp.0, k.0 + qx) && same(kp.1, k.1 + qy) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        ModeIndex::Waveguide { qx } => {
            if same(kp.0, k.0 + qx) {
                Complex64::new(y_factor(k.1, kp.1, geometry.ly), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        ModeIndex::Cavity { n } => x_factor(k.0, kp.0, geometry.lx, n) * y_factor(k.1, kp.1, geometry.ly),
    }
}

/// Tabulated matrix elements, for diagnostics only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixElementTable {
    pub mode: ModeIndex,
    pub k_grid: Vec<(f64, f64)>,
    pub k_prime_grid: Vec<(f64, f64)>,
    /// values[i][j] = ζ_{k'_j, k_i}.
    pub values: Vec<Vec<Complex64>>,
}

impl MatrixElementTable {
    pub fn build(
        mode: ModeIndex,
        geometry: &Geometry,
        k_grid: Vec<(f64, f64)>,
        k_prime_grid: Vec<(f64, f64)>,
    ) -> Self {
        let values = k_grid
            .iter()
            .map(|&k| {
                k_prime_grid
                    .iter()
                    .map(|&kp| matrix_element(&mode, geometry, k, kp))
                    .collect()
            })
            .collect();
        Self {
            mode,
            k_grid,
            k_prime_grid,
            values,
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        self.mode.parity()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}
