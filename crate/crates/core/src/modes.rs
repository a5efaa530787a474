//! Quasi-TEM modes of the strip line, the (0,1) waveguide and the TE01N
//! rectangular cavity: dispersion, in-plane mode profiles and the
//! field-quantization constant.

use crate::dielectric::DielectricStack;
use crate::error::{Error, Result};
use crate::roots::{brent, count_sign_changes, BrentOptions};
use crate::units::{C_LIGHT, HBAR};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Advisory threshold on Lz·ω·√ε̄/c above which the thin-slab picture is strained.
pub const SUBWAVELENGTH_WARN: f64 = 0.3;

/// Points in the bracket scan used to detect multiple roots.
pub const BRACKET_SCAN_POINTS: usize = 64;

/// Lateral dimensions and slab thickness, all in cm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl Geometry {
    pub fn new(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        for (name, v) in [("Lx", lx), ("Ly", ly), ("Lz", lz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { lx, ly, lz })
    }

    /// Geometry whose thickness is taken from `stack`.
    pub fn for_stack(lx: f64, ly: f64, stack: &DielectricStack) -> Result<Self> {
        Self::new(lx, ly, stack.lz())
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.lz
    }

    fn check_stack(&self, stack: &DielectricStack) -> Result<()> {
        if (self.lz - stack.lz()).abs() > 1e-12 * self.lz {
            return Err(Error::InvalidInput(format!(
                "geometry Lz = {:e} cm disagrees with stack thickness {:e} cm",
                self.lz,
                stack.lz()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

/// Which mode family and member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModeIndex {
    /// In-plane wavevector (1/cm) of a strip-line plane wave.
    PlaneWave { qx: f64, qy: f64 },
    /// Lowest (0,1) waveguide mode with axial wavenumber `qx` (1/cm).
    Waveguide { qx: f64 },
    /// TE01N cavity mode, N ≥ 1.
    Cavity { n: u32 },
}

impl ModeIndex {
    pub fn cavity(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cavity index N must be >= 1".into()));
        }
        Ok(ModeIndex::Cavity { n })
    }

    pub fn parity(&self) -> Option<Parity> {
        match self {
            ModeIndex::Cavity { n } if n % 2 == 1 => Some(Parity::Odd),
            ModeIndex::Cavity { .. } => Some(Parity::Even),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModeIndex::PlaneWave { .. } => "planewave",
            ModeIndex::Waveguide { .. } => "waveguide",
            ModeIndex::Cavity { .. } => "cavity",
        }
    }

    /// Squared transverse wavenumber K² entering ω²ε̄ = K²c².
    pub fn transverse_k2(&self, geometry: &Geometry) -> Result<f64> {
        let ky = PI / geometry.ly;
        let k2 = match *self {
            ModeIndex::PlaneWave { qx, qy } => qx * qx + qy * qy,
            ModeIndex::Waveguide { qx } => qx * qx + ky * ky,
            ModeIndex::Cavity { n } => {
                if n == 0 {
                    return Err(Error::InvalidInput("cavity index N must be >= 1".into()));
                }
                let kx = n as f64 * PI / geometry.lx;
                kx * kx + ky * ky
            }
        };
        if !(k2.is_finite() && k2 > 0.0) {
            return Err(Error::InvalidInput("transverse wavenumber must be non-zero".into()));
        }
        Ok(k2)
    }
}

/// In-plane mode profile ζ_ν(x, y).
pub fn zeta(mode: &ModeIndex, geometry: &Geometry, x: f64, y: f64) -> Result<Complex64> {
    let bounded_y = !matches!(mode, ModeIndex::PlaneWave { .. });
    let bounded_x = matches!(mode, ModeIndex::Cavity { .. });
    let tol = 1e-12;
    if bounded_y && y.abs() > 0.5 * geometry.ly * (1.0 + tol) {
        return Err(Error::OutOfDomain {
            z: y,
            lo: -0.5 * geometry.ly,
            hi: 0.5 * geometry.ly,
        });
    }
    if bounded_x && x.abs() > 0.5 * geometry.lx * (1.0 + tol) {
        return Err(Error::OutOfDomain {
            z: x,
            lo: -0.5 * geometry.lx,
            hi: 0.5 * geometry.lx,
        });
    }
    let cy = (PI * y / geometry.ly).cos();
    Ok(match *mode {
        ModeIndex::PlaneWave { qx, qy } => Complex64::from_polar(1.0, qx * x + qy * y),
        ModeIndex::Waveguide { qx } => Complex64::from_polar(cy, qx * x),
        ModeIndex::Cavity { n } => {
            let arg = n as f64 * PI * x / geometry.lx;
            let fx = if n % 2 == 1 { arg.cos() } else { arg.sin() };
            Complex64::new(cy * fx, 0.0)
        }
    })
}

/// ∫_S ζ ζ* d²r: S, S/2, S/4.
pub fn zeta_norm_integral(mode: &ModeIndex, geometry: &Geometry) -> f64 {
    let s = geometry.area();
    match mode {
        ModeIndex::PlaneWave { .. } => s,
        ModeIndex::Waveguide { .. } => 0.5 * s,
        ModeIndex::Cavity { .. } => 0.25 * s,
    }
}

/// |D_ν|² = 2πħω / (∫ζζ* · G(Lz, ω)), erg/cm³.
pub fn normalization_d2(
    stack: &DielectricStack,
    geometry: &Geometry,
    mode: &ModeIndex,
    omega: f64,
) -> Result<f64> {
    let g = stack.g_factor(omega)?;
    Ok(2.0 * PI * HBAR * omega / (zeta_norm_integral(mode, geometry) * g))
}

/// Ω² = |d̃|²·2πω / (ħ·Lx·Ly·G), the single-emitter coupling squared (rad²/s²).
pub fn rabi_squared(
    d_eff: f64,
    stack: &DielectricStack,
    geometry: &Geometry,
    omega: f64,
) -> Result<f64> {
    let g = stack.g_factor(omega)?;
    Ok(rabi_squared_with_g(d_eff, g, geometry, omega))
}

pub(crate) fn rabi_squared_with_g(d_eff: f64, g: f64, geometry: &Geometry, omega: f64) -> f64 {
    d_eff * d_eff * 2.0 * PI * omega / (HBAR * geometry.area() * g)
}

/// ∂(ω²ε̄)/∂ω with ε̄ = Lz/∫dz/ε, from the analytic layer derivatives.
pub fn dispersion_slope(stack: &DielectricStack, omega: f64) -> Result<f64> {
    let inv = stack.inv_eps_integral(omega)?;
    let dinv = stack.d_inv_eps_integral(omega)?;
    let lz = stack.lz();
    let eps_bar = lz / inv;
    let deps_bar = -lz * dinv / (inv * inv);
    Ok(2.0 * omega * eps_bar + omega * omega * deps_bar)
}

/// Relative residual of ω²/(K²c²) = Lz⁻¹∫dz/ε at `omega`.
pub fn dispersion_residual(
    stack: &DielectricStack,
    geometry: &Geometry,
    mode: &ModeIndex,
    omega: f64,
) -> Result<f64> {
    let k2 = mode.transverse_k2(geometry)?;
    let lhs = omega * omega / (k2 * C_LIGHT * C_LIGHT);
    let rhs = stack.inv_eps_integral(omega)? / stack.lz();
    Ok(((lhs - rhs) / lhs).abs())
}

/// A solved mode with quantities cached at its own frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSolution {
    pub omega: f64,
    pub mode: ModeIndex,
    /// |D_ν|², erg/cm³.
    pub d2: f64,
    /// G(Lz, ω), cm.
    pub g: f64,
    /// ∫_S ζζ* d²r, cm².
    pub zeta_norm: f64,
    /// ε̄ = Lz/∫dz/ε at ω.
    pub eps_bar: f64,
    /// Lz·ω·√ε̄/c exceeds [`SUBWAVELENGTH_WARN`].
    pub subwavelength_warning: bool,
}

impl ModeSolution {
    fn at(stack: &DielectricStack, geometry: &Geometry, mode: ModeIndex, omega: f64) -> Result<Self> {
        let g = stack.g_factor(omega)?;
        let zeta_norm = zeta_norm_integral(&mode, geometry);
        let eps_bar = stack.eps_bar(omega)?;
        let thickness_param = stack.lz() * omega * eps_bar.sqrt() / C_LIGHT;
        Ok(Self {
            omega,
            mode,
            d2: 2.0 * PI * HBAR * omega / (zeta_norm * g),
            g,
            zeta_norm,
            eps_bar,
            subwavelength_warning: thickness_param > SUBWAVELENGTH_WARN,
        })
    }

    /// Ω² for an emitter with effective dipole `d_eff` (esu·cm).
    pub fn rabi_squared(&self, d_eff: f64, geometry: &Geometry) -> f64 {
        rabi_squared_with_g(d_eff, self.g, geometry, self.omega)
    }

    /// |D̃_ν|² = 2πħω/(S·G), the direct-transition normalization.
    pub fn reduced_d2(&self, geometry: &Geometry) -> f64 {
        2.0 * PI * HBAR * self.omega / (geometry.area() * self.g)
    }
}

/// Solves ω²ε̄(ω) = K²c² for the requested mode.
///
/// Nondispersive stacks use the closed form; dispersive ones need `bracket`
/// inside a single transparency window.
pub fn solve_dispersion(
    stack: &DielectricStack,
    geometry: &Geometry,
    mode: ModeIndex,
    bracket: Option<(f64, f64)>,
) -> Result<ModeSolution> {
    geometry.check_stack(stack)?;
    let k2 = mode.transverse_k2(geometry)?;
    let k = k2.sqrt();
    if !stack.is_dispersive() {
        // ε̄ is frequency independent; evaluate at any positive ω
        let inv = stack.inv_eps_integral(1.0)?;
        let omega = k * C_LIGHT * (inv / stack.lz()).sqrt();
        return ModeSolution::at(stack, geometry, mode, omega);
    }
    let (lo, hi) = bracket.ok_or_else(|| {
        Error::InvalidInput("dispersive stack requires a frequency bracket".into())
    })?;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidInput(format!("invalid bracket [{lo:e}, {hi:e}]")));
    }
    stack.check_window(lo, hi)?;
    let lz = stack.lz();
    let f = |w: f64| -> Result<f64> {
        let inv = stack.inv_eps_integral(w)?;
        Ok(w * w * lz / (inv * k2 * C_LIGHT * C_LIGHT) - 1.0)
    };
    let changes = count_sign_changes(f, lo, hi, BRACKET_SCAN_POINTS)?;
    match changes {
        0 => return Err(Error::NoRootInBracket { lo, hi }),
        1 => {}
        count => return Err(Error::MultipleRoots { count, lo, hi }),
    }
    let omega = brent(f, lo, hi, BrentOptions::default())?;
    ModeSolution::at(stack, geometry, mode, omega)
}
