use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, mapped onto process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Physics,
    Numerical,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Physics => 3,
            ErrorClass::Numerical => 4,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point z = {z:e} cm lies outside the slab [{lo:e}, {hi:e}]")]
    OutOfDomain { z: f64, lo: f64, hi: f64 },
    #[error("medium is not transparent at omega = {omega:e} rad/s: {reason}")]
    NonTransparent { omega: f64, reason: String },
    #[error("no root of the dispersion relation in [{lo:e}, {hi:e}] rad/s")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error("{count} sign changes in bracket [{lo:e}, {hi:e}] rad/s; narrow the bracket")]
    MultipleRoots { count: usize, lo: f64, hi: f64 },
    #[error("root finder did not converge after {iterations} iterations")]
    RootNotConverged { iterations: usize },
    #[error("quadrature did not converge (last relative change {rel_change:e})")]
    QuadratureNotConverged { rel_change: f64 },
    #[error("transition frequency is not positive at k = {k:e} 1/cm")]
    NonPositiveFrequency { k: f64 },
    #[error("group velocity vanishes at omega = {omega:e} rad/s")]
    ZeroGroupVelocity { omega: f64 },
    #[error("no propagating mode at omega = {omega:e} rad/s")]
    NoPropagatingMode { omega: f64 },
    #[error("omega = {omega:e} rad/s is below the waveguide cutoff {cutoff:e} rad/s")]
    BelowCutoff { omega: f64, cutoff: f64 },
    #[error("omega = {omega:e} rad/s sits at the waveguide cutoff; use the cavity rate")]
    AtCutoff { omega: f64 },
    #[error("operation requires a uniform nondispersive stack")]
    NonUniformStack,
    #[error("Unstable: total field decay rate {gamma_total:e} rad/s is not positive")]
    Unstable { gamma_total: f64 },
    #[error("time step {dt:e} s too large; must be below {limit:e} s")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("integration window of {lobes} sinc lobes is too narrow (need at least {min})")]
    WindowTooNarrow { lobes: usize, min: usize },
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Short variant name, used in machine-parsable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::NonTransparent { .. } => "NonTransparent",
            Error::NoRootInBracket { .. } => "NoRootInBracket",
            Error::MultipleRoots { .. } => "MultipleRoots",
            Error::RootNotConverged { .. } => "RootNotConverged",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::NonPositiveFrequency { .. } => "NonPositiveFrequency",
            Error::ZeroGroupVelocity { .. } => "ZeroGroupVelocity",
            Error::NoPropagatingMode { .. } => "NoPropagatingMode",
            Error::BelowCutoff { .. } => "BelowCutoff",
            Error::AtCutoff { .. } => "AtCutoff",
            Error::NonUniformStack => "NonUniformStack",
            Error::Unstable { .. } => "Unstable",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::WindowTooNarrow { .. } => "WindowTooNarrow",
            Error::Config(_) => "Config",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_)
            | Error::Config(_)
            | Error::StepTooLarge { .. }
            | Error::WindowTooNarrow { .. } => ErrorClass::Config,
            Error::OutOfDomain { .. }
            | Error::NonTransparent { .. }
            | Error::NonPositiveFrequency { .. }
            | Error::ZeroGroupVelocity { .. }
            | Error::NoPropagatingMode { .. }
            | Error::BelowCutoff { .. }
            | Error::AtCutoff { .. }
            | Error::NonUniformStack
            | Error::Unstable { .. } => ErrorClass::Physics,
            Error::NoRootInBracket { .. }
            | Error::MultipleRoots { .. }
            | Error::RootNotConverged { .. }
            | Error::QuadratureNotConverged { .. } => ErrorClass::Numerical,
        }
    }
}
