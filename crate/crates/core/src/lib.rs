//! Spontaneous and thermal emission of 2D intersubband emitters inside
//! planar dielectric stacks: mode quantization, golden-rule rates,
//! Langevin steady state and a stochastic cross-check.

pub mod cli;
pub mod config;
pub mod coupling;
pub mod dielectric;
pub mod emitter;
pub mod error;
pub mod golden_rule;
pub mod langevin;
pub mod mc_validator;
pub mod modes;
pub mod output;
pub mod quadrature;
pub mod roots;
pub mod units;

pub use error::{Error, ErrorClass, Result};
