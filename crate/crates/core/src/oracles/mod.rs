//! Independent checks on the expansion engine: the one-loop series rebuilt
//! from the large-argument asymptotics of `Ψ(α, γ; z)`, and direct numerical
//! integration of the parametric representation.

mod compare;
mod psi;
mod quadrature;

use thiserror::Error;

use crate::expansion::ExpandError;

pub use compare::{compare_series, ComparisonReport, KappaDeviation};
pub use psi::oneloop_series_via_psi;
pub use quadrature::{gauss_laguerre_eval, gauss_laguerre_rule, NumericResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("numerical evaluation needs numeric propagator powers")]
    SymbolicPowersUnsupported,
    #[error("product quadrature supports at most 5 lines, diagram has {0}")]
    TooManyLines(usize),
    #[error("node count {0} outside [8, 128]")]
    NodesOutOfRange(usize),
    #[error("kappa = {0} outside the supported range")]
    KappaOutOfRange(f64),
    #[error("dimension must be positive")]
    NonPositiveDimension,
    #[error("asymptotic series supported up to order 12, requested {0}")]
    OrderTooHigh(u32),
    #[error("invariant matrix must be {0}x{0}")]
    BadKinematics(usize),
    #[error(transparent)]
    Expand(#[from] ExpandError),
}
