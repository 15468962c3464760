//! Quantum Brownian motion of an oscillator coupled to a Drude bath, with
//! initial states carrying the system–bath correlations of a measurement on
//! the global thermal state.
//!
//! The crate computes the exact time-dependent master-equation coefficients,
//! the equilibrium autocorrelation behind them, and closed-form Wigner
//! functions and decoherence exponents for two cat-like initial states.
//! Independent brute-force oracles live in [`oracle`].
//!
//! Units: ħ = m = k_B = 1.

// Negated comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bath;
pub mod catstates;
pub mod cli;
pub mod coefficients;
pub mod equilibrium;
pub mod error;
pub mod green;
pub mod oracle;
pub mod quad;

pub use bath::{BathModel, Correlations, MatsubaraTable, Temperature};
pub use catstates::{ProjectedCatState, TwoTranslationState, WignerDecomposition};
pub use coefficients::{BathStack, CoefficientSample, StationaryState};
pub use equilibrium::{Autocorrelation, EquilibriumState};
pub use error::{QbmError, Result};
pub use green::{GreenSolution, LocalCoefficients};
