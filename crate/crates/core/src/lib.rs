//! Phase sensitivity of a parity-detection Mach–Zehnder interferometer fed with
//! photon-subtracted, photon-added and photon-catalyzed two-mode squeezed thermal states.
//!
//! Closed forms live in [`ngstate`] and [`interferometer`]; [`oracle`] is an independent
//! truncated-Fock pipeline used to check them.
//! [`cli`] drives sweeps, figure data and the `ngtmst` binary.

// `!(x >= lo)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod error;
pub mod gaussian;
pub mod interferometer;
pub mod ngstate;
pub mod oracle;

pub use error::{Error, Result};
pub use interferometer::{
    find_optimal_squeezing, merit_thermal, merit_vacuum, parity_expectation, parity_expectation_tmst, parity_signal,
    phase_uncertainty, phase_uncertainty_tmst, PhaseSensitivityRecord, SqueezingTemplate,
};
pub use ngstate::{success_probability, wigner_normalized, wigner_unnormalized, NgParams, NgState, OpKind};
