//! Simulation library for a driven two-oscillator quantum heat engine.
//!
//! Three descriptions of the same machine are implemented and can be
//! cross-validated against each other:
//!
//! * [`local`] — local Lindblad master equation (baths damp the bare
//!   oscillators), with closed-form steady state,
//! * [`global`] — global (secular) master equation (baths damp the
//!   eigenmodes of the coupled system),
//! * [`exact`] — unitary Gaussian evolution of system plus two finite
//!   discretized baths, used as the numerical benchmark.
//!
//! A two-qubit analogue of the machine lives in [`qubit`]. Shared
//! Gaussian-state machinery (covariance matrices, two-mode fidelity) is in
//! [`gaussian`]; machine parameters and thermal/spectral functions in
//! [`engine`]; steady-state summaries in [`report`].
//!
//! Units: energies in Ω_c, currents and power in Ω_c², ħ = k_B = 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod engine;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod global;
pub mod linalg;
pub mod local;
pub mod ode;
pub mod qubit;
pub mod report;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
