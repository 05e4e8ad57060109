//! Exact non-equilibrium dynamics of two coupled mechanical oscillators,
//! each damped by its own independent thermal bath.
//!
//! The library solves the coupled quantum Langevin equations of the
//! two-oscillator + two-bath model: normal-mode diagonalization and
//! counterterm renormalization ([`model`]), bath spectral functions and noise
//! kernels ([`spectral`]), Laplace-domain and time-domain Green's functions in
//! every coupling regime ([`greens`]), stationary correlation and coherence
//! functions with their high-temperature limits ([`correlators`]), the
//! perturbative early-time growth of bath-mediated coherence
//! ([`entanglement`]), and an exact finite-bath Gaussian simulator used to
//! validate all of the closed forms ([`oracle`]). The [`run`] module drives
//! the `duet-baths` CLI: config parsing, regime resolution, CSV emission,
//! and parameter sweeps.
//!
//! Units: ħ = k_B = mass = 1 throughout.

pub mod correlators;
pub mod entanglement;
pub mod error;
pub mod fit;
pub mod greens;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod run;
pub mod spectral;

pub use error::{Error, Result};
