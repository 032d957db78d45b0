//! Photon-number statistics for single-mode field states and the
//! first-order correlation sums of a two-level system coupled to them.
//!
//! The crate is split into four layers:
//!
//! * [`specfun`]: log-scaled special-function kernels (factorials, Hermite,
//!   Laguerre, Legendre, terminating hypergeometric series).
//! * [`states`]: closed-form diagonal density matrices `rho_nn` for twelve
//!   state families, their closed-form moments, and alternative evaluators used
//!   for cross-validation.
//! * [`dynamics`]: resonant and detuned correlation sums `S1(z)` on a
//!   normalized-time grid, long-time averages and envelope diagnostics.
//! * [`oracle`]: an independent truncated Fock-space construction of every
//!   family by explicit operator algebra.
//!
//! [`xcheck`] ties the alternative evaluators and the oracle together into a
//! pass/fail suite.

pub mod dynamics;
mod error;
pub mod oracle;
pub mod specfun;
pub mod states;
pub mod xcheck;

pub use error::{Error, Result};
pub use states::{Family, Moments, NmaxPolicy, PhotonDistribution, StateSpec, Variant};
