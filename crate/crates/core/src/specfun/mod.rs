//! Special-function kernels evaluated in log-scaled arithmetic.
//!
//! Everything here is a pure function. Sequences are produced by forward
//! three-term recurrences whose running pair is rescaled whenever it drifts
//! far from unit magnitude, so degrees in the thousands never overflow.

mod factorial;
mod hermite;
mod hypergeometric;
mod laguerre;
mod legendre;
mod logreal;
mod scaled;
mod sum;

pub use factorial::{ln_binomial, ln_gamma_half, log_double_factorial_odd, log_factorial, LN_SQRT_PI};
pub use hermite::{gen_hermite_diag, gen_hermite_diag_seq, gen_hermite_diag_seq_linear, hermite, hermite_seq};
pub use hypergeometric::{gauss2f1_terminating, Terminating2F1};
pub use laguerre::{assoc_laguerre, laguerre_seq};
pub use legendre::{legendre_complex, legendre_reversed_seq, legendre_seq};
pub use logreal::LogReal;
pub use scaled::{scaled_recurrence, ScaledComplex};
pub use sum::{log_sum_exp, sum_logreal, sum_ratio_series, ComplexSum, NeumaierSum};

/// Complex scalar used for Hermite arguments and amplitudes.
pub type ComplexVal = num_complex::Complex64;
