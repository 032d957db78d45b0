use num_complex::Complex64;

use super::{scaled_recurrence, LogReal, ScaledComplex};

/// P_0(z)..P_{n_max}(z) by Bonnet's recurrence in complex arithmetic.
pub fn legendre_seq(z: Complex64, n_max: usize) -> Vec<ScaledComplex> {
    scaled_recurrence(Complex64::new(1.0, 0.0), z, n_max, |k| {
        let kf = k as f64;
        ((2.0 * kf + 1.0) / (kf + 1.0) * z, Complex64::new(-kf / (kf + 1.0), 0.0))
    })
}

/// P_n(z), log-scaled.
pub fn legendre_complex(n: usize, z: Complex64) -> ScaledComplex {
    legendre_seq(z, n)[n]
}

/// `R_n = s^n v^n P_n(1/v)` for `w = s^2 v^2`, n = 0..=n_max.
///
/// Multiplying Bonnet's recurrence by `(s v)^(k+1)` gives
/// `(k+1) R_{k+1} = (2k+1) s R_k - k w R_{k-1}`, which stays real and finite
/// through `v = 0` and for imaginary `v`.
pub fn legendre_reversed_seq(s: f64, w: f64, n_max: usize) -> Vec<LogReal> {
    scaled_recurrence(Complex64::new(1.0, 0.0), Complex64::new(s, 0.0), n_max, |k| {
        let kf = k as f64;
        (
            Complex64::new((2.0 * kf + 1.0) * s / (kf + 1.0), 0.0),
            Complex64::new(-kf * w / (kf + 1.0), 0.0),
        )
    })
    .into_iter()
    .map(|v| {
        let sign = if v.is_zero() {
            0
        } else if v.mant.re > 0.0 {
            1
        } else {
            -1
        };
        LogReal::new(sign, v.ln_abs())
    })
    .collect()
}
