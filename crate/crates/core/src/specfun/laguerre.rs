use num_complex::Complex64;

use super::{ln_binomial, log_factorial, scaled_recurrence, sum_logreal, LogReal};

/// L_0^alpha(x)..L_{n_max}^alpha(x) by the forward recurrence
/// `(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}`.
pub fn laguerre_seq(alpha: f64, x: f64, n_max: usize) -> Vec<LogReal> {
    let y1 = Complex64::new(1.0 + alpha - x, 0.0);
    scaled_recurrence(Complex64::new(1.0, 0.0), y1, n_max, |k| {
        let kf = k as f64;
        let inv = 1.0 / (kf + 1.0);
        (
            Complex64::new((2.0 * kf + 1.0 + alpha - x) * inv, 0.0),
            Complex64::new(-(kf + alpha) * inv, 0.0),
        )
    })
    .into_iter()
    .map(|s| {
        let sign = if s.is_zero() {
            0
        } else if s.mant.re > 0.0 {
            1
        } else {
            -1
        };
        LogReal::new(sign, s.ln_abs())
    })
    .collect()
}

/// Associated Laguerre polynomial L_n^alpha(x) for integer alpha.
///
/// Nonnegative alpha uses the recurrence. Negative alpha uses the explicit
/// finite sum `sum_j (-1)^j C(n+alpha, n-j) x^j / j!` with the binomial
/// extended to a negative upper index; when `n + alpha >= 0` the terms with
/// `alpha + j < 0` vanish.
pub fn assoc_laguerre(n: usize, alpha: i64, x: f64) -> LogReal {
    if alpha >= 0 {
        return laguerre_seq(alpha as f64, x, n)[n];
    }
    let top = n as i64 + alpha;
    let lx = LogReal::from_real(x);
    let terms: Vec<LogReal> = (0..=n)
        .map(|j| {
            let k = (n - j) as u64;
            let binom = gen_binomial(top, k);
            if binom.is_zero() {
                return LogReal::ZERO;
            }
            let sj = if j % 2 == 1 { -LogReal::ONE } else { LogReal::ONE };
            sj * binom * lx.powi(j as i64) / LogReal::from_log(log_factorial(j as u64))
        })
        .collect();
    sum_logreal(&terms).0
}

/// C(a, k) for integer a (possibly negative) and k >= 0.
fn gen_binomial(a: i64, k: u64) -> LogReal {
    if a >= 0 {
        let l = ln_binomial(a as u64, k);
        return LogReal::from_log(l);
    }
    // C(a, k) = (-1)^k C(k - a - 1, k)
    let l = ln_binomial(k + (-a) as u64 - 1, k);
    let v = LogReal::from_log(l);
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}
