use num_complex::Complex64;

use super::{scaled_recurrence, LogReal, ScaledComplex};
use crate::{Error, Result};

/// Physicists' Hermite polynomials H_0(z)..H_{n_max}(z), log-scaled.
pub fn hermite_seq(z: Complex64, n_max: usize) -> Vec<ScaledComplex> {
    let two_z = 2.0 * z;
    scaled_recurrence(Complex64::new(1.0, 0.0), two_z, n_max, |k| {
        (two_z, Complex64::new(-2.0 * k as f64, 0.0))
    })
}

/// H_n(z), log-scaled.
pub fn hermite(n: usize, z: Complex64) -> ScaledComplex {
    hermite_seq(z, n)[n]
}

/// Diagonal H_{n,n}(r1, r2) of the two-index Hermite family
///
/// ```text
/// H_{n+1,m} = x1 H_{n,m} - n c11 H_{n-1,m} - m c12 H_{n,m-1},   x1 = c11 r1 + c12 r2
/// H_{0,m+1} = x2 H_{0,m} - m c22 H_{0,m-1},                     x2 = c22 r2 + c12 r1
/// ```
pub fn gen_hermite_diag(c11: f64, c12: f64, c22: f64, r1: f64, r2: f64, n: usize) -> Result<LogReal> {
    let seq = gen_hermite_diag_seq(c11, c12, c22, r1, r2, n, 1.0)?;
    Ok(seq[n] * LogReal::from_log(super::log_factorial(n as u64)))
}

/// `H_{n,n} lambda^n / n!` for n = 0..=n_max.
///
/// The table is filled in the scaled variable
/// `h_{n,m} = H_{n,m} sqrt(lambda^(n+m) / (n! m!))`, two rows at a time, each
/// row carrying its own log scale.
pub fn gen_hermite_diag_seq(
    c11: f64,
    c12: f64,
    c22: f64,
    r1: f64,
    r2: f64,
    n_max: usize,
    lambda: f64,
) -> Result<Vec<LogReal>> {
    gen_hermite_diag_seq_linear(c11 * r1 + c12 * r2, c22 * r2 + c12 * r1, c11, c12, c22, n_max, lambda)
}

/// As [`gen_hermite_diag_seq`], with the linear terms `x1 = c11 r1 + c12 r2`
/// and `x2 = c22 r2 + c12 r1` supplied directly. Useful when the r's are
/// singular but the x's are not.
pub fn gen_hermite_diag_seq_linear(
    x1: f64,
    x2: f64,
    c11: f64,
    c12: f64,
    c22: f64,
    n_max: usize,
    lambda: f64,
) -> Result<Vec<LogReal>> {
    if ![c11, c12, c22, x1, x2, lambda].iter().all(|v| v.is_finite()) || lambda <= 0.0 {
        return Err(Error::NonFinite("gen_hermite_diag coefficients"));
    }
    let w = n_max + 1;
    let sl = lambda.sqrt();

    let mut row0 = vec![0.0f64; w];
    row0[0] = 1.0;
    if w > 1 {
        row0[1] = x2 * sl;
    }
    for m in 1..n_max {
        let mf = m as f64;
        row0[m + 1] =
            x2 * (lambda / (mf + 1.0)).sqrt() * row0[m] - c22 * lambda * (mf / (mf + 1.0)).sqrt() * row0[m - 1];
    }
    let mut s0 = 0.0;
    rescale(&mut row0, &mut s0);

    let mut out = Vec::with_capacity(w);
    out.push(diag_entry(row0[0], s0));
    let mut prev: Vec<f64> = vec![0.0; w];
    let mut s_prev = 0.0;
    let mut cur = row0;
    let mut s_cur = s0;
    let mut next = vec![0.0f64; w];

    for n in 0..n_max {
        let nf = n as f64;
        let a = x1 * (lambda / (nf + 1.0)).sqrt();
        let b = c11 * lambda * (nf / (nf + 1.0)).sqrt() * (s_prev - s_cur).exp();
        let use_prev = n > 0;
        for m in 0..w {
            let mut v = a * cur[m];
            if use_prev {
                v -= b * prev[m];
            }
            if m > 0 {
                v -= c12 * lambda * (m as f64 / (nf + 1.0)).sqrt() * cur[m - 1];
            }
            next[m] = v;
        }
        let mut s_next = s_cur;
        rescale(&mut next, &mut s_next);
        if !next[n + 1].is_finite() {
            return Err(Error::NonFinite("gen_hermite_diag recursion"));
        }
        out.push(diag_entry(next[n + 1], s_next));
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        s_prev = s_cur;
        s_cur = s_next;
    }
    Ok(out)
}

fn rescale(row: &mut [f64], scale: &mut f64) {
    let m = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if m > 1e100 || (m < 1e-100 && m > 0.0) {
        for v in row.iter_mut() {
            *v /= m;
        }
        *scale += m.ln();
    }
}

fn diag_entry(v: f64, scale: f64) -> LogReal {
    let l = LogReal::from_real(v);
    if l.is_zero() {
        l
    } else {
        LogReal::new(l.sign(), l.logmag() + scale)
    }
}
