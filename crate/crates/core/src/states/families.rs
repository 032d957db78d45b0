//! Closed-form photon-number distributions, one function per family.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rayon::prelude::*;

use super::distribution::PhotonDistribution;
use super::spec::{NT_SWITCH, R_SWITCH};
use crate::specfun::{
    gauss2f1_terminating, gen_hermite_diag_seq_linear, hermite_seq, laguerre_seq, legendre_reversed_seq, ln_binomial,
    log_factorial, ComplexSum, LogReal, ScaledComplex,
};
use crate::{Error, Result, Variant};

/// Absolute error allowed on any single probability before an evaluation is
/// reported as having lost precision.
pub const PRECISION_FLOOR: f64 = 1e-10;

fn lnf(n: usize) -> f64 {
    log_factorial(n as u64)
}

/// n * ln(x) with the convention 0 * ln(0) = 0.
fn nlog(n: usize, lnx: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * lnx
    }
}

fn finish(probs: Vec<f64>, cond: f64) -> Result<PhotonDistribution> {
    PhotonDistribution::from_raw(probs, cond)
}

fn point_mass(level: usize, n_max: usize) -> Vec<f64> {
    let mut p = vec![0.0; n_max + 1];
    p[level] = 1.0;
    p
}

pub fn pmf_coherent(beta_sq: f64, n_max: usize) -> Result<PhotonDistribution> {
    if beta_sq == 0.0 {
        return finish(point_mass(0, n_max), 1.0);
    }
    let lb = beta_sq.ln();
    let p = (0..=n_max).map(|n| (-beta_sq + nlog(n, lb) - lnf(n)).exp()).collect();
    finish(p, 1.0)
}

pub fn pmf_thermal(n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    if n_t == 0.0 {
        return finish(point_mass(0, n_max), 1.0);
    }
    let lq = -(1.0 / n_t).ln_1p();
    let l0 = -n_t.ln_1p();
    finish((0..=n_max).map(|n| (l0 + nlog(n, lq)).exp()).collect(), 1.0)
}

pub fn pmf_fock(l: usize, n_max: usize) -> Result<PhotonDistribution> {
    if l > n_max {
        return Err(Error::invalid(format!("Fock level {l} exceeds n_max {n_max}")));
    }
    finish(point_mass(l, n_max), 1.0)
}

/// Coherent light mixed with thermal noise, through the Laguerre form of the
/// confluent series: `M(-n, 1, -y) = L_n(-y)`.
pub fn pmf_mixed_coherent_thermal(beta_sq: f64, n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    if n_t < NT_SWITCH {
        return pmf_coherent(beta_sq, n_max);
    }
    let y = beta_sq / (n_t * (n_t + 1.0));
    let lag = laguerre_seq(0.0, -y, n_max);
    let l0 = -beta_sq / (n_t + 1.0) - n_t.ln_1p();
    let lq = -(1.0 / n_t).ln_1p();
    let p = lag
        .iter()
        .enumerate()
        .map(|(n, l)| LogReal::new(l.sign(), l.logmag() + l0 + nlog(n, lq)).to_real())
        .collect();
    finish(p, 1.0)
}

pub fn pmf_squeezed_vacuum(r: f64, n_max: usize) -> Result<PhotonDistribution> {
    let lht = (0.5 * r.tanh()).ln();
    let lch = r.cosh().ln();
    let p = (0..=n_max)
        .map(|n| {
            if n % 2 == 1 {
                0.0
            } else {
                (nlog(n, lht) + lnf(n) - lch - 2.0 * lnf(n / 2)).exp()
            }
        })
        .collect();
    finish(p, 1.0)
}

/// The squeezed-Fock kernel S(r, n, l) through its terminating 2F1 form.
/// Returns zero when n - l is odd, and the condition number of the series.
pub fn squeezed_fock_kernel(r: f64, n: usize, l: usize) -> Result<(LogReal, f64)> {
    if (n + l) % 2 == 1 {
        return Ok((LogReal::ZERO, 1.0));
    }
    let sh = r.sinh();
    let x = -1.0 / (sh * sh);
    let lhs = (0.5 * sh).ln();
    let (f, pow, half) = if n.is_multiple_of(2) {
        (
            gauss2f1_terminating(-(l as f64) / 2.0, -(n as f64) / 2.0, 0.5, x)?,
            n,
            (n / 2, l / 2),
        )
    } else {
        (
            gauss2f1_terminating(-((l - 1) as f64) / 2.0, -((n - 1) as f64) / 2.0, 1.5, x)?,
            n - 1,
            ((n - 1) / 2, (l - 1) / 2),
        )
    };
    if f.value.is_zero() {
        return Ok((LogReal::ZERO, f.condition));
    }
    let ls = 2.0 * (nlog(pow, lhs) + f.value.logmag() - lnf(half.0) - lnf(half.1));
    Ok((LogReal::from_log(ls), f.condition))
}

/// Squeezed number state `S|l>`.
pub fn pmf_squeezed_fock(r: f64, l: usize, n_max: usize) -> Result<PhotonDistribution> {
    if r < R_SWITCH {
        return pmf_fock(l, n_max);
    }
    let lch = r.cosh().ln();
    let lht = (0.5 * r.tanh()).ln();
    let rows: Vec<Result<(f64, f64)>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let (s, cond) = squeezed_fock_kernel(r, n, l)?;
            if s.is_zero() {
                return Ok((0.0, cond));
            }
            let lp = lnf(l) + lnf(n) - (2 * n + 1) as f64 * lch + (l as f64 - n as f64) * lht + s.logmag();
            let p = lp.exp();
            let terms = (n.min(l) / 2 + 1) as f64;
            if 2.0 * p * cond * terms * f64::EPSILON > PRECISION_FLOOR {
                return Err(Error::Precision(format!(
                    "squeezed-fock kernel at n={n}, l={l}, r={r}: condition {cond:e}"
                )));
            }
            Ok((p, cond))
        })
        .collect();
    collect_rows(rows)
}

fn collect_rows(rows: Vec<Result<(f64, f64)>>) -> Result<PhotonDistribution> {
    let mut probs = Vec::with_capacity(rows.len());
    let mut cond = 1.0f64;
    for row in rows {
        let (p, c) = row?;
        probs.push(p);
        cond = cond.max(c);
    }
    finish(probs, cond)
}

/// Squeezed thermal light.
///
/// The Legendre closed form `pre(n) v^n P_n(1/v)` is evaluated as
/// `pre(n) R_n / n_T^n` with `R_n = n_T^n v^n P_n(1/v)` from a real
/// recurrence in `w = n_T^2 v^2`, which needs no complex arithmetic on either
/// side of the critical squeezing and stays exact at `v = 0` and `n_T = 0`.
pub fn pmf_squeezed_thermal(r: f64, n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    let sh = r.sinh();
    let s2r = (2.0 * r).sinh();
    let a = 2.0 * n_t + 1.0;
    let b = n_t + 1.0;
    let lg = (a * sh * sh / (b * b)).ln_1p();
    let w = n_t * n_t - s2r * s2r * a * a / (4.0 * b * b);
    let rs = legendre_reversed_seq(n_t, w, n_max);
    let lb = b.ln();
    let p = rs
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let l = -((2 * n + 1) as f64) / 2.0 * lg - (n + 1) as f64 * lb;
            LogReal::new(v.sign(), v.logmag() + l).to_real()
        })
        .collect();
    finish(p, 1.0)
}

/// Argument of the Hermite polynomial for the squeezed coherent state
/// `D(beta) S(theta) |0>`, theta = psi + pi.
pub fn squeezed_coherent_argument(beta_sq: f64, r: f64, psi: f64) -> Complex64 {
    let theta = psi + std::f64::consts::PI;
    let t = r.tanh();
    let e = Complex64::from_polar(1.0, theta / 2.0);
    (beta_sq / 2.0).sqrt() * (e.conj() / t.sqrt() + e * t.sqrt())
}

pub fn pmf_squeezed_coherent(beta_sq: f64, r: f64, psi: f64, n_max: usize) -> Result<PhotonDistribution> {
    if r < R_SWITCH {
        return pmf_coherent(beta_sq, n_max);
    }
    let t = r.tanh();
    let z = squeezed_coherent_argument(beta_sq, r, psi);
    let hs = hermite_seq(z, n_max);
    let ln_n1 = -beta_sq * (1.0 - psi.cos() * t) - r.cosh().ln();
    let lht = (0.5 * t).ln();
    let p = hs
        .iter()
        .enumerate()
        .map(|(n, h)| (ln_n1 + nlog(n, lht) - lnf(n) + 2.0 * h.ln_abs()).exp())
        .collect();
    finish(p, 1.0)
}

/// Coefficients of the two-index Hermite representation of the mixed
/// squeezed-coherent/thermal state: `(x, c11, c12, ln N2)` with x1 = x2 = x.
pub fn vourdas_coefficients(beta_sq: f64, n_t: f64, r: f64) -> (f64, f64, f64, f64) {
    let t = r.tanh();
    let ch = r.cosh();
    let k = 1.0 / (ch * ch * ((1.0 - t) * n_t + (-2.0 * r).exp()));
    let lam = 1.0 / (ch * ch * ((1.0 + t) * n_t + (2.0 * r).exp()));
    let c11 = 0.5 * (1.0 + n_t) * (lam - k) + t * (1.0 + 1.0 / n_t);
    let c12 = -0.5 * (1.0 + n_t) * (lam + k);
    // (c11 + c12) r1 with the singular factor of r1 cancelled analytically.
    let x = k * (-r).exp() * ch * beta_sq.sqrt() * ((1.0 + n_t) / n_t).sqrt();
    let em = n_t + (-r).exp() * ch;
    let ep = n_t + r.exp() * ch;
    let ln_n2 = -beta_sq / em - 0.5 * (ep.ln() + em.ln());
    (x, c11, c12, ln_n2)
}

/// Mixed squeezed-coherent and thermal state (amplitude squeezing, psi = pi).
pub fn pmf_mixed_squeezed_coherent_thermal(beta_sq: f64, n_t: f64, r: f64, n_max: usize) -> Result<PhotonDistribution> {
    if n_t < NT_SWITCH {
        return Err(Error::invalid(format!(
            "mixed squeezed-coherent/thermal state needs nt >= {NT_SWITCH:e} (got {n_t})"
        )));
    }
    if r < R_SWITCH {
        return pmf_mixed_coherent_thermal(beta_sq, n_t, n_max);
    }
    let (x, c11, c12, ln_n2) = vourdas_coefficients(beta_sq, n_t, r);
    let lam = n_t / (1.0 + n_t);
    let h = gen_hermite_diag_seq_linear(x, x, c11, c12, c11, n_max, lam)?;
    let p = h
        .iter()
        .map(|v| LogReal::new(v.sign(), v.logmag() + ln_n2).to_real())
        .collect();
    finish(p, 1.0)
}

/// Gaussian-state parameters in the form used by the q-sum:
/// `ln piQ(0)`, `A~`, `B~`, `C~`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianKernel {
    pub ln_piq0: f64,
    pub a: f64,
    pub b: Complex64,
    pub c: Complex64,
}

impl GaussianKernel {
    /// From the noise parameters `A = <da+ da>`, `B = -<da da>` and the mean
    /// amplitude `C`, with `den = (1+A)^2 - |B|^2` supplied by the caller so
    /// that it can use a cancellation-free expression.
    pub fn from_noise(a: f64, b: Complex64, c: Complex64, den: f64, a_tilde: f64) -> Self {
        let ln_piq0 = -0.5 * den.ln() - ((1.0 + a) * c.norm_sqr() + (b * c.conj() * c.conj()).re) / den;
        GaussianKernel {
            ln_piq0,
            a: a_tilde.max(0.0),
            b: b / den,
            c: ((1.0 + a) * c + b * c.conj()) / den,
        }
    }

    /// `rho_n = piQ(0) sum_q C(n,q) / q! |G_q|^2 / 4^q A~^(n-q)` with
    /// `G_{q+1} = 2 C~ G_q - 4 q B~ G_{q-1}`; every term is nonnegative.
    pub fn probs(&self, n_max: usize) -> Vec<f64> {
        let two_c = 2.0 * self.c;
        let four_b = 4.0 * self.b;
        let g = crate::specfun::scaled_recurrence(Complex64::new(1.0, 0.0), two_c, n_max, |q| {
            (two_c, -(q as f64) * four_b)
        });
        let lf: Vec<f64> = (0..=n_max).map(lnf).collect();
        // |G_q|^2 / (4^q q!^2); the binomial then needs only n! / (n-q)!.
        let lg: Vec<f64> = g
            .iter()
            .enumerate()
            .map(|(q, gq)| 2.0 * gq.ln_abs() - 2.0 * q as f64 * LN_2 - 2.0 * lf[q])
            .collect();
        let la = if self.a > 0.0 { self.a.ln() } else { f64::NEG_INFINITY };
        (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let term = |q: usize| {
                    let tail = if q == n { 0.0 } else { (n - q) as f64 * la };
                    lg[q] - lf[n - q] + tail
                };
                let mx = (0..=n).map(term).fold(f64::NEG_INFINITY, f64::max);
                if mx == f64::NEG_INFINITY {
                    return 0.0;
                }
                let s: f64 = (0..=n).map(|q| (term(q) - mx).exp()).sum();
                (self.ln_piq0 + lf[n] + mx + s.ln()).exp()
            })
            .collect()
    }
}

/// Noise parameters and displacement of the displaced squeezed thermal state.
pub fn dsts_kernel(beta_sq: f64, n_t: f64, r: f64, psi: f64, variant: Variant) -> GaussianKernel {
    let beta = beta_sq.sqrt();
    let (sh, ch) = (r.sinh(), r.cosh());
    let e = Complex64::from_polar(1.0, psi);
    let a = n_t + (2.0 * n_t + 1.0) * sh * sh;
    let b = -(2.0 * n_t + 1.0) * e * sh * ch;
    let c = match variant {
        Variant::Dsts => Complex64::new(beta, 0.0),
        Variant::Sdts => beta * ch + beta * e * sh,
    };
    let den = n_t * n_t + (n_t + 0.5) * (1.0 + (2.0 * r).cosh());
    let a_tilde = n_t * (n_t + 1.0) / den;
    GaussianKernel::from_noise(a, b, c, den, a_tilde)
}

pub fn pmf_displaced_squeezed_thermal(
    beta_sq: f64,
    n_t: f64,
    r: f64,
    psi: f64,
    variant: Variant,
    n_max: usize,
) -> Result<PhotonDistribution> {
    let k = dsts_kernel(beta_sq, n_t, r, psi, variant);
    if !(k.ln_piq0.is_finite() && k.c.re.is_finite() && k.c.im.is_finite()) {
        return Err(Error::NonFinite("displaced squeezed thermal kernel"));
    }
    finish(k.probs(n_max), 1.0)
}

/// Displaced number state `D(beta)|l>`.
pub fn pmf_displaced_number(beta_sq: f64, l: usize, n_max: usize) -> Result<PhotonDistribution> {
    if beta_sq == 0.0 {
        return pmf_fock(l, n_max);
    }
    let lb = beta_sq.ln();
    let p = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let (lo, hi) = if n <= l { (n, l) } else { (l, n) };
            let lag = laguerre_seq((hi - lo) as f64, beta_sq, lo)[lo];
            if lag.is_zero() {
                return 0.0;
            }
            (lnf(lo) - lnf(hi) + (hi - lo) as f64 * lb - beta_sq + 2.0 * lag.logmag()).exp()
        })
        .collect();
    finish(p, 1.0)
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Hermite arguments `(x_m, x_n)` of the squeezed displaced number state.
pub fn sdns_arguments(beta_sq: f64, r: f64, psi: f64) -> (Complex64, Complex64) {
    let beta = beta_sq.sqrt();
    let s2 = (2.0 * r).sinh().sqrt();
    let xm = -beta / s2 * Complex64::from_polar(1.0, -psi / 2.0);
    let h = Complex64::from_polar(1.0, (psi - std::f64::consts::PI) / 2.0);
    let xn = -beta * (r.cosh() * h + r.sinh() * h.conj()) / s2;
    (xm, xn)
}

/// Squeezed displaced number state `D(beta) S(theta) |m>`, theta = psi + pi.
///
/// The normalization is folded into every term of the i-sum before the sum
/// is taken, so the amplitude is formed at its natural scale.
pub fn pmf_squeezed_displaced_number(
    beta_sq: f64,
    r: f64,
    psi: f64,
    m: usize,
    n_max: usize,
) -> Result<PhotonDistribution> {
    if r < R_SWITCH {
        return pmf_displaced_number(beta_sq, m, n_max);
    }
    let t = r.tanh();
    let (xm, xn) = sdns_arguments(beta_sq, r, psi);
    let hm = hermite_seq(xm, m);
    let hn = hermite_seq(xn, n_max);
    let lht = (0.5 * t).ln();
    let base = -lnf(m) - r.cosh().ln() - beta_sq * (1.0 - psi.cos() * t);
    let lc = (2.0 / r.sinh()).ln();
    let rows: Vec<Result<(f64, f64)>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let half = 0.5 * (lnf(n) + (m + n) as f64 * lht + base);
            let terms: Vec<(f64, Complex64)> = (0..=m.min(n))
                .map(|i| {
                    let (a, b): (&ScaledComplex, &ScaledComplex) = (&hm[m - i], &hn[n - i]);
                    let l = half + ln_binomial(m as u64, i as u64) - lnf(n - i) + nlog(i, lc) + a.ln_abs() + b.ln_abs();
                    (l, i_pow(i) * a.phase() * b.phase())
                })
                .filter(|(l, _)| *l > f64::NEG_INFINITY)
                .collect();
            amplitude_probability(&terms, m + 2, n)
        })
        .collect();
    collect_rows(rows)
}

/// |sum_i exp(l_i) phase_i|^2 with a precision check; returns (rho, condition).
pub(crate) fn amplitude_probability(terms: &[(f64, Complex64)], n_terms: usize, n: usize) -> Result<(f64, f64)> {
    let mx = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return Ok((0.0, 1.0));
    }
    let mut s = ComplexSum::new();
    for (l, ph) in terms {
        s.add((l - mx).exp() * ph);
    }
    let amp = s.value().norm() * mx.exp();
    let err = s.abs_sum() * mx.exp() * 4.0 * f64::EPSILON * n_terms as f64;
    if 2.0 * amp * err + err * err > PRECISION_FLOOR {
        return Err(Error::Precision(format!(
            "amplitude sum at n={n} lost precision (condition {:e})",
            s.condition()
        )));
    }
    Ok((amp * amp, s.condition()))
}
