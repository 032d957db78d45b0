//! Independent closed forms used only to cross-check the primary evaluators.
//!
//! Each function here follows a different route to a distribution already
//! produced in [`super::families`]: an alternative series, a hypergeometric
//! rather than Legendre form, a quadrature or ladder-operator expansion, and so on.

use num_complex::Complex64;

use super::distribution::PhotonDistribution;
use super::families::{amplitude_probability, squeezed_fock_kernel, GaussianKernel, PRECISION_FLOOR};
use crate::specfun::{
    gauss2f1_terminating, hermite_seq, legendre_complex, ln_binomial, ln_gamma_half, log_double_factorial_odd,
    log_factorial, log_sum_exp, ComplexSum, LogReal,
};
use crate::{Error, Result};

fn lnf(n: usize) -> f64 {
    log_factorial(n as u64)
}

/// S(r, n, l) as the direct alternating m-sum, with the last factorial read
/// as `[m + (l - n)/2]!`.
pub fn squeezed_fock_kernel_sum(r: f64, n: usize, l: usize) -> LogReal {
    if (n + l) % 2 == 1 {
        return LogReal::ZERO;
    }
    // Start at the first m with a non-negative last factorial and step by
    // term ratios.
    let d = (l as i64 - n as i64) / 2;
    let m0 = (-d).max(0) as usize;
    if 2 * m0 > n {
        return LogReal::ZERO;
    }
    let h2 = (0.5 * r.sinh()).powi(2);
    let k0 = (m0 as i64 + d) as usize;
    let first = 2.0 * m0 as f64 * h2.sqrt().ln() - lnf(m0) - lnf(n - 2 * m0) - lnf(k0);
    let ratios = (m0..n / 2).map(|m| {
        let k = (m as i64 + d) as f64;
        -h2 * ((n - 2 * m) * (n - 2 * m - 1)) as f64 / ((m + 1) as f64 * (k + 1.0))
    });
    let (sum, _) = crate::specfun::sum_ratio_series(ratios);
    if sum.is_zero() {
        return LogReal::ZERO;
    }
    let sign = if m0.is_multiple_of(2) { 1 } else { -1 };
    let s = LogReal::new(sign * sum.sign(), sum.logmag() + first);
    s * s
}

/// Squeezed-Fock distribution built on the m-sum kernel.
pub fn pmf_squeezed_fock_sum(r: f64, l: usize, n_max: usize) -> Result<PhotonDistribution> {
    let lch = r.cosh().ln();
    let lht = (0.5 * r.tanh()).ln();
    let p = (0..=n_max)
        .map(|n| {
            let s = squeezed_fock_kernel_sum(r, n, l);
            if s.is_zero() {
                0.0
            } else {
                (lnf(l) + lnf(n) - (2 * n + 1) as f64 * lch + (l as f64 - n as f64) * lht + s.logmag()).exp()
            }
        })
        .collect();
    PhotonDistribution::from_raw(p, 1.0)
}

/// Squeezed thermal light as a thermal mixture of squeezed number states,
/// truncating the l-sum once the remaining thermal weight is below `eps`.
pub fn pmf_squeezed_thermal_lsum(r: f64, n_t: f64, n_max: usize, eps: f64) -> Result<PhotonDistribution> {
    let q = n_t / (n_t + 1.0);
    let l_max = if n_t == 0.0 {
        0
    } else {
        (eps.ln() / q.ln()).ceil().max(0.0) as usize
    };
    let lch = r.cosh().ln();
    let lht = (0.5 * r.tanh()).ln();
    let mut probs = vec![0.0; n_max + 1];
    let mut cond = 1.0f64;
    for l in 0..=l_max {
        let lw = -(n_t + 1.0).ln() + if l == 0 { 0.0 } else { l as f64 * q.ln() };
        for (n, p) in probs.iter_mut().enumerate() {
            let (s, c) = squeezed_fock_kernel(r, n, l)?;
            cond = cond.max(c);
            if !s.is_zero() {
                *p +=
                    (lw + lnf(l) + lnf(n) - (2 * n + 1) as f64 * lch + (l as f64 - n as f64) * lht + s.logmag()).exp();
            }
        }
    }
    PhotonDistribution::from_raw(probs, cond)
}

/// Critical squeezing at which the Legendre variable vanishes.
pub fn critical_squeezing(n_t: f64) -> f64 {
    0.5 * (2.0 * n_t + 1.0).ln()
}

/// `v^2 = 1 - (sinh 2r / sinh 2r_s)^2`; negative above critical squeezing.
pub fn legendre_v_squared(r: f64, n_t: f64) -> f64 {
    let rs = critical_squeezing(n_t);
    let x = (2.0 * r).sinh() / (2.0 * rs).sinh();
    1.0 - x * x
}

fn squeezed_thermal_prefactor(r: f64, n_t: f64, n: usize) -> f64 {
    let a = 2.0 * n_t + 1.0;
    let b = n_t + 1.0;
    let lg = (a * r.sinh().powi(2) / (b * b)).ln_1p();
    let nl = if n == 0 { 0.0 } else { n as f64 * n_t.ln() };
    -((2 * n + 1) as f64) / 2.0 * lg + nl - (n + 1) as f64 * b.ln()
}

/// Squeezed thermal light through the terminating 2F1 in `v^2`.
///
/// The lower parameter is negative, so the series alternates; close to
/// `v^2 = 1` and at large n it cancels badly and reports a precision error.
pub fn pmf_squeezed_thermal_2f1(r: f64, n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    let v2 = legendre_v_squared(r, n_t);
    let mut probs = Vec::with_capacity(n_max + 1);
    let mut cond = 1.0f64;
    for n in 0..=n_max {
        let nf = n as f64;
        let f = gauss2f1_terminating(-nf / 2.0, -(nf - 1.0) / 2.0, (1.0 - 2.0 * nf) / 2.0, v2)?;
        cond = cond.max(f.condition);
        let l = squeezed_thermal_prefactor(r, n_t, n) + log_double_factorial_odd(n as u64) - lnf(n);
        let p = LogReal::new(f.value.sign(), f.value.logmag() + l).to_real();
        if p.abs() * f.condition * f64::EPSILON * (n + 2) as f64 > PRECISION_FLOOR {
            return Err(Error::Precision(format!(
                "hypergeometric form at n={n} has condition {:e}",
                f.condition
            )));
        }
        probs.push(p);
    }
    PhotonDistribution::from_raw(probs, cond)
}

/// Squeezed thermal light through `v^n P_n(1/v)` with complex `v`
/// (`Im v >= 0`) taken literally; errors when the result is not real.
pub fn pmf_squeezed_thermal_legendre_literal(r: f64, n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    let v = Complex64::new(legendre_v_squared(r, n_t), 0.0).sqrt();
    if v.norm() == 0.0 {
        return pmf_squeezed_thermal_critical(r, n_t, n_max);
    }
    let lv = v.ln();
    let mut probs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let p = legendre_complex(n, v.inv());
        let ln_val = p.ln_abs() + n as f64 * lv.re + squeezed_thermal_prefactor(r, n_t, n);
        let phase = p.phase() * Complex64::from_polar(1.0, n as f64 * lv.im);
        if phase.im.abs() > 1e-8 * phase.norm() {
            return Err(Error::Precision(format!(
                "Legendre form has imaginary residue {:e} at n={n}",
                phase.im
            )));
        }
        probs.push(phase.re.signum() * ln_val.exp());
    }
    PhotonDistribution::from_raw(probs, 1.0)
}

/// The degenerate form valid only at the critical squeezing.
pub fn pmf_squeezed_thermal_critical(r: f64, n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    let p = (0..=n_max)
        .map(|n| (squeezed_thermal_prefactor(r, n_t, n) + log_double_factorial_odd(n as u64) - lnf(n)).exp())
        .collect();
    PhotonDistribution::from_raw(p, 1.0)
}

/// Mixed coherent-thermal light through the confluent series
/// `M(-n, 1, -y) = sum_k C(n,k) y^k / k!`.
pub fn pmf_mixed_coherent_thermal_series(beta_sq: f64, n_t: f64, n_max: usize) -> Result<PhotonDistribution> {
    let y = beta_sq / (n_t * (n_t + 1.0));
    let ly = y.ln();
    let l0 = -beta_sq / (n_t + 1.0) - n_t.ln_1p();
    let lq = -(1.0 / n_t).ln_1p();
    let p = (0..=n_max)
        .map(|n| {
            let m = log_sum_exp((0..=n).map(|k| {
                let yk = if k == 0 { 0.0 } else { k as f64 * ly };
                ln_binomial(n as u64, k as u64) + yk - lnf(k)
            }));
            let nq = if n == 0 { 0.0 } else { n as f64 * lq };
            (l0 + nq + m).exp()
        })
        .collect();
    PhotonDistribution::from_raw(p, 1.0)
}

/// Mixed squeezed-coherent/thermal light from the P-representation
/// integral done quadrature by quadrature (amplitude squeezing).
///
/// The expansion factors enter as `2i C1 / sqrt(sinh 2r)` and
/// `2 C2 / sqrt(sinh 2r)`, and the inner Hermite argument carries `C2^2`,
/// which is the reading that reproduces the two-index Hermite form.
pub fn pmf_vourdas_quadrature_expansion(beta_sq: f64, n_t: f64, r: f64, n_max: usize) -> Result<PhotonDistribution> {
    if n_t <= 0.0 || r <= 0.0 {
        return Err(Error::invalid("quadrature expansion needs nt > 0 and r > 0"));
    }
    let s = (2.0 * r).sinh().sqrt();
    let t = r.tanh();
    let a0 = beta_sq.sqrt() * r.exp();
    let c1 = (n_t / ((2.0 * r).exp() + n_t * (1.0 + t))).sqrt();
    let c2 = (n_t / ((-2.0 * r).exp() + n_t * (1.0 - t))).sqrt();
    let x0 = a0 * (-2.0 * r).exp() * c2 * c2 / n_t;
    let h: Vec<f64> = hermite_seq(Complex64::new(x0 / s, 0.0), n_max)
        .iter()
        .map(|z| z.to_complex().re)
        .collect();
    let g2 = 2.0 * c2 / s;
    let g1 = 2.0 * c1 / s;
    let mut x = vec![vec![0.0f64; n_max + 1]; n_max + 1];
    let mut x_abs = vec![vec![0.0f64; n_max + 1]; n_max + 1];
    for k in 0..=n_max {
        for kp in 0..=n_max {
            let mut acc = ComplexSum::new();
            for l in 0..=k {
                for lp in 0..=kp {
                    let j = k - l + kp - lp;
                    if j % 2 == 1 {
                        continue;
                    }
                    let lm = ln_binomial(k as u64, l as u64)
                        + ln_binomial(kp as u64, lp as u64)
                        + j as f64 * g2.ln()
                        + ln_gamma_half(j as u64);
                    acc.add(Complex64::new(h[l] * h[lp] * lm.exp(), 0.0));
                }
            }
            x[k][kp] = acc.value().re * c2;
            x_abs[k][kp] = acc.abs_sum() * c2;
        }
    }
    let ln_const = -beta_sq / ((-r).exp() * r.cosh() + n_t) - (std::f64::consts::PI * r.cosh() * n_t).ln();
    let lht = (0.5 * t).ln();
    let i = Complex64::new(0.0, 1.0);
    let mut probs = Vec::with_capacity(n_max + 1);
    let mut cond = 1.0f64;
    for n in 0..=n_max {
        let mut acc = ComplexSum::new();
        let mut abs = 0.0;
        for k in 0..=n {
            for kp in 0..=n {
                let j = 2 * n - k - kp;
                if j % 2 == 1 {
                    continue;
                }
                let ph = i.powu((n - k) as u32) * (-i).powu((n - kp) as u32);
                let lm = ln_binomial(n as u64, k as u64)
                    + ln_binomial(n as u64, kp as u64)
                    + j as f64 * g1.ln()
                    + ln_gamma_half(j as u64);
                acc.add(ph * lm.exp() * c1 * x[k][kp]);
                abs += lm.exp() * c1 * x_abs[k][kp];
            }
        }
        let scale = (ln_const + n as f64 * lht - lnf(n)).exp();
        // Compensated sums leave a few roundings per term magnitude.
        let err = 16.0 * abs * scale * f64::EPSILON;
        if err > PRECISION_FLOOR {
            return Err(Error::Precision(format!(
                "quadrature expansion lost precision at n={n}"
            )));
        }
        let p = acc.value().re * scale;
        if p != 0.0 {
            cond = cond.max(abs * scale / p.abs());
        }
        probs.push(p);
    }
    PhotonDistribution::from_raw(probs, cond)
}

/// Squeezed displaced number state by expanding `D(beta) S |m>` as
/// `S D(gamma) (a+ cosh r + a e^{i theta} sinh r - gamma*)^m |0> / sqrt(m!)`
/// and applying the ladder operators to the squeezed displaced vacuum.
pub fn pmf_sdns_ladder(beta_sq: f64, r: f64, psi: f64, m: usize, n_max: usize) -> Result<PhotonDistribution> {
    let theta = psi + std::f64::consts::PI;
    let beta = beta_sq.sqrt();
    let (sh, ch, t) = (r.sinh(), r.cosh(), r.tanh());
    let eth = Complex64::from_polar(1.0, theta);
    let g = beta * ch + beta * eth * sh;
    let zg = g / (eth * (2.0 * r).sinh()).sqrt();
    let hs = hermite_seq(zg, n_max + m);
    let w = Complex64::new(0.5 * t, 0.0) * eth;
    let (lw, w_arg) = (w.norm().ln(), w.arg());
    let ln_e2 = -g.norm_sqr() + (g.conj() * g.conj() * eth).re * t;
    let lg = g.norm().ln();
    let gph = if g.norm() > 0.0 {
        -g.conj() / g.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let lv = sh.ln();
    let luv = (ch * sh / 2.0).ln();
    let rows: Vec<Result<(f64, f64)>> = (0..=n_max)
        .map(|n| {
            let half = 0.5 * (lnf(n) - lnf(m) - ch.ln() + ln_e2);
            let mut terms = Vec::new();
            for i in 0..=m {
                if i > 0 && g.norm() == 0.0 {
                    break;
                }
                let j = m - i;
                for k in 0..=j / 2 {
                    for s in 0..=n.min(j - 2 * k) {
                        let tt = j - 2 * k - s;
                        let kp = n - s + tt;
                        let l =
                            half + ln_binomial(m as u64, i as u64) + if i == 0 { 0.0 } else { i as f64 * lg } + lnf(j)
                                - lnf(k)
                                - lnf(s)
                                - lnf(tt)
                                - lnf(n - s)
                                + if k == 0 { 0.0 } else { k as f64 * luv }
                                + s as f64 * ch.ln()
                                + if tt == 0 { 0.0 } else { tt as f64 * lv }
                                + kp as f64 / 2.0 * lw
                                + hs[kp].ln_abs();
                        let ph = gph.powu(i as u32)
                            * Complex64::from_polar(1.0, -theta * (k + tt) as f64 + w_arg * kp as f64 / 2.0)
                            * hs[kp].phase();
                        terms.push((l, ph));
                    }
                }
            }
            terms.retain(|x| x.0 > f64::NEG_INFINITY);
            let count = terms.len().max(1);
            amplitude_probability(&terms, count, n)
        })
        .collect();
    let mut probs = Vec::with_capacity(rows.len());
    let mut cond = 1.0f64;
    for row in rows {
        let (p, c) = row?;
        probs.push(p);
        cond = cond.max(c);
    }
    PhotonDistribution::from_raw(probs, cond)
}

/// The single-sum even/odd expression for the squeezed displaced number
/// state, evaluated literally with its `[tanh r / 2]^-1` prefactor.
/// It does not reproduce the other routes; kept as an advisory comparison.
pub fn pmf_sdns_single_sum(beta_sq: f64, r: f64, psi: f64, m: usize, n_max: usize) -> Vec<f64> {
    let theta = psi + std::f64::consts::PI;
    let beta = beta_sq.sqrt();
    let (sh, ch, t) = (r.sinh(), r.cosh(), r.tanh());
    let g = beta * ch + beta * Complex64::from_polar(1.0, theta) * sh;
    let ag2 = g.norm_sqr();
    let f = |k: usize| lnf(k).exp();
    const J: usize = 80;
    (0..=n_max)
        .map(|n| {
            let n1 = f(m) * f(n) / ch * ag2.powi(m as i32) * (-ag2).exp();
            let odd = n % 2;
            let mut tot = Complex64::new(0.0, 0.0);
            for j in 0..J {
                let top = 2 * j + odd;
                let ks: f64 = (0..=m.min(top))
                    .map(|k| (-1f64).powi(k as i32) * ag2.powi(-(k as i32)) / (f(k) * f(m - k) * f(top - k)))
                    .sum();
                let ps: f64 = (0..=((n - odd) / 2).min(j))
                    .map(|p| (-4.0 / (sh * sh)).powi(p as i32) / (f(2 * p + odd) * f(j - p) * f((n - odd) / 2 - p)))
                    .sum();
                tot += g.powu(2 * j as u32)
                    * f(top)
                    * (-1f64).powi(j as i32)
                    * Complex64::from_polar(1.0, -(j as f64) * theta)
                    * (t / 2.0).powi(j as i32)
                    * ks
                    * ps;
            }
            n1 * ag2 / (ch * ch) / (t / 2.0) * tot.norm_sqr()
        })
        .collect()
}

/// Mixed squeezed-coherent/thermal light treated as a Gaussian state:
/// thermal noise added to an amplitude-squeezed coherent state.
pub fn pmf_vourdas_gaussian(beta_sq: f64, n_t: f64, r: f64, n_max: usize) -> Result<PhotonDistribution> {
    let (sh, ch) = (r.sinh(), r.cosh());
    let a = sh * sh + n_t;
    let b = Complex64::new(sh * ch, 0.0);
    let den = (1.0 + a) * (1.0 + a) - sh * sh * ch * ch;
    let a_tilde = (a * (1.0 + a) - sh * sh * ch * ch) / den;
    let k = GaussianKernel::from_noise(a, b, Complex64::new(beta_sq.sqrt(), 0.0), den, a_tilde);
    PhotonDistribution::from_raw(k.probs(n_max), 1.0)
}
