//! Recursion-based kernels against exact rational evaluations of their
//! explicit series or defining formulas.

use std::collections::BTreeMap;

use jcm_core::specfun::{
    assoc_laguerre, gauss2f1_terminating, gen_hermite_diag, hermite_seq, legendre_complex, legendre_seq,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qf(x: &Q) -> f64 {
    // Ratio of big integers; divide at high scale to stay in f64 range.
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_string();
        let d = x.denom().to_string();
        let ln = n.trim_start_matches('-').len() as i32 - d.len() as i32;
        let scaled = x / Q::from_integer(BigInt::from(10).pow(ln.unsigned_abs()));
        let v = scaled.to_f64().unwrap();
        if ln >= 0 {
            v * 10f64.powi(ln)
        } else {
            v / 10f64.powi(-ln)
        }
    })
}

fn fact(n: u64) -> Q {
    (1..=n).fold(Q::one(), |acc, k| acc * Q::from_integer(BigInt::from(k)))
}

#[derive(Clone, Debug)]
struct Cq {
    re: Q,
    im: Q,
}

impl Cq {
    fn new(re: Q, im: Q) -> Self {
        Cq { re, im }
    }
    fn zero() -> Self {
        Cq::new(Q::zero(), Q::zero())
    }
    fn one() -> Self {
        Cq::new(Q::one(), Q::zero())
    }
    fn mul(&self, o: &Cq) -> Cq {
        Cq::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn scale(&self, s: &Q) -> Cq {
        Cq::new(&self.re * s, &self.im * s)
    }
    fn add(&self, o: &Cq) -> Cq {
        Cq::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn pow(&self, n: u64) -> Cq {
        (0..n).fold(Cq::one(), |acc, _| acc.mul(self))
    }
    fn to_c(&self) -> Complex64 {
        Complex64::new(qf(&self.re), qf(&self.im))
    }
}

/// H_n(z) = n! sum_m (-1)^m (2z)^(n-2m) / (m! (n-2m)!)
fn hermite_series(n: u64, z: &Cq) -> Cq {
    let two_z = z.scale(&q(2, 1));
    let mut acc = Cq::zero();
    for m in 0..=n / 2 {
        let c = fact(n) / (fact(m) * fact(n - 2 * m));
        let c = if m % 2 == 1 { -c } else { c };
        acc = acc.add(&two_z.pow(n - 2 * m).scale(&c));
    }
    acc
}

fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1e-300)
}

#[test]
fn hermite_matches_explicit_series() {
    for (re, im) in [((1, 2), (1, 2)), ((3, 1), (0, 1)), ((-7, 4), (2, 3)), ((0, 1), (5, 2))] {
        let z = Cq::new(q(re.0, re.1), q(im.0, im.1));
        let seq = hermite_seq(z.to_c(), 50);
        for n in 0..=50u64 {
            let want = hermite_series(n, &z).to_c();
            if want.norm() == 0.0 {
                continue;
            }
            let got = seq[n as usize].to_complex();
            assert!(rel(got, want) < 1e-10, "z={:?} n={n}: {got} vs {want}", z.to_c());
        }
    }
}

/// Polynomial in r1, r2 with rational coefficients.
type Poly = BTreeMap<(u32, u32), Q>;

fn padd(p: &mut Poly, k: (u32, u32), v: Q) {
    let e = p.entry(k).or_insert_with(Q::zero);
    *e += v;
}

/// Two-index Hermite from its derivative definition: H_{n,m} = P where
/// (-d/dr1)^n (-d/dr2)^m exp(-Q) = P exp(-Q), Q = 1/2 sum c_ij r_i r_j.
fn gen_hermite_by_derivatives(c11: &Q, c12: &Q, c22: &Q, n: u32, m: u32) -> Poly {
    let mut p: Poly = BTreeMap::new();
    p.insert((0, 0), Q::one());
    // -d/dr1 (P e^-Q) = (dQ/dr1 P - dP/dr1) e^-Q, dQ/dr1 = c11 r1 + c12 r2
    let step = |p: &Poly, first: bool| -> Poly {
        let (ca, cb) = if first { (c11, c12) } else { (c22, c12) };
        let mut out = BTreeMap::new();
        for ((i, j), v) in p {
            if first {
                padd(&mut out, (i + 1, *j), ca * v);
                padd(&mut out, (*i, j + 1), cb * v);
                if *i > 0 {
                    padd(&mut out, (i - 1, *j), -(v * Q::from_integer(BigInt::from(*i))));
                }
            } else {
                padd(&mut out, (*i, j + 1), ca * v);
                padd(&mut out, (i + 1, *j), cb * v);
                if *j > 0 {
                    padd(&mut out, (*i, j - 1), -(v * Q::from_integer(BigInt::from(*j))));
                }
            }
        }
        out
    };
    for _ in 0..n {
        p = step(&p, true);
    }
    for _ in 0..m {
        p = step(&p, false);
    }
    p
}

fn peval(p: &Poly, r1: &Q, r2: &Q) -> Q {
    p.iter().fold(Q::zero(), |acc, ((i, j), v)| {
        let mut t = v.clone();
        for _ in 0..*i {
            t *= r1;
        }
        for _ in 0..*j {
            t *= r2;
        }
        acc + t
    })
}

#[test]
fn gen_hermite_matches_derivative_definition() {
    let (c11, c12, c22, r1, r2) = (q(7, 10), q(-3, 10), q(11, 10), q(2, 5), q(-9, 10));
    for n in 0..=8u32 {
        let want = qf(&peval(&gen_hermite_by_derivatives(&c11, &c12, &c22, n, n), &r1, &r2));
        let got = gen_hermite_diag(qf(&c11), qf(&c12), qf(&c22), qf(&r1), qf(&r2), n as usize)
            .unwrap()
            .to_real();
        assert!(
            (got - want).abs() <= 1e-10 * want.abs().max(1.0),
            "n={n}: {got} vs {want}"
        );
    }
}

/// L_n^{l-n}(x) from the displaced-number k-sum, terms with negative
/// factorial argument dropped:
/// (-1)^n sum_k (-1)^k l! x^(n-k) / (k! (n-k)! (l-k)!)
fn laguerre_ksum(n: u64, l: u64, x: &Q) -> Q {
    let mut acc = Q::zero();
    for k in 0..=n.min(l) {
        let mut t = fact(l) / (fact(k) * fact(n - k) * fact(l - k));
        for _ in 0..(n - k) {
            t *= x;
        }
        if (n + k) % 2 == 1 {
            t = -t;
        }
        acc += t;
    }
    acc
}

#[test]
fn laguerre_matches_ksum() {
    let x = q(5, 2);
    let want = qf(&laguerre_ksum(3, 1, &x));
    let got = assoc_laguerre(3, -2, 2.5).to_real();
    assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{got} vs {want}");
    for (n, l) in [
        (0u64, 0u64),
        (5, 2),
        (9, 4),
        (12, 12),
        (4, 9),
        (20, 7),
        (30, 45),
        (50, 3),
    ] {
        for x in [q(1, 3), q(5, 2), q(17, 2)] {
            let want = qf(&laguerre_ksum(n, l, &x));
            let got = assoc_laguerre(n as usize, l as i64 - n as i64, qf(&x)).to_real();
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1e-300),
                "n={n} l={l}: {got} vs {want}"
            );
        }
    }
}

fn hyp_terms(a: &Q, b: &Q, c: &Q, x: &Q) -> Q {
    let mut acc = Q::one();
    let mut t = Q::one();
    let mut k = 0i64;
    loop {
        let kq = Q::from_integer(BigInt::from(k));
        let num = (a + &kq) * (b + &kq);
        if num.is_zero() {
            break;
        }
        t = t * num / ((c + &kq) * (&kq + Q::one())) * x;
        acc += &t;
        k += 1;
    }
    acc
}

#[test]
fn gauss2f1_matches_exact_terms() {
    let cases = [
        (q(-2, 1), q(-3, 2), q(-7, 2), q(3, 10)),
        (q(-7, 1), q(-15, 2), q(1, 2), q(-9, 1)),
        (q(-25, 2), q(-12, 1), q(3, 2), q(-1, 4)),
        (q(-20, 1), q(-39, 2), q(-79, 2), q(7, 10)),
    ];
    for (a, b, c, x) in cases {
        let want = qf(&hyp_terms(&a, &b, &c, &x));
        let got = gauss2f1_terminating(qf(&a), qf(&b), qf(&c), qf(&x)).unwrap();
        let tol = 1e-12 * got.condition.max(1.0) * want.abs();
        assert!(
            (got.value.to_real() - want).abs() <= tol.max(1e-300),
            "{got:?} vs {want}"
        );
    }
}

fn legendre_explicit(n: u64, z: &Cq) -> Cq {
    // P_n(z) = 2^-n sum_k (-1)^k C(n,k) C(2n-2k, n) z^(n-2k)
    let mut acc = Cq::zero();
    for k in 0..=n / 2 {
        let c = fact(n) / (fact(k) * fact(n - k)) * fact(2 * n - 2 * k) / (fact(n) * fact(n - 2 * k));
        let c = if k % 2 == 1 { -c } else { c };
        acc = acc.add(&z.pow(n - 2 * k).scale(&c));
    }
    acc.scale(&(Q::one() / Q::from_integer(BigInt::from(2).pow(n as u32))))
}

#[test]
fn legendre_matches_explicit_polynomial() {
    let z = Cq::new(Q::zero(), q(2, 1));
    let p4 = legendre_complex(4, z.to_c()).to_complex();
    assert!((p4 - Complex64::new(683.0 / 8.0, 0.0)).norm() < 1e-12);
    for (re, im) in [((1, 3), (0, 1)), ((3, 2), (1, 5)), ((0, 1), (-7, 3))] {
        let z = Cq::new(q(re.0, re.1), q(im.0, im.1));
        let seq = legendre_seq(z.to_c(), 50);
        for n in 0..=50u64 {
            let want = legendre_explicit(n, &z).to_c();
            if want.norm() == 0.0 {
                continue;
            }
            assert!(rel(seq[n as usize].to_complex(), want) < 1e-10, "n={n}");
        }
    }
}

#[test]
fn exact_helpers_are_consistent() {
    // Guards the oracle itself: H_2(z) = 4z^2 - 2 at z = 1/2.
    let h = hermite_series(2, &Cq::new(q(1, 2), Q::zero()));
    assert_eq!(h.re, q(-1, 1));
    assert!(h.im.is_zero());
    assert!(q(-3, 2).is_negative());
}
