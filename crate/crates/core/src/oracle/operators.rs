//! Ladder operators and the unitaries built from them on a truncated space.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::{Error, Result};

pub type OperatorMatrix = DMatrix<Complex64>;

/// Tolerance used for the exponentials inside the state constructions.
pub const EXP_TOL: f64 = 1e-13;

const MAX_ORDER: usize = 60;

/// `a` with `a|n> = sqrt(n)|n-1>`.
pub fn annihilation(dim: usize) -> OperatorMatrix {
    real_annihilation(dim).map(|x| Complex64::new(x, 0.0))
}

pub(crate) fn real_annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

fn norm1<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring around a Taylor series.
///
/// The series runs until its terms are negligible at machine precision;
/// failing to get below `tol` within the maximum order is an error.
pub fn matrix_exp<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>, tol: f64) -> Result<DMatrix<T>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::invalid("matrix_exp needs a square matrix"));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix_exp input"));
    }
    let nm = norm1(m);
    let s = if nm > 0.5 { (nm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m * T::from_real(0.5f64.powi(s));
    let mut sum = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    let mut converged = false;
    for k in 1..=MAX_ORDER {
        term = (&term * &a) * T::from_real(1.0 / k as f64);
        sum += &term;
        let tn = norm1(&term);
        if tn <= f64::EPSILON * norm1(&sum) {
            converged = true;
            break;
        }
        if k == MAX_ORDER && tn <= tol {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!(
            "Taylor series of exp did not reach {tol:e}"
        )));
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `diag(e^{i phi n})`, which maps `a -> e^{-i phi} a` under conjugation.
pub fn rotation(phi: f64, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|n| Complex64::from_polar(1.0, phi * n as f64)).collect()
}

/// `U M U^dagger` for diagonal `U`.
pub(crate) fn conjugate_diag(m: &DMatrix<f64>, u: &[Complex64]) -> OperatorMatrix {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| u[i] * m[(i, j)] * u[j].conj())
}

/// `D(beta) = exp(beta a+ - beta* a)`.
///
/// Built as the real exponential at `|beta|`, rotated to the phase of beta.
pub fn displacement(beta: Complex64, dim: usize) -> Result<OperatorMatrix> {
    let a = real_annihilation(dim);
    let g = (a.transpose() - &a) * beta.norm();
    let d = matrix_exp(&g, EXP_TOL)?;
    Ok(conjugate_diag(&d, &rotation(beta.arg(), dim)))
}

/// `S(zeta) = exp((zeta* a^2 - zeta a+^2) / 2)` with `zeta = r e^{i theta}`.
pub fn squeeze(r: f64, theta: f64, dim: usize) -> Result<OperatorMatrix> {
    let a = real_annihilation(dim);
    let a2 = &a * &a;
    let g = (&a2 - a2.transpose()) * (0.5 * r);
    let s = matrix_exp(&g, EXP_TOL)?;
    Ok(conjugate_diag(&s, &rotation(theta / 2.0, dim)))
}

/// Largest entry of `U^dagger U - I`.
pub fn unitarity_error(u: &OperatorMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - OperatorMatrix::identity(n, n))
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn max_diff(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
        (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn ladder_basics() {
        let a = annihilation(2);
        assert_eq!(a[(0, 1)], c(1.0));
        assert_eq!(a.iter().filter(|x| x.norm() != 0.0).count(), 1);
        let a = annihilation(10);
        let num = a.adjoint() * &a;
        for n in 0..10 {
            assert!((num[(n, n)] - c(n as f64)).norm() < 1e-14);
        }
    }

    #[test]
    fn normal_ordered_elements() {
        let dim = 16;
        let a = annihilation(dim);
        let ad = a.adjoint();
        let lf = |n: usize| crate::specfun::log_factorial(n as u64);
        for s in 0..=3 {
            for t in 0..=3 {
                let mut m = OperatorMatrix::identity(dim, dim);
                for _ in 0..s {
                    m = &m * &ad;
                }
                for _ in 0..t {
                    m = &m * &a;
                }
                // Rows and columns far enough from the cut are exact.
                for n in 0..dim - 4 {
                    for k in 0..dim - 4 {
                        let want = if n >= s && k >= t && n - s == k - t {
                            (0.5 * (lf(n) + lf(k)) - lf(n - s)).exp()
                        } else {
                            0.0
                        };
                        assert!(
                            (m[(n, k)].re - want).abs() < 1e-9 * want.max(1.0),
                            "s={s} t={t} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let z = DMatrix::<f64>::zeros(5, 5);
        assert_eq!(matrix_exp(&z, 1e-12).unwrap(), DMatrix::identity(5, 5));
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, -2.0, 3.0, 7.5]));
        let e = matrix_exp(&d, 1e-12).unwrap();
        for (i, x) in [0.5f64, -2.0, 3.0, 7.5].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() < 1e-13 * x.exp());
        }
    }

    #[test]
    fn exp_inverse() {
        let a = annihilation(20);
        let z = Complex64::new(0.2, 0.4);
        let a2 = &a * &a;
        let g = (a.adjoint() * c(1.3) - &a * c(1.3)) + (&a2 * z.conj() - a2.adjoint() * z) * c(0.5);
        let e = matrix_exp(&g, 1e-12).unwrap();
        let f = matrix_exp(&(-g), 1e-12).unwrap();
        let err = max_diff(&(e * f), &OperatorMatrix::identity(20, 20));
        assert!(err < 1e-12, "{err:e}");
    }

    #[test]
    fn displacement_is_unitary_and_poissonian() {
        let d = displacement(Complex64::new(2.0, 0.0), 64).unwrap();
        assert!(unitarity_error(&d) < 1e-10);
        let p: Vec<f64> = (0..30).map(|n| d[(n, 0)].norm_sqr()).collect();
        let want = crate::states::pmf_coherent(4.0, 29).unwrap();
        for (x, y) in p.iter().zip(want.probs()) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(
            max_diff(
                &displacement(Complex64::new(0.0, 0.0), 8).unwrap(),
                &OperatorMatrix::identity(8, 8)
            ) == 0.0
        );
    }

    #[test]
    fn displacement_inverse() {
        let b = Complex64::new(0.7, -1.1);
        let d = displacement(b, 48).unwrap();
        let e = displacement(-b, 48).unwrap();
        assert!(max_diff(&d.adjoint(), &e) < 1e-10);
    }

    #[test]
    fn squeeze_vacuum_statistics() {
        let s = squeeze(0.8, 0.3, 64).unwrap();
        assert!(unitarity_error(&s) < 1e-10);
        let want = crate::states::pmf_squeezed_vacuum(0.8, 40).unwrap();
        for n in 0..=40 {
            assert!((s[(n, 0)].norm_sqr() - want.probs()[n]).abs() < 1e-10);
        }
        assert!(max_diff(&squeeze(0.0, 1.0, 8).unwrap(), &OperatorMatrix::identity(8, 8)) < 1e-15);
    }

    #[test]
    fn squeezed_displaced_vacuum_amplitudes() {
        // <p|S(zeta) D(gamma)|0> in closed form.
        let (r, theta) = (0.6, 0.9);
        let gamma = Complex64::new(0.8, 0.5);
        let dim = 96;
        let v = squeeze(r, theta, dim).unwrap() * displacement(gamma, dim).unwrap();
        let t = r.tanh();
        let eth = Complex64::from_polar(1.0, theta);
        let pre = (-0.5 * gamma.norm_sqr() + 0.5 * eth.conj() * gamma * gamma * t).exp() / r.cosh().sqrt();
        let arg = gamma / (eth * (2.0 * r).sinh()).sqrt();
        let h = crate::specfun::hermite_seq(arg, 20);
        let mut fact = 1.0;
        for p in 0..=20 {
            if p > 0 {
                fact *= p as f64;
            }
            let want = pre * (0.5 * eth * t).powf(p as f64 / 2.0) * h[p].to_complex() / fact.sqrt();
            assert!((v[(p, 0)] - want).norm() < 1e-10, "p={p}: {} vs {want}", v[(p, 0)]);
        }
    }
}
