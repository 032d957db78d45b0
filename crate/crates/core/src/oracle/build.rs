use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::density::{thermal_weights, DensityMatrix};
use super::operators::{displacement, real_annihilation, squeeze, OperatorMatrix};
use super::quadrature::gauss_hermite_scaled;
use crate::states::{closed_form_moments, Family, StateSpec, Variant, NT_SWITCH};
use crate::{Error, Result};

/// Largest working dimension the oracle will build.
pub const MAX_DIM: usize = 512;
/// Allowed mass in the top quarter of the working space.
pub const EDGE_MASS_TOL: f64 = 1e-10;
/// Quadrature orders are doubled until the diagonal moves by less than this.
pub const QUADRATURE_TOL: f64 = 1e-9;

const K_START: usize = 32;
const K_MAX: usize = 2048;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn basis(l: usize, dim: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[l] = c(1.0);
    v
}

/// Operator-built density matrix for `spec`.
///
/// The construction runs on a working space of at least `dim` levels, grown
/// (up to [`MAX_DIM`]) until the top quarter holds less than
/// [`EDGE_MASS_TOL`]. The returned matrix has the working dimension.
pub fn build_state(spec: &StateSpec, dim: usize) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::invalid("oracle dimension must be at least 2"));
    }
    let m = closed_form_moments(spec);
    let guess = (4.0 * (m.mean + 6.0 * m.variance.sqrt())).ceil() as usize;
    let mut w = dim.max(guess).max(16);
    if w > MAX_DIM {
        w = MAX_DIM;
    }
    loop {
        let attempt = build_at(spec, w);
        let grow = match &attempt {
            Ok(dm) => dm.edge_mass(w / 4) > EDGE_MASS_TOL,
            Err(Error::Truncation(_)) => true,
            Err(_) => false,
        };
        if !grow {
            return attempt;
        }
        if w == MAX_DIM {
            return match attempt {
                Ok(dm) => Err(Error::Truncation(format!(
                    "mass {:e} near the cut at dim {w}",
                    dm.edge_mass(w / 4)
                ))),
                Err(e) => Err(e),
            };
        }
        w = (2 * w).min(MAX_DIM);
    }
}

fn build_at(spec: &StateSpec, dim: usize) -> Result<DensityMatrix> {
    let beta = c(spec.beta_sq().sqrt());
    let r = spec.r();
    let theta = spec.psi() + std::f64::consts::PI;
    let nt = spec.n_t();
    let l = spec.level();
    if l >= dim {
        return Err(Error::Truncation(format!("level {l} outside dim {dim}")));
    }
    let pure = |v: DVector<Complex64>| DensityMatrix::pure(&v);
    let conj = |u: &OperatorMatrix, rho: &DensityMatrix| DensityMatrix::new(u * rho.entries() * u.adjoint());
    let thermal = || -> Result<DensityMatrix> {
        let w = thermal_weights(nt, dim)?;
        DensityMatrix::new(OperatorMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            w.into_iter().map(c),
        )))
    };
    match spec.family() {
        Family::Coherent => pure(displacement(beta, dim)? * basis(0, dim)),
        Family::Thermal => thermal(),
        Family::Fock => pure(basis(l, dim)),
        Family::MixedCoherentThermal => conj(&displacement(beta, dim)?, &thermal()?),
        Family::SqueezedVacuum => pure(squeeze(r, theta, dim)? * basis(0, dim)),
        Family::SqueezedFock => pure(squeeze(r, theta, dim)? * basis(l, dim)),
        Family::SqueezedThermal => conj(&squeeze(r, theta, dim)?, &thermal()?),
        Family::SqueezedCoherent => pure(displacement(beta, dim)? * (squeeze(r, theta, dim)? * basis(0, dim))),
        Family::MixedSqueezedCoherentThermal => {
            if nt < NT_SWITCH {
                pure(displacement(beta, dim)? * (squeeze(r, 0.0, dim)? * basis(0, dim)))
            } else {
                quadrature_mixture(beta.re, nt, r, dim)
            }
        }
        Family::DisplacedSqueezedThermal => {
            let d = displacement(beta, dim)?;
            let s = squeeze(r, theta, dim)?;
            let u = match spec.variant() {
                Variant::Dsts => d * s,
                Variant::Sdts => s * d,
            };
            conj(&u, &thermal()?)
        }
        Family::DisplacedNumber => pure(displacement(beta, dim)? * basis(l, dim)),
        Family::SqueezedDisplacedNumber => pure(displacement(beta, dim)? * (squeeze(r, theta, dim)? * basis(l, dim))),
    }
}

/// Thermal P-weighted mixture of `D(alpha) S(r)|0>` over the complex plane,
/// by a tensor Gauss-Hermite rule.
///
/// The Gaussian parts of weight and integrand are absorbed into the nodes,
/// leaving a polynomial in each coordinate, so level n is exact once the
/// order exceeds n. The sum is carried out in the eigenbasis of `a + a+`,
/// where both kinds of displacement are diagonal.
pub(crate) fn quadrature_mixture(beta: f64, nt: f64, r: f64, dim: usize) -> Result<DensityMatrix> {
    let a = real_annihilation(dim);
    let x_op = &a + a.transpose();
    let eig = SymmetricEigen::new(x_op);
    let q = eig.eigenvectors.map(c);
    let lam = eig.eigenvalues;
    // R = diag(i^n) turns exp(-i x X) into exp(x (a+ - a)).
    let rot: Vec<Complex64> = (0..dim).map(|n| Complex64::i().powu(n as u32)).collect();

    let s0 = squeeze(r, 0.0, dim)? * basis(0, dim);
    let s_eig = q.transpose() * &s0;

    let t = r.tanh();
    let ax = 1.0 / nt + 1.0 + t;
    let ay = 1.0 / nt + 1.0 - t;
    let cx = beta / (nt * ax);

    let mut prev: Option<Vec<f64>> = None;
    let mut k = K_START;
    while k <= K_MAX {
        let (u, wh) = gauss_hermite_scaled(k);
        // Factorized weights, Gaussian factors included.
        let wx: Vec<(f64, f64)> = u
            .iter()
            .zip(&wh)
            .map(|(&ui, &wi)| {
                let x = cx + ui / ax.sqrt();
                (
                    x,
                    wi * (-(x - beta).powi(2) / nt).exp() / (ax.sqrt() * (std::f64::consts::PI * nt).sqrt()),
                )
            })
            .collect();
        let wy: Vec<(f64, f64)> = u
            .iter()
            .zip(&wh)
            .map(|(&vi, &wi)| {
                let y = vi / ay.sqrt();
                (
                    y,
                    wi * (-y * y / nt).exp() / (ay.sqrt() * (std::f64::consts::PI * nt).sqrt()),
                )
            })
            .collect();
        let phase_sum = |nodes: &[(f64, f64)], sign: f64| {
            DMatrix::from_fn(dim, dim, |i, j| {
                let d = lam[i] - lam[j];
                nodes
                    .iter()
                    .map(|&(p, w)| Complex64::from_polar(w, sign * p * d))
                    .sum::<Complex64>()
            })
        };
        // Mixture over y of exp(i y X)|s>, in the eigenbasis.
        let gy = phase_sum(&wy, 1.0);
        let m_eig = DMatrix::from_fn(dim, dim, |i, j| s_eig[i] * s_eig[j].conj() * gy[(i, j)]);
        let m_fock = &q * m_eig * q.transpose();
        // Conjugate by R^dagger, go to the eigenbasis, apply the x mixture.
        let m_rot = DMatrix::from_fn(dim, dim, |i, j| rot[i].conj() * m_fock[(i, j)] * rot[j]);
        let m2 = q.transpose() * m_rot * &q;
        let gx = phase_sum(&wx, -1.0);
        let rho_eig = m2.component_mul(&gx);
        let rho_q = &q * rho_eig * q.transpose();
        let rho = DMatrix::from_fn(dim, dim, |i, j| rot[i] * rho_q[(i, j)] * rot[j].conj());
        let rho = (&rho + rho.adjoint()) * c(0.5);
        let diag: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
        if let Some(p) = &prev {
            let moved = p.iter().zip(&diag).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if moved < QUADRATURE_TOL {
                return DensityMatrix::new(rho);
            }
        }
        prev = Some(diag);
        k *= 2;
    }
    Err(Error::NonConvergence(format!(
        "quadrature mixture not stable at order {K_MAX}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_is_a_point_mass() {
        let dm = build_state(&StateSpec::fock(3).unwrap(), 8).unwrap();
        let d = dm.diagonal();
        assert_eq!(d[3], 1.0);
        assert_eq!(d.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn grows_working_space() {
        let dm = build_state(&StateSpec::squeezed_vacuum(1.2).unwrap(), 64).unwrap();
        assert!(dm.dim() > 104);
        assert!(dm.edge_mass(dm.dim() / 4) < EDGE_MASS_TOL);
    }

    #[test]
    fn quadrature_reduces_to_thermal() {
        // r = 0, beta = 0 is the thermal state itself.
        let dm = quadrature_mixture(0.0, 0.7, 0.0, 96).unwrap();
        let q: f64 = 0.7 / 1.7;
        for (n, p) in dm.diagonal().iter().take(40).enumerate() {
            assert!((p - q.powi(n as i32) / 1.7).abs() < 1e-10, "n={n}");
        }
    }
}
