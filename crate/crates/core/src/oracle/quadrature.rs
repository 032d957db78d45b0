//! Gauss-Hermite rules for the weight `e^{-u^2}`.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes `u_i` with scaled weights `w_i e^{u_i^2}`.
///
/// The scaled weights come from the Christoffel function of the orthonormal
/// Hermite functions, so they stay O(1) at the outer nodes.
pub fn gauss_hermite_scaled(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1);
    let jac = DMatrix::from_fn(k, k, |i, j| {
        if j == i + 1 || i == j + 1 {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    let mut weights = Vec::with_capacity(k);
    for u in nodes.iter_mut() {
        for _ in 0..3 {
            let (f, df) = hermite_function_and_derivative(k, *u);
            if df != 0.0 {
                *u -= f / df;
            }
        }
        weights.push(1.0 / hermite_function_sq_sum(k, *u));
    }
    (nodes, weights)
}

/// Orthonormal Hermite functions `phi_0..phi_{k-1}` at `u`.
fn hermite_functions(k: usize, u: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * u * u).exp();
    out.push(cur);
    for j in 1..=k {
        let next = (2.0 / j as f64).sqrt() * u * cur - ((j - 1) as f64 / j as f64).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

fn hermite_function_sq_sum(k: usize, u: f64) -> f64 {
    hermite_functions(k, u)[..k].iter().map(|x| x * x).sum()
}

/// `phi_k(u)` and `phi_k'(u) = sqrt(2k) phi_{k-1} - u phi_k`; the roots are the nodes.
fn hermite_function_and_derivative(k: usize, u: f64) -> (f64, f64) {
    let f = hermite_functions(k, u);
    let d = (2.0 * k as f64).sqrt() * f[k - 1] - u * f[k];
    (f[k], d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        // int u^{2j} e^{-u^2} = Gamma(j + 1/2)
        let k = 12;
        let (u, w) = gauss_hermite_scaled(k);
        for j in 0..k {
            let got: f64 = u
                .iter()
                .zip(&w)
                .map(|(x, s)| s * (-x * x).exp() * x.powi(2 * j as i32))
                .sum();
            let want = crate::specfun::ln_gamma_half(2 * j as u64).exp();
            assert!((got - want).abs() < 1e-12 * want, "j={j}: {got} vs {want}");
        }
    }

    #[test]
    fn known_rule() {
        let (u, w) = gauss_hermite_scaled(2);
        let x = 0.5f64.sqrt();
        assert!((u[1] - x).abs() < 1e-15 && (u[0] + x).abs() < 1e-15);
        let want = std::f64::consts::PI.sqrt() / 2.0 * 0.5f64.exp();
        assert!((w[0] - want).abs() < 1e-14);
    }
}
