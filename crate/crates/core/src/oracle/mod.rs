//! Truncated Fock-space construction of every state family, used as ground
//! truth for the closed forms and the correlation sums.

mod build;
mod density;
mod operators;
mod quadrature;

pub use build::{build_state, EDGE_MASS_TOL, MAX_DIM, QUADRATURE_TOL};
pub use density::{thermal_dm, DensityMatrix, HERMITICITY_TOL, PSD_FLOOR, TRACE_TOL};
pub use operators::{
    annihilation, displacement, matrix_exp, rotation, squeeze, unitarity_error, OperatorMatrix, EXP_TOL,
};
pub use quadrature::gauss_hermite_scaled;

use crate::dynamics::{Mode, TimeSeries};

/// `S1(z) = sum_n rho_nn (n+1)/(Delta+n+1) sin^2(sqrt(Delta+n+1) t)` with
/// `t = z / sqrt(nbar+1)`, fed by the oracle diagonal.
pub fn s1_oracle(dm: &DensityMatrix, delta: f64, z_grid: &[f64]) -> TimeSeries {
    let p = dm.diagonal();
    let n_bar: f64 = p.iter().enumerate().map(|(n, x)| n as f64 * x).sum();
    let scale = (n_bar + 1.0).sqrt();
    let s1: Vec<f64> = z_grid
        .iter()
        .map(|&z| {
            let t = z / scale;
            let mut acc = 0.0;
            for (n, &rho) in p.iter().enumerate() {
                let b2 = delta + n as f64 + 1.0;
                acc += rho * (n as f64 + 1.0) / b2 * (b2.sqrt() * t).sin().powi(2);
            }
            acc
        })
        .collect();
    let mode = if delta > 0.0 { Mode::NonResonant } else { Mode::Resonant };
    TimeSeries::from_parts(z_grid.to_vec(), s1, mode, n_bar, delta)
}
