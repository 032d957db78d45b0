use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::operators::OperatorMatrix;
use crate::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_FLOOR: f64 = -1e-10;
/// Positivity is only checked up to this dimension.
pub const PSD_CHECK_DIM: usize = 128;

const THERMAL_TAIL: f64 = 1e-12;

/// Density matrix on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: OperatorMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity, trace and (on small
    /// dimensions) positivity.
    pub fn new(entries: OperatorMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::invalid("density matrix must be square and non-empty"));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("density matrix"));
        }
        let dm = DensityMatrix { entries };
        let h = dm.hermiticity_error();
        if h > HERMITICITY_TOL {
            return Err(Error::Precision(format!("density matrix off Hermitian by {h:e}")));
        }
        let t = dm.trace();
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(Error::Truncation(format!("trace {t} differs from 1")));
        }
        if dm.dim() <= PSD_CHECK_DIM {
            let e = dm.min_eigenvalue();
            if e < PSD_FLOOR {
                return Err(Error::Precision(format!("density matrix eigenvalue {e:e}")));
            }
        }
        Ok(dm)
    }

    /// `|v><v|`.
    pub fn pure(v: &DVector<Complex64>) -> Result<Self> {
        Self::new(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &OperatorMatrix {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// Photon-number distribution.
    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Mass in the top `rows` levels.
    pub fn edge_mass(&self, rows: usize) -> f64 {
        let d = self.diagonal();
        d[d.len().saturating_sub(rows)..].iter().sum()
    }
}

/// Thermal state as a diagonal matrix, renormalized on the truncated space.
pub fn thermal_dm(n_t: f64, dim: usize) -> Result<DensityMatrix> {
    let w = thermal_weights(n_t, dim)?;
    DensityMatrix::new(OperatorMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        w.into_iter().map(|x| Complex64::new(x, 0.0)),
    )))
}

pub(crate) fn thermal_weights(n_t: f64, dim: usize) -> Result<Vec<f64>> {
    if !(n_t >= 0.0 && n_t.is_finite()) || dim == 0 {
        return Err(Error::invalid("thermal_dm needs n_T >= 0 and dim >= 1"));
    }
    let q = n_t / (1.0 + n_t);
    let tail = q.powi(dim as i32);
    if tail > THERMAL_TAIL {
        return Err(Error::Truncation(format!("thermal tail {tail:e} at dim {dim}")));
    }
    let raw: Vec<f64> = (0..dim).map(|n| q.powi(n as i32)).collect();
    let s: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|x| x / s).collect())
}
