use serde::Serialize;

use crate::specfun::NeumaierSum;
use crate::{Error, Result};

/// Probabilities in (-CLAMP, 0) are rounding noise and are set to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Truncated photon-number distribution `rho_nn`, n = 0..=n_max.
#[derive(Debug, Clone, Serialize)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
    tail_mass: f64,
    norm_residual: f64,
    /// Largest condition number met in an alternating sum while building.
    max_condition: f64,
}

impl PhotonDistribution {
    /// Wraps raw values, clamping rounding-level negatives and estimating the
    /// tail beyond the last entry.
    pub fn from_raw(mut probs: Vec<f64>, max_condition: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("empty distribution"));
        }
        for (n, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite("photon distribution entry"));
            }
            if *p < 0.0 {
                if *p > -NEGATIVE_CLAMP {
                    *p = 0.0;
                } else {
                    return Err(Error::Precision(format!(
                        "rho[{n}] = {p:e} is negative beyond rounding"
                    )));
                }
            }
        }
        let total: NeumaierSum = probs.iter().copied().collect();
        let norm_residual = 1.0 - total.value();
        let tail_mass = tail_estimate(&probs, norm_residual);
        Ok(PhotonDistribution {
            probs,
            tail_mass,
            norm_residual,
            max_condition,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_residual(&self) -> f64 {
        self.norm_residual
    }

    pub fn max_condition(&self) -> f64 {
        self.max_condition
    }

    pub fn total(&self) -> f64 {
        1.0 - self.norm_residual
    }

    /// Keeps entries 0..=n_max.
    pub fn truncated(&self, n_max: usize) -> Result<Self> {
        let n = n_max.min(self.n_max());
        Self::from_raw(self.probs[..=n].to_vec(), self.max_condition)
    }

    /// Mean and variance of the truncated entries (not renormalized).
    pub fn moments(&self) -> Moments {
        let mut s1 = NeumaierSum::new();
        for (n, p) in self.probs.iter().enumerate() {
            s1.add(n as f64 * p);
        }
        let mean = s1.value();
        let mut s2 = NeumaierSum::new();
        for (n, p) in self.probs.iter().enumerate() {
            let d = n as f64 - mean;
            s2.add(d * d * p);
        }
        // On an unnormalized vector sum (n - mean)^2 p = E[n^2] - mean^2 - mean^2 * residual.
        let variance = s2.value() + mean * mean * self.norm_residual;
        Moments {
            mean,
            variance: variance.max(0.0),
        }
    }

    /// Estimated size of the first and second moment contributions from the
    /// entries beyond `n_max`, used as a truncation bound on `moments()`.
    pub fn moment_tail_bounds(&self) -> (f64, f64) {
        let t = self.tail_mass.max(0.0);
        if t == 0.0 {
            return (0.0, 0.0);
        }
        let n = self.n_max() as f64;
        let excess = match step2_ratio(&self.probs) {
            Some(q) if q < 1.0 => 3.0 / (1.0 - q.sqrt()),
            _ => n.max(1.0),
        };
        let reach = n + 1.0 + excess;
        let mean = self.moments().mean;
        (t * reach, t * reach * reach + 2.0 * mean * t * reach)
    }
}

/// Ratio `rho_N / rho_{N-2}` (two steps, so parity-alternating tails work).
fn step2_ratio(p: &[f64]) -> Option<f64> {
    let n = p.len();
    if n < 3 {
        return None;
    }
    let (a, b, c, d) = (p[n - 1], p[n - 2], p[n - 3], if n >= 4 { p[n - 4] } else { 0.0 });
    // Use the larger parity pair so a zero branch does not stall the estimate.
    let (num, den) = if a + c >= b + d { (a, c) } else { (b, d) };
    if num == 0.0 {
        Some(0.0)
    } else if den == 0.0 {
        None
    } else {
        Some(num / den)
    }
}

/// Geometric extrapolation of the mass beyond the last entry, or +inf when
/// the sequence has not started to decay.
pub(crate) fn extrapolated_tail(p: &[f64]) -> f64 {
    let n = p.len();
    if n == 1 {
        return if p[0] >= 1.0 { 0.0 } else { f64::INFINITY };
    }
    match step2_ratio(p) {
        Some(q) if q < 1.0 => (p[n - 1] + p[n - 2]) * q / (1.0 - q),
        _ => f64::INFINITY,
    }
}

pub(crate) fn tail_estimate(p: &[f64], residual: f64) -> f64 {
    let ex = extrapolated_tail(p);
    if ex.is_finite() {
        ex.max(residual).max(0.0)
    } else {
        residual.max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_tiny_negatives() {
        let d = PhotonDistribution::from_raw(vec![0.5, -1e-14, 0.5], 1.0).unwrap();
        assert_eq!(d.probs()[1], 0.0);
        assert!(PhotonDistribution::from_raw(vec![1.0, -1e-6], 1.0).is_err());
        assert!(PhotonDistribution::from_raw(vec![f64::NAN], 1.0).is_err());
    }

    #[test]
    fn geometric_tail_is_exact() {
        let q: f64 = 0.8;
        let p: Vec<f64> = (0..60).map(|n| (1.0 - q) * q.powi(n)).collect();
        let want = q.powi(60);
        let d = PhotonDistribution::from_raw(p, 1.0).unwrap();
        assert!((d.tail_mass() - want).abs() < 1e-12);
        assert!((d.norm_residual() - want).abs() < 1e-12);
    }

    #[test]
    fn moments_of_point_mass() {
        let mut p = vec![0.0; 8];
        p[5] = 1.0;
        let m = PhotonDistribution::from_raw(p, 1.0).unwrap().moments();
        assert_eq!(m.mean, 5.0);
        assert_eq!(m.variance, 0.0);
    }

    #[test]
    fn parity_tail() {
        // Only even entries populated.
        let p: Vec<f64> = (0..41)
            .map(|n| if n % 2 == 0 { 0.5f64.powi(n / 2 + 1) } else { 0.0 })
            .collect();
        let d = PhotonDistribution::from_raw(p, 1.0).unwrap();
        assert!((d.tail_mass() - 0.5f64.powi(21)).abs() < 1e-12);
    }
}
