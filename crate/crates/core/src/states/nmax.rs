//! Choosing the truncation point of a distribution.

use serde::{Deserialize, Serialize};

use super::distribution::{extrapolated_tail, tail_estimate, PhotonDistribution};
use super::moments::closed_form_moments;
use super::{pmf_fixed, StateSpec};
use crate::{Error, Result};

pub const DEFAULT_EPS_TAIL: f64 = 1e-8;
pub const DEFAULT_HARD_CAP: usize = 20000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NmaxPolicy {
    Fixed(usize),
    Auto { eps_tail: f64, cap: usize },
}

impl Default for NmaxPolicy {
    fn default() -> Self {
        NmaxPolicy::Auto {
            eps_tail: DEFAULT_EPS_TAIL,
            cap: DEFAULT_HARD_CAP,
        }
    }
}

/// Smallest truncation whose tail mass is below `eps_tail`.
pub fn auto_nmax(spec: &StateSpec, eps_tail: f64, cap: usize) -> Result<usize> {
    auto_pmf(spec, eps_tail, cap).map(|d| d.n_max())
}

/// Evaluates on a growing grid until the realized tail is below `eps_tail`,
/// then trims to the smallest sufficient length.
///
/// The first attempt sits six standard deviations past the mean. The
/// Chebyshev point `mean + sigma / sqrt(eps)` is only used as an upper
/// bracket: if the distribution still fails there, the failure is numeric.
pub fn auto_pmf(spec: &StateSpec, eps_tail: f64, cap: usize) -> Result<PhotonDistribution> {
    if !(eps_tail > 0.0 && eps_tail < 1.0) {
        return Err(Error::invalid(format!("eps_tail must lie in (0, 1), got {eps_tail}")));
    }
    let m = closed_form_moments(spec);
    let sigma = m.variance.max(0.0).sqrt();
    let start = (m.mean + 6.0 * sigma + 10.0).ceil();
    let bracket = (m.mean + sigma / eps_tail.sqrt() + 10.0).ceil();
    if !start.is_finite() {
        return Err(Error::NonFinite("closed-form moments"));
    }
    let limit = (bracket.max(start).min(cap as f64)) as usize;
    let mut n = (start as usize).min(limit);
    loop {
        let d = pmf_fixed(spec, n)?;
        if let Some(k) = smallest_sufficient(d.probs(), eps_tail) {
            return d.truncated(k.max(1));
        }
        if n >= limit {
            return if limit >= cap {
                Err(Error::NmaxCap {
                    needed: (n as f64 * 1.5).ceil() as usize,
                    cap,
                })
            } else {
                Err(Error::Precision(format!(
                    "tail mass still above {eps_tail:e} at n_max = {n}, beyond the Chebyshev bracket"
                )))
            };
        }
        n = ((n as f64 * 1.5).ceil() as usize).min(limit);
    }
}

/// Smallest k with the summed-plus-extrapolated tail beyond k, the
/// normalization deficit of `p[..=k]`, and the tail estimate a distribution
/// cut at k would carry all below `eps`.
fn smallest_sufficient(p: &[f64], eps: f64) -> Option<usize> {
    let ext = extrapolated_tail(p);
    if !ext.is_finite() {
        return None;
    }
    let n = p.len();
    let mut prefix = vec![0.0; n];
    let mut acc = crate::specfun::NeumaierSum::new();
    for (i, x) in p.iter().enumerate() {
        acc.add(*x);
        prefix[i] = acc.value();
    }
    let mut suffix = ext;
    let mut best = None;
    for k in (0..n).rev() {
        let deficit = 1.0 - prefix[k];
        if suffix.max(deficit) >= eps {
            break;
        }
        if tail_estimate(&p[..=k], deficit) < eps {
            best = Some(k);
        }
        suffix += p[k];
    }
    best
}
