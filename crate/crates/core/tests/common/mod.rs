#![allow(dead_code)]

use std::f64::consts::PI;

use jcm_core::states::{closed_form_moments, Params};
use jcm_core::{Family, PhotonDistribution, StateSpec, Variant};

/// Stand-in for a parameter approaching zero from above.
pub const ZERO_PLUS: f64 = 1e-7;

pub const BETA_SQ: [f64; 4] = [0.0, 1.0, 10.0, 100.0];
pub const N_T: [f64; 3] = [ZERO_PLUS, 1.0, 10.0];
pub const R: [f64; 4] = [ZERO_PLUS, 0.5, 1.0, 2.0];
pub const PSI: [f64; 3] = [0.0, PI / 2.0, PI];
pub const LEVEL: [usize; 4] = [0, 1, 2, 5];

/// Every grid point meaningful to `family`.
pub fn grid(family: Family) -> Vec<StateSpec> {
    let mut out = Vec::new();
    let b = |v: f64| Some(v);
    for &beta_sq in &BETA_SQ {
        for &n_t in &N_T {
            for &r in &R {
                for &psi in &PSI {
                    for &l in &LEVEL {
                        let p = match family {
                            Family::Coherent => Params {
                                beta_sq: b(beta_sq),
                                ..Default::default()
                            },
                            Family::Thermal => Params {
                                n_t: b(n_t),
                                ..Default::default()
                            },
                            Family::Fock => Params {
                                level: Some(l),
                                ..Default::default()
                            },
                            Family::MixedCoherentThermal => Params {
                                beta_sq: b(beta_sq),
                                n_t: b(n_t),
                                ..Default::default()
                            },
                            Family::SqueezedVacuum => Params {
                                r: b(r),
                                ..Default::default()
                            },
                            Family::SqueezedFock => Params {
                                r: b(r),
                                level: Some(l),
                                ..Default::default()
                            },
                            Family::SqueezedThermal => Params {
                                r: b(r),
                                n_t: b(n_t),
                                ..Default::default()
                            },
                            Family::SqueezedCoherent => Params {
                                beta_sq: b(beta_sq),
                                r: b(r),
                                psi: b(psi),
                                ..Default::default()
                            },
                            Family::MixedSqueezedCoherentThermal => {
                                if n_t < 1e-6 {
                                    continue;
                                }
                                Params {
                                    beta_sq: b(beta_sq),
                                    n_t: b(n_t),
                                    r: b(r),
                                    ..Default::default()
                                }
                            }
                            Family::DisplacedSqueezedThermal => Params {
                                beta_sq: b(beta_sq),
                                n_t: b(n_t),
                                r: b(r),
                                psi: b(psi),
                                variant: Some(if l % 2 == 0 { Variant::Dsts } else { Variant::Sdts }),
                                ..Default::default()
                            },
                            Family::DisplacedNumber => Params {
                                beta_sq: b(beta_sq),
                                level: Some(l),
                                ..Default::default()
                            },
                            Family::SqueezedDisplacedNumber => Params {
                                beta_sq: b(beta_sq),
                                r: b(r),
                                psi: b(psi),
                                level: Some(l),
                                ..Default::default()
                            },
                        };
                        let s = StateSpec::new(family, &p).expect("grid spec");
                        if !out.contains(&s) {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Allowed gap between a truncated-sum moment and its closed form.
pub fn moment_tolerance(exact: f64, tail_bound: f64) -> f64 {
    (1e-6 * exact.abs().max(1.0)).max(3.0 * tail_bound)
}

/// Describes any disagreement between the distribution's moments and the
/// closed forms, or `None`.
pub fn moment_mismatch(spec: &StateSpec, d: &PhotonDistribution) -> Option<String> {
    let m = d.moments();
    let c = closed_form_moments(spec);
    let (t1, t2) = d.moment_tail_bounds();
    let tm = moment_tolerance(c.mean, t1);
    let tv = moment_tolerance(c.variance, t2);
    if (m.mean - c.mean).abs() > tm || (m.variance - c.variance).abs() > tv {
        Some(format!(
            "{spec}: mean {} vs {} (tol {tm:e}), var {} vs {} (tol {tv:e})",
            m.mean, c.mean, m.variance, c.variance
        ))
    } else {
        None
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}
