//! Named cross-validation checks: alternative closed forms against the
//! primary evaluators, reductions between families, and the oracle.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{s1_series, DynamicsConfig, Mode};
use crate::oracle::{build_state, s1_oracle};
use crate::states::alt::*;
use crate::states::*;
use crate::{Error, PhotonDistribution, Result};

/// Entries below this are treated as zero in relative comparisons.
pub const NONZERO_FLOOR: f64 = 1e-12;
pub const IDENTITY_REL_TOL: f64 = 1e-7;
pub const REDUCTION_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-8;
pub const DEFAULT_ORACLE_DIM: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct XcheckConfig {
    /// Number of leading entries compared against the oracle.
    pub oracle_dim: usize,
}

impl Default for XcheckConfig {
    fn default() -> Self {
        XcheckConfig {
            oracle_dim: DEFAULT_ORACLE_DIM,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub mandatory: bool,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

pub struct Check {
    pub name: &'static str,
    pub mandatory: bool,
    pub summary: &'static str,
    run: fn(&XcheckConfig) -> Outcome,
}

struct Outcome {
    worst: f64,
    tolerance: f64,
    detail: String,
}

impl Outcome {
    fn new(worst: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Outcome {
            worst,
            tolerance,
            detail: detail.into(),
        }
    }

    fn failed(detail: impl Into<String>, tolerance: f64) -> Self {
        Outcome {
            worst: f64::INFINITY,
            tolerance,
            detail: detail.into(),
        }
    }
}

/// Tracks the worst gap and where it occurred.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            at: String::new(),
        }
    }

    fn see(&mut self, v: f64, at: impl FnOnce() -> String) {
        if v > self.value || v.is_nan() {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
            self.at = at();
        }
    }

    fn see_result(&mut self, r: Result<f64>, at: impl Fn() -> String) {
        match r {
            Ok(v) => self.see(v, at),
            Err(e) => self.see(f64::INFINITY, || format!("{}: {e}", at())),
        }
    }

    fn outcome(self, tol: f64, summary: String) -> Outcome {
        let detail = if self.at.is_empty() {
            summary
        } else {
            format!("{summary}; worst at {}", self.at)
        };
        Outcome::new(self.value, tol, detail)
    }
}

/// Largest relative difference over entries where either side is above
/// [`NONZERO_FLOOR`]. Missing entries count as zeros.
pub fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|n| {
            let x = a.get(n).copied().unwrap_or(0.0);
            let y = b.get(n).copied().unwrap_or(0.0);
            let m = x.abs().max(y.abs());
            if m < NONZERO_FLOOR {
                0.0
            } else {
                (x - y).abs() / m
            }
        })
        .fold(0.0, f64::max)
}

pub fn absolute_gap(a: &[f64], b: &[f64]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|n| (a.get(n).copied().unwrap_or(0.0) - b.get(n).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn rel(a: &PhotonDistribution, b: &PhotonDistribution) -> f64 {
    relative_gap(a.probs(), b.probs())
}

/// Relative accuracy a cancellation-prone route must certify for an entry
/// to take part in a relative comparison.
pub const CERTIFIED_REL: f64 = 1e-9;
/// Shortest certified prefix accepted for such a route.
pub const MIN_REACH: usize = 12;

/// Longest prefix (at most `n_max`) on which a cancellation-prone route
/// certifies [`CERTIFIED_REL`]: its reported condition number times
/// `ops(k)` roundings stays below the target.
fn reach<F, G>(n_max: usize, f: F, ops: G) -> Option<(usize, PhotonDistribution)>
where
    F: Fn(usize) -> Result<PhotonDistribution>,
    G: Fn(usize) -> f64,
{
    (0..=n_max).rev().find_map(|k| {
        f(k).ok()
            .filter(|d| d.max_condition() * ops(k) * f64::EPSILON <= CERTIFIED_REL)
            .map(|d| (k, d))
    })
}

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "fock-kernel-forms",
            mandatory: true,
            summary: "squeezed Fock kernel: hypergeometric form vs finite sum, n, l <= 40",
            run: kernel_forms,
        },
        Check {
            name: "squeezed-thermal-forms",
            mandatory: true,
            summary: "squeezed thermal: thermal-sum, hypergeometric and Legendre forms",
            run: squeezed_thermal_forms,
        },
        Check {
            name: "confluent-form",
            mandatory: true,
            summary: "mixed coherent-thermal: Laguerre form vs confluent series",
            run: confluent_form,
        },
        Check {
            name: "critical-squeezing",
            mandatory: true,
            summary: "squeezed thermal at critical squeezing",
            run: critical_form,
        },
        Check {
            name: "vourdas-quadrature",
            mandatory: true,
            summary: "mixed squeezed state: two-index Hermite vs quadrature expansion",
            run: quadrature_expansion,
        },
        Check {
            name: "vourdas-gaussian",
            mandatory: true,
            summary: "mixed squeezed state: two-index Hermite vs Gaussian-state kernel",
            run: gaussian_view,
        },
        Check {
            name: "sdns-ladder",
            mandatory: true,
            summary: "squeezed displaced number state: Hermite sum vs ladder expansion",
            run: ladder_expansion,
        },
        Check {
            name: "sdns-single-sum",
            mandatory: false,
            summary: "squeezed displaced number state: single-sum form taken literally",
            run: single_sum_form,
        },
        Check {
            name: "reductions",
            mandatory: true,
            summary: "special-case reductions between families",
            run: reductions,
        },
        Check {
            name: "oracle",
            mandatory: true,
            summary: "every family against the truncated Fock-space construction",
            run: oracle_equivalence,
        },
        Check {
            name: "s1-oracle",
            mandatory: true,
            summary: "correlation sum against its oracle evaluation",
            run: s1_against_oracle,
        },
    ]
}

/// Runs all checks, or only the one named `only`.
pub fn run(only: Option<&str>, cfg: &XcheckConfig) -> Result<Vec<CheckReport>> {
    let all = checks();
    let selected: Vec<&Check> = match only {
        Some(name) => {
            let c = all.iter().filter(|c| c.name == name).collect::<Vec<_>>();
            if c.is_empty() {
                let names: Vec<&str> = all.iter().map(|c| c.name).collect();
                return Err(Error::invalid(format!(
                    "unknown check '{name}' (known: {})",
                    names.join(", ")
                )));
            }
            c
        }
        None => all.iter().collect(),
    };
    Ok(selected.into_iter().map(|c| run_one(c, cfg)).collect())
}

pub fn run_one(c: &Check, cfg: &XcheckConfig) -> CheckReport {
    let t = Instant::now();
    let o = (c.run)(cfg);
    CheckReport {
        name: c.name,
        mandatory: c.mandatory,
        passed: o.worst <= o.tolerance,
        worst: o.worst,
        tolerance: o.tolerance,
        detail: o.detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn kernel_forms(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    let mut count = 0;
    for &r in &[0.3, 0.9, 1.3] {
        for n in 0..=40 {
            for l in (n % 2..=40).step_by(2) {
                let a = squeezed_fock_kernel_sum(r, n, l);
                match squeezed_fock_kernel(r, n, l) {
                    Ok((b, _)) => {
                        let d = (a.to_real() - b.to_real()).abs() / a.to_real().abs().max(b.to_real().abs());
                        let d = if a.to_real() == 0.0 && b.to_real() == 0.0 {
                            0.0
                        } else {
                            d
                        };
                        w.see(d, || format!("r={r} n={n} l={l}"));
                    }
                    Err(e) => w.see(f64::INFINITY, || format!("r={r} n={n} l={l}: {e}")),
                }
                count += 1;
            }
        }
    }
    w.outcome(IDENTITY_REL_TOL, format!("{count} kernel values"))
}

fn squeezed_thermal_forms(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    let mut complex_v = 0;
    let mut min_reach = usize::MAX;
    let n = 80;
    for &nt in &[1.0, 2.0, 10.0] {
        for &r in &[0.2, 0.5, 1.0, 1.5] {
            if legendre_v_squared(r, nt) < 0.0 {
                complex_v += 1;
            }
            let p = match pmf_squeezed_thermal(r, nt, n) {
                Ok(p) => p,
                Err(e) => return Outcome::failed(format!("nt={nt} r={r}: {e}"), IDENTITY_REL_TOL),
            };
            let at = |name: &str| format!("{name} nt={nt} r={r}");
            w.see_result(pmf_squeezed_thermal_lsum(r, nt, n, 1e-30).map(|d| rel(&d, &p)), || {
                at("thermal-sum")
            });
            w.see_result(
                pmf_squeezed_thermal_legendre_literal(r, nt, n).map(|d| rel(&d, &p)),
                || at("legendre"),
            );
            // The alternating hypergeometric series is compared where it
            // reports no precision loss.
            match reach(n, |k| pmf_squeezed_thermal_2f1(r, nt, k), |k| (k + 2) as f64) {
                Some((k, d)) if k >= MIN_REACH => {
                    min_reach = min_reach.min(k);
                    w.see(relative_gap(d.probs(), &p.probs()[..=k]), || {
                        at(&format!("2f1 (n<={k})"))
                    });
                }
                other => w.see(f64::INFINITY, || at(&format!("2f1 reach {:?}", other.map(|x| x.0)))),
            }
        }
    }
    if complex_v == 0 {
        return Outcome::failed("grid has no point above critical squeezing", IDENTITY_REL_TOL);
    }
    w.outcome(
        IDENTITY_REL_TOL,
        format!("12 points, {complex_v} above critical squeezing, hypergeometric form certified to n>={min_reach}"),
    )
}

fn confluent_form(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    for &(b2, nt) in &[(25.0, 5.0), (1.0, 0.3), (100.0, 10.0), (10.0, 1.0)] {
        let res = pmf_mixed_coherent_thermal_series(b2, nt, 400)
            .and_then(|a| pmf_mixed_coherent_thermal(b2, nt, 400).map(|b| rel(&a, &b)));
        w.see_result(res, || format!("({b2}, {nt})"));
    }
    w.outcome(IDENTITY_REL_TOL, "4 points, n<=400".into())
}

fn critical_form(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    for &nt in &[0.5, 1.0, 10.0] {
        let rs = critical_squeezing(nt);
        let res = pmf_squeezed_thermal_critical(rs, nt, 80)
            .and_then(|a| pmf_squeezed_thermal(rs, nt, 80).map(|b| rel(&a, &b)));
        w.see_result(res, || format!("nt={nt}"));
    }
    w.outcome(IDENTITY_REL_TOL, "3 thermal means".into())
}

fn quadrature_expansion(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    let mut min_reach = usize::MAX;
    for &(b2, nt, r) in &[(4.0, 2.0, 0.8), (10.0, 10.0, 1.0), (0.0, 1.0, 1.0), (1.0, 0.5, 0.4)] {
        match reach(40, |k| pmf_vourdas_quadrature_expansion(b2, nt, r, k), |_| 16.0) {
            Some((k, a)) if k >= MIN_REACH => {
                min_reach = min_reach.min(k);
                let res = pmf_mixed_squeezed_coherent_thermal(b2, nt, r, k).map(|b| rel(&a, &b));
                w.see_result(res, || format!("({b2}, {nt}, {r}) n<={k}"));
            }
            other => w.see(f64::INFINITY, || {
                format!("({b2}, {nt}, {r}) reach {:?}", other.map(|x| x.0))
            }),
        }
    }
    w.outcome(
        IDENTITY_REL_TOL,
        format!("4 points, expansion certified to n>={min_reach}"),
    )
}

fn gaussian_view(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    for &(b2, nt, r) in &[(10.0, 10.0, 1.0), (4.0, 2.0, 0.8), (0.0, 1.0, 1.0), (25.0, 0.3, 0.2)] {
        let res = pmf_vourdas_gaussian(b2, nt, r, 300)
            .and_then(|a| pmf_mixed_squeezed_coherent_thermal(b2, nt, r, 300).map(|b| rel(&a, &b)));
        w.see_result(res, || format!("({b2}, {nt}, {r})"));
    }
    w.outcome(IDENTITY_REL_TOL, "4 points, n<=300".into())
}

const SDNS_POINTS: [(f64, f64, f64, usize); 5] = [
    (2.0, 0.5, 0.0, 1),
    (10.0, 1.0, 0.0, 2),
    (3.0, 0.9, PI, 5),
    (0.0, 0.7, 1.0, 3),
    (4.0, 0.7, PI / 2.0, 2),
];

fn ladder_expansion(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    for &(b2, r, psi, m) in &SDNS_POINTS {
        let res = pmf_sdns_ladder(b2, r, psi, m, 60)
            .and_then(|a| pmf_squeezed_displaced_number(b2, r, psi, m, 60).map(|b| rel(&a, &b)));
        w.see_result(res, || format!("({b2}, {r}, {psi:.3}, m={m})"));
    }
    w.outcome(IDENTITY_REL_TOL, "5 points, n<=60".into())
}

fn single_sum_form(_: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    for &(b2, r, psi, m) in &SDNS_POINTS {
        let a = pmf_sdns_single_sum(b2, r, psi, m, 30);
        let res = pmf_squeezed_displaced_number(b2, r, psi, m, 30).map(|b| relative_gap(&a, b.probs()));
        w.see_result(res, || format!("({b2}, {r}, {psi:.3}, m={m})"));
    }
    w.outcome(IDENTITY_REL_TOL, "advisory; single-sum form taken literally".into())
}

fn reductions(_: &XcheckConfig) -> Outcome {
    let z = 1e-7;
    let mut w = Worst::new();
    let mut count = 0;
    let mut cmp = |label: String, a: Result<PhotonDistribution>, b: Result<PhotonDistribution>| {
        count += 1;
        let res = a.and_then(|a| b.map(|b| absolute_gap(a.probs(), b.probs())));
        w.see_result(res, || label.clone());
    };
    for &b2 in &[1.0, 10.0] {
        cmp(
            format!("mixed-ct(nt->0) = coherent, b2={b2}"),
            pmf_mixed_coherent_thermal(b2, z, 120),
            pmf_coherent(b2, 120),
        );
        cmp(
            format!("sq-coh(r->0) = coherent, b2={b2}"),
            pmf_squeezed_coherent(b2, z, 0.3, 120),
            pmf_coherent(b2, 120),
        );
        cmp(
            format!("displaced-number(0) = coherent, b2={b2}"),
            pmf_displaced_number(b2, 0, 120),
            pmf_coherent(b2, 120),
        );
        cmp(
            format!("mixed-sct(r->0) = mixed-ct, b2={b2}"),
            pmf_mixed_squeezed_coherent_thermal(b2, 2.0, z, 200),
            pmf_mixed_coherent_thermal(b2, 2.0, 200),
        );
    }
    for &nt in &[1.0, 10.0] {
        cmp(
            format!("mixed-ct(0) = thermal, nt={nt}"),
            pmf_mixed_coherent_thermal(0.0, nt, 400),
            pmf_thermal(nt, 400),
        );
    }
    for &r in &[0.5, 1.0, 2.0] {
        cmp(
            format!("sq-fock(0) = sq-vac, r={r}"),
            pmf_squeezed_fock(r, 0, 400),
            pmf_squeezed_vacuum(r, 400),
        );
        cmp(
            format!("sq-coh(0) = sq-vac, r={r}"),
            pmf_squeezed_coherent(0.0, r, 1.1, 400),
            pmf_squeezed_vacuum(r, 400),
        );
        for &nt in &[1.0, 10.0] {
            for v in [Variant::Dsts, Variant::Sdts] {
                cmp(
                    format!("{v}(b=0) = sq-thermal, r={r} nt={nt}"),
                    pmf_displaced_squeezed_thermal(0.0, nt, r, 0.4, v, 400),
                    pmf_squeezed_thermal(r, nt, 400),
                );
            }
        }
    }
    for &(b2, r, psi) in &[(1.0, 0.5, 0.0), (10.0, 1.0, PI / 2.0), (4.0, 0.8, PI), (2.0, 0.3, 2.5)] {
        let sc = || pmf_squeezed_coherent(b2, r, psi, 300);
        cmp(
            format!("dsts(nt=0) = sq-coh, {b2} {r} {psi:.3}"),
            pmf_displaced_squeezed_thermal(b2, 0.0, r, psi, Variant::Dsts, 300),
            sc(),
        );
        let c = b2.sqrt() * (r.cosh() + Complex64::from_polar(1.0, psi) * r.sinh());
        cmp(
            format!("sdts(nt=0) = sq-coh, {b2} {r} {psi:.3}"),
            pmf_displaced_squeezed_thermal(b2, 0.0, r, psi, Variant::Sdts, 300),
            pmf_squeezed_coherent(c.norm_sqr(), r, psi - 2.0 * c.arg(), 300),
        );
        cmp(
            format!("sdns(m=0) = sq-coh, {b2} {r} {psi:.3}"),
            pmf_squeezed_displaced_number(b2, r, psi, 0, 300),
            sc(),
        );
    }
    for &(b2, nt) in &[(1.0, 1.0), (10.0, 2.0)] {
        for v in [Variant::Dsts, Variant::Sdts] {
            cmp(
                format!("{v}(r=0) = mixed-ct, {b2} {nt}"),
                pmf_displaced_squeezed_thermal(b2, nt, 0.0, 0.9, v, 200),
                pmf_mixed_coherent_thermal(b2, nt, 200),
            );
        }
    }
    for &m in &[1, 2, 5] {
        cmp(
            format!("sdns(r->0) = displaced-number, m={m}"),
            pmf_squeezed_displaced_number(3.0, z, 0.7, m, 100),
            pmf_displaced_number(3.0, m, 100),
        );
    }
    // The general Gaussian form contains the simpler families.
    let g = |b2, nt, r| pmf_displaced_squeezed_thermal(b2, nt, r, PI, Variant::Dsts, 200);
    cmp("gaussian = coherent".into(), g(5.0, 0.0, 0.0), pmf_coherent(5.0, 200));
    cmp("gaussian = thermal".into(), g(0.0, 3.0, 0.0), pmf_thermal(3.0, 200));
    cmp(
        "gaussian = mixed-ct".into(),
        g(5.0, 3.0, 0.0),
        pmf_mixed_coherent_thermal(5.0, 3.0, 200),
    );
    cmp(
        "gaussian = sq-vac".into(),
        g(0.0, 0.0, 1.0),
        pmf_squeezed_vacuum(1.0, 200),
    );
    cmp(
        "gaussian = sq-thermal".into(),
        g(0.0, 3.0, 1.0),
        pmf_squeezed_thermal(1.0, 3.0, 200),
    );
    cmp(
        "gaussian = sq-coh".into(),
        g(5.0, 0.0, 1.0),
        pmf_squeezed_coherent(5.0, 1.0, PI, 200),
    );
    w.outcome(REDUCTION_TOL, format!("{count} reductions, absolute"))
}

/// Small states of every family used for the oracle comparison.
pub fn oracle_cases() -> Vec<StateSpec> {
    let v = [
        StateSpec::coherent(4.0),
        StateSpec::coherent(7.5),
        StateSpec::thermal(2.0),
        StateSpec::fock(5),
        StateSpec::mixed_coherent_thermal(3.0, 1.0),
        StateSpec::squeezed_vacuum(1.2),
        StateSpec::squeezed_fock(0.9, 2),
        StateSpec::squeezed_fock(0.5, 3),
        StateSpec::squeezed_thermal(0.8, 1.0),
        StateSpec::squeezed_coherent(4.0, 0.7, 0.4),
        StateSpec::squeezed_coherent(4.0, 0.7, PI),
        StateSpec::mixed_squeezed_coherent_thermal(2.0, 1.0, 0.6),
        StateSpec::mixed_squeezed_coherent_thermal(0.0, 1.0, 1.0),
        StateSpec::displaced_squeezed_thermal(2.0, 1.0, 0.6, 0.9, Variant::Dsts),
        StateSpec::displaced_squeezed_thermal(2.0, 1.0, 0.6, 0.9, Variant::Sdts),
        StateSpec::displaced_number(3.0, 2),
        StateSpec::squeezed_displaced_number(4.0, 0.7, 0.0, 2),
        StateSpec::squeezed_displaced_number(4.0, 0.7, 1.1, 2),
    ];
    v.into_iter().map(|s| s.expect("valid oracle case")).collect()
}

/// Largest `|closed form - oracle|` over the first `dim` entries.
pub fn oracle_gap(spec: &StateSpec, dim: usize) -> Result<f64> {
    let dm = build_state(spec, dim)?;
    let p = pmf_fixed(spec, dim - 1)?;
    Ok(absolute_gap(&dm.diagonal()[..dim], p.probs()))
}

fn oracle_equivalence(cfg: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    let cases = oracle_cases();
    for s in &cases {
        w.see_result(oracle_gap(s, cfg.oracle_dim), || s.to_string());
    }
    w.outcome(
        ORACLE_TOL,
        format!("{} states, first {} entries, absolute", cases.len(), cfg.oracle_dim),
    )
}

fn s1_against_oracle(cfg: &XcheckConfig) -> Outcome {
    let mut w = Worst::new();
    for (spec, delta) in [
        (StateSpec::coherent(4.0), 5.0),
        (StateSpec::squeezed_thermal(0.5, 1.0), 0.0),
    ] {
        let spec = spec.expect("valid");
        let res = (|| -> Result<f64> {
            let dm = build_state(&spec, cfg.oracle_dim)?;
            let pmf = pmf_fixed(&spec, dm.dim() - 1)?;
            let dyncfg = DynamicsConfig {
                delta,
                z_max: 40.0,
                ..Default::default()
            };
            let mode = if delta > 0.0 { Mode::NonResonant } else { Mode::Resonant };
            let ts = s1_series(&pmf, &dyncfg, mode)?;
            let orc = s1_oracle(&dm, delta, &ts.z);
            Ok(absolute_gap(&ts.s1, &orc.s1))
        })();
        w.see_result(res, || format!("{spec} delta={delta}"));
    }
    w.outcome(ORACLE_TOL, "2 series on z in [0, 40]".into())
}
