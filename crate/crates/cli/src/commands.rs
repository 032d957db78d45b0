//! The computations behind each subcommand, shared with the sweep runner.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use jcm_core::dynamics::{envelope_metrics, s1_values, z_grid, DynamicsConfig, EnvelopeMetrics, Mode, TimeSeries};
use jcm_core::states::{closed_form_moments, pmf, NmaxPolicy};
use jcm_core::xcheck::{self, CheckReport, XcheckConfig};
use jcm_core::{Family, PhotonDistribution, StateSpec};

use crate::error::{CliError, CliResult};
use crate::svg::{Plot, Series, Style};
use crate::table::{Column, Table};

/// Family parameters as an ordered JSON object.
pub struct ParamMap(StateSpec);

impl Serialize for ParamMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let d = self.0.describe();
        let dsts = self.0.family() == Family::DisplacedSqueezedThermal;
        let mut m = s.serialize_map(Some(d.len() + usize::from(dsts)))?;
        for (k, v) in d {
            if k == "level" {
                m.serialize_entry(k, &(v as usize))?;
            } else {
                m.serialize_entry(k, &v)?;
            }
        }
        if dsts {
            m.serialize_entry("variant", &self.0.variant().to_string())?;
        }
        m.end()
    }
}

#[derive(Serialize)]
pub struct PmfSummary {
    pub family: &'static str,
    pub params: ParamMap,
    pub n_max: usize,
    pub mean: f64,
    pub variance: f64,
    pub tail_mass: f64,
    pub norm_residual: f64,
}

pub struct PmfOutput {
    pub dist: PhotonDistribution,
    pub table: Table,
    pub summary: PmfSummary,
    spec: StateSpec,
    delta: f64,
}

pub fn pmf_run(spec: &StateSpec, policy: NmaxPolicy, delta: f64) -> CliResult<PmfOutput> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(CliError::usage(format!("--delta must be finite and >= 0, got {delta}")));
    }
    let mut dist = pmf(spec, policy)?;
    if matches!(policy, NmaxPolicy::Auto { .. }) {
        // Automatic truncation keeps at least two entries; exact zeros past
        // the support carry no information.
        let last = dist.probs().iter().rposition(|&x| x != 0.0).unwrap_or(0);
        if last < dist.n_max() {
            dist = dist.truncated(last)?;
        }
    }
    let p = dist.probs();
    let weighted: Vec<f64> = p
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let m = n as f64 + 1.0;
            x * m / (m + delta)
        })
        .collect();
    let table = Table::new(vec![
        ("n", Column::Index((0..p.len()).collect())),
        ("rho_nn", Column::Real(p.to_vec())),
        ("rho_nn_weighted", Column::Real(weighted)),
    ]);
    let m = dist.moments();
    let summary = PmfSummary {
        family: spec.family().name(),
        params: ParamMap(*spec),
        n_max: dist.n_max(),
        mean: m.mean,
        variance: m.variance,
        tail_mass: dist.tail_mass(),
        norm_residual: dist.norm_residual(),
    };
    Ok(PmfOutput {
        dist,
        table,
        summary,
        spec: *spec,
        delta,
    })
}

impl PmfOutput {
    pub fn svg(&self) -> String {
        let n: Vec<f64> = (0..=self.dist.n_max()).map(|k| k as f64).collect();
        let mut series = vec![Series {
            label: "rho_nn",
            x: &n,
            y: self.dist.probs(),
        }];
        if self.delta > 0.0 {
            let Column::Real(w) = &self.table.columns[2].1 else {
                unreachable!()
            };
            series.push(Series {
                label: "rho_nn (n+1)/(n+1+delta)",
                x: &n,
                y: w,
            });
        }
        Plot {
            title: self.spec.to_string(),
            x_label: "n",
            y_label: "rho_nn",
            style: Style::Stem,
            series,
        }
        .render()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    R,
    Nr,
    Both,
}

#[derive(Serialize)]
pub struct SeriesSummary {
    pub time_average: f64,
    pub envelope_max: f64,
    pub envelope: EnvelopeMetrics,
}

#[derive(Serialize)]
pub struct DynSummary {
    pub family: &'static str,
    pub params: ParamMap,
    pub delta: f64,
    pub z_max: f64,
    pub samples_per_period: usize,
    pub n_max: usize,
    pub samples: usize,
    pub mean_photons: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resonant: Option<SeriesSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_resonant: Option<SeriesSummary>,
}

pub struct DynOutput {
    pub table: Table,
    pub summary: DynSummary,
    series: Vec<TimeSeries>,
    spec: StateSpec,
}

fn summarize(t: &TimeSeries) -> SeriesSummary {
    SeriesSummary {
        time_average: t.time_average,
        envelope_max: t.envelope_max,
        envelope: envelope_metrics(t),
    }
}

/// Samples the requested modes on one grid, fine enough for the detuned
/// frequencies when both are wanted.
pub fn dyn_run(spec: &StateSpec, policy: NmaxPolicy, cfg: &DynamicsConfig, mode: ModeArg) -> CliResult<DynOutput> {
    cfg.validate()?;
    let dist = pmf(spec, policy)?;
    let n_bar = dist.moments().mean;
    let grid_delta = if mode == ModeArg::R { 0.0 } else { cfg.delta };
    let z = z_grid(n_bar, dist.n_max(), grid_delta, cfg);
    let modes: &[Mode] = match mode {
        ModeArg::R => &[Mode::Resonant],
        ModeArg::Nr => &[Mode::NonResonant],
        ModeArg::Both => &[Mode::Resonant, Mode::NonResonant],
    };
    let mut series = Vec::new();
    for &m in modes {
        let s1 = s1_values(dist.probs(), n_bar, cfg.delta, m, &z);
        if s1.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Numeric("non-finite correlation sum".into()));
        }
        let d = if m == Mode::Resonant { 0.0 } else { cfg.delta };
        series.push(TimeSeries::from_parts(z.clone(), s1, m, n_bar, d));
    }
    let mut cols = vec![("z", Column::Real(z.clone()))];
    let single = series.len() == 1;
    for t in &series {
        let name = match (single, t.mode) {
            (true, _) => "s1",
            (false, Mode::Resonant) => "s1_r",
            (false, Mode::NonResonant) => "s1_nr",
        };
        cols.push((name, Column::Real(t.s1.clone())));
    }
    let find = |m: Mode| series.iter().find(|t| t.mode == m).map(summarize);
    let summary = DynSummary {
        family: spec.family().name(),
        params: ParamMap(*spec),
        delta: cfg.delta,
        z_max: cfg.z_max,
        samples_per_period: cfg.samples_per_period,
        n_max: dist.n_max(),
        samples: z.len(),
        mean_photons: n_bar,
        resonant: find(Mode::Resonant),
        non_resonant: find(Mode::NonResonant),
    };
    Ok(DynOutput {
        table: Table::new(cols),
        summary,
        series,
        spec: *spec,
    })
}

impl DynOutput {
    pub fn svg(&self) -> String {
        Plot {
            title: format!("{} delta={}", self.spec, self.summary.delta),
            x_label: "z = sqrt(nbar+1) gamma t",
            y_label: "S1",
            style: Style::Line,
            series: self
                .series
                .iter()
                .map(|t| Series {
                    label: if t.mode == Mode::Resonant {
                        "S1 resonant"
                    } else {
                        "S1 non-resonant"
                    },
                    x: &t.z,
                    y: &t.s1,
                })
                .collect(),
        }
        .render()
    }
}

#[derive(Serialize)]
pub struct AbsDiffs {
    pub mean: f64,
    pub var: f64,
}

#[derive(Serialize)]
pub struct MomentsSummary {
    pub family: &'static str,
    pub params: ParamMap,
    pub closed_mean: f64,
    pub closed_var: f64,
    pub pmf_mean: f64,
    pub pmf_var: f64,
    pub abs_diffs: AbsDiffs,
    pub n_max: usize,
    /// Estimated contribution of the truncated tail to each moment.
    pub tail_bounds: AbsDiffs,
}

pub fn moments_run(spec: &StateSpec, policy: NmaxPolicy) -> CliResult<MomentsSummary> {
    let c = closed_form_moments(spec);
    let d = pmf(spec, policy)?;
    let m = d.moments();
    let (t1, t2) = d.moment_tail_bounds();
    Ok(MomentsSummary {
        family: spec.family().name(),
        params: ParamMap(*spec),
        closed_mean: c.mean,
        closed_var: c.variance,
        pmf_mean: m.mean,
        pmf_var: m.variance,
        abs_diffs: AbsDiffs {
            mean: (c.mean - m.mean).abs(),
            var: (c.variance - m.variance).abs(),
        },
        n_max: d.n_max(),
        tail_bounds: AbsDiffs { mean: t1, var: t2 },
    })
}

pub fn xcheck_run(only: Option<&str>, dim: usize) -> CliResult<Vec<CheckReport>> {
    if !(8..=jcm_core::oracle::MAX_DIM).contains(&dim) {
        return Err(CliError::usage(format!(
            "--dim must lie in 8..={}, got {dim}",
            jcm_core::oracle::MAX_DIM
        )));
    }
    Ok(xcheck::run(only, &XcheckConfig { oracle_dim: dim })?)
}

pub fn xcheck_table(reports: &[CheckReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut s = format!(
        "{:<width$}  {:<8}  {:>10}  {:>8}  {:>7}  detail\n",
        "check", "status", "worst", "tol", "seconds"
    );
    for r in reports {
        let status = match (r.passed, r.mandatory) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "advisory",
        };
        s.push_str(&format!(
            "{:<width$}  {:<8}  {:>10.3e}  {:>8.0e}  {:>7.2}  {}\n",
            r.name, status, r.worst, r.tolerance, r.seconds, r.detail
        ));
    }
    s
}
