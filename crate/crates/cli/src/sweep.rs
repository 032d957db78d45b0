//! Batch runs from a TOML manifest.
//!
//! ```toml
//! [defaults]          # optional, applies to every run
//! zmax = 100.0
//! spp = 20
//!
//! [[run]]
//! name = "coherent-10"   # output directory, [A-Za-z0-9._-]
//! family = "coherent"
//! beta2 = 10.0
//! delta = 10.0
//! outputs = ["pmf", "dyn"]
//! ```
//!
//! Per-run keys: family, beta2, nt, r, psi (number or "pi/2"-style string),
//! l, m, variant, nmax, eps_tail, delta, zmax, spp, mode (r, nr, both),
//! outputs, svg. Every key except name and family may also sit in
//! `[defaults]`.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use jcm_core::dynamics::DynamicsConfig;
use jcm_core::states::DEFAULT_EPS_TAIL;

use crate::commands::{dyn_run, pmf_run, ModeArg};
use crate::error::{CliError, CliResult};
use crate::state::{parse_angle, StateInput};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Angle {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
enum Output {
    Pmf,
    Dyn,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Settings {
    beta2: Option<f64>,
    nt: Option<f64>,
    r: Option<f64>,
    psi: Option<Angle>,
    l: Option<usize>,
    m: Option<usize>,
    variant: Option<String>,
    nmax: Option<usize>,
    eps_tail: Option<f64>,
    delta: Option<f64>,
    zmax: Option<f64>,
    spp: Option<usize>,
    mode: Option<ModeArg>,
    outputs: Option<Vec<Output>>,
    svg: Option<bool>,
}

#[derive(Debug, Clone)]
struct RunEntry {
    name: String,
    family: String,
    settings: Settings,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    defaults: Settings,
    #[serde(default)]
    run: Vec<toml::Table>,
}

impl RunEntry {
    fn from_table(mut t: toml::Table) -> CliResult<Self> {
        let mut take = |key: &str| match t.remove(key) {
            Some(toml::Value::String(s)) => Ok(s),
            Some(_) => Err(CliError::usage(format!("run key '{key}' must be a string"))),
            None => Err(CliError::usage(format!("every run needs '{key}'"))),
        };
        let name = take("name")?;
        let family = take("family")?;
        let settings = Settings::deserialize(t).map_err(|e| CliError::usage(format!("run '{name}': {e}")))?;
        Ok(RunEntry { name, family, settings })
    }
}

/// A manifest entry with defaults applied.
#[derive(Debug, Clone)]
struct Job {
    name: String,
    state: StateInput,
    psi_text: Option<String>,
    dynamics: DynamicsConfig,
    mode: ModeArg,
    outputs: Vec<Output>,
    svg: bool,
}

fn merge(d: &Settings, e: &RunEntry) -> Job {
    let s = &e.settings;
    let psi = s.psi.clone().or_else(|| d.psi.clone());
    let (psi, psi_text) = match psi {
        Some(Angle::Num(v)) => (Some(v), None),
        Some(Angle::Text(t)) => (None, Some(t)),
        None => (None, None),
    };
    let eps_tail = s.eps_tail.or(d.eps_tail).unwrap_or(DEFAULT_EPS_TAIL);
    let base = DynamicsConfig::default();
    Job {
        name: e.name.clone(),
        state: StateInput {
            family: e.family.clone(),
            beta2: s.beta2.or(d.beta2),
            nt: s.nt.or(d.nt),
            r: s.r.or(d.r),
            psi,
            level: s.l.or(s.m).or(d.l).or(d.m),
            variant: s.variant.clone().or_else(|| d.variant.clone()),
            nmax: s.nmax.or(d.nmax),
            eps_tail,
        },
        psi_text,
        dynamics: DynamicsConfig {
            delta: s.delta.or(d.delta).unwrap_or(0.0),
            z_max: s.zmax.or(d.zmax).unwrap_or(base.z_max),
            samples_per_period: s.spp.or(d.spp).unwrap_or(base.samples_per_period),
            eps_tail,
            prefactor: 1.0,
        },
        mode: s.mode.or(d.mode).unwrap_or(ModeArg::Both),
        outputs: s
            .outputs
            .clone()
            .or_else(|| d.outputs.clone())
            .unwrap_or(vec![Output::Pmf, Output::Dyn]),
        svg: s.svg.or(d.svg).unwrap_or(false),
    }
}

fn load(path: &Path) -> CliResult<Vec<Job>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let m: Manifest = toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if m.run.is_empty() {
        return Err(CliError::usage(format!("{}: no runs", path.display())));
    }
    let runs = m
        .run
        .into_iter()
        .map(RunEntry::from_table)
        .collect::<CliResult<Vec<_>>>()?;
    let mut seen = std::collections::HashSet::new();
    for e in &runs {
        let ok = !e.name.is_empty()
            && !e.name.starts_with('.')
            && e.name.chars().all(|c| c.is_ascii_alphanumeric() || "._-".contains(c));
        if !ok {
            return Err(CliError::usage(format!(
                "run name '{}' must use only [A-Za-z0-9._-]",
                e.name
            )));
        }
        if !seen.insert(e.name.as_str()) {
            return Err(CliError::usage(format!("duplicate run name '{}'", e.name)));
        }
        if e.settings.l.is_some() && e.settings.m.is_some() {
            return Err(CliError::usage(format!(
                "run '{}': give either l or m, not both",
                e.name
            )));
        }
    }
    Ok(runs.iter().map(|e| merge(&m.defaults, e)).collect())
}

#[derive(Serialize)]
struct RunRecord {
    name: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exit_code: Option<u8>,
    files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pmf: Option<Value>,
    #[serde(rename = "dyn", skip_serializing_if = "Option::is_none")]
    dynamics: Option<Value>,
}

fn write(dir: &Path, name: &str, bytes: &[u8], files: &mut Vec<String>) -> CliResult<()> {
    let p = dir.join(name);
    fs::write(&p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    files.push(name.to_string());
    Ok(())
}

fn json_line<T: Serialize>(v: &T) -> CliResult<Vec<u8>> {
    let mut b = serde_json::to_vec_pretty(v)?;
    b.push(b'\n');
    Ok(b)
}

fn execute(job: &Job, dir: &Path, files: &mut Vec<String>) -> CliResult<(Option<Value>, Option<Value>)> {
    let mut state = job.state.clone();
    if let Some(t) = &job.psi_text {
        state.psi = Some(parse_angle(t).map_err(CliError::usage)?);
    }
    let spec = state.spec()?;
    let policy = state.policy()?;
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let (mut pmf_v, mut dyn_v) = (None, None);
    if job.outputs.contains(&Output::Pmf) {
        let out = pmf_run(&spec, policy, job.dynamics.delta)?;
        let mut csv = Vec::new();
        out.table.write_csv(&mut csv)?;
        write(dir, "pmf.csv", &csv, files)?;
        write(dir, "pmf.json", &json_line(&out.summary)?, files)?;
        if job.svg {
            write(dir, "pmf.svg", out.svg().as_bytes(), files)?;
        }
        pmf_v = Some(serde_json::to_value(&out.summary)?);
    }
    if job.outputs.contains(&Output::Dyn) {
        let out = dyn_run(&spec, policy, &job.dynamics, job.mode)?;
        let mut csv = Vec::new();
        out.table.write_csv(&mut csv)?;
        write(dir, "dyn.csv", &csv, files)?;
        write(dir, "dyn.json", &json_line(&out.summary)?, files)?;
        if job.svg {
            write(dir, "dyn.svg", out.svg().as_bytes(), files)?;
        }
        dyn_v = Some(serde_json::to_value(&out.summary)?);
    }
    Ok((pmf_v, dyn_v))
}

pub struct SweepResult {
    pub runs: usize,
    pub failed: usize,
    pub index: PathBuf,
}

/// Runs every manifest entry into `out/<name>/` and writes `out/index.json`.
/// Records are ordered as in the manifest whatever the pool size.
pub fn sweep(manifest: &Path, out: &Path, jobs: Option<usize>) -> CliResult<SweepResult> {
    let list = load(manifest)?;
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let work = || {
        list.par_iter()
            .map(|job| {
                let mut files = Vec::new();
                let res = execute(job, &out.join(&job.name), &mut files);
                let files = files.into_iter().map(|f| format!("{}/{f}", job.name)).collect();
                match res {
                    Ok((pmf, dynamics)) => {
                        log::info!("run {} done", job.name);
                        RunRecord {
                            name: job.name.clone(),
                            status: "ok",
                            error: None,
                            exit_code: None,
                            files,
                            pmf,
                            dynamics,
                        }
                    }
                    Err(e) => {
                        log::warn!("run {} failed: {e}", job.name);
                        RunRecord {
                            name: job.name.clone(),
                            status: "failed",
                            error: Some(e.to_string()),
                            exit_code: Some(e.exit_code()),
                            files,
                            pmf: None,
                            dynamics: None,
                        }
                    }
                }
            })
            .collect::<Vec<_>>()
    };
    let records = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CliError::Io(e.to_string()))?
            .install(work),
        None => work(),
    };
    let failed = records.iter().filter(|r| r.status != "ok").count();
    let index = out.join("index.json");
    let doc = serde_json::json!({ "runs": records });
    fs::write(&index, json_line(&doc)?).map_err(|e| CliError::Io(format!("{}: {e}", index.display())))?;
    Ok(SweepResult {
        runs: records.len(),
        failed,
        index,
    })
}
