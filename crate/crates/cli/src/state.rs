//! Turning command-line or manifest parameters into a validated state.

use std::f64::consts::PI;

use clap::Args;
use jcm_core::states::{NmaxPolicy, Params, DEFAULT_EPS_TAIL, DEFAULT_HARD_CAP};
use jcm_core::{Family, StateSpec, Variant};

use crate::error::{CliError, CliResult};

pub const CAP_ENV: &str = "JCM_HARD_NMAX_CAP";

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// State family, e.g. coherent, thermal, squeezed-thermal, sdns.
    #[arg(long)]
    pub family: String,
    /// Mean coherent photon number |beta|^2.
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Mean thermal photon number.
    #[arg(long)]
    pub nt: Option<f64>,
    /// Squeezing parameter.
    #[arg(long)]
    pub r: Option<f64>,
    /// Phase; a number or an expression such as pi, pi/2, -pi/4, 0.5pi.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub psi: Option<f64>,
    /// Fock level of a number-state family.
    #[arg(long)]
    pub l: Option<usize>,
    /// Same as --l, for the squeezed displaced number state.
    #[arg(long)]
    pub m: Option<usize>,
    /// Operator order of the displaced squeezed thermal state: dsts or sdts.
    #[arg(long)]
    pub variant: Option<String>,
    /// Truncation: a number, or auto.
    #[arg(long, default_value = "auto")]
    pub nmax: String,
    #[arg(long, default_value_t = DEFAULT_EPS_TAIL)]
    pub eps_tail: f64,
}

/// Family and raw parameters, shared by the command line and manifests.
#[derive(Debug, Clone, Default)]
pub struct StateInput {
    pub family: String,
    pub beta2: Option<f64>,
    pub nt: Option<f64>,
    pub r: Option<f64>,
    pub psi: Option<f64>,
    pub level: Option<usize>,
    pub variant: Option<String>,
    pub nmax: Option<usize>,
    pub eps_tail: f64,
}

impl StateArgs {
    pub fn input(&self) -> CliResult<StateInput> {
        if self.l.is_some() && self.m.is_some() {
            return Err(CliError::usage("give either --l or --m, not both"));
        }
        let nmax = match self.nmax.trim() {
            "auto" => None,
            s => Some(
                s.parse::<usize>()
                    .map_err(|_| CliError::usage(format!("--nmax must be a number or auto, got '{s}'")))?,
            ),
        };
        Ok(StateInput {
            family: self.family.clone(),
            beta2: self.beta2,
            nt: self.nt,
            r: self.r,
            psi: self.psi,
            level: self.l.or(self.m),
            variant: self.variant.clone(),
            nmax,
            eps_tail: self.eps_tail,
        })
    }
}

impl StateInput {
    pub fn spec(&self) -> CliResult<StateSpec> {
        let family: Family = self.family.parse()?;
        let key = self.family.trim().to_ascii_lowercase();
        let variant = match (&self.variant, key.as_str()) {
            (Some(v), _) => Some(v.parse::<Variant>()?),
            // The variant names double as family aliases.
            (None, "sdts") => Some(Variant::Sdts),
            (None, "dsts") => Some(Variant::Dsts),
            (None, _) => None,
        };
        let p = Params {
            beta_sq: self.beta2,
            n_t: self.nt,
            r: self.r,
            psi: self.psi,
            level: self.level,
            variant,
        };
        Ok(StateSpec::new(family, &p)?)
    }

    pub fn policy(&self) -> CliResult<NmaxPolicy> {
        if !(self.eps_tail > 0.0 && self.eps_tail < 1.0) {
            return Err(CliError::usage(format!(
                "--eps-tail must lie in (0, 1), got {}",
                self.eps_tail
            )));
        }
        Ok(match self.nmax {
            Some(n) => NmaxPolicy::Fixed(n),
            None => NmaxPolicy::Auto {
                eps_tail: self.eps_tail,
                cap: hard_cap()?,
            },
        })
    }
}

/// The truncation cap, overridable through the environment.
pub fn hard_cap() -> CliResult<usize> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::usage(format!("{CAP_ENV} must be a positive integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_HARD_CAP),
    }
}

/// Parses a number or a multiple of pi: `pi`, `-pi/2`, `0.25pi`, `3*pi/4`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let err = || format!("cannot read '{s}' as an angle");
    let (head, den) = match t.split_once('/') {
        Some((h, d)) => (h, d.parse::<f64>().map_err(|_| err())?),
        None => (t.as_str(), 1.0),
    };
    let coef = head.strip_suffix("pi").ok_or_else(err)?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let k = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| err())?,
    };
    if den == 0.0 {
        return Err(err());
    }
    Ok(k * PI / den)
}
