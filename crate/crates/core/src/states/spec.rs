use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Thermal occupations below this are treated as exactly zero.
pub const NT_SWITCH: f64 = 1e-6;
/// Squeezing parameters below this are treated as exactly zero.
pub const R_SWITCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Coherent,
    Thermal,
    Fock,
    MixedCoherentThermal,
    SqueezedVacuum,
    SqueezedFock,
    SqueezedThermal,
    SqueezedCoherent,
    MixedSqueezedCoherentThermal,
    DisplacedSqueezedThermal,
    DisplacedNumber,
    SqueezedDisplacedNumber,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Coherent,
        Family::Thermal,
        Family::Fock,
        Family::MixedCoherentThermal,
        Family::SqueezedVacuum,
        Family::SqueezedFock,
        Family::SqueezedThermal,
        Family::SqueezedCoherent,
        Family::MixedSqueezedCoherentThermal,
        Family::DisplacedSqueezedThermal,
        Family::DisplacedNumber,
        Family::SqueezedDisplacedNumber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Coherent => "coherent",
            Family::Thermal => "thermal",
            Family::Fock => "fock",
            Family::MixedCoherentThermal => "mixed-coherent-thermal",
            Family::SqueezedVacuum => "squeezed-vacuum",
            Family::SqueezedFock => "squeezed-fock",
            Family::SqueezedThermal => "squeezed-thermal",
            Family::SqueezedCoherent => "squeezed-coherent",
            Family::MixedSqueezedCoherentThermal => "mixed-squeezed-coherent-thermal",
            Family::DisplacedSqueezedThermal => "displaced-squeezed-thermal",
            Family::DisplacedNumber => "displaced-number",
            Family::SqueezedDisplacedNumber => "squeezed-displaced-number",
        }
    }

    fn uses(self) -> Uses {
        use Family::*;
        let (beta, nt, r, psi, level) = match self {
            Coherent => (true, false, false, false, false),
            Thermal => (false, true, false, false, false),
            Fock => (false, false, false, false, true),
            MixedCoherentThermal => (true, true, false, false, false),
            SqueezedVacuum => (false, false, true, false, false),
            SqueezedFock => (false, false, true, false, true),
            SqueezedThermal => (false, true, true, false, false),
            SqueezedCoherent => (true, false, true, true, false),
            MixedSqueezedCoherentThermal => (true, true, true, false, false),
            DisplacedSqueezedThermal => (true, true, true, true, false),
            DisplacedNumber => (true, false, false, false, true),
            SqueezedDisplacedNumber => (true, false, true, true, true),
        };
        Uses {
            beta,
            nt,
            r,
            psi,
            level,
        }
    }
}

struct Uses {
    beta: bool,
    nt: bool,
    r: bool,
    psi: bool,
    level: bool,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "mixed-ct" => "mixed-coherent-thermal",
            "vourdas" | "mixed-sct" => "mixed-squeezed-coherent-thermal",
            "dsts" | "sdts" => "displaced-squeezed-thermal",
            "sdns" => "squeezed-displaced-number",
            other => other,
        };
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == alias)
            .ok_or_else(|| Error::invalid(format!("unknown family '{s}'")))
    }
}

/// Operator order of the displaced squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Displace after squeezing the thermal state.
    #[default]
    Dsts,
    /// Squeeze after displacing the thermal state.
    Sdts,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dsts" => Ok(Variant::Dsts),
            "sdts" => Ok(Variant::Sdts),
            _ => Err(Error::invalid(format!("unknown variant '{s}' (expected dsts or sdts)"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Dsts => "dsts",
            Variant::Sdts => "sdts",
        })
    }
}

/// Raw, optional parameters as they arrive from a user.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Params {
    pub beta_sq: Option<f64>,
    pub n_t: Option<f64>,
    pub r: Option<f64>,
    pub psi: Option<f64>,
    pub level: Option<usize>,
    pub variant: Option<Variant>,
}

/// A validated state family together with its parameters.
///
/// The coherent amplitude is real and nonnegative; every phase enters
/// through `psi`, which defaults to pi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateSpec {
    family: Family,
    beta_sq: f64,
    n_t: f64,
    r: f64,
    psi: f64,
    level: usize,
    variant: Variant,
}

impl StateSpec {
    /// Validates `p` against `family`: parameters the family does not use
    /// must be absent, numeric values must be finite and in range.
    pub fn new(family: Family, p: &Params) -> Result<Self> {
        let u = family.uses();
        let reject = |name: &str, present: bool, used: bool| -> Result<()> {
            if present && !used {
                Err(Error::invalid(format!(
                    "parameter {name} is not used by family {family}"
                )))
            } else {
                Ok(())
            }
        };
        reject("beta2", p.beta_sq.is_some(), u.beta)?;
        reject("nt", p.n_t.is_some(), u.nt)?;
        reject("r", p.r.is_some(), u.r)?;
        reject("level", p.level.is_some(), u.level)?;
        reject(
            "variant",
            p.variant.is_some(),
            family == Family::DisplacedSqueezedThermal,
        )?;
        if family == Family::MixedSqueezedCoherentThermal {
            if let Some(psi) = p.psi {
                if (psi - PI).abs() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "family {family} is defined only for psi = pi (got {psi})"
                    )));
                }
            }
        } else {
            reject("psi", p.psi.is_some(), u.psi)?;
        }

        let nonneg = |name: &str, v: Option<f64>| -> Result<f64> {
            let v = v.unwrap_or(0.0);
            if !v.is_finite() || v < 0.0 {
                Err(Error::invalid(format!("{name} must be finite and >= 0 (got {v})")))
            } else {
                Ok(v)
            }
        };
        let beta_sq = nonneg("beta2", p.beta_sq)?;
        let n_t = nonneg("nt", p.n_t)?;
        let r = nonneg("r", p.r)?;
        let psi = p.psi.unwrap_or(PI);
        if !psi.is_finite() {
            return Err(Error::invalid("psi must be finite"));
        }
        if family == Family::MixedSqueezedCoherentThermal && n_t < NT_SWITCH {
            return Err(Error::invalid(format!(
                "family {family} needs nt >= {NT_SWITCH:e}; use squeezed-coherent for a pure state"
            )));
        }
        Ok(StateSpec {
            family,
            beta_sq,
            n_t,
            r,
            psi,
            level: p.level.unwrap_or(0),
            variant: p.variant.unwrap_or_default(),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn beta_sq(&self) -> f64 {
        self.beta_sq
    }
    pub fn n_t(&self) -> f64 {
        self.n_t
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn psi(&self) -> f64 {
        self.psi
    }
    /// Prepared Fock level (l or m).
    pub fn level(&self) -> usize {
        self.level
    }
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn coherent(beta_sq: f64) -> Result<Self> {
        Self::new(
            Family::Coherent,
            &Params {
                beta_sq: Some(beta_sq),
                ..Default::default()
            },
        )
    }
    pub fn thermal(n_t: f64) -> Result<Self> {
        Self::new(
            Family::Thermal,
            &Params {
                n_t: Some(n_t),
                ..Default::default()
            },
        )
    }
    pub fn fock(l: usize) -> Result<Self> {
        Self::new(
            Family::Fock,
            &Params {
                level: Some(l),
                ..Default::default()
            },
        )
    }
    pub fn mixed_coherent_thermal(beta_sq: f64, n_t: f64) -> Result<Self> {
        Self::new(
            Family::MixedCoherentThermal,
            &Params {
                beta_sq: Some(beta_sq),
                n_t: Some(n_t),
                ..Default::default()
            },
        )
    }
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        Self::new(
            Family::SqueezedVacuum,
            &Params {
                r: Some(r),
                ..Default::default()
            },
        )
    }
    pub fn squeezed_fock(r: f64, l: usize) -> Result<Self> {
        Self::new(
            Family::SqueezedFock,
            &Params {
                r: Some(r),
                level: Some(l),
                ..Default::default()
            },
        )
    }
    pub fn squeezed_thermal(r: f64, n_t: f64) -> Result<Self> {
        Self::new(
            Family::SqueezedThermal,
            &Params {
                r: Some(r),
                n_t: Some(n_t),
                ..Default::default()
            },
        )
    }
    pub fn squeezed_coherent(beta_sq: f64, r: f64, psi: f64) -> Result<Self> {
        Self::new(
            Family::SqueezedCoherent,
            &Params {
                beta_sq: Some(beta_sq),
                r: Some(r),
                psi: Some(psi),
                ..Default::default()
            },
        )
    }
    pub fn mixed_squeezed_coherent_thermal(beta_sq: f64, n_t: f64, r: f64) -> Result<Self> {
        Self::new(
            Family::MixedSqueezedCoherentThermal,
            &Params {
                beta_sq: Some(beta_sq),
                n_t: Some(n_t),
                r: Some(r),
                ..Default::default()
            },
        )
    }
    pub fn displaced_squeezed_thermal(beta_sq: f64, n_t: f64, r: f64, psi: f64, variant: Variant) -> Result<Self> {
        Self::new(
            Family::DisplacedSqueezedThermal,
            &Params {
                beta_sq: Some(beta_sq),
                n_t: Some(n_t),
                r: Some(r),
                psi: Some(psi),
                variant: Some(variant),
                ..Default::default()
            },
        )
    }
    pub fn displaced_number(beta_sq: f64, l: usize) -> Result<Self> {
        Self::new(
            Family::DisplacedNumber,
            &Params {
                beta_sq: Some(beta_sq),
                level: Some(l),
                ..Default::default()
            },
        )
    }
    pub fn squeezed_displaced_number(beta_sq: f64, r: f64, psi: f64, m: usize) -> Result<Self> {
        Self::new(
            Family::SqueezedDisplacedNumber,
            &Params {
                beta_sq: Some(beta_sq),
                r: Some(r),
                psi: Some(psi),
                level: Some(m),
                ..Default::default()
            },
        )
    }

    /// Parameters that are meaningful for this family, as (name, value) pairs
    /// in a fixed order.
    pub fn describe(&self) -> Vec<(&'static str, f64)> {
        let u = self.family.uses();
        let mut v = Vec::new();
        if u.beta {
            v.push(("beta2", self.beta_sq));
        }
        if u.nt {
            v.push(("nt", self.n_t));
        }
        if u.r {
            v.push(("r", self.r));
        }
        if u.psi || self.family == Family::MixedSqueezedCoherentThermal {
            v.push(("psi", self.psi));
        }
        if u.level {
            v.push(("level", self.level as f64));
        }
        v
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for (k, v) in self.describe() {
            write!(f, " {k}={v}")?;
        }
        if self.family == Family::DisplacedSqueezedThermal {
            write!(f, " variant={}", self.variant)?;
        }
        Ok(())
    }
}
