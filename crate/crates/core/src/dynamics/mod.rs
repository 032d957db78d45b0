//! Correlation sums of a two-level system driven by a quantized field mode.
//!
//! With `z = sqrt(nbar + 1) gamma t`, the resonant sum is
//! `S1(z) = sum_n rho_n sin^2(sqrt((n+1)/(nbar+1)) z)` and the detuned one
//! weights each term by `(n+1)/(n+1+delta)` and shifts its frequency to
//! `sqrt((n+1+delta)/(nbar+1))`.

mod envelope;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use envelope::{envelope_metrics, sliding_amplitude, EnvelopeMetrics};

use crate::specfun::NeumaierSum;
use crate::states::PhotonDistribution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Dimensionless detuning `(omega - Omega)^2 / (4 gamma^2)`.
    pub delta: f64,
    pub z_max: f64,
    /// Grid points per half period of the fastest term.
    pub samples_per_period: usize,
    pub eps_tail: f64,
    /// Overall `(2 gamma / mu)^2` scale applied to the correlation function.
    pub prefactor: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            delta: 0.0,
            z_max: 100.0,
            samples_per_period: 20,
            eps_tail: 1e-8,
            prefactor: 1.0,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid(format!(
                "delta must be finite and >= 0, got {}",
                self.delta
            )));
        }
        if !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(Error::invalid(format!(
                "z_max must be finite and > 0, got {}",
                self.z_max
            )));
        }
        if self.samples_per_period < 8 {
            return Err(Error::invalid(format!(
                "samples_per_period must be >= 8, got {}",
                self.samples_per_period
            )));
        }
        if !(self.eps_tail > 0.0 && self.eps_tail < 1.0) {
            return Err(Error::invalid(format!(
                "eps_tail must lie in (0, 1), got {}",
                self.eps_tail
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Resonant,
    NonResonant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    pub z: Vec<f64>,
    pub s1: Vec<f64>,
    pub mode: Mode,
    /// Trapezoidal mean of `s1` over `[0, z_max]`.
    pub time_average: f64,
    pub envelope_max: f64,
    pub mean_photons: f64,
    pub delta: f64,
}

impl TimeSeries {
    /// Assembles a series, filling in the derived summaries.
    pub fn from_parts(z: Vec<f64>, s1: Vec<f64>, mode: Mode, mean_photons: f64, delta: f64) -> Self {
        TimeSeries {
            time_average: trapezoid_mean(&s1),
            envelope_max: s1.iter().copied().fold(0.0, f64::max),
            z,
            s1,
            mode,
            mean_photons,
            delta,
        }
    }

    /// `prefactor * (nbar + S1)`, the first-order correlation function.
    pub fn correlation(&self, prefactor: f64) -> Vec<f64> {
        self.s1.iter().map(|s| prefactor * (self.mean_photons + s)).collect()
    }

    /// Negated sum, which is the atomic inversion.
    pub fn inversion(&self) -> Vec<f64> {
        self.s1.iter().map(|s| -s).collect()
    }
}

/// Uniform grid on `[0, z_max]` resolving the fastest term with at least
/// `samples_per_period` points per half period of `sin^2`.
///
/// The number of steps is a multiple of `samples_per_period`, so doubling
/// it halves the step exactly and every old point stays on the new grid.
pub fn z_grid(n_bar: f64, n_max: usize, delta: f64, cfg: &DynamicsConfig) -> Vec<f64> {
    let w_max = ((n_max as f64 + 1.0 + delta) / (n_bar + 1.0)).sqrt();
    let half_periods = (cfg.z_max * w_max / std::f64::consts::PI).ceil().max(1.0) as usize;
    let k = half_periods * cfg.samples_per_period;
    let dz = cfg.z_max / k as f64;
    (0..=k).map(|i| i as f64 * dz).collect()
}

/// Termwise frequencies and weights of the sum.
fn terms(n_max: usize, n_bar: f64, delta: f64, mode: Mode) -> (Vec<f64>, Vec<f64>) {
    let d = match mode {
        Mode::Resonant => 0.0,
        Mode::NonResonant => delta,
    };
    (0..=n_max)
        .map(|n| {
            let m = n as f64 + 1.0;
            (((m + d) / (n_bar + 1.0)).sqrt(), m / (m + d))
        })
        .unzip()
}

/// `S1` at the given points. Each sample is a fixed-order compensated sum,
/// so results do not depend on thread count.
pub fn s1_values(probs: &[f64], n_bar: f64, delta: f64, mode: Mode, z: &[f64]) -> Vec<f64> {
    let (w, c) = terms(probs.len() - 1, n_bar, delta, mode);
    z.par_iter()
        .map(|&zk| {
            let mut s = NeumaierSum::new();
            for ((p, wn), cn) in probs.iter().zip(&w).zip(&c) {
                if *p != 0.0 {
                    let x = (wn * zk).sin();
                    s.add(p * cn * x * x);
                }
            }
            s.value()
        })
        .collect()
}

/// Trapezoidal average of samples on a uniform grid.
pub fn trapezoid_mean(s: &[f64]) -> f64 {
    if s.len() < 2 {
        return s.first().copied().unwrap_or(0.0);
    }
    let mut acc = NeumaierSum::new();
    for (i, v) in s.iter().enumerate() {
        acc.add(if i == 0 || i == s.len() - 1 { 0.5 * v } else { *v });
    }
    acc.value() / (s.len() - 1) as f64
}

/// Builds the series for either mode on the standard grid.
pub fn s1_series(pmf: &PhotonDistribution, cfg: &DynamicsConfig, mode: Mode) -> Result<TimeSeries> {
    cfg.validate()?;
    let n_bar = pmf.moments().mean;
    let delta = match mode {
        Mode::Resonant => 0.0,
        Mode::NonResonant => cfg.delta,
    };
    let z = z_grid(n_bar, pmf.n_max(), delta, cfg);
    let s1 = s1_values(pmf.probs(), n_bar, delta, mode, &z);
    if s1.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation sum"));
    }
    Ok(TimeSeries::from_parts(z, s1, mode, n_bar, delta))
}

pub fn s1_resonant(pmf: &PhotonDistribution, cfg: &DynamicsConfig) -> Result<TimeSeries> {
    s1_series(pmf, cfg, Mode::Resonant)
}

pub fn s1_nonresonant(pmf: &PhotonDistribution, cfg: &DynamicsConfig) -> Result<TimeSeries> {
    s1_series(pmf, cfg, Mode::NonResonant)
}

/// Long-time mean of the detuned sum, `1/2 sum_n rho_n (n+1)/(n+1+delta)`.
pub fn time_average_closed(pmf: &PhotonDistribution, delta: f64) -> f64 {
    let mut s = NeumaierSum::new();
    for (n, p) in pmf.probs().iter().enumerate() {
        let m = n as f64 + 1.0;
        s.add(p * m / (m + delta));
    }
    0.5 * s.value()
}
