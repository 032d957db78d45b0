//! Collapse and revival detection on a sampled correlation sum.

use std::collections::VecDeque;

use serde::Serialize;

use super::TimeSeries;

/// Fraction of the initial oscillation amplitude below which the signal
/// counts as collapsed.
pub const COLLAPSE_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeMetrics {
    /// Width of the sliding window in z.
    pub window: f64,
    pub initial_amplitude: f64,
    pub threshold: f64,
    pub collapse_time: Option<f64>,
    pub revival_centers: Vec<f64>,
}

/// Peak-to-peak value of `s` over the centered window `[i - half, i + half]`.
pub fn sliding_amplitude(s: &[f64], half: usize) -> Vec<f64> {
    let n = s.len();
    let mut out = Vec::with_capacity(n);
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for i in 0..n {
        let right = (i + half).min(n - 1);
        while next <= right {
            while hi.back().is_some_and(|&j| s[j] <= s[next]) {
                hi.pop_back();
            }
            hi.push_back(next);
            while lo.back().is_some_and(|&j| s[j] >= s[next]) {
                lo.pop_back();
            }
            lo.push_back(next);
            next += 1;
        }
        let left = i.saturating_sub(half);
        while hi.front().is_some_and(|&j| j < left) {
            hi.pop_front();
        }
        while lo.front().is_some_and(|&j| j < left) {
            lo.pop_front();
        }
        out.push(s[hi[0]] - s[lo[0]]);
    }
    out
}

/// Runs of consecutive indices where `pred` holds, as half-open ranges.
fn runs(a: &[f64], pred: impl Fn(f64) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &x) in a.iter().enumerate() {
        match (pred(x), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, a.len()));
    }
    out
}

/// Collapse time and revival centers of a correlation series.
///
/// The window spans four periods of `sin^2` at the carrier frequency of the
/// mean photon number. The signal has collapsed once its windowed amplitude
/// stays below a tenth of the initial one for at least a window; a revival
/// is a later stretch whose amplitude climbs to at least twice that
/// threshold, with loud stretches closer than a window merged.
pub fn envelope_metrics(series: &TimeSeries) -> EnvelopeMetrics {
    let carrier = ((series.mean_photons + 1.0 + series.delta) / (series.mean_photons + 1.0)).sqrt();
    let window = 4.0 * std::f64::consts::PI / carrier;
    let z = &series.z;
    let empty = |a0: f64| EnvelopeMetrics {
        window,
        initial_amplitude: a0,
        threshold: COLLAPSE_FRACTION * a0,
        collapse_time: None,
        revival_centers: Vec::new(),
    };
    if z.len() < 3 {
        return empty(0.0);
    }
    let dz = z[1] - z[0];
    let half = ((window / dz / 2.0).round() as usize).max(1);
    let span = 2 * half;
    let s = &series.s1;
    let head = &s[..(span + 1).min(s.len())];
    let a0 =
        head.iter().copied().fold(f64::NEG_INFINITY, f64::max) - head.iter().copied().fold(f64::INFINITY, f64::min);
    let tau = COLLAPSE_FRACTION * a0;
    if a0 <= 0.0 {
        return empty(a0);
    }
    let amp = sliding_amplitude(s, half);
    let quiet = runs(&amp, |x| x < tau);
    let Some(&(c0, _)) = quiet.iter().find(|(a, b)| b - a >= span) else {
        return empty(a0);
    };
    let collapse_time = (z[c0] - window / 2.0).max(0.0);

    let mut merged: Vec<(usize, usize)> = Vec::new();
    for (a, b) in runs(&amp[c0..], |x| x >= tau)
        .into_iter()
        .map(|(a, b)| (a + c0, b + c0))
    {
        match merged.last_mut() {
            Some(last) if a - last.1 < span => last.1 = b,
            _ => merged.push((a, b)),
        }
    }
    let revival_centers = merged
        .into_iter()
        .filter_map(|(a, b)| {
            let (k, peak) = (a..b)
                .map(|i| (i, amp[i]))
                .fold((a, f64::NEG_INFINITY), |m, x| if x.1 > m.1 { x } else { m });
            (peak >= 2.0 * tau).then(|| z[k])
        })
        .collect();
    EnvelopeMetrics {
        window,
        initial_amplitude: a0,
        threshold: tau,
        collapse_time: Some(collapse_time),
        revival_centers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{s1_nonresonant, s1_resonant, DynamicsConfig};
    use crate::states::{pmf_coherent, pmf_fock, pmf_thermal};

    #[test]
    fn sliding_matches_brute_force() {
        let s: Vec<f64> = (0..200).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        for half in [0, 1, 5, 17] {
            let fast = sliding_amplitude(&s, half);
            for i in 0..s.len() {
                let w = &s[i.saturating_sub(half)..(i + half + 1).min(s.len())];
                let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
                assert_eq!(fast[i], hi - lo);
            }
        }
    }

    #[test]
    fn fock_never_collapses() {
        let p = pmf_fock(3, 5).unwrap();
        let t = s1_resonant(
            &p,
            &DynamicsConfig {
                z_max: 200.0,
                ..Default::default()
            },
        )
        .unwrap();
        let m = envelope_metrics(&t);
        assert!(m.collapse_time.is_none() && m.revival_centers.is_empty());
    }

    #[test]
    fn coherent_revivals() {
        let p = pmf_coherent(25.0, 120).unwrap();
        let t = s1_resonant(
            &p,
            &DynamicsConfig {
                z_max: 300.0,
                ..Default::default()
            },
        )
        .unwrap();
        let m = envelope_metrics(&t);
        let seed = 2.0 * std::f64::consts::PI * (25.0f64 * 26.0).sqrt();
        assert!(m.collapse_time.unwrap() < 30.0);
        assert!(
            (m.revival_centers[0] - seed).abs() < 0.1 * seed,
            "{:?}",
            m.revival_centers
        );
    }

    #[test]
    fn thermal_detuned_revives() {
        let p = pmf_thermal(10.0, 300).unwrap();
        let c = DynamicsConfig {
            delta: 50.0,
            z_max: 500.0,
            ..Default::default()
        };
        let m = envelope_metrics(&s1_nonresonant(&p, &c).unwrap());
        assert!(m.collapse_time.is_some());
        assert!(!m.revival_centers.is_empty(), "{m:?}");
    }
}
