//! Closed forms against the operator-built states, and the correlation sum
//! against its oracle evaluation.

use std::f64::consts::PI;

use jcm_core::dynamics::{s1_series, DynamicsConfig, Mode};
use jcm_core::oracle::{build_state, displacement, s1_oracle, squeeze, unitarity_error};
use jcm_core::states::{closed_form_moments, pmf_fixed};
use jcm_core::{Family, StateSpec, Variant};
use num_complex::Complex64;
use proptest::prelude::*;

const DIM: usize = 64;
const TOL: f64 = 1e-8;

fn oracle_gap(spec: &StateSpec) -> f64 {
    let dm = build_state(spec, DIM).unwrap();
    let d = dm.diagonal();
    let p = pmf_fixed(spec, DIM - 1).unwrap();
    d.iter().zip(p.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn small_cases() -> Vec<StateSpec> {
    vec![
        StateSpec::coherent(4.0).unwrap(),
        StateSpec::coherent(7.5).unwrap(),
        StateSpec::thermal(2.0).unwrap(),
        StateSpec::fock(5).unwrap(),
        StateSpec::mixed_coherent_thermal(3.0, 1.0).unwrap(),
        StateSpec::squeezed_vacuum(1.2).unwrap(),
        StateSpec::squeezed_fock(0.9, 2).unwrap(),
        StateSpec::squeezed_fock(0.4, 3).unwrap(),
        StateSpec::squeezed_thermal(0.8, 1.0).unwrap(),
        StateSpec::squeezed_coherent(4.0, 0.7, 0.4).unwrap(),
        StateSpec::squeezed_coherent(4.0, 0.7, PI).unwrap(),
        StateSpec::mixed_squeezed_coherent_thermal(2.0, 1.0, 0.6).unwrap(),
        StateSpec::mixed_squeezed_coherent_thermal(0.0, 1.0, 1.0).unwrap(),
        StateSpec::displaced_squeezed_thermal(2.0, 1.0, 0.6, 0.9, Variant::Dsts).unwrap(),
        StateSpec::displaced_squeezed_thermal(2.0, 1.0, 0.6, 0.9, Variant::Sdts).unwrap(),
        StateSpec::displaced_number(3.0, 2).unwrap(),
        StateSpec::squeezed_displaced_number(4.0, 0.7, 0.0, 2).unwrap(),
        StateSpec::squeezed_displaced_number(4.0, 0.7, 1.1, 2).unwrap(),
    ]
}

#[test]
fn every_family_matches_the_oracle() {
    let cases = small_cases();
    for f in Family::ALL {
        assert!(cases.iter().any(|s| s.family() == f), "{f} not covered");
    }
    for s in cases {
        let gap = oracle_gap(&s);
        assert!(gap < TOL, "{s}: {gap:e}");
    }
}

#[test]
fn constructed_states_are_valid_density_matrices() {
    for s in small_cases() {
        let dm = build_state(&s, 32).unwrap();
        assert!(dm.hermiticity_error() < 1e-12, "{s}");
        assert!((dm.trace() - 1.0).abs() < 1e-10, "{s}");
        if dm.dim() <= 128 {
            assert!(dm.min_eigenvalue() > -1e-10, "{s}");
        }
    }
}

#[test]
fn unitaries_up_to_128() {
    for dim in [16, 64, 128] {
        let d = displacement(Complex64::from_polar(1.7, 0.6), dim).unwrap();
        let s = squeeze(1.0, 2.2, dim).unwrap();
        assert!(unitarity_error(&d) < 1e-10);
        assert!(unitarity_error(&s) < 1e-10);
        assert!(unitarity_error(&(d * s)) < 1e-10);
    }
}

#[test]
fn vacuum_series_is_a_pure_sine() {
    let dm = build_state(&StateSpec::fock(0).unwrap(), 4).unwrap();
    let z: Vec<f64> = (0..200).map(|k| k as f64 * 0.05).collect();
    let ts = s1_oracle(&dm, 0.0, &z);
    for (zi, s) in z.iter().zip(&ts.s1) {
        assert!((s - zi.sin().powi(2)).abs() < 1e-15);
    }
}

#[test]
fn correlation_sums_agree_on_identical_input() {
    let spec = StateSpec::coherent(10.0).unwrap();
    let dm = build_state(&spec, 64).unwrap();
    let pmf = jcm_core::PhotonDistribution::from_raw(dm.diagonal(), 1.0).unwrap();
    let cfg = DynamicsConfig {
        delta: 10.0,
        z_max: 60.0,
        ..Default::default()
    };
    let ts = s1_series(&pmf, &cfg, Mode::NonResonant).unwrap();
    let orc = s1_oracle(&dm, 10.0, &ts.z);
    let gap = ts
        .s1
        .iter()
        .zip(&orc.s1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(gap < 1e-12, "{gap:e}");
}

#[test]
fn off_resonant_coherent_average_from_the_oracle() {
    let dm = build_state(&StateSpec::coherent(10.0).unwrap(), 64).unwrap();
    let z: Vec<f64> = (0..=40000).map(|k| k as f64 * 0.01).collect();
    let ts = s1_oracle(&dm, 10.0, &z);
    assert!((ts.time_average - 0.25).abs() < 0.02, "{}", ts.time_average);
}

fn small_spec() -> impl Strategy<Value = StateSpec> {
    let fam = prop::sample::select(Family::ALL.to_vec());
    (
        fam,
        0.0..5.0f64,
        0.0..1.5f64,
        0.0..1.0f64,
        0.0..(2.0 * PI),
        0usize..4,
        any::<bool>(),
    )
        .prop_filter_map("small state", |(f, b2, nt, r, psi, l, sdts)| {
            let s = match f {
                Family::Coherent => StateSpec::coherent(b2),
                Family::Thermal => StateSpec::thermal(nt),
                Family::Fock => StateSpec::fock(l),
                Family::MixedCoherentThermal => StateSpec::mixed_coherent_thermal(b2, nt),
                Family::SqueezedVacuum => StateSpec::squeezed_vacuum(r),
                Family::SqueezedFock => StateSpec::squeezed_fock(r, l),
                Family::SqueezedThermal => StateSpec::squeezed_thermal(r, nt),
                Family::SqueezedCoherent => StateSpec::squeezed_coherent(b2, r, psi),
                Family::MixedSqueezedCoherentThermal => StateSpec::mixed_squeezed_coherent_thermal(b2, nt.max(0.05), r),
                Family::DisplacedSqueezedThermal => StateSpec::displaced_squeezed_thermal(
                    b2,
                    nt,
                    r,
                    psi,
                    if sdts { Variant::Sdts } else { Variant::Dsts },
                ),
                Family::DisplacedNumber => StateSpec::displaced_number(b2, l),
                Family::SqueezedDisplacedNumber => StateSpec::squeezed_displaced_number(b2, r, psi, l),
            }
            .ok()?;
            (closed_form_moments(&s).mean <= 8.0).then_some(s)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn random_small_states_match_the_oracle(spec in small_spec()) {
        let gap = oracle_gap(&spec);
        prop_assert!(gap < TOL, "{}: {:e}", spec, gap);
    }
}
