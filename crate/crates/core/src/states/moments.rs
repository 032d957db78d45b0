//! Mean and variance of each family in closed form.

use num_complex::Complex64;

use super::distribution::Moments;
use super::spec::{Family, StateSpec, Variant};

/// Closed-form mean and variance of the family.
pub fn closed_form_moments(spec: &StateSpec) -> Moments {
    let b2 = spec.beta_sq();
    let nt = spec.n_t();
    let r = spec.r();
    let psi = spec.psi();
    let l = spec.level() as f64;
    let sh2 = r.sinh().powi(2);
    let s2r = (2.0 * r).sinh();
    let c2r = (2.0 * r).cosh();
    let quad = |phase: f64| c2r + phase.cos() * s2r;
    let (mean, variance) = match spec.family() {
        Family::Coherent => (b2, b2),
        Family::Thermal => (nt, nt * nt + nt),
        Family::Fock => (l, 0.0),
        Family::MixedCoherentThermal => (b2 + nt, b2 * (1.0 + 2.0 * nt) + nt * nt + nt),
        Family::SqueezedVacuum => (sh2, 0.5 * s2r * s2r),
        Family::SqueezedFock => (l + (2.0 * l + 1.0) * sh2, 0.5 * (l * l + l + 1.0) * s2r * s2r),
        Family::SqueezedThermal => (
            nt + (2.0 * nt + 1.0) * sh2,
            -0.25 + (nt + 0.5).powi(2) * (4.0 * r).cosh(),
        ),
        Family::SqueezedCoherent => (sh2 + b2, b2 * quad(psi) + 0.5 * s2r * s2r),
        Family::MixedSqueezedCoherentThermal => (
            sh2 + b2 + nt,
            b2 * quad(psi) + 0.5 * s2r * s2r + 2.0 * nt * (sh2 + b2) + nt * nt + nt,
        ),
        Family::DisplacedSqueezedThermal => {
            let (c2, phase) = match spec.variant() {
                Variant::Dsts => (b2, psi),
                Variant::Sdts => {
                    let c = b2.sqrt() * (r.cosh() + Complex64::from_polar(1.0, psi) * r.sinh());
                    (c.norm_sqr(), psi - 2.0 * c.arg())
                }
            };
            (
                nt + (2.0 * nt + 1.0) * sh2 + c2,
                -0.25 + c2 * (1.0 + 2.0 * nt) * quad(phase) + (nt + 0.5).powi(2) * (4.0 * r).cosh(),
            )
        }
        Family::DisplacedNumber => (l + b2, (2.0 * l + 1.0) * b2),
        Family::SqueezedDisplacedNumber => (
            b2 + (2.0 * l + 1.0) * sh2 + l,
            b2 * quad(psi) * (2.0 * l + 1.0) + 0.5 * (l * l + l + 1.0) * s2r * s2r,
        ),
    };
    Moments { mean, variance }
}
