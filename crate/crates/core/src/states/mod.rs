//! Photon-number distributions of the supported field states.

pub mod alt;
mod distribution;
pub mod families;
mod moments;
mod nmax;
mod spec;

pub use distribution::{Moments, PhotonDistribution, NEGATIVE_CLAMP};
pub use families::*;
pub use moments::closed_form_moments;
pub use nmax::{auto_nmax, auto_pmf, NmaxPolicy, DEFAULT_EPS_TAIL, DEFAULT_HARD_CAP};
pub use spec::{Family, Params, StateSpec, Variant, NT_SWITCH, R_SWITCH};

use crate::Result;

/// Distribution of `spec` on `0..=n_max`.
pub fn pmf_fixed(spec: &StateSpec, n_max: usize) -> Result<PhotonDistribution> {
    let (b2, nt, r, psi, l) = (spec.beta_sq(), spec.n_t(), spec.r(), spec.psi(), spec.level());
    match spec.family() {
        Family::Coherent => pmf_coherent(b2, n_max),
        Family::Thermal => pmf_thermal(nt, n_max),
        Family::Fock => pmf_fock(l, n_max),
        Family::MixedCoherentThermal => pmf_mixed_coherent_thermal(b2, nt, n_max),
        Family::SqueezedVacuum => pmf_squeezed_vacuum(r, n_max),
        Family::SqueezedFock => pmf_squeezed_fock(r, l, n_max),
        Family::SqueezedThermal => pmf_squeezed_thermal(r, nt, n_max),
        Family::SqueezedCoherent => pmf_squeezed_coherent(b2, r, psi, n_max),
        Family::MixedSqueezedCoherentThermal => pmf_mixed_squeezed_coherent_thermal(b2, nt, r, n_max),
        Family::DisplacedSqueezedThermal => pmf_displaced_squeezed_thermal(b2, nt, r, psi, spec.variant(), n_max),
        Family::DisplacedNumber => pmf_displaced_number(b2, l, n_max),
        Family::SqueezedDisplacedNumber => pmf_squeezed_displaced_number(b2, r, psi, l, n_max),
    }
}

/// Distribution of `spec` under the given truncation policy.
pub fn pmf(spec: &StateSpec, policy: NmaxPolicy) -> Result<PhotonDistribution> {
    match policy {
        NmaxPolicy::Fixed(n) => pmf_fixed(spec, n),
        NmaxPolicy::Auto { eps_tail, cap } => auto_pmf(spec, eps_tail, cap),
    }
}
