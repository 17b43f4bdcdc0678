//! Above-barrier reflection as tunneling in momentum space.
//!
//! The crate computes exponentially small reflection probabilities for
//! symmetric barriers by integrating the analytically continued inverse
//! potential across the classically forbidden momentum zone, and checks the
//! result against a coordinate-space contour integral, closed forms, and
//! exact scattering solutions. The same machinery gives adiabatic transition
//! probabilities for two-level crossings, including the Landau–Zener formula.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod landau_zener;
pub mod ode;
pub mod potentials;
pub mod quadrature;
pub mod reflection;
pub mod scattering;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};
pub use landau_zener::{
    adiabatic_reflection, evolve_tdse, instantaneous_eigensystem, lz_closed_form, mixing_angle,
    CouplingSpec, CrossingProfile, ProfileKind, TdseOutcome, TwoLevelState,
};
pub use potentials::{MomentumLimits, PhysicalConstants, PotentialKind, PotentialModel, PotentialSpec};
pub use quadrature::QuadratureSpec;
pub use reflection::{
    low_energy_effective_omega, reflection_closed_form, reflection_contour_ll, reflection_momentum_space,
    Method, ReflectionResult,
};
pub use scattering::{exact_ho_reflection, numerov_reflection, ScatteringGrid};
pub use specfun::{elliptic_e, elliptic_k};
pub use validate::{run_validation, CheckOutcome, ValidationConfig, ValidationReport};
