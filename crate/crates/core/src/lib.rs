//! Adiabatic noncyclic geometric phases of finite-dimensional quantum systems.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`model`]: parametrized Hermitian families `R ↦ H(R)` (conical
//!   intersection, spin-½ in a rotating field, tabulated custom models).
//! * [`eigen`] / [`frame`]: instantaneous eigenframes and gauge bookkeeping.
//! * [`phase`]: the noncyclic geometric phase of an open path, its
//!   decomposition, the adiabaticity metric and gauge transformations.
//! * [`curvature`]: Berry curvature and its flux through triangulated surfaces.
//! * [`oracle`]: exact Schrödinger propagation and the Pancharatnam phase of
//!   the dynamically dressed state.
//! * [`sphere`]: great-circle closure of open Bloch-sphere paths and solid angles.
//! * [`ab_box`]: a charged particle in an angular box carried around a flux line.
//! * [`experiment`]: the spin-½ polarization experiment.
//!
//! Units: `ħ = 1`, every parameter is dimensionless. Phases are compared with
//! [`phase::circular_distance`] and reported wrapped to `(−π, π]`.
#![no_std]
// `!(x > 0.0)` is meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Float methods come from `num_traits::Float` in no_std builds. Modules import
// it with `allow(unused_imports)` because std's inherent methods shadow it
// whenever std ends up in the build.

extern crate alloc;

pub mod ab_box;
pub mod curvature;
pub mod eigen;
pub mod error;
pub mod experiment;
pub mod frame;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod path;
pub mod phase;
pub mod quadrature;
pub mod sphere;

pub use error::{Error, Result};
pub use frame::EigenFrame;
pub use linalg::{CMatrix, CVector};
pub use model::{ConicalModel, Hamiltonian, SpinConfig, SpinFieldModel, SpinModel, TabulatedModel};
pub use path::ParameterPath;
pub use phase::{PhaseDecomposition, PhaseEngine, Tolerances};

pub use num_complex::Complex64;
