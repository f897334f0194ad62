//! Numerical toolkit for optomechanical tests of deformed canonical
//! commutators.
//!
//! A sequence of four radiation-pressure kicks on a mechanical oscillator
//! traces a closed loop in phase space. With an undeformed commutator the
//! loop only imprints a Kerr phase on the optical field; a deformed
//! commutator adds an extra phase `Θ` that grows with photon number. The
//! crate provides:
//!
//! * [`fock`]: truncated Fock-space operators, states and a Padé matrix
//!   exponential.
//! * [`deformations`]: the β, γ and μ models and the experiment parameters.
//! * [`protocol`]: closed-form and numerically exact optical mean fields.
//! * [`noise`]: detection efficiency, thermal and bath effects, pulse
//!   finite-size corrections.
//! * [`sensitivity`]: resolvable deformation strengths and experimental
//!   requirements.
//! * [`cli`]: configuration and output used by the `gup-optomech` binary.

// `!(x >= 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod deformations;
pub mod error;
pub mod fock;
pub mod noise;
pub mod poly;
pub mod protocol;
pub mod sensitivity;

pub use constants::Constants;
pub use deformations::{Deformation, DeformationKind, DeformationModel, PhysicalInputs, PhysicalParams};
pub use error::{Error, Result};
pub use poly::Poly;
