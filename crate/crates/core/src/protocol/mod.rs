//! The four-kick protocol: closed-form mean fields and deformation phases,
//! and the numerically exact oracle they are checked against.

mod analytic;
mod framed;
mod harmonic;
mod oracle;

use num_complex::Complex64;

pub use analytic::{mean_field_qm, mean_field_qm_consistent, theta, theta_closed_form, theta_first_order};
pub use framed::{FramedUnitary, Kick, Propagator};
pub use harmonic::{
    harmonic_closed_form_phase, harmonic_kicks, xi_harmonic_variant, xi_harmonic_variant_with,
    zassenhaus_terms, HarmonicVariant, HARMONIC_PHASE_COEFF,
};
pub use oracle::{
    build_family, deformation_phase_first_order, deformation_phases, fit_power_law, loop_kicks,
    mean_field_numeric, mean_field_numeric_with, xi_exact, xi_exact_with, BlockFamily, OracleMode,
    OracleOptions,
};

use crate::deformations::{DeformationModel, PhysicalParams};
use crate::error::Result;

/// Analytic optical mean field after the loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOutcome {
    /// `⟨a_L⟩ = ⟨a_L⟩_qm e^{−iΘ}`.
    pub mean_field: Complex64,
    pub mean_field_qm: Complex64,
    pub theta: Complex64,
    /// Total rotation of the mean field relative to the input, in radians.
    pub phi: f64,
}

/// Closed-form outcome for a coherent pulse with real amplitude `√N_p`.
pub fn outcome(model: &DeformationModel, params: &PhysicalParams) -> Result<ProtocolOutcome> {
    let n_p = params.n_p();
    let qm = mean_field_qm(n_p.sqrt(), params.lambda(), n_p);
    let t = theta(model, params)?;
    let mf = qm * (-Complex64::i() * t).exp();
    Ok(ProtocolOutcome {
        mean_field: mf,
        mean_field_qm: qm,
        theta: t,
        phi: mf.arg(),
    })
}
