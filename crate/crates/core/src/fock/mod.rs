//! Truncated Fock-space linear algebra.
//!
//! Everything here is dimensionless: quadratures obey `[X, P] = i` on all but
//! the top Fock level, where the truncation necessarily breaks it. Checks
//! that depend on the canonical algebra (commutators, unitarity) are
//! therefore evaluated on a leading interior block.

mod expm;
mod operator;
mod spectral;
mod state;

use num_complex::Complex64;

pub use expm::matrix_exp;
#[allow(unused_imports)]
pub(crate) use expm::expm;
pub use operator::{ladder, quadratures, FockOperator, HERMITIAN_TOL};
pub use spectral::QuadratureSpectrum;
pub use state::{
    coherent_cutoff, coherent_state, expect, hermitian_eigenvalues, thermal_cutoff,
    thermal_populations, thermal_state, trace_distance, FockState, NORM_TOL, TAIL_TOL,
};

use crate::error::Result;

/// Which quadrature a single-variable function acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

/// `D(z/√2) = exp(i(Re z·X − Im z·P))`: shifts `⟨X⟩` by `Im z` and `⟨P⟩` by
/// `Re z`.
pub fn displacement(z: Complex64, dim: usize) -> Result<FockOperator> {
    displacement_xp(z.im, z.re, dim)
}

/// Displacement by `x0` in `X` and `p0` in `P`, `exp(i(p0 X − x0 P))`.
pub fn displacement_xp(x0: f64, p0: f64, dim: usize) -> Result<FockOperator> {
    let (x, p) = quadratures(dim)?;
    let gen = &x.scale(Complex64::new(0.0, p0)) - &p.scale(Complex64::new(0.0, x0));
    matrix_exp(&gen)
}

/// Phase of the composition law `D(x1,p1) D(x2,p2) = e^{iφ} D(x1+x2, p1+p2)`.
pub fn composition_phase(x1: f64, p1: f64, x2: f64, p2: f64) -> f64 {
    -0.5 * (x1 * p2 - p1 * x2)
}
