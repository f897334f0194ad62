//! Loop variant in which the oscillator evolves freely between kicks under
//! the β-deformed dynamics. With kicks a quarter period apart the sequence
//! becomes
//! `e^{ia(P − 2πβX³)} e^{−ia(X + 4πβP³/3)} e^{−ia(P − 2πβX³/3)} e^{iaX}`,
//! `a = λn`, whose leading-order phase is `−a² + (5π/3)βa⁴`.

use super::framed::Kick;
use super::oracle::{build_family, BlockFamily, OracleMode};
use crate::error::{Error, Result};
use crate::fock::{FockOperator, Quadrature};
use crate::poly::Poly;

use std::f64::consts::PI;

/// Printed coefficient of `βa⁴` in the leading-order phase.
pub const HARMONIC_PHASE_COEFF: f64 = 5.0 * PI / 3.0;

#[derive(Debug, Clone)]
pub struct HarmonicVariant {
    pub family: BlockFamily,
    /// Leading-order phase `−λ²n² + (5π/3)βλ⁴n⁴` for each block.
    pub closed_form_phase: Vec<f64>,
}

/// Kicks for `n` photons, in application order.
pub fn harmonic_kicks(lambda: f64, beta: f64, n: usize) -> Vec<Kick> {
    let a = lambda * n as f64;
    vec![
        Kick::linear(Quadrature::X, a),
        Kick::mixed(Quadrature::P, -a, Poly::monomial(3, a * 2.0 * PI * beta / 3.0)),
        Kick::mixed(Quadrature::X, -a, Poly::monomial(3, -a * 4.0 * PI * beta / 3.0)),
        Kick::mixed(Quadrature::P, a, Poly::monomial(3, -a * 2.0 * PI * beta)),
    ]
}

pub fn harmonic_closed_form_phase(lambda: f64, beta: f64, n: usize) -> f64 {
    let a = lambda * n as f64;
    -a * a + HARMONIC_PHASE_COEFF * beta * a.powi(4)
}

pub fn xi_harmonic_variant(lambda: f64, beta: f64, opt_dim: usize, mech_dim: usize) -> Result<HarmonicVariant> {
    xi_harmonic_variant_with(OracleMode::Framed, lambda, beta, opt_dim, mech_dim)
}

pub fn xi_harmonic_variant_with(
    mode: OracleMode,
    lambda: f64,
    beta: f64,
    opt_dim: usize,
    mech_dim: usize,
) -> Result<HarmonicVariant> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::param("beta", format!("must be finite and ≥ 0, got {beta}")));
    }
    if beta >= 1.0 {
        return Err(Error::regime("beta < 1", beta));
    }
    let family = build_family(opt_dim, mech_dim, mode, |n| harmonic_kicks(lambda, beta, n))?;
    let closed_form_phase = (0..opt_dim)
        .map(|n| harmonic_closed_form_phase(lambda, beta, n))
        .collect();
    Ok(HarmonicVariant {
        family,
        closed_form_phase,
    })
}

/// First three Zassenhaus exponents for `e^{t(A+B)} = e^{tA} e^{tB}
/// e^{t²Z₁} e^{t³Z₂} e^{t⁴Z₃} ⋯`:
/// `Z₁ = −[A,B]/2`, `Z₂ = [A,[A,B]]/6 + [B,[A,B]]/3`,
/// `Z₃ = −([B,[A,[A,B]]] + [B,[B,[A,B]]])/8 − [A,[A,[A,B]]]/24`.
pub fn zassenhaus_terms(a: &FockOperator, b: &FockOperator) -> Result<[FockOperator; 3]> {
    let r = |s: f64| num_complex::Complex64::new(s, 0.0);
    let ab = a.commutator(b)?;
    let a_ab = a.commutator(&ab)?;
    let b_ab = b.commutator(&ab)?;
    let z1 = ab.scale(r(-0.5));
    let z2 = &a_ab.scale(r(1.0 / 6.0)) + &b_ab.scale(r(1.0 / 3.0));
    let b_a_ab = b.commutator(&a_ab)?;
    let b_b_ab = b.commutator(&b_ab)?;
    let a_a_ab = a.commutator(&a_ab)?;
    let z3 = &(&b_a_ab + &b_b_ab).scale(r(-0.125)) - &a_a_ab.scale(r(1.0 / 24.0));
    Ok([z1, z2, z3])
}
