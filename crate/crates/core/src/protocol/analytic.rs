//! Closed forms for the optical mean field after the four-kick loop.

use num_complex::Complex64;

use crate::deformations::{Deformation, DeformationKind, DeformationModel, PhysicalParams, RegimeGuard};
use crate::error::{Error, Result};

/// `1 − e^{−iε}` without cancellation at small `ε`.
fn one_minus_expi(eps: f64) -> Complex64 {
    let s = (0.5 * eps).sin();
    Complex64::new(2.0 * s * s, eps.sin())
}

/// Kerr mean field of a coherent input `|α⟩`, α real:
/// `α e^{−iλ² − N_p(1 − e^{−i2λ²})}`.
///
/// Exact for the undeformed loop, whose only effect on the light is
/// `e^{−iλ²n²}`.
pub fn mean_field_qm(alpha: f64, lambda: f64, n_p: f64) -> Complex64 {
    let l2 = lambda * lambda;
    let exponent = Complex64::new(0.0, -l2) - one_minus_expi(2.0 * l2) * n_p;
    alpha * exponent.exp()
}

/// [`mean_field_qm`] with `N_p` supplied independently of α; requires
/// `|N_p − α²| < 10⁻⁶ N_p`.
pub fn mean_field_qm_consistent(alpha: f64, lambda: f64, n_p: f64) -> Result<Complex64> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be > 0, got {alpha}")));
    }
    if (n_p - alpha * alpha).abs() >= 1e-6 * n_p {
        return Err(Error::param(
            "n_p",
            format!("inconsistent with α² = {} (got {n_p})", alpha * alpha),
        ));
    }
    Ok(mean_field_qm(alpha, lambda, n_p))
}

/// Large-`N_p` closed forms: `Θ(β) = (4/3)βN_p³λ⁴e^{−i6λ²}`,
/// `Θ(γ) = (3/2)γN_p²λ³e^{−i4λ²}`, `Θ(μ) = 2μN_pλ²e^{−i2λ²}`.
///
/// No regime checks; see [`theta`].
pub fn theta_closed_form(d: &Deformation, lambda: f64, n_p: f64) -> Complex64 {
    let l2 = lambda * lambda;
    let s = d.strength;
    let (mag, k) = match d.kind {
        DeformationKind::None => return Complex64::new(0.0, 0.0),
        DeformationKind::Beta => (4.0 / 3.0 * s * n_p.powi(3) * l2 * l2, 6.0),
        DeformationKind::Gamma => (1.5 * s * n_p * n_p * l2 * lambda, 4.0),
        DeformationKind::Mu => (2.0 * s * n_p * l2, 2.0),
    };
    Complex64::from_polar(mag, -k * l2)
}

/// Deformation phase `Θ` for a physical configuration, with the regime checks
/// of the asymptotic forms: strength < 1, `λ < 1`, `N_p > 1`, `n̄ < λN_p` and
/// `|Θ| < 1`.
pub fn theta(model: &DeformationModel, params: &PhysicalParams) -> Result<Complex64> {
    let d = model.dimensionless(params);
    RegimeGuard::default().check(&d)?;
    let lambda = params.lambda();
    check_lambda(lambda)?;
    let n_p = params.n_p();
    if !(n_p > 1.0) {
        return Err(Error::regime("N_p > 1", n_p));
    }
    let nbar = params.nbar();
    if !(nbar < lambda * n_p) {
        return Err(Error::regime("n̄ < λN_p", format!("n̄ = {nbar}, λN_p = {}", lambda * n_p)));
    }
    let t = theta_closed_form(&d, lambda, n_p);
    if !(t.norm() < 1.0) {
        return Err(Error::regime("|Θ| < 1", t.norm()));
    }
    Ok(t)
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::regime("λ < 1", lambda));
    }
    Ok(())
}

/// First-order `Θ` at finite photon number, for a coherent input with mean
/// `N_p` and a thermal mechanical state of occupation `n̄`, such that
/// `⟨a_L⟩ ≈ ⟨a_L⟩_qm (1 − iΘ)`.
///
/// Uses the Kerr-weighted Poisson moments with `x = N_p e^{−i2λ²}`:
/// `M₁ = x`, `M₂ = x² + x`, `M₃ = x³ + 3x² + x`. The leading term in `x`
/// reproduces the closed forms for β and μ; for γ it carries the opposite
/// sign to [`theta_closed_form`].
pub fn theta_first_order(d: &Deformation, lambda: f64, n_p: f64, nbar: f64) -> Complex64 {
    let l2 = lambda * lambda;
    let x = Complex64::from_polar(n_p, -2.0 * l2);
    let one = Complex64::new(1.0, 0.0);
    let m1 = x;
    let m2 = x * x + x;
    let m3 = x * x * x + 3.0 * x * x + x;
    let s = d.strength;
    match d.kind {
        DeformationKind::None => Complex64::new(0.0, 0.0),
        DeformationKind::Beta => {
            s * (l2 * (2.0 * m1 + one) * (nbar + 0.5)
                + l2 * l2 * (4.0 * m3 + 6.0 * m2 + 4.0 * m1 + one) / 3.0)
        }
        DeformationKind::Gamma => -0.5 * s * l2 * lambda * (3.0 * m2 + 3.0 * m1 + one),
        DeformationKind::Mu => s * l2 * (2.0 * m1 + one),
    }
}
