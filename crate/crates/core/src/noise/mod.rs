//! Imperfections of a real run: cavity filtering of the pulses, pulse
//! distortion between the kicks, residual thermal motion and the mechanical
//! bath.

mod bath;
mod pulse;

pub use bath::{
    bath_diffusion, bath_gaussian_factor, bath_monte_carlo, bath_weight_norm, MonteCarloEstimate,
    STEPS_PER_PERIOD,
};
pub use pulse::{intracavity_zeta, PulseKind, PulseShape, PULSE_NORM_TOL, ZETA_TOL};

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::deformations::{DeformationKind, PhysicalParams};
use crate::error::{Error, Result};
use crate::fock::{FockOperator, Quadrature};
use crate::protocol::{FramedUnitary, Kick, Propagator};

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("eta", format!("must lie in (0, 1], got {eta}")))
    }
}

/// Reduction of `Θ` when successive kicks shrink by `η`: β → η⁷, γ → η⁵,
/// μ → η³.
pub fn eta_reduction(kind: DeformationKind, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(match kind {
        DeformationKind::None => 1.0,
        DeformationKind::Beta => eta.powi(7),
        DeformationKind::Gamma => eta.powi(5),
        DeformationKind::Mu => eta.powi(3),
    })
}

/// Damping of the optical mean by residual thermal motion with unequal
/// kicks, `exp(−n̄λ²(1 − η²)(1 − η⁴)/2)`.
pub fn thermal_attenuation(nbar: f64, lambda: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(nbar >= 0.0) || !(lambda >= 0.0) {
        return Err(Error::param("thermal", format!("n̄ = {nbar} and λ = {lambda} must be ≥ 0")));
    }
    let e2 = eta * eta;
    Ok((-0.5 * nbar * lambda * lambda * (1.0 - e2) * (1.0 - e2 * e2)).exp())
}

/// First-order bath correction `1 − λ²k_BT/(ħω_mQ)`.
pub fn decoherence_factor(lambda: f64, t_k: f64, omega_m: f64, q: f64) -> Result<f64> {
    decoherence_factor_with(&Constants::SI, lambda, t_k, omega_m, q)
}

pub fn decoherence_factor_with(k: &Constants, lambda: f64, t_k: f64, omega_m: f64, q: f64) -> Result<f64> {
    if !(t_k >= 0.0) || !(omega_m > 0.0) || !(q > 0.0) {
        return Err(Error::param("bath", format!("T = {t_k}, ω_m = {omega_m}, Q = {q}")));
    }
    let corr = lambda * lambda * k.k_b * t_k / (k.hbar * omega_m * q);
    if corr >= 1.0 {
        return Err(Error::regime("λ²k_BT/(ħω_mQ) < 1", corr));
    }
    Ok(1.0 - corr)
}

/// Multiplicative reductions of the signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBudget {
    /// Cavity filtering of the coupling, `λ → ζλ`; already part of `λ`
    /// when `λ` comes from the finesse, so not applied to `Θ`.
    pub zeta: f64,
    pub eta: f64,
    /// [`eta_reduction`] for the model in question.
    pub theta_reduction: f64,
    pub thermal_factor: f64,
    pub decoherence_factor: f64,
}

impl NoiseBudget {
    pub fn unit() -> Self {
        Self {
            zeta: 1.0,
            eta: 1.0,
            theta_reduction: 1.0,
            thermal_factor: 1.0,
            decoherence_factor: 1.0,
        }
    }

    pub fn new(zeta: f64, eta: f64, theta_reduction: f64, thermal_factor: f64, decoherence_factor: f64) -> Result<Self> {
        let b = Self {
            zeta,
            eta,
            theta_reduction,
            thermal_factor,
            decoherence_factor,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("zeta", self.zeta),
            ("eta", self.eta),
            ("theta_reduction", self.theta_reduction),
            ("thermal_factor", self.thermal_factor),
            ("decoherence_factor", self.decoherence_factor),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::param("noise", format!("{name} = {v} must lie in (0, 1]")));
            }
        }
        Ok(())
    }

    /// Budget implied by the experiment's `η`, `n̄`, `T` and `Q`.
    pub fn from_params(kind: DeformationKind, params: &PhysicalParams, zeta: f64) -> Result<Self> {
        let i = params.inputs();
        Self::new(
            zeta,
            i.eta,
            eta_reduction(kind, i.eta)?,
            thermal_attenuation(i.nbar, params.lambda(), i.eta)?,
            decoherence_factor_with(params.constants(), params.lambda(), i.t_k, i.omega_m_rad_s, i.q)?,
        )
    }

    /// Combined factor on `|Θ|`.
    pub fn composite(&self) -> f64 {
        self.theta_reduction * self.thermal_factor * self.decoherence_factor
    }
}

/// Outcome of comparing the loop with shrinking kicks against its claimed
/// factorization into a smaller closed loop and a residual displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaFactorization {
    pub eta: f64,
    pub lambda: f64,
    /// Largest interior-block distance with residual `e^{+iηa(1−η²)P}`.
    pub residual_as_printed: f64,
    /// Same with `e^{−iηa(1−η²)P}`, which makes the identity exact.
    pub residual_sign_corrected: f64,
    /// `(n, as printed, sign corrected)` per photon number.
    pub per_n: Vec<(usize, f64, f64)>,
}

fn eta_loop(a: f64, eta: f64) -> Vec<Kick> {
    vec![
        Kick::linear(Quadrature::X, a),
        Kick::linear(Quadrature::P, -eta * a),
        Kick::linear(Quadrature::X, -eta * eta * a),
        Kick::linear(Quadrature::P, eta.powi(3) * a),
    ]
}

/// The closed loop with kicks `η²a` on `X` and `ηa` on `P`, followed by the
/// residual displacement, in application order.
fn eta_factorized(a: f64, eta: f64, p_sign: f64) -> Vec<Kick> {
    let r = 1.0 - eta * eta;
    let x = eta * eta * a;
    let p = eta * a;
    vec![
        Kick::linear(Quadrature::X, a * r),
        Kick::linear(Quadrature::P, p_sign * eta * a * r),
        Kick::linear(Quadrature::X, x),
        Kick::linear(Quadrature::P, -p),
        Kick::linear(Quadrature::X, -x),
        Kick::linear(Quadrature::P, p),
    ]
}

/// Builds `ξ_η = e^{iη³aP} e^{−iη²aX} e^{−iηaP} e^{iaX}` per photon number
/// and measures how far it is from `ξ′₀ e^{±iηa(1−η²)P} e^{ia(1−η²)X}`.
pub fn xi_eta_check(lambda: f64, eta: f64, opt_dim: usize, mech_dim: usize) -> Result<EtaFactorization> {
    check_eta(eta)?;
    FockOperator::identity(opt_dim)?;
    let prop = Propagator::new(mech_dim)?;
    let block = mech_dim / 2;
    let dist = |a: &FramedUnitary, b: &FramedUnitary| -> Result<f64> {
        Ok(a.materialize()?.max_abs_diff_block(&b.materialize()?, block))
    };
    let mut per_n = Vec::with_capacity(opt_dim);
    for n in 0..opt_dim {
        let a = lambda * n as f64;
        let lhs = prop.framed(&eta_loop(a, eta))?;
        let printed = prop.framed(&eta_factorized(a, eta, 1.0))?;
        let corrected = prop.framed(&eta_factorized(a, eta, -1.0))?;
        per_n.push((n, dist(&lhs, &printed)?, dist(&lhs, &corrected)?));
    }
    let max = |f: fn(&(usize, f64, f64)) -> f64| per_n.iter().map(f).fold(0.0, f64::max);
    Ok(EtaFactorization {
        eta,
        lambda,
        residual_as_printed: max(|r| r.1),
        residual_sign_corrected: max(|r| r.2),
        per_n,
    })
}
