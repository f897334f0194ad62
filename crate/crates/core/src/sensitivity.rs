//! Shot-noise-limited resolution of the deformation parameters and the
//! experimental requirements behind it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::deformations::{DeformationKind, DeformationModel, PhysicalInputs, PhysicalParams};
use crate::error::{Error, Result};
use crate::noise::NoiseBudget;
use crate::protocol::theta;

use std::f64::consts::PI;

/// Phase resolution of the mean-field measurement, `σ_out / √(N_p N_r)`.
pub fn phase_imprecision(n_p: f64, n_r: f64, sigma_out: f64) -> Result<f64> {
    for (name, v) in [("n_p", n_p), ("n_r", n_r), ("sigma_out", sigma_out)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
        }
    }
    Ok(sigma_out / (n_p * n_r).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementCheck {
    pub name: String,
    /// Human-readable bound, e.g. `"< 30"`.
    pub bound: String,
    pub actual: f64,
    pub pass: bool,
}

impl RequirementCheck {
    fn below(name: &str, limit: f64, actual: f64) -> Self {
        Self {
            name: name.to_string(),
            bound: format!("< {limit}"),
            actual,
            pass: actual < limit,
        }
    }

    fn above(name: &str, limit: f64, actual: f64) -> Self {
        Self {
            name: name.to_string(),
            bound: format!("> {limit}"),
            actual,
            pass: actual > limit,
        }
    }
}

/// Experimental conditions under which the loop signal is not washed out.
pub fn requirement_budget(params: &PhysicalParams) -> Vec<RequirementCheck> {
    let i = params.inputs();
    let lambda = params.lambda();
    vec![
        RequirementCheck::below("thermal occupation n̄", 30.0, i.nbar),
        RequirementCheck::below("bath temperature T [K]", 0.1, i.t_k),
        RequirementCheck::above("quality factor Q", 1e6, i.q),
        RequirementCheck::below("coupling λ", 1.0, lambda),
        RequirementCheck {
            name: "n̄ / (λN_p)".to_string(),
            bound: "< 1".to_string(),
            actual: i.nbar / (lambda * i.n_p),
            pass: i.nbar < lambda * i.n_p,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub model: DeformationKind,
    /// `δ⟨Φ⟩` in radians.
    pub phase_imprecision: f64,
    /// `Θ` per unit bare strength.
    #[serde(with = "complex_pair")]
    pub theta_per_unit: Complex64,
    /// `|Θ|` per unit bare strength, after any noise budget.
    pub theta_magnitude: f64,
    /// Smallest resolvable `δβ₀`, `δγ₀` or `δμ₀`.
    pub resolvable_strength: f64,
    pub requirement_checks: Vec<RequirementCheck>,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// `Θ` for unit bare strength, with the regime checks of [`theta`].
pub fn theta_per_unit_strength(kind: DeformationKind, params: &PhysicalParams) -> Result<Complex64> {
    theta(&DeformationModel::new(kind, 1.0)?, params)
}

/// Resolution `δ(strength) = δ⟨Φ⟩ / |Θ per unit strength|`.
pub fn resolvable_strength(kind: DeformationKind, params: &PhysicalParams) -> Result<SensitivityReport> {
    if kind == DeformationKind::None {
        return Err(Error::param("model", "no deformation to resolve"));
    }
    let i = params.inputs();
    let imprecision = phase_imprecision(i.n_p, i.n_r, i.sigma_out)?;
    let t = theta_per_unit_strength(kind, params)?;
    let mag = t.norm();
    Ok(SensitivityReport {
        model: kind,
        phase_imprecision: imprecision,
        theta_per_unit: t,
        theta_magnitude: mag,
        resolvable_strength: imprecision / mag,
        requirement_checks: requirement_budget(params),
    })
}

/// Scales `|Θ|` by the budget's composite factor and recomputes the
/// resolution.
pub fn apply_noise_budget(report: &SensitivityReport, budget: &NoiseBudget) -> Result<SensitivityReport> {
    budget.validate()?;
    let mut out = report.clone();
    out.theta_magnitude = report.theta_magnitude * budget.composite();
    out.resolvable_strength = out.phase_imprecision / out.theta_magnitude;
    Ok(out)
}

/// Closed forms of `|Θ|` in SI inputs, for unit-free cross-checks:
/// μ: `32ħF²mN_p μ₀/(M_P²λ_L²ω_m)`,
/// γ: `96ħ²F³N_p² γ₀/(M_P c λ_L³ m ω_m)`,
/// β: `1024ħ³F⁴N_p³ β₀/(3M_P²c²λ_L⁴ m ω_m)`.
pub fn theta_magnitude_si(model: &DeformationModel, i: &PhysicalInputs, k: &Constants) -> f64 {
    let (h, f, m, n, l, w) = (k.hbar, i.finesse, i.m_kg, i.n_p, i.lambda_l_m, i.omega_m_rad_s);
    let (mp, c) = (k.planck_mass, k.c);
    match *model {
        DeformationModel::None => 0.0,
        DeformationModel::Mu(s) => s * 32.0 * h * f * f * m * n / (mp * mp * l * l * w),
        DeformationModel::Gamma(s) => s * 96.0 * h * h * f.powi(3) * n * n / (mp * c * l.powi(3) * m * w),
        DeformationModel::Beta(s) => {
            s * 1024.0 * h.powi(3) * f.powi(4) * n.powi(3) / (3.0 * mp * mp * c * c * l.powi(4) * m * w)
        }
    }
}

/// One column of the reference parameter table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Column {
    pub model: DeformationKind,
    pub inputs: PhysicalInputs,
    /// Quoted phase resolution.
    pub quoted_imprecision: f64,
}

fn column_inputs(finesse: f64, m_kg: f64, lambda_l_m: f64, n_p: f64, n_r: f64) -> PhysicalInputs {
    PhysicalInputs {
        m_kg,
        omega_m_rad_s: 2.0 * PI * 1e5,
        finesse,
        lambda_l_m,
        n_p,
        n_r,
        nbar: 10.0,
        eta: 1.0,
        t_k: 0.05,
        q: 1e7,
        sigma_out: 0.5,
    }
}

/// The three reference configurations, with `n̄ = 10`, `T = 50 mK`,
/// `Q = 10⁷` and `η = 1` for the noise-related inputs.
pub fn table2_columns() -> [Table2Column; 3] {
    [
        Table2Column {
            model: DeformationKind::Mu,
            inputs: column_inputs(1e5, 1e-11, 1064e-9, 1e8, 1.0),
            quoted_imprecision: 1e-4,
        },
        Table2Column {
            model: DeformationKind::Gamma,
            inputs: column_inputs(2e5, 1e-9, 1064e-9, 5e10, 1e5),
            quoted_imprecision: 1e-8,
        },
        Table2Column {
            model: DeformationKind::Beta,
            inputs: column_inputs(4e5, 1e-7, 532e-9, 1e14, 1e6),
            quoted_imprecision: 1e-10,
        },
    ]
}

/// The single-run configuration (`N_p = 10⁸`, `N_r = 1`, `F = 10⁵`,
/// `m = 10⁻¹¹ kg`): identical to the μ column.
pub fn first_parameter_set() -> PhysicalInputs {
    table2_columns()[0].inputs
}

/// `Δx_min(Δp)` from `ΔxΔp ≥ ħ(1 + β₀(Δp/M_Pc)²)/2`, in Planck units
/// (`u = Δp/M_Pc`, result in `L_P`): `(1 + β₀u²)/(2u)`.
pub fn uncertainty_bound(beta0: f64, u: f64) -> f64 {
    (1.0 + beta0 * u * u) / (2.0 * u)
}

/// Sampling of `Δp/M_Pc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "default_log")]
    pub log: bool,
}

fn default_log() -> bool {
    true
}

impl MomentumRange {
    pub fn samples(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0) || !(self.max > self.min) || !self.max.is_finite() {
            return Err(Error::param("range", format!("need 0 < min < max, got [{}, {}]", self.min, self.max)));
        }
        let n = self.points;
        if n < 2 {
            return Ok(if n == 1 { vec![self.min] } else { Vec::new() });
        }
        Ok((0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + s * (self.max / self.min).ln()).exp()
                } else {
                    self.min + s * (self.max - self.min)
                }
            })
            .collect())
    }
}

/// `(Δp/M_Pc, Δx_min/L_P)` over `range`.
pub fn uncertainty_curve(beta0: f64, range: &MomentumRange) -> Result<Vec<(f64, f64)>> {
    if !(beta0 >= 0.0) || !beta0.is_finite() {
        return Err(Error::param("beta0", format!("must be finite and ≥ 0, got {beta0}")));
    }
    Ok(range
        .samples()?
        .into_iter()
        .map(|u| (u, uncertainty_bound(beta0, u)))
        .collect())
}

/// Global minimum of the modified bound, located by bisection on the sign of
/// its derivative `(β₀u² − 1)/(2u²)`. `None` for `β₀ = 0`.
pub fn uncertainty_minimum(beta0: f64) -> Result<Option<(f64, f64)>> {
    if !(beta0 >= 0.0) || !beta0.is_finite() {
        return Err(Error::param("beta0", format!("must be finite and ≥ 0, got {beta0}")));
    }
    if beta0 == 0.0 {
        return Ok(None);
    }
    let slope = |u: f64| beta0 * u * u - 1.0;
    let (mut lo, mut hi) = (1e-300f64.max(f64::MIN_POSITIVE), 1.0);
    while slope(hi) < 0.0 {
        hi *= 2.0;
    }
    while slope(lo) > 0.0 {
        lo /= 2.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    Ok(Some((u, uncertainty_bound(beta0, u))))
}

/// Existing experimental upper bounds on the bare parameters, shipped as
/// reference data.
pub const TABLE1_BOUNDS_CSV: &str = include_str!("../data/table1_bounds.csv");
