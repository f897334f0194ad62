//! Commutator-deformation models and the experimental parameters that set
//! their dimensionless strengths.
//!
//! Three deformations of `[x, p] = iħ` are supported:
//!
//! * **β**: `[x, p] = iħ(1 + β₀ (p / M_P c)²)`
//! * **μ**: `[x, p] = iħ √(1 + 2μ₀ ((p/c)² + m²) / M_P²)`, used in its
//!   rest-mass limit `iħ(1 + μ₀ m² / M_P²)`
//! * **γ**: `[x, p] = iħ(1 − γ₀ p / M_P c + γ₀² (p / M_P c)²)`
//!
//! In oscillator units (`x = x₀X`, `p = p₀P`) each becomes a polynomial in
//! `P` with a small dimensionless coefficient, realized numerically through a
//! deformed momentum `P′(P)` on top of the canonical pair.

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeformationKind {
    None,
    Beta,
    Gamma,
    Mu,
}

impl DeformationKind {
    pub const ALL: [DeformationKind; 3] =
        [DeformationKind::Beta, DeformationKind::Gamma, DeformationKind::Mu];

    pub fn name(self) -> &'static str {
        match self {
            DeformationKind::None => "none",
            DeformationKind::Beta => "beta",
            DeformationKind::Gamma => "gamma",
            DeformationKind::Mu => "mu",
        }
    }

    /// Symbol of the bare parameter, for reports.
    pub fn bare_symbol(self) -> &'static str {
        match self {
            DeformationKind::None => "-",
            DeformationKind::Beta => "beta0",
            DeformationKind::Gamma => "gamma0",
            DeformationKind::Mu => "mu0",
        }
    }
}

impl std::str::FromStr for DeformationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(DeformationKind::None),
            "beta" => Ok(DeformationKind::Beta),
            "gamma" => Ok(DeformationKind::Gamma),
            "mu" => Ok(DeformationKind::Mu),
            other => Err(Error::param("model", format!("unknown deformation `{other}`"))),
        }
    }
}

/// Deformation with its bare (dimensionless, mass-independent) strength
/// `β₀`, `γ₀` or `μ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeformationModel {
    None,
    Beta(f64),
    Gamma(f64),
    Mu(f64),
}

impl DeformationModel {
    pub fn new(kind: DeformationKind, bare: f64) -> Result<Self> {
        if !(bare >= 0.0) || !bare.is_finite() {
            return Err(Error::param("strength", format!("must be finite and ≥ 0, got {bare}")));
        }
        Ok(match kind {
            DeformationKind::None => DeformationModel::None,
            DeformationKind::Beta => DeformationModel::Beta(bare),
            DeformationKind::Gamma => DeformationModel::Gamma(bare),
            DeformationKind::Mu => DeformationModel::Mu(bare),
        })
    }

    pub fn kind(&self) -> DeformationKind {
        match self {
            DeformationModel::None => DeformationKind::None,
            DeformationModel::Beta(_) => DeformationKind::Beta,
            DeformationModel::Gamma(_) => DeformationKind::Gamma,
            DeformationModel::Mu(_) => DeformationKind::Mu,
        }
    }

    pub fn bare_strength(&self) -> f64 {
        match *self {
            DeformationModel::None => 0.0,
            DeformationModel::Beta(s) | DeformationModel::Gamma(s) | DeformationModel::Mu(s) => s,
        }
    }

    pub fn with_bare_strength(&self, bare: f64) -> Result<Self> {
        Self::new(self.kind(), bare)
    }

    /// Converts to the dimensionless strength for the given oscillator.
    pub fn dimensionless(&self, params: &PhysicalParams) -> Deformation {
        Deformation {
            kind: self.kind(),
            strength: dimensionless_strength(self, params),
        }
    }
}

/// Deformation in oscillator units: `β`, `γ` or `μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    pub kind: DeformationKind,
    pub strength: f64,
}

impl Deformation {
    pub const NONE: Deformation = Deformation {
        kind: DeformationKind::None,
        strength: 0.0,
    };

    pub fn new(kind: DeformationKind, strength: f64) -> Self {
        let strength = if kind == DeformationKind::None { 0.0 } else { strength };
        Deformation { kind, strength }
    }

    pub fn beta(s: f64) -> Self {
        Self::new(DeformationKind::Beta, s)
    }

    pub fn gamma(s: f64) -> Self {
        Self::new(DeformationKind::Gamma, s)
    }

    pub fn mu(s: f64) -> Self {
        Self::new(DeformationKind::Mu, s)
    }

    pub fn with_strength(&self, s: f64) -> Self {
        Self::new(self.kind, s)
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == DeformationKind::None || self.strength == 0.0
    }
}

/// Raw experimental inputs, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalInputs {
    pub m_kg: f64,
    pub omega_m_rad_s: f64,
    pub finesse: f64,
    pub lambda_l_m: f64,
    pub n_p: f64,
    pub n_r: f64,
    pub nbar: f64,
    pub eta: f64,
    pub t_k: f64,
    pub q: f64,
    #[serde(default = "default_sigma_out")]
    pub sigma_out: f64,
}

pub fn default_sigma_out() -> f64 {
    0.5
}

/// Validated experimental configuration with cached oscillator scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    inputs: PhysicalInputs,
    constants: Constants,
    x0: f64,
    p0: f64,
    lambda: f64,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and ≥ 0, got {v}")))
    }
}

impl PhysicalParams {
    pub fn new(inputs: PhysicalInputs, constants: Constants) -> Result<Self> {
        positive("m_kg", inputs.m_kg)?;
        positive("omega_m_rad_s", inputs.omega_m_rad_s)?;
        positive("finesse", inputs.finesse)?;
        positive("lambda_l_m", inputs.lambda_l_m)?;
        positive("n_p", inputs.n_p)?;
        positive("n_r", inputs.n_r)?;
        non_negative("nbar", inputs.nbar)?;
        non_negative("t_k", inputs.t_k)?;
        positive("q", inputs.q)?;
        positive("sigma_out", inputs.sigma_out)?;
        if !(inputs.eta > 0.0 && inputs.eta <= 1.0) {
            return Err(Error::param("eta", format!("must lie in (0, 1], got {}", inputs.eta)));
        }
        for (name, v) in [
            ("hbar", constants.hbar),
            ("c", constants.c),
            ("k_b", constants.k_b),
            ("planck_mass", constants.planck_mass),
            ("planck_length", constants.planck_length),
        ] {
            positive(name, v)?;
        }
        let x0 = (constants.hbar / (inputs.m_kg * inputs.omega_m_rad_s)).sqrt();
        let p0 = (constants.hbar * inputs.m_kg * inputs.omega_m_rad_s).sqrt();
        let lambda = 4.0 * inputs.finesse * x0 / inputs.lambda_l_m;
        Ok(Self {
            inputs,
            constants,
            x0,
            p0,
            lambda,
        })
    }

    pub fn si(inputs: PhysicalInputs) -> Result<Self> {
        Self::new(inputs, Constants::SI)
    }

    /// Copy with one or more inputs modified, revalidated.
    pub fn map(&self, f: impl FnOnce(&mut PhysicalInputs)) -> Result<Self> {
        let mut inputs = self.inputs;
        f(&mut inputs);
        Self::new(inputs, self.constants)
    }

    pub fn inputs(&self) -> &PhysicalInputs {
        &self.inputs
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    /// Zero-point position scale `√(ħ / m ω_m)`.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Zero-point momentum scale `√(ħ m ω_m)`.
    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Interaction strength per photon, `λ = 4 F x₀ / λ_L`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mass(&self) -> f64 {
        self.inputs.m_kg
    }

    pub fn omega_m(&self) -> f64 {
        self.inputs.omega_m_rad_s
    }

    pub fn n_p(&self) -> f64 {
        self.inputs.n_p
    }

    pub fn n_r(&self) -> f64 {
        self.inputs.n_r
    }

    pub fn nbar(&self) -> f64 {
        self.inputs.nbar
    }

    pub fn eta(&self) -> f64 {
        self.inputs.eta
    }
}

/// `β = β₀ ħω_m m/(M_P c)²`, `γ = γ₀ √(ħ m ω_m)/(M_P c)`, `μ = μ₀ m²/M_P²`.
pub fn dimensionless_strength(model: &DeformationModel, params: &PhysicalParams) -> f64 {
    let k = params.constants();
    let m = params.mass();
    let w = params.omega_m();
    let mpc = k.planck_mass * k.c;
    match *model {
        DeformationModel::None => 0.0,
        DeformationModel::Beta(b0) => b0 * k.hbar * w * m / (mpc * mpc),
        DeformationModel::Gamma(g0) => g0 * params.p0() / mpc,
        DeformationModel::Mu(m0) => m0 * m * m / (k.planck_mass * k.planck_mass),
    }
}

/// Regime guard on the dimensionless strength of a perturbative
/// representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeGuard {
    pub limit: f64,
    pub warn: f64,
}

impl Default for RegimeGuard {
    fn default() -> Self {
        Self {
            limit: 1.0,
            warn: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeStatus {
    Nominal,
    /// Inside the limit but above the warning level.
    Marginal,
}

impl RegimeGuard {
    pub fn check(&self, d: &Deformation) -> Result<RegimeStatus> {
        if !(d.strength >= 0.0) || !d.strength.is_finite() {
            return Err(Error::param("strength", format!("must be finite and ≥ 0, got {}", d.strength)));
        }
        // the μ representation is an exact rescaling
        if d.kind == DeformationKind::Mu || d.kind == DeformationKind::None {
            return Ok(RegimeStatus::Nominal);
        }
        if d.strength >= self.limit {
            return Err(Error::regime(
                format!("{} < {}", d.kind.name(), self.limit),
                d.strength,
            ));
        }
        Ok(if d.strength >= self.warn {
            RegimeStatus::Marginal
        } else {
            RegimeStatus::Nominal
        })
    }
}

/// `P′(P)` as a polynomial in the canonical momentum.
///
/// β: `P(1 + βP²/3)`; γ: `P − γP²/2` (first order, the γ² term of the
/// commutator is not represented); μ: `(1 + μ)P`, exact.
pub fn deformed_momentum_poly(d: &Deformation) -> Result<Poly> {
    RegimeGuard::default().check(d)?;
    let s = d.strength;
    Ok(match d.kind {
        DeformationKind::None => Poly::linear(1.0),
        DeformationKind::Beta => Poly::new(vec![0.0, 1.0, 0.0, s / 3.0]),
        DeformationKind::Gamma => Poly::new(vec![0.0, 1.0, -0.5 * s]),
        DeformationKind::Mu => Poly::linear(1.0 + s),
    })
}

pub fn deformed_momentum(p: &FockOperator, d: &Deformation) -> Result<FockOperator> {
    Ok(p.poly(&deformed_momentum_poly(d)?))
}

/// The deformed commutator `[X, P]/i` as a polynomial in `P`, to first order
/// in the strength.
pub fn commutator_poly(d: &Deformation) -> Poly {
    let s = d.strength;
    match d.kind {
        DeformationKind::None => Poly::constant(1.0),
        DeformationKind::Beta => Poly::new(vec![1.0, 0.0, s]),
        DeformationKind::Gamma => Poly::new(vec![1.0, -s]),
        DeformationKind::Mu => Poly::constant(1.0 + s),
    }
}

/// Full commutator polynomial including the γ² term, for quantifying what
/// the first-order representation leaves out.
pub fn commutator_poly_full(d: &Deformation) -> Poly {
    match d.kind {
        DeformationKind::Gamma => Poly::new(vec![1.0, -d.strength, d.strength * d.strength]),
        _ => commutator_poly(d),
    }
}

/// Nested commutators `iCₖ = [X, Cₖ₋₁]` starting from the deformed momentum
/// `C₀ = P′`. Since `[X, f(P)] = i f′(P)`, `Cₖ` is the k-th derivative of
/// `P′`; all models here have `Cₖ = 0` for `k ≥ 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedCommutators {
    terms: Vec<Poly>,
}

impl NestedCommutators {
    pub fn c(&self, k: usize) -> Poly {
        self.terms.get(k).cloned().unwrap_or_else(Poly::zero)
    }

    /// `C₀ … C₃`.
    pub fn leading(&self) -> [Poly; 4] {
        [self.c(0), self.c(1), self.c(2), self.c(3)]
    }
}

pub fn nested_commutators(d: &Deformation) -> Result<NestedCommutators> {
    let mut terms = vec![deformed_momentum_poly(d)?];
    loop {
        let next = terms.last().unwrap().derivative();
        if next.is_zero() {
            break;
        }
        terms.push(next);
    }
    Ok(NestedCommutators { terms })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correlation {
    Uncorrelated,
    FullyCorrelated,
}

/// Rescaling `β₀ → χβ₀` when the deformation acts on each of `N`
/// constituents rather than on the centre of mass.
pub fn composite_chi(n: u64, regime: Correlation) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("N", "constituent count must be ≥ 1"));
    }
    let n = n as f64;
    Ok(match regime {
        Correlation::Uncorrelated => 1.0 / n,
        Correlation::FullyCorrelated => 1.0 / (n * n),
    })
}

/// User-supplied χ for partial correlation, checked against the endpoints
/// `[1/N², 1/N]`. There is no interpolation rule between them.
pub fn composite_chi_custom(n: u64, chi: f64) -> Result<f64> {
    let lo = composite_chi(n, Correlation::FullyCorrelated)?;
    let hi = composite_chi(n, Correlation::Uncorrelated)?;
    if chi < lo || chi > hi || !chi.is_finite() {
        return Err(Error::param("chi", format!("must lie in [{lo:e}, {hi:e}], got {chi}")));
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::quadratures;
    use num_complex::Complex64;
    use proptest::prelude::*;

    pub(crate) fn inputs(m: f64, w: f64) -> PhysicalInputs {
        PhysicalInputs {
            m_kg: m,
            omega_m_rad_s: w,
            finesse: 1e5,
            lambda_l_m: 1064e-9,
            n_p: 1e8,
            n_r: 1.0,
            nbar: 0.0,
            eta: 1.0,
            t_k: 0.0,
            q: 1e6,
            sigma_out: 0.5,
        }
    }

    fn two_pi() -> f64 {
        2.0 * std::f64::consts::PI
    }

    #[test]
    fn mu_strength_for_ten_picogram() {
        let p = PhysicalParams::si(inputs(1e-11, two_pi() * 1e5)).unwrap();
        let mu = dimensionless_strength(&DeformationModel::Mu(1.0), &p);
        let expected = (1e-11f64 / 2.2e-8).powi(2);
        assert!((mu - expected).abs() / expected < 1e-14);
        assert!((mu - 2.07e-7).abs() < 0.01e-7);
    }

    #[test]
    fn beta_strength_for_hundred_nanogram() {
        let p = PhysicalParams::si(inputs(1e-7, two_pi() * 1e5)).unwrap();
        let beta = dimensionless_strength(&DeformationModel::Beta(1.0), &p);
        let expected = 1.054_571_817e-34 * two_pi() * 1e5 * 1e-7 / (2.2e-8f64 * 299_792_458.0).powi(2);
        assert!((beta - expected).abs() / expected < 1e-14);
        assert!((beta / 1.5e-37 - 1.0).abs() < 0.05);
    }

    #[test]
    fn zero_strength_gives_zero() {
        let p = PhysicalParams::si(inputs(1e-9, 1e5)).unwrap();
        for kind in DeformationKind::ALL {
            let m = DeformationModel::new(kind, 0.0).unwrap();
            assert_eq!(dimensionless_strength(&m, &p), 0.0);
        }
        assert_eq!(dimensionless_strength(&DeformationModel::None, &p), 0.0);
    }

    #[test]
    fn negative_bare_strength_rejected() {
        assert!(DeformationModel::new(DeformationKind::Beta, -1.0).is_err());
    }

    #[test]
    fn params_validation() {
        let mut i = inputs(1e-11, 1e5);
        i.eta = 1.2;
        assert!(PhysicalParams::si(i).is_err());
        i.eta = 0.9;
        i.m_kg = 0.0;
        assert!(PhysicalParams::si(i).is_err());
    }

    #[test]
    fn lambda_is_cached_from_finesse() {
        let p = PhysicalParams::si(PhysicalInputs {
            finesse: 4e5,
            lambda_l_m: 532e-9,
            ..inputs(1e-7, two_pi() * 1e5)
        })
        .unwrap();
        let x0 = (1.054_571_817e-34 / (1e-7 * two_pi() * 1e5)).sqrt();
        assert!((p.lambda() - 4.0 * 4e5 * x0 / 532e-9).abs() < 1e-18);
        assert!((p.lambda() / 1.2e-4 - 1.0).abs() < 0.05);
    }

    #[test]
    fn nested_commutator_coefficients() {
        let none = nested_commutators(&Deformation::NONE).unwrap();
        assert_eq!(none.c(1), Poly::constant(1.0));
        assert!(none.c(2).is_zero() && none.c(3).is_zero());

        let b = 0.01;
        let beta = nested_commutators(&Deformation::beta(b)).unwrap();
        assert_eq!(beta.c(1), Poly::new(vec![1.0, 0.0, b]));
        assert_eq!(beta.c(2), Poly::new(vec![0.0, 2.0 * b]));
        assert_eq!(beta.c(3), Poly::constant(2.0 * b));
        assert!(beta.c(4).is_zero() && beta.c(7).is_zero());

        let mu = nested_commutators(&Deformation::mu(0.2)).unwrap();
        assert_eq!(mu.c(1), Poly::constant(1.2));
        assert!(mu.c(2).is_zero());

        let g = nested_commutators(&Deformation::gamma(0.05)).unwrap();
        assert_eq!(g.c(1), Poly::new(vec![1.0, -0.05]));
        assert_eq!(g.c(2), Poly::constant(-0.05));
        assert!(g.c(3).is_zero());
    }

    #[test]
    fn nested_commutators_match_matrix_commutators() {
        let dim = 24;
        let (x, p) = quadratures(dim).unwrap();
        for d in [Deformation::beta(1e-3), Deformation::gamma(1e-3), Deformation::mu(1e-3)] {
            let nc = nested_commutators(&d).unwrap();
            let mut prev = deformed_momentum(&p, &d).unwrap();
            for k in 1..=4 {
                let ick = x.commutator(&prev).unwrap();
                let ck = ick.scale(Complex64::new(0.0, -1.0));
                let expected = p.poly(&nc.c(k));
                // each commutator pushes the truncation defect one level further in
                let block = dim - 2 - 2 * k;
                assert!(ck.max_abs_diff_block(&expected, block) < 1e-10, "{d:?} k={k}");
                prev = ck;
            }
        }
    }

    #[test]
    fn deformed_momentum_zero_strength_unchanged() {
        let (_, p) = quadratures(10).unwrap();
        for kind in DeformationKind::ALL {
            let pp = deformed_momentum(&p, &Deformation::new(kind, 0.0)).unwrap();
            assert!(pp.max_abs_diff_block(&p, 10) < 1e-15);
        }
    }

    #[test]
    fn deformed_momentum_regime_guard() {
        let (_, p) = quadratures(6).unwrap();
        assert!(matches!(
            deformed_momentum(&p, &Deformation::beta(1.0)),
            Err(Error::OutOfRegime { .. })
        ));
        assert!(deformed_momentum(&p, &Deformation::gamma(2.0)).is_err());
        // μ is an exact rescaling and is never out of regime
        assert!(deformed_momentum(&p, &Deformation::mu(3.0)).is_ok());
        assert_eq!(
            RegimeGuard::default().check(&Deformation::beta(0.5)).unwrap(),
            RegimeStatus::Marginal
        );
        assert_eq!(
            RegimeGuard::default().check(&Deformation::beta(0.01)).unwrap(),
            RegimeStatus::Nominal
        );
    }

    #[test]
    fn commutator_representation_dim24() {
        let dim = 24;
        let interior = dim - 4;
        let (x, p) = quadratures(dim).unwrap();
        for d in [Deformation::beta(1e-4), Deformation::gamma(1e-4), Deformation::mu(1e-4)] {
            let pp = deformed_momentum(&p, &d).unwrap();
            let comm = x.commutator(&pp).unwrap();
            let target = p.poly(&commutator_poly(&d)).scale(Complex64::i());
            assert!(comm.max_abs_diff_block(&target, interior) < 1e-12, "{d:?}");
            // against the full polynomial only the O(s²) term is missing
            let full = p.poly(&commutator_poly_full(&d)).scale(Complex64::i());
            let gap = comm.max_abs_diff_block(&full, interior);
            assert!(gap < 1e-8 * 50.0, "{d:?}: {gap:e}");
        }
    }

    #[test]
    fn composite_chi_endpoints() {
        assert_eq!(composite_chi(1, Correlation::Uncorrelated).unwrap(), 1.0);
        assert_eq!(composite_chi(1, Correlation::FullyCorrelated).unwrap(), 1.0);
        assert!((composite_chi(100, Correlation::Uncorrelated).unwrap() - 0.01).abs() < 1e-18);
        assert!((composite_chi(100, Correlation::FullyCorrelated).unwrap() - 1e-4).abs() < 1e-18);
        assert!(composite_chi(0, Correlation::Uncorrelated).is_err());
        assert!(composite_chi_custom(10, 0.05).is_ok());
        assert!(composite_chi_custom(10, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn strength_is_linear_in_bare(k in 1e-3f64..1e3, s in 1e-3f64..1e3,
                                      m in 1e-12f64..1e-6) {
            let p = PhysicalParams::si(inputs(m, 6.3e5)).unwrap();
            for kind in DeformationKind::ALL {
                let a = dimensionless_strength(&DeformationModel::new(kind, k * s).unwrap(), &p);
                let b = dimensionless_strength(&DeformationModel::new(kind, s).unwrap(), &p);
                prop_assert!((a - k * b).abs() <= 1e-12 * a.abs());
            }
        }

        #[test]
        fn chi_correlated_is_uncorrelated_over_n(n in 1u64..100_000) {
            let u = composite_chi(n, Correlation::Uncorrelated).unwrap();
            let c = composite_chi(n, Correlation::FullyCorrelated).unwrap();
            prop_assert!((c - u / n as f64).abs() <= 1e-15 * u);
        }
    }
}
