//! Numerically exact optical mean field for the four-kick loop.
//!
//! Every kick commutes with the photon number `n_L`, so the joint unitary is
//! block diagonal: `ξ = Σₙ |n⟩⟨n| ⊗ ξ_m(n)`. The optical mean field of
//! `ξ (|α⟩⟨α| ⊗ ρ_m) ξ†` then reduces to
//! `⟨a_L⟩ = Σₙ √(n+1) c_{n+1} c̄ₙ tr(ξ_m(n)† ξ_m(n+1) ρ_m)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::framed::{FramedUnitary, Kick, Propagator};
use crate::deformations::{deformed_momentum_poly, Deformation};
use crate::error::{Error, Result};
use crate::fock::{coherent_state, thermal_state, FockState, Quadrature};

/// How each block `ξ_m(n)` is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Moving-frame propagation; exact for any loop size.
    #[default]
    Framed,
    /// Direct exponentiation of the truncated generators.
    Lab,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub mode: OracleMode,
    /// Largest relative change of the mean field allowed when the mechanical
    /// cutoff is enlarged. `None` skips the check.
    pub convergence_tol: Option<f64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            mode: OracleMode::Framed,
            convergence_tol: Some(1e-8),
        }
    }
}

/// The per-photon-number family `{ξ_m(n) : n = 0 … opt_dim − 1}`.
#[derive(Debug, Clone)]
pub struct BlockFamily {
    blocks: Vec<FramedUnitary>,
}

impl BlockFamily {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, n: usize) -> &FramedUnitary {
        &self.blocks[n]
    }

    pub fn blocks(&self) -> &[FramedUnitary] {
        &self.blocks
    }

    pub fn mech_dim(&self) -> usize {
        self.blocks.first().map_or(0, FramedUnitary::dim)
    }

    /// `⟨0|ξ_m(n)|0⟩` for every n.
    pub fn vacuum_amplitudes(&self) -> Result<Vec<Complex64>> {
        self.blocks.par_iter().map(FramedUnitary::vacuum_amplitude).collect()
    }

    /// Optical mean field for a coherent input and mechanical state `rho`.
    pub fn mean_field(&self, alpha: Complex64, rho: &FockState) -> Result<Complex64> {
        let opt_dim = self.len();
        let FockState::Pure(c) = coherent_state(alpha, opt_dim)? else {
            unreachable!("coherent_state is pure")
        };
        let terms: Vec<Complex64> = (0..opt_dim - 1)
            .into_par_iter()
            .map(|n| {
                let t = self.blocks[n].overlap(&self.blocks[n + 1], rho)?;
                Ok(((n + 1) as f64).sqrt() * c[n + 1] * c[n].conj() * t)
            })
            .collect::<Result<_>>()?;
        Ok(terms.into_iter().sum())
    }

    /// Reduced mechanical state `Σₙ |cₙ|² ξ_m(n) ρ ξ_m(n)†` after the loop.
    pub fn mechanical_output(&self, alpha: Complex64, rho: &FockState) -> Result<FockState> {
        let FockState::Pure(c) = coherent_state(alpha, self.len())? else {
            unreachable!("coherent_state is pure")
        };
        let r = rho.density_matrix();
        let parts: Vec<_> = self
            .blocks
            .par_iter()
            .enumerate()
            .map(|(n, b)| {
                let u = b.materialize()?.into_matrix();
                Ok(&u * &r * u.adjoint() * Complex64::new(c[n].norm_sqr(), 0.0))
            })
            .collect::<Result<_>>()?;
        let mut out = r.map(|_| Complex64::new(0.0, 0.0));
        for p in parts {
            out += p;
        }
        Ok(FockState::Mixed(out))
    }
}

/// Builds the family for an arbitrary kick sequence `kicks(n)`.
pub fn build_family<F>(opt_dim: usize, mech_dim: usize, mode: OracleMode, kicks: F) -> Result<BlockFamily>
where
    F: Fn(usize) -> Vec<Kick> + Sync,
{
    crate::fock::FockOperator::identity(opt_dim)?;
    let prop = Propagator::new(mech_dim)?;
    let blocks = (0..opt_dim)
        .into_par_iter()
        .map(|n| {
            let ks = kicks(n);
            match mode {
                OracleMode::Framed => prop.framed(&ks),
                OracleMode::Lab => prop.lab(&ks),
            }
        })
        .collect::<Result<_>>()?;
    Ok(BlockFamily { blocks })
}

/// The four kicks for `n` photons: `e^{iaX}`, `e^{−iaP′}`, `e^{−iaX}`,
/// `e^{iaP′}` in application order, `a = λn`.
pub fn loop_kicks(d: &Deformation, lambda: f64, n: usize) -> Result<Vec<Kick>> {
    let pp = deformed_momentum_poly(d)?;
    let a = lambda * n as f64;
    Ok(vec![
        Kick::linear(Quadrature::X, a),
        Kick::single(Quadrature::P, pp.scale(-a)),
        Kick::linear(Quadrature::X, -a),
        Kick::single(Quadrature::P, pp.scale(a)),
    ])
}

/// `ξ_m(n) = e^{iλnP′} e^{−iλnX} e^{−iλnP′} e^{iλnX}` for n below `opt_dim`.
pub fn xi_exact(d: &Deformation, lambda: f64, opt_dim: usize, mech_dim: usize) -> Result<BlockFamily> {
    xi_exact_with(OracleMode::Framed, d, lambda, opt_dim, mech_dim)
}

pub fn xi_exact_with(
    mode: OracleMode,
    d: &Deformation,
    lambda: f64,
    opt_dim: usize,
    mech_dim: usize,
) -> Result<BlockFamily> {
    check_lambda(lambda)?;
    // validates the strength once instead of per block
    deformed_momentum_poly(d)?;
    build_family(opt_dim, mech_dim, mode, |n| loop_kicks(d, lambda, n).expect("validated"))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::param("lambda", format!("must be finite and ≥ 0, got {lambda}")));
    }
    Ok(())
}

/// Brute-force `⟨a_L⟩` for `|α⟩ ⊗ ρ_thermal(n̄)` with default options.
pub fn mean_field_numeric(
    alpha: Complex64,
    nbar: f64,
    lambda: f64,
    d: &Deformation,
    opt_dim: usize,
    mech_dim: usize,
) -> Result<Complex64> {
    mean_field_numeric_with(&OracleOptions::default(), alpha, nbar, lambda, d, opt_dim, mech_dim)
}

pub fn mean_field_numeric_with(
    opts: &OracleOptions,
    alpha: Complex64,
    nbar: f64,
    lambda: f64,
    d: &Deformation,
    opt_dim: usize,
    mech_dim: usize,
) -> Result<Complex64> {
    coherent_state(alpha, opt_dim)?;
    let eval = |dim: usize| -> Result<Complex64> {
        let rho = thermal_state(nbar, dim)?;
        xi_exact_with(opts.mode, d, lambda, opt_dim, dim)?.mean_field(alpha, &rho)
    };
    let value = eval(mech_dim)?;
    if let Some(tol) = opts.convergence_tol {
        let larger = mech_dim + (mech_dim / 4).max(8);
        let check = eval(larger)?;
        let change = (check - value).norm() / value.norm().max(f64::MIN_POSITIVE);
        if change > tol {
            return Err(Error::CutoffInsufficient {
                dim: mech_dim,
                needed: None,
                what: format!("mechanical mode (relative change {change:e} on enlarging to {larger})"),
            });
        }
    }
    Ok(value)
}

/// Per-photon-number phase that the deformation adds to the mechanical
/// vacuum amplitude, `arg(⟨0|ξ_d(n)|0⟩ / ⟨0|ξ_0(n)|0⟩)`, for each n in `ns`.
pub fn deformation_phases(
    d: &Deformation,
    lambda: f64,
    ns: &[usize],
    mech_dim: usize,
) -> Result<Vec<f64>> {
    deformed_momentum_poly(d)?;
    let prop = Propagator::new(mech_dim)?;
    ns.par_iter()
        .map(|&n| {
            let on = prop.framed(&loop_kicks(d, lambda, n)?)?.vacuum_amplitude()?;
            let off = prop.framed(&loop_kicks(&Deformation::NONE, lambda, n)?)?.vacuum_amplitude()?;
            Ok((on / off).arg())
        })
        .collect()
}

/// First-order vacuum phase per photon number for `a = λn`:
/// β: `−β(a²/2 + a⁴/3)`, γ: `γa³/2`, μ: `−μa²`.
pub fn deformation_phase_first_order(d: &Deformation, a: f64) -> f64 {
    use crate::deformations::DeformationKind::*;
    let s = d.strength;
    match d.kind {
        None => 0.0,
        Beta => -s * (0.5 * a * a + a.powi(4) / 3.0),
        Gamma => 0.5 * s * a.powi(3),
        Mu => -s * a * a,
    }
}

/// Least-squares fit of `|y| = c·xᵏ` on a log-log scale, returning `(k, c)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::param("fit", "needs at least two matching points"));
    }
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (x.ln(), y.abs().ln()))
        .collect();
    if pts.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(Error::NonFinite("power-law fit (zero or negative abscissa/ordinate)"));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let k = sxy / sxx;
    Ok((k, (my - k * mx).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::trace_distance;
    use crate::protocol::analytic::mean_field_qm;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_photons_identity_block() {
        let fam = xi_exact(&Deformation::beta(1e-3), 0.3, 4, 10).unwrap();
        let m = fam.block(0).materialize().unwrap();
        assert!(m.max_abs_diff_block(&crate::fock::FockOperator::identity(10).unwrap(), 10) < 1e-15);
    }

    #[test]
    fn undeformed_blocks_are_kerr_phases() {
        let lambda = 0.3;
        let fam = xi_exact(&Deformation::NONE, lambda, 12, 16).unwrap();
        let id = crate::fock::FockOperator::identity(16).unwrap();
        for n in 0..12 {
            let a = lambda * n as f64;
            let expected = id.scale(Complex64::from_polar(1.0, -a * a));
            let m = fam.block(n).materialize().unwrap();
            assert!(m.max_abs_diff_block(&expected, 14) < 1e-10);
        }
    }

    #[test]
    fn lab_undeformed_blocks_on_interior() {
        let lambda = 0.2;
        let fam = xi_exact_with(OracleMode::Lab, &Deformation::NONE, lambda, 6, 80).unwrap();
        let id = crate::fock::FockOperator::identity(80).unwrap();
        for n in 0..6 {
            let a = lambda * n as f64;
            let m = fam.block(n).materialize().unwrap();
            let err = m.max_abs_diff_block(&id.scale(Complex64::from_polar(1.0, -a * a)), 20);
            assert!(err < 1e-10, "n={n}: {err:e}");
            assert!(m.unitarity_defect(20) < 1e-8);
        }
    }

    #[test]
    fn deformed_blocks_are_unitary() {
        let fam = xi_exact(&Deformation::beta(1e-3), 0.3, 10, 40).unwrap();
        for b in fam.blocks() {
            assert!(b.materialize().unwrap().unitarity_defect(30) < 1e-8);
        }
    }

    #[test]
    fn undeformed_matches_kerr_closed_form() {
        let v = mean_field_numeric(c(2.0), 0.0, 0.3, &Deformation::NONE, 48, 16).unwrap();
        let q = mean_field_qm(2.0, 0.3, 4.0);
        assert!((v - q).norm() / q.norm() < 1e-8);
    }

    #[test]
    fn zero_coupling_returns_alpha() {
        let v = mean_field_numeric(c(1.5), 1.0, 0.0, &Deformation::beta(1e-3), 40, 64).unwrap();
        assert!((v - c(1.5)).norm() < 1e-9);
    }

    #[test]
    fn thermal_cutoff_too_small() {
        let r = mean_field_numeric(c(1.0), 2.0, 0.1, &Deformation::NONE, 30, 4);
        assert!(matches!(r, Err(Error::CutoffInsufficient { .. })));
    }

    #[test]
    fn lab_matches_framed_for_small_loops() {
        let d = Deformation::beta(1e-3);
        let opts = OracleOptions {
            mode: OracleMode::Lab,
            convergence_tol: None,
        };
        let lab = mean_field_numeric_with(&opts, c(1.0), 0.0, 0.05, &d, 24, 90).unwrap();
        let framed = mean_field_numeric(c(1.0), 0.0, 0.05, &d, 24, 32).unwrap();
        assert!((lab - framed).norm() < 1e-9, "{lab} vs {framed}");
    }

    #[test]
    fn mechanical_state_unaffected_without_deformation() {
        let rho = thermal_state(0.5, 40).unwrap();
        let fam = xi_exact(&Deformation::NONE, 0.4, 30, 40).unwrap();
        let out = fam.mechanical_output(c(2.0), &rho).unwrap();
        assert!(trace_distance(&rho, &out).unwrap() < 1e-8);
    }

    #[test]
    fn exact_beta_vacuum_amplitude() {
        // ξ_β(n) = e^{−ia²} e^{−iβ(a²P² + a³P + a⁴/3)} exactly; on the vacuum
        // ⟨0|e^{−iβ(a²P² + a³P)}|0⟩ = (1+iβa²)^{−1/2} exp(−(βa³)²/(4(1+iβa²)))
        let (beta, lambda) = (2e-3, 0.5);
        let ns: Vec<usize> = (1..9).collect();
        let got = deformation_phases(&Deformation::beta(beta), lambda, &ns, 60).unwrap();
        for (&n, g) in ns.iter().zip(got) {
            let a = lambda * n as f64;
            let z = Complex64::new(1.0, beta * a * a);
            let amp = z.powf(-0.5) * (-(beta * a.powi(3)).powi(2) / (4.0 * z)).exp()
                * Complex64::from_polar(1.0, -beta * a.powi(4) / 3.0);
            assert!((g - amp.arg()).abs() < 1e-9, "n={n}: {g} vs {}", amp.arg());
        }
    }

    #[test]
    fn power_law_fit_recovers_exponent() {
        let xs: Vec<f64> = (4..=12).map(|n| n as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -2.5 * x.powi(3)).collect();
        let (k, c) = fit_power_law(&xs, &ys).unwrap();
        assert!((k - 3.0).abs() < 1e-12 && (c - 2.5).abs() < 1e-10);
    }
}
