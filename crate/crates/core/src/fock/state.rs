use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operator::{check_dim, FockOperator};
use crate::error::{Error, Result};

/// Normalization tolerance for pure and mixed states.
pub const NORM_TOL: f64 = 1e-10;
/// Largest probability weight a truncation may discard.
pub const TAIL_TOL: f64 = 1e-10;

/// A state on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub enum FockState {
    Pure(DVector<Complex64>),
    Mixed(DMatrix<Complex64>),
}

impl FockState {
    pub fn pure(amplitudes: DVector<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(format!("|ψ| = {norm}")));
        }
        Ok(FockState::Pure(amplitudes))
    }

    pub fn mixed(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::DimensionMismatch {
                left: rho.nrows(),
                right: rho.ncols(),
            });
        }
        check_dim(rho.nrows())?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::NotNormalized(format!("tr ρ = {tr}")));
        }
        let herm = (&rho - rho.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > NORM_TOL {
            return Err(Error::param("rho", format!("not Hermitian ({herm:e})")));
        }
        let min_eig = hermitian_eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -NORM_TOL {
            return Err(Error::param("rho", format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(FockState::Mixed(rho))
    }

    /// Fock number state `|k⟩`.
    pub fn number(k: usize, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::CutoffInsufficient {
                dim,
                needed: Some(k + 1),
                what: format!("number state |{k}⟩"),
            });
        }
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Ok(FockState::Pure(v))
    }

    pub fn dim(&self) -> usize {
        match self {
            FockState::Pure(v) => v.len(),
            FockState::Mixed(m) => m.nrows(),
        }
    }

    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        match self {
            FockState::Pure(v) => v * v.adjoint(),
            FockState::Mixed(m) => m.clone(),
        }
    }

    /// Diagonal of the density matrix (occupation probabilities).
    pub fn populations(&self) -> Vec<f64> {
        match self {
            FockState::Pure(v) => v.iter().map(|z| z.norm_sqr()).collect(),
            FockState::Mixed(m) => (0..m.nrows()).map(|k| m[(k, k)].re).collect(),
        }
    }

    pub fn purity(&self) -> f64 {
        match self {
            FockState::Pure(_) => 1.0,
            FockState::Mixed(m) => (m * m).trace().re,
        }
    }
}

/// Default cutoff for a coherent amplitude: `⌈|α|² + 8|α| + 20⌉`.
pub fn coherent_cutoff(alpha: Complex64) -> usize {
    let a = alpha.norm();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// Default cutoff for a thermal occupation: `⌈20 (n̄ + 1)⌉`.
pub fn thermal_cutoff(nbar: f64) -> usize {
    (20.0 * (nbar + 1.0)).ceil() as usize
}

/// Coherent state `|α⟩` truncated to `dim` levels and renormalized.
///
/// Fails with [`Error::CutoffInsufficient`] (reporting the smallest adequate
/// dimension) when the discarded Poisson weight exceeds [`TAIL_TOL`].
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<FockState> {
    check_dim(dim)?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let amps = coherent_amplitudes(alpha, dim);
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if 1.0 - kept >= TAIL_TOL {
        let mut needed = dim;
        let mut c = amps[dim - 1];
        let mut acc = kept;
        while 1.0 - acc >= TAIL_TOL && needed < 1_000_000 {
            c = c * alpha / (needed as f64).sqrt();
            acc += c.norm_sqr();
            needed += 1;
        }
        return Err(Error::CutoffInsufficient {
            dim,
            needed: Some(needed),
            what: format!("coherent state α = {alpha}"),
        });
    }
    let v = DVector::from_vec(amps) / Complex64::new(kept.sqrt(), 0.0);
    Ok(FockState::Pure(v))
}

pub(crate) fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        amps.push(c);
        c = c * alpha / ((n + 1) as f64).sqrt();
    }
    amps
}

/// Thermal state with mean occupation `nbar`, `ρ_nn ∝ (n̄/(1+n̄))ⁿ`.
pub fn thermal_state(nbar: f64, dim: usize) -> Result<FockState> {
    let p = thermal_populations(nbar, dim)?;
    Ok(FockState::Mixed(DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        p.into_iter().map(|x| Complex64::new(x, 0.0)),
    ))))
}

/// Diagonal of [`thermal_state`], without building the matrix.
pub fn thermal_populations(nbar: f64, dim: usize) -> Result<Vec<f64>> {
    check_dim(dim)?;
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::param("nbar", format!("must be finite and ≥ 0, got {nbar}")));
    }
    let q = nbar / (1.0 + nbar);
    let tail = q.powi(dim as i32);
    if tail >= TAIL_TOL {
        let needed = (TAIL_TOL.ln() / q.ln()).ceil() as usize + 1;
        return Err(Error::CutoffInsufficient {
            dim,
            needed: Some(needed),
            what: format!("thermal state n̄ = {nbar}"),
        });
    }
    let mut p: Vec<f64> = (0..dim).map(|n| q.powi(n as i32)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}

/// `⟨ψ|M|ψ⟩` or `tr(ρM)`.
pub fn expect(op: &FockOperator, state: &FockState) -> Result<Complex64> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: state.dim(),
        });
    }
    Ok(match state {
        FockState::Pure(v) => (v.adjoint() * op.matrix() * v)[(0, 0)],
        FockState::Mixed(rho) => (rho * op.matrix()).trace(),
    })
}

/// Eigenvalues of a Hermitian matrix (ascending order not guaranteed).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    // symmetrize to suppress round-off asymmetry before the solver
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance(a: &FockState, b: &FockState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let diff = a.density_matrix() - b.density_matrix();
    Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|e| e.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::operator::ladder;

    #[test]
    fn vacuum_from_zero_amplitude() {
        let s = coherent_state(Complex64::new(0.0, 0.0), 4).unwrap();
        assert_eq!(s, FockState::number(0, 4).unwrap());
    }

    #[test]
    fn coherent_mean_photon_number() {
        let s = coherent_state(Complex64::new(2.0, 0.0), 32).unwrap();
        let n = expect(&FockOperator::number(32).unwrap(), &s).unwrap();
        assert!((n.re - 4.0).abs() < 1e-8 && n.im.abs() < 1e-12);
    }

    #[test]
    fn coherent_norm_defect_alpha2_dim32() {
        // Poisson(4) tail beyond n = 31, summed independently in log space
        let mut tail = 0.0;
        for n in 32..200u32 {
            let ln = -4.0 + n as f64 * 4f64.ln() - (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
            tail += ln.exp();
        }
        assert!(tail < 1e-10);
        let kept: f64 = coherent_amplitudes(Complex64::new(2.0, 0.0), 32)
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        assert!((1.0 - kept - tail).abs() < 1e-14);
    }

    #[test]
    fn coherent_cutoff_error_reports_needed_dim() {
        let err = coherent_state(Complex64::new(4.0, 0.0), 20).unwrap_err();
        match err {
            Error::CutoffInsufficient { dim, needed: Some(n), .. } => {
                assert_eq!(dim, 20);
                assert!(coherent_state(Complex64::new(4.0, 0.0), n).is_ok());
                assert!(coherent_state(Complex64::new(4.0, 0.0), n - 1).is_err());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coherent_is_annihilation_eigenstate() {
        let alpha = Complex64::new(1.5, 0.0);
        let dim = coherent_cutoff(alpha);
        let s = coherent_state(alpha, dim).unwrap();
        let (a, _) = ladder(dim).unwrap();
        assert!((expect(&a, &s).unwrap() - alpha).norm() < 1e-8);
        assert!((expect(&FockOperator::identity(dim).unwrap(), &s).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_vacuum_limit() {
        let s = thermal_state(0.0, 5).unwrap();
        assert_eq!(s.populations(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn thermal_mean_and_purity() {
        let s = thermal_state(1.0, 64).unwrap();
        let n = expect(&FockOperator::number(64).unwrap(), &s).unwrap();
        assert!((n.re - 1.0).abs() < 1e-8);
        // Σ (1-q)² q^{2n} = (1-q)/(1+q) = 1/(2n̄+1)
        assert!((s.purity() - 1.0 / 3.0).abs() < 1e-8);
        let s2 = thermal_state(2.0, thermal_cutoff(2.0)).unwrap();
        let n2 = expect(&FockOperator::number(s2.dim()).unwrap(), &s2).unwrap();
        assert!((n2.re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn thermal_cutoff_insufficient() {
        match thermal_state(2.0, 4).unwrap_err() {
            Error::CutoffInsufficient { needed: Some(n), .. } => {
                assert!(thermal_state(2.0, n).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(thermal_state(-1.0, 10).is_err());
    }

    #[test]
    fn mixed_state_validation() {
        let mut rho = DMatrix::<Complex64>::zeros(3, 3);
        rho[(0, 0)] = Complex64::new(0.5, 0.0);
        rho[(1, 1)] = Complex64::new(0.5, 0.0);
        assert!(FockState::mixed(rho.clone()).is_ok());
        rho[(2, 2)] = Complex64::new(0.1, 0.0);
        assert!(matches!(FockState::mixed(rho.clone()), Err(Error::NotNormalized(_))));
        rho[(2, 2)] = Complex64::new(0.0, 0.0);
        rho[(0, 0)] = Complex64::new(1.2, 0.0);
        rho[(1, 1)] = Complex64::new(-0.2, 0.0);
        assert!(FockState::mixed(rho).is_err());
    }

    #[test]
    fn expect_dimension_mismatch() {
        let s = FockState::number(0, 3).unwrap();
        let op = FockOperator::identity(4).unwrap();
        assert_eq!(
            expect(&op, &s).unwrap_err(),
            Error::DimensionMismatch { left: 4, right: 3 }
        );
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let a = FockState::number(0, 3).unwrap();
        let b = FockState::number(1, 3).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance(&a, &a).unwrap() < 1e-14);
    }
}
