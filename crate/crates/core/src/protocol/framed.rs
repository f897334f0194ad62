//! Kick sequences on the mechanical oscillator, propagated in a moving
//! phase-space frame.
//!
//! A product of kicks is stored as `U = e^{iφ} D(x, p) R`: the displacement
//! and global phase are tracked analytically, and only the genuinely
//! nonlinear part `R` lives in the truncated space. Applying
//! `e^{if(Q)}` to `U` gives `D e^{if(Q + q₀)} R`; the constant and linear
//! parts of `f(Q + q₀)` fold into `φ` and `D`, the rest into `R`. Large
//! loop areas therefore never need large Fock cutoffs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{composition_phase, displacement_xp, matrix_exp, quadratures, FockOperator, FockState, Quadrature, QuadratureSpectrum};
use crate::poly::Poly;

/// `exp(i(f(Q) + g(Q̄)))` where `Q̄` is the conjugate quadrature.
///
/// When `g ≠ 0`, `f` must be linear so that the kick factorizes exactly into
/// single-quadrature pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Kick {
    pub main: Quadrature,
    pub f: Poly,
    pub g: Poly,
}

impl Kick {
    pub fn single(main: Quadrature, f: Poly) -> Self {
        Self {
            main,
            f,
            g: Poly::zero(),
        }
    }

    /// `exp(iθQ)`.
    pub fn linear(main: Quadrature, theta: f64) -> Self {
        Self::single(main, Poly::linear(theta))
    }

    pub fn mixed(main: Quadrature, theta: f64, g: Poly) -> Self {
        Self {
            main,
            f: Poly::linear(theta),
            g,
        }
    }

    fn conjugate(q: Quadrature) -> Quadrature {
        match q {
            Quadrature::X => Quadrature::P,
            Quadrature::P => Quadrature::X,
        }
    }

    /// Exact factorization into single-quadrature exponentials, in
    /// application order.
    ///
    /// `e^{i(θP + g(X))} = e^{−iF(X)} e^{iθP} e^{iF(X)}` and
    /// `e^{i(θX + g(P))} = e^{iG(P)} e^{iθX} e^{−iG(P)}`, with
    /// `F′ = G′ = g/θ`.
    pub fn factors(&self) -> Result<Vec<(Quadrature, Poly)>> {
        if self.g.is_zero() {
            return Ok(vec![(self.main, self.f.clone())]);
        }
        let theta = self.f.coeff(1);
        if self.f.degree() != Some(1) || self.f.coeff(0) != 0.0 || theta == 0.0 {
            return Err(Error::param("kick", "a mixed kick needs a nonzero linear main term"));
        }
        let other = Self::conjugate(self.main);
        let h = self.g.antiderivative().scale(1.0 / theta);
        let (first, last) = match self.main {
            Quadrature::P => (h.clone(), h.scale(-1.0)),
            Quadrature::X => (h.scale(-1.0), h.clone()),
        };
        Ok(vec![(other, first), (self.main, self.f.clone()), (other, last)])
    }

    /// Generator `f(Q) + g(Q̄)` on the truncated space.
    pub fn generator(&self, x: &FockOperator, p: &FockOperator) -> FockOperator {
        let (q, qb) = match self.main {
            Quadrature::X => (x, p),
            Quadrature::P => (p, x),
        };
        let mut gen = q.poly(&self.f);
        if !self.g.is_zero() {
            gen = &gen + &qb.poly(&self.g);
        }
        gen
    }
}

/// A mechanical unitary `e^{iφ} D(x, p) R`.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedUnitary {
    dim: usize,
    phase: f64,
    x: f64,
    p: f64,
    /// `None` stands for the identity.
    residual: Option<DMatrix<Complex64>>,
}

impl FramedUnitary {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            phase: 0.0,
            x: 0.0,
            p: 0.0,
            residual: None,
        }
    }

    /// Wraps a dense truncated matrix with a trivial frame.
    pub fn dense(m: DMatrix<Complex64>) -> Self {
        Self {
            dim: m.nrows(),
            phase: 0.0,
            x: 0.0,
            p: 0.0,
            residual: Some(m),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Net frame displacement `(x, p)`.
    pub fn displacement(&self) -> (f64, f64) {
        (self.x, self.p)
    }

    pub fn residual(&self) -> Option<&DMatrix<Complex64>> {
        self.residual.as_ref()
    }

    fn residual_or_identity(&self) -> DMatrix<Complex64> {
        self.residual
            .clone()
            .unwrap_or_else(|| DMatrix::identity(self.dim, self.dim))
    }

    /// Left-multiplies by `e^{if(Q)}`.
    pub fn apply(&mut self, spectrum: &QuadratureSpectrum, q: Quadrature, f: &Poly) {
        let q0 = match q {
            Quadrature::X => self.x,
            Quadrature::P => self.p,
        };
        let (c0, c1, rest) = f.shifted(q0).split_affine();
        // e^{ic₁X} = D(0, c₁), e^{ic₁P} = D(−c₁, 0)
        let (dx, dp) = match q {
            Quadrature::X => (0.0, c1),
            Quadrature::P => (-c1, 0.0),
        };
        self.phase += c0 + composition_phase(self.x, self.p, dx, dp);
        self.x += dx;
        self.p += dp;
        if !rest.is_zero() {
            let e = spectrum.exp_i(q, &rest);
            self.residual = Some(match self.residual.take() {
                None => e,
                Some(r) => e * r,
            });
        }
    }

    /// The full truncated matrix. The frame displacement is exponentiated in
    /// the truncated space, which is accurate while it stays well inside the
    /// cutoff.
    pub fn materialize(&self) -> Result<FockOperator> {
        let mut m = self.residual_or_identity();
        if self.x != 0.0 || self.p != 0.0 {
            m = displacement_xp(self.x, self.p, self.dim)?.into_matrix() * m;
        }
        m *= Complex64::from_polar(1.0, self.phase);
        FockOperator::new(m)
    }

    /// `tr(A† B ρ)` for `A = self`, `B = other`.
    pub fn overlap(&self, other: &FramedUnitary, rho: &FockState) -> Result<Complex64> {
        if self.dim != other.dim || rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim.max(rho.dim()),
            });
        }
        let dx = other.x - self.x;
        let dp = other.p - self.p;
        let phase = other.phase - self.phase + composition_phase(-self.x, -self.p, other.x, other.p);
        let mut m = other.residual_or_identity();
        if dx != 0.0 || dp != 0.0 {
            m = displacement_xp(dx, dp, self.dim)?.into_matrix() * m;
        }
        if let Some(r) = &self.residual {
            m = r.adjoint() * m;
        }
        let tr = match rho {
            FockState::Pure(v) => (v.adjoint() * &m * v)[(0, 0)],
            FockState::Mixed(rho) => (&m * rho).trace(),
        };
        Ok(Complex64::from_polar(1.0, phase) * tr)
    }

    /// `⟨0|U|0⟩`.
    pub fn vacuum_amplitude(&self) -> Result<Complex64> {
        let vac = FockState::number(0, self.dim)?;
        FramedUnitary::identity(self.dim).overlap(self, &vac)
    }
}

/// Propagates kick sequences for one mechanical cutoff.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectrum: QuadratureSpectrum,
    x: FockOperator,
    p: FockOperator,
}

impl Propagator {
    pub fn new(dim: usize) -> Result<Self> {
        let (x, p) = quadratures(dim)?;
        Ok(Self {
            spectrum: QuadratureSpectrum::new(dim)?,
            x,
            p,
        })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    /// Product of `kicks` (first element applied first) in the moving frame.
    pub fn framed(&self, kicks: &[Kick]) -> Result<FramedUnitary> {
        let mut u = FramedUnitary::identity(self.dim());
        for k in kicks {
            for (q, f) in k.factors()? {
                u.apply(&self.spectrum, q, &f);
            }
        }
        Ok(u)
    }

    /// Product of `kicks` by direct exponentiation of the truncated
    /// generators. Independent of the frame bookkeeping, but only accurate
    /// while the loop stays well inside the cutoff.
    pub fn lab(&self, kicks: &[Kick]) -> Result<FramedUnitary> {
        let dim = self.dim();
        let mut m = DMatrix::<Complex64>::identity(dim, dim);
        for k in kicks {
            let gen = k.generator(&self.x, &self.p).scale(Complex64::i());
            m = matrix_exp(&gen)?.into_matrix() * m;
        }
        Ok(FramedUnitary::dense(m))
    }
}
