use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for the Hermitian flag check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense operator on the truncated Fock space spanned by `|0⟩ … |dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    matrix: DMatrix<Complex64>,
    hermitian: bool,
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::InvalidDimension { dim })
    } else {
        Ok(())
    }
}

impl FockOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(Self {
            matrix,
            hermitian: false,
        })
    }

    /// Builds an operator flagged Hermitian; fails unless `M = M†` entrywise
    /// to [`HERMITIAN_TOL`].
    pub fn hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::param(
                "matrix",
                format!("not Hermitian (max |M - M†| = {defect:e})"),
            ));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub(crate) fn from_parts(matrix: DMatrix<Complex64>, hermitian: bool) -> Self {
        Self { matrix, hermitian }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_parts(DMatrix::identity(dim, dim), true))
    }

    /// Number operator `a†a`.
    pub fn number(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_parts(
            DMatrix::from_fn(dim, dim, |i, j| {
                if i == j {
                    Complex64::new(i as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            true,
        ))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.matrix.adjoint(), self.hermitian)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let hermitian = self.hermitian && s.im == 0.0;
        Self::from_parts(&self.matrix * s, hermitian)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &FockOperator) -> Result<FockOperator> {
        self.check_same_dim(other)?;
        let c = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(Self::from_parts(c, false))
    }

    pub(crate) fn check_same_dim(&self, other: &FockOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Largest entrywise deviation from `other` on the leading `block × block`
    /// corner.
    pub fn max_abs_diff_block(&self, other: &FockOperator, block: usize) -> f64 {
        let b = block.min(self.dim()).min(other.dim());
        let mut worst = 0.0f64;
        for j in 0..b {
            for i in 0..b {
                worst = worst.max((self.matrix[(i, j)] - other.matrix[(i, j)]).norm());
            }
        }
        worst
    }

    /// `‖U†U − I‖_max` on the leading `block × block` corner.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let b = block.min(self.dim());
        let mut worst = 0.0f64;
        for j in 0..b {
            for i in 0..b {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Evaluates a real polynomial in this operator, `Σ cₖ Mᵏ`.
    pub fn poly(&self, p: &crate::poly::Poly) -> FockOperator {
        let n = self.dim();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for &c in p.coeffs().iter().rev() {
            acc = &acc * &self.matrix;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Self::from_parts(acc, self.hermitian)
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

impl<'a> Mul<&'a FockOperator> for &'a FockOperator {
    type Output = FockOperator;

    /// Operator product. Panics on dimension mismatch, like the underlying
    /// matrix product.
    fn mul(self, rhs: &'a FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "Fock dimension mismatch");
        FockOperator::from_parts(&self.matrix * &rhs.matrix, false)
    }
}

impl<'a> Add<&'a FockOperator> for &'a FockOperator {
    type Output = FockOperator;

    fn add(self, rhs: &'a FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "Fock dimension mismatch");
        FockOperator::from_parts(&self.matrix + &rhs.matrix, self.hermitian && rhs.hermitian)
    }
}

impl<'a> Sub<&'a FockOperator> for &'a FockOperator {
    type Output = FockOperator;

    fn sub(self, rhs: &'a FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "Fock dimension mismatch");
        FockOperator::from_parts(&self.matrix - &rhs.matrix, self.hermitian && rhs.hermitian)
    }
}

/// Annihilation and creation operators, `a[n−1, n] = √n`.
pub fn ladder(dim: usize) -> Result<(FockOperator, FockOperator)> {
    check_dim(dim)?;
    let a = DMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let adag = a.adjoint();
    Ok((
        FockOperator::from_parts(a, false),
        FockOperator::from_parts(adag, false),
    ))
}

/// Dimensionless quadratures `X = (a + a†)/√2`, `P = −i(a − a†)/√2`, so that
/// `[X, P] = i` away from the truncation edge.
pub fn quadratures(dim: usize) -> Result<(FockOperator, FockOperator)> {
    let (a, adag) = ladder(dim)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (a.matrix() + adag.matrix()) * Complex64::new(s, 0.0);
    let p = (a.matrix() - adag.matrix()) * Complex64::new(0.0, -s);
    Ok((
        FockOperator::from_parts(x, true),
        FockOperator::from_parts(p, true),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ladder_dim2() {
        let (a, adag) = ladder(2).unwrap();
        assert_eq!(a.matrix()[(0, 1)], c(1.0));
        assert_eq!(a.matrix()[(0, 0)], c(0.0));
        assert_eq!(a.matrix()[(1, 0)], c(0.0));
        assert_eq!(a.matrix()[(1, 1)], c(0.0));
        assert_eq!(adag.matrix()[(1, 0)], c(1.0));
    }

    #[test]
    fn ladder_entries_and_number() {
        let (a, adag) = ladder(4).unwrap();
        assert_eq!(a.matrix()[(2, 3)], c(3f64.sqrt()));
        let n = &adag * &a;
        for k in 0..4 {
            assert!((n.matrix()[(k, k)] - c(k as f64)).norm() < 1e-15);
        }
        assert!(n.max_abs_diff_block(&FockOperator::number(4).unwrap(), 4) < 1e-15);
    }

    #[test]
    fn ladder_rejects_small_dim() {
        assert_eq!(ladder(1).unwrap_err(), Error::InvalidDimension { dim: 1 });
        assert!(quadratures(0).is_err());
    }

    #[test]
    fn quadrature_commutator_interior() {
        let (x, p) = quadratures(16).unwrap();
        assert!(x.is_hermitian() && p.is_hermitian());
        assert!(x.hermiticity_defect() < 1e-15 && p.hermiticity_defect() < 1e-15);
        let comm = x.commutator(&p).unwrap();
        let target = FockOperator::identity(16).unwrap().scale(Complex64::i());
        assert!(comm.max_abs_diff_block(&target, 14) < 1e-12);
        // the last level carries the truncation defect
        assert!((comm.matrix()[(15, 15)] - target.matrix()[(15, 15)]).norm() > 1.0);
        assert!((x.matrix()[(0, 1)] - c(std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-16);
        assert_eq!(x.trace(), c(0.0));
    }

    #[test]
    fn hermitian_flag_is_validated() {
        let (a, _) = ladder(3).unwrap();
        assert!(FockOperator::hermitian(a.matrix().clone()).is_err());
        let (x, _) = quadratures(3).unwrap();
        assert!(FockOperator::hermitian(x.matrix().clone()).is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = DMatrix::<Complex64>::zeros(3, 3);
        m[(1, 2)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(FockOperator::new(m).unwrap_err(), Error::NonFinite("operator entries"));
    }
}
