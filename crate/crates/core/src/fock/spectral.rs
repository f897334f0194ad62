use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::check_dim;
use super::Quadrature;
use crate::error::Result;
use crate::poly::Poly;

/// Eigendecomposition of the truncated position quadrature, reused to
/// exponentiate any real function of `X` or `P` exactly (as a function of the
/// truncated matrix).
///
/// `P = R X R†` with `R = diag(iᵏ)` holds exactly in the truncated space, so
/// one decomposition serves both quadratures.
#[derive(Debug, Clone)]
pub struct QuadratureSpectrum {
    nodes: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl QuadratureSpectrum {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = DMatrix::from_fn(dim, dim, |i, j| {
            if j == i + 1 {
                (j as f64).sqrt() * s
            } else if i == j + 1 {
                (i as f64).sqrt() * s
            } else {
                0.0
            }
        });
        let eig = x.symmetric_eigen();
        Ok(Self {
            nodes: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// Eigenvalues of the truncated `X` (Gauss–Hermite nodes).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `exp(i f(Q))` for the truncated quadrature `Q`.
    pub fn exp_i(&self, q: Quadrature, f: &Poly) -> DMatrix<Complex64> {
        let n = self.dim();
        let phases: Vec<Complex64> = self
            .nodes
            .iter()
            .map(|&x| Complex64::from_polar(1.0, f.eval(x)))
            .collect();
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[k];
        }
        let mut m = scaled * v.transpose();
        if q == Quadrature::P {
            for j in 0..n {
                for i in 0..n {
                    m[(i, j)] *= i_pow(i) * i_pow(j).conj();
                }
            }
        }
        m
    }
}
