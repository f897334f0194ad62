//! Real polynomials in a single quadrature operator.
//!
//! The deformed momenta and every generator that enters the four-pulse
//! sequence are polynomials in either `X` or `P`, so they are carried around
//! symbolically and only turned into matrices at the last moment.

use std::fmt;

/// `c[0] + c[1] q + c[2] q² + …`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(Vec<f64>);

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `c q`
    pub fn linear(c: f64) -> Self {
        Poly::new(vec![0.0, c])
    }

    /// `c qᵏ`
    pub fn monomial(k: usize, c: f64) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    /// Degree of the polynomial; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * q + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(0.0);
        v.extend(self.0.iter().enumerate().map(|(k, &c)| c / (k as f64 + 1.0)));
        Poly::new(v)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    /// Coefficients of `q ↦ self(q + shift)`.
    pub fn shifted(&self, shift: f64) -> Poly {
        // Horner in polynomial arithmetic: p(q+s) = (...(c_n (q+s) + c_{n-1})(q+s) + ...)
        let base = Poly::new(vec![shift, 1.0]);
        self.0
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| acc.mul(&base).add(&Poly::constant(c)))
    }

    /// Splits `self` into constant, linear coefficient and the remainder of
    /// degree ≥ 2.
    pub fn split_affine(&self) -> (f64, f64, Poly) {
        let mut rest = self.0.clone();
        for c in rest.iter_mut().take(2) {
            *c = 0.0;
        }
        (self.coeff(0), self.coeff(1), Poly::new(rest))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·q")?,
                _ => write!(f, "{c}·q^{k}")?,
            }
        }
        Ok(())
    }
}
