//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (degrees 3, 5, 7, 9, 13), following Higham's 2005 selection
//! thresholds. The thresholds bound the backward error by 2⁻⁵³ in exact
//! arithmetic, well inside the 1e−12 contract.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::FockOperator;
use crate::error::{Error, Result};

const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled_identity(n: usize, c: f64) -> DMatrix<Complex64> {
    DMatrix::from_diagonal_element(n, n, Complex64::new(c, 0.0))
}

fn re(c: f64) -> Complex64 {
    Complex64::new(c, 0.0)
}

/// U and V of the low-degree approximants: `U = A Σ b_{2k+1} A^{2k}`,
/// `V = Σ b_{2k} A^{2k}`.
fn pade_low(a: &DMatrix<Complex64>, b: &[f64]) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut powers = vec![scaled_identity(n, 1.0), a2.clone()];
    while 2 * powers.len() < b.len() {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = DMatrix::zeros(n, n);
    let mut v = DMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k + 1 < b.len() {
            u += p * re(b[2 * k + 1]);
        }
        v += p * re(b[2 * k]);
    }
    (a * u, v)
}

fn pade13(a: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let b = &B13;
    let ident = scaled_identity(n, 1.0);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]);
    let u = a * (&a6 * inner_u
        + &a6 * re(b[7])
        + &a4 * re(b[5])
        + &a2 * re(b[3])
        + &ident * re(b[1]));
    let inner_v = &a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]);
    let v = &a6 * inner_v + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + &ident * re(b[0]);
    (u, v)
}

/// `exp(A)` for a dense complex matrix.
pub(crate) fn expm(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let norm = one_norm(a);
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(a, b);
            return solve_pade(u, v, n);
        }
    }
    let theta13 = THETA[4].1;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * re(0.5f64.powi(s));
    let (u, v) = pade13(&scaled);
    let mut r = solve_pade(u, v, n)?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential result"));
    }
    Ok(r)
}

fn solve_pade(
    u: DMatrix<Complex64>,
    v: DMatrix<Complex64>,
    n: usize,
) -> Result<DMatrix<Complex64>> {
    let p = &v + &u;
    let q = v - u;
    let lu = q.lu();
    let mut rhs = p;
    if !lu.solve_mut(&mut rhs) {
        return Err(Error::NonFinite("Padé denominator (singular)"));
    }
    debug_assert_eq!(rhs.nrows(), n);
    Ok(rhs)
}

/// Exponential of a Fock-space operator.
pub fn matrix_exp(m: &FockOperator) -> Result<FockOperator> {
    let e = expm(m.matrix())?;
    Ok(FockOperator::from_parts(e, false))
}
