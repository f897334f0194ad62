//! Mechanical bath acting during the loop, as classical white noise.
//!
//! A Markovian bath kicks the momentum by `B(t)` with
//! `⟨B(t)B(t′)⟩ = γ_m coth(ħω_m/2k_BT) δ(t − t′)`, `γ_m = ω_m/Q`. Over the
//! loop this adds `e^{iλn_L S}` to the unitary, with
//! `S = B₁ + B₂ + B₃ = ∫ w(t) B(t) dt` and
//! `w = cos(ω_m t)·1[0, π/2ω_m] + sin(ω_m t)·1[0, π/ω_m] − cos(ω_m t)·1[0, 3π/2ω_m]`.
//! The optical mean field picks up `E[e^{iλS}]`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::constants::Constants;
use crate::error::{Error, Result};

use std::f64::consts::PI;

/// Time steps per mechanical period.
pub const STEPS_PER_PERIOD: usize = 200;
/// Samples drawn from one random substream.
const BLOCK: usize = 1024;

/// Monte Carlo estimate of the bath factor on `⟨a_L⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: Complex64,
    /// Standard error of `mean` (root of the summed component variances).
    pub std_error: f64,
    pub samples: usize,
}

/// Noise strength `γ_m coth(ħω_m/2k_BT)` in s⁻¹.
pub fn bath_diffusion(t_k: f64, omega_m: f64, q: f64, k: &Constants) -> f64 {
    let gamma = omega_m / q;
    if t_k == 0.0 {
        return gamma;
    }
    let x = k.hbar * omega_m / (2.0 * k.k_b * t_k);
    gamma / x.tanh()
}

fn weight(omega_m: f64, t: f64) -> f64 {
    let quarter = PI / (2.0 * omega_m);
    let mut w = 0.0;
    let (s, c) = (omega_m * t).sin_cos();
    if t <= quarter {
        w += c;
    }
    if t <= 2.0 * quarter {
        w += s;
    }
    if t <= 3.0 * quarter {
        w -= c;
    }
    w
}

/// `∫ w(t)² dt = (π + 1)/ω_m`.
pub fn bath_weight_norm(omega_m: f64) -> f64 {
    (PI + 1.0) / omega_m
}

/// `E[e^{iλS}] = exp(−λ² D ∫w²/2)` for Gaussian `S`, the exact value of what
/// [`bath_monte_carlo`] samples.
pub fn bath_gaussian_factor(lambda: f64, t_k: f64, omega_m: f64, q: f64) -> f64 {
    let d = bath_diffusion(t_k, omega_m, q, &Constants::SI);
    (-0.5 * lambda * lambda * d * bath_weight_norm(omega_m)).exp()
}

fn check_inputs(lambda: f64, t_k: f64, omega_m: f64, q: f64) -> Result<()> {
    for (name, v, strict) in [("lambda", lambda, false), ("t_k", t_k, false), ("omega_m", omega_m, true), ("q", q, true)] {
        let ok = v.is_finite() || (name == "q" && v == f64::INFINITY);
        if !ok || v < 0.0 || (strict && v == 0.0) {
            return Err(Error::param("bath", format!("{name} = {v} is not admissible")));
        }
    }
    Ok(())
}

/// Samples `S` on a grid of `period/200` and averages `e^{iλS}`.
///
/// Each block of 1024 samples draws from its own ChaCha8 stream derived from
/// `seed`, and block sums are reduced in order, so the result does not depend
/// on the number of worker threads.
pub fn bath_monte_carlo(
    lambda: f64,
    t_k: f64,
    omega_m: f64,
    q: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_inputs(lambda, t_k, omega_m, q)?;
    if samples < 1000 {
        return Err(Error::param("samples", format!("must be ≥ 1000, got {samples}")));
    }
    let d = bath_diffusion(t_k, omega_m, q, &Constants::SI);
    if d == 0.0 {
        return Ok(MonteCarloEstimate {
            mean: Complex64::new(1.0, 0.0),
            std_error: 0.0,
            samples,
        });
    }
    let period = 2.0 * PI / omega_m;
    let dt = period / STEPS_PER_PERIOD as f64;
    let steps = 3 * STEPS_PER_PERIOD / 4;
    // per-step impulse ∫B dt has variance D·Δt
    let weights: Vec<f64> = (0..steps)
        .map(|k| weight(omega_m, (k as f64 + 0.5) * dt))
        .collect();
    let normal = Normal::new(0.0, (d * dt).sqrt()).map_err(|e| Error::param("bath", e.to_string()))?;

    let blocks = samples.div_ceil(BLOCK);
    let sums: Vec<(Complex64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let s: f64 = weights.iter().map(|w| w * normal.sample(&mut rng)).sum();
                let z = Complex64::from_polar(1.0, lambda * s);
                sum += z;
                sum_sq += z.norm_sqr();
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = sums
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean.norm_sqr()).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: f64 = 2.0 * PI * 1e5;

    #[test]
    fn weight_norm_matches_grid() {
        let dt = 2.0 * PI / W / STEPS_PER_PERIOD as f64;
        let s: f64 = (0..150).map(|k| weight(W, (k as f64 + 0.5) * dt).powi(2) * dt).sum();
        assert!((s / bath_weight_norm(W) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn infinite_q_is_exactly_one() {
        let e = bath_monte_carlo(1.0, 0.1, W, f64::INFINITY, 1000, 3).unwrap();
        assert_eq!(e.mean, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let a = bath_monte_carlo(1.0, 0.1, W, 1e6, 3000, 42).unwrap();
        let b = bath_monte_carlo(1.0, 0.1, W, 1e6, 3000, 42).unwrap();
        assert_eq!(a.mean.re.to_bits(), b.mean.re.to_bits());
        assert_eq!(a.mean.im.to_bits(), b.mean.im.to_bits());
        let c = bath_monte_carlo(1.0, 0.1, W, 1e6, 3000, 43).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn agrees_with_gaussian_characteristic_function() {
        let e = bath_monte_carlo(1.0, 0.1, W, 1e6, 10_000, 7).unwrap();
        let exact = bath_gaussian_factor(1.0, 0.1, W, 1e6);
        assert!((e.mean.re - exact).abs() < 4.0 * e.std_error, "{} vs {exact}", e.mean);
        assert!(e.mean.im.abs() < 4.0 * e.std_error);
    }

    #[test]
    fn standard_error_scales_as_inverse_root() {
        let errs: Vec<f64> = [1000, 4000, 16_000]
            .iter()
            .map(|&n| bath_monte_carlo(1.0, 0.1, W, 1e6, n, 11).unwrap().std_error)
            .collect();
        for w in errs.windows(2) {
            let r = w[0] / w[1];
            assert!((r - 2.0).abs() < 0.2, "ratio {r}");
        }
    }

    #[test]
    fn too_few_samples() {
        assert!(bath_monte_carlo(1.0, 0.1, W, 1e6, 999, 0).is_err());
    }
}
