//! Loop with kicks deformed through harmonic evolution of the deformed
//! momentum: fitted a⁴ coefficient against the printed closed form.

use gup_optomech::protocol::{fit_power_law, xi_harmonic_variant, HARMONIC_PHASE_COEFF};
use gup_optomech::Result;

/// Least-squares `y = c₄a⁴ + c₂a²`.
fn fit_quartic_quadratic(a: &[f64], y: &[f64]) -> (f64, f64) {
    let (mut s88, mut s66, mut s44, mut y4, mut y2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&a, &y) in a.iter().zip(y) {
        let (a2, a4) = (a * a, a.powi(4));
        s88 += a4 * a4;
        s66 += a4 * a2;
        s44 += a2 * a2;
        y4 += y * a4;
        y2 += y * a2;
    }
    let det = s88 * s44 - s66 * s66;
    ((y4 * s44 - y2 * s66) / det, (s88 * y2 - s66 * y4) / det)
}

fn main() -> Result<()> {
    let (lambda, opt_dim, mech_dim) = (2.0, 13, 40);
    let base = xi_harmonic_variant(lambda, 0.0, opt_dim, mech_dim)?.family.vacuum_amplitudes()?;
    let ns: Vec<f64> = (4..=12).map(|n| n as f64).collect();
    let a: Vec<f64> = ns.iter().map(|n| lambda * n).collect();
    for beta in [1e-9, 2e-9] {
        let amps = xi_harmonic_variant(lambda, beta, opt_dim, mech_dim)?.family.vacuum_amplitudes()?;
        let phases: Vec<f64> = (4..=12).map(|n| (amps[n] / base[n]).arg()).collect();
        let (k, _) = fit_power_law(&ns, &phases)?;
        let scaled: Vec<f64> = phases.iter().map(|p| p / beta).collect();
        let (c4, c2) = fit_quartic_quadratic(&a, &scaled);
        println!("β = {beta:e}: exponent {k:.3}, a⁴ coefficient {c4:+.4}, a² coefficient {c2:+.4}");
    }
    println!("printed a⁴ coefficient {HARMONIC_PHASE_COEFF:+.4}");
    Ok(())
}
