//! Phase added by each deformation: oracle against the first-order closed
//! form, and the photon-number scaling of the per-n vacuum phase.

use gup_optomech::protocol::{deformation_phases, fit_power_law, mean_field_numeric, theta_first_order};
use gup_optomech::{Deformation, DeformationKind, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let (alpha, lambda, nbar) = (3.0, 0.2, 0.0);
    let mf = |d: &Deformation| mean_field_numeric(Complex64::new(alpha, 0.0), nbar, lambda, d, 48, 32);
    let base = mf(&Deformation::NONE)?;
    println!("mean-field phase shift at α = {alpha}, λ = {lambda}, strength 1e-3");
    for kind in DeformationKind::ALL {
        let d = Deformation::new(kind, 1e-3);
        let shift = (mf(&d)? / base).arg();
        let analytic = -theta_first_order(&d, lambda, alpha * alpha, nbar).re;
        println!("  {:<6} oracle {shift:+.6e}  first order {analytic:+.6e}", kind.name());
    }

    // a = λn large enough for the highest power to dominate
    let ns: Vec<usize> = (4..=12).collect();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    println!("per-photon-number vacuum phase at λ = 2, n ∈ [4, 12]");
    for (kind, s) in [(DeformationKind::Beta, 1e-9), (DeformationKind::Gamma, 1e-7), (DeformationKind::Mu, 1e-4)] {
        let phases = deformation_phases(&Deformation::new(kind, s), 2.0, &ns, 64)?;
        let (k, _) = fit_power_law(&xs, &phases)?;
        println!("  {:<6} fitted exponent {k:.3}", kind.name());
    }
    Ok(())
}
