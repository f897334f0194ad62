//! Signal reductions from unequal kicks, thermal motion, the mechanical
//! bath and cavity filtering.

use gup_optomech::noise::{
    bath_gaussian_factor, bath_monte_carlo, decoherence_factor, eta_reduction, intracavity_zeta,
    thermal_attenuation, xi_eta_check, PulseShape,
};
use gup_optomech::{DeformationKind, Result};

fn main() -> Result<()> {
    for kind in DeformationKind::ALL {
        println!("η = 0.9, {:<6}: Θ reduced by {:.3}", kind.name(), eta_reduction(kind, 0.9)?);
    }
    println!("thermal attenuation (n̄ = 30, λ = 1, η = 0.9): {:.6}", thermal_attenuation(30.0, 1.0, 0.9)?);

    let w = 2.0 * std::f64::consts::PI * 1e5;
    let first = decoherence_factor(1.0, 0.1, w, 1e6)?;
    let exact = bath_gaussian_factor(1.0, 0.1, w, 1e6);
    let mc = bath_monte_carlo(1.0, 0.1, w, 1e6, 10_000, 1)?;
    println!("bath at T = 0.1 K, Q = 1e6: first order {first:.5}, Gaussian {exact:.5}");
    println!("  Monte Carlo {:.5} ± {:.5}", mc.mean.re, mc.std_error);

    let kappa = 1e8;
    for tau in [1e-8, 1e-7, 1e-6] {
        let sq = intracavity_zeta(&PulseShape::square(tau)?, kappa)?;
        let ga = intracavity_zeta(&PulseShape::gaussian(tau)?, kappa)?;
        println!("κτ = {:>5}: ζ square {sq:.5}, gaussian {ga:.5}", kappa * tau);
    }

    let f = xi_eta_check(0.1, 0.9, 12, 48)?;
    println!(
        "η-loop factorization residual: as printed {:.2e}, with opposite residual sign {:.2e}",
        f.residual_as_printed, f.residual_sign_corrected
    );
    Ok(())
}
