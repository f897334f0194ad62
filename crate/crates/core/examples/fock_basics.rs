//! Quadratures, displacements and states in a truncated Fock space.

use gup_optomech::fock::{coherent_state, displacement_xp, expect, quadratures, thermal_state, FockState};
use gup_optomech::Result;
use num_complex::Complex64;

fn main() -> Result<()> {
    let dim = 24;
    let (x, p) = quadratures(dim)?;
    let comm = x.commutator(&p)?;
    println!("[X, P] at (3, 3): {}", comm.matrix()[(3, 3)]);
    println!("[X, P] at top level: {}", comm.matrix()[(dim - 1, dim - 1)]);

    let d = displacement_xp(1.0, -0.5, dim)?;
    println!("unitarity defect of D(1, -0.5) on 16 levels: {:.2e}", d.unitarity_defect(16));

    let alpha = Complex64::new(1.5, 0.5);
    let psi = coherent_state(alpha, dim)?;
    println!("coherent |α⟩, α = {alpha}");
    println!("  ⟨X⟩ = {:.6}  (√2 Re α = {:.6})", expect(&x, &psi)?.re, 2f64.sqrt() * alpha.re);
    println!("  ⟨P⟩ = {:.6}  (√2 Im α = {:.6})", expect(&p, &psi)?.re, 2f64.sqrt() * alpha.im);

    let vac = FockState::number(0, dim)?;
    let shifted = FockState::pure(d.matrix() * vac.density_matrix().column(0))?;
    println!("  D(1, -0.5)|0⟩: ⟨X⟩ = {:.6}, ⟨P⟩ = {:.6}", expect(&x, &shifted)?.re, expect(&p, &shifted)?.re);

    let rho = thermal_state(2.0, 64)?;
    println!("thermal n̄ = 2: purity {:.6} (1/(2n̄+1) = {:.6})", rho.purity(), 1.0 / 5.0);
    Ok(())
}
