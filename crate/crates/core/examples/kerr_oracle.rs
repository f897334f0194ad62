//! The undeformed loop imprints an exact Kerr phase on the optical mean field.
//! Compare the brute-force Fock-space result with the closed form.

use gup_optomech::protocol::{mean_field_numeric, mean_field_qm};
use gup_optomech::{Deformation, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    println!("{:>5} {:>5} {:>4} {:>24} {:>10}", "alpha", "lambda", "nbar", "numeric", "rel_err");
    for alpha in [0.5, 2.0, 4.0] {
        for lambda in [0.1, 0.5] {
            for nbar in [0.0, 2.0] {
                let num = mean_field_numeric(Complex64::new(alpha, 0.0), nbar, lambda, &Deformation::NONE, 48, 64)?;
                let qm = mean_field_qm(alpha, lambda, alpha * alpha);
                let rel = (num - qm).norm() / qm.norm();
                println!("{alpha:>5} {lambda:>5} {nbar:>4} {:>24.10} {rel:>10.2e}", num);
            }
        }
    }
    Ok(())
}
