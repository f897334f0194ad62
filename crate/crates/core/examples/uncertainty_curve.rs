//! Standard and modified minimum position uncertainty in Planck units.

use gup_optomech::sensitivity::{uncertainty_curve, uncertainty_minimum, MomentumRange};
use gup_optomech::Result;

fn main() -> Result<()> {
    let range = MomentumRange {
        min: 0.1,
        max: 10.0,
        points: 9,
        log: true,
    };
    for beta0 in [0.0, 1.0, 4.0] {
        let curve = uncertainty_curve(beta0, &range)?;
        let row: Vec<String> = curve.iter().map(|(_, x)| format!("{x:.3}")).collect();
        println!("β₀ = {beta0}: {}", row.join(" "));
        if let Some((u, x)) = uncertainty_minimum(beta0)? {
            println!("  minimum Δx = {x:.6} L_P at Δp = {u:.6} M_P c (√β₀ = {:.6})", beta0.sqrt());
        }
    }
    Ok(())
}
