//! Physical constants.
//!
//! | symbol | value | unit | note |
//! |--------|-------|------|------|
//! | ħ | 1.054 571 817 × 10⁻³⁴ | J s | CODATA 2018, exact by SI definition of h |
//! | c | 299 792 458 | m s⁻¹ | exact |
//! | k_B | 1.380 649 × 10⁻²³ | J K⁻¹ | exact |
//! | M_P | 2.2 × 10⁻⁸ | kg | Planck mass, rounded (≃ 22 μg) |
//! | L_P | 1.6 × 10⁻³⁵ | m | Planck length, rounded |
//!
//! The rounded Planck values are the ones the sensitivity figures are quoted
//! with; they satisfy ħ = M_P c L_P only to about 0.1 %, so anything that
//! needs exact Planck units (the uncertainty curve) works in natural units
//! instead of combining these two numbers.

use serde::{Deserialize, Serialize};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const K_B: f64 = 1.380_649e-23;
pub const PLANCK_MASS: f64 = 2.2e-8;
pub const PLANCK_LENGTH: f64 = 1.6e-35;

/// Constant set threaded through the physical-unit computations.
///
/// Only [`Constants::SI`] is used in normal operation; other values can only
/// be reached through the command line's `--unsafe-constants` switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub planck_mass: f64,
    pub planck_length: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        hbar: HBAR,
        c: C,
        k_b: K_B,
        planck_mass: PLANCK_MASS,
        planck_length: PLANCK_LENGTH,
    };
}

impl Default for Constants {
    fn default() -> Self {
        Self::SI
    }
}
