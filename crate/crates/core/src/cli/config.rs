//! Run configuration, read from TOML.
//!
//! ```toml
//! [deformation]
//! model = "beta"        # none | beta | gamma | mu
//! strength = 1.0        # bare β₀, γ₀ or μ₀
//!
//! [physical]
//! m_kg = 1e-11
//! omega_m_rad_s = 628318.5307179586
//! finesse = 1e5
//! lambda_l_m = 1.064e-6
//! n_p = 1e8
//! n_r = 1.0
//! nbar = 10.0
//! eta = 1.0
//! t_k = 0.05
//! q = 1e7
//!
//! [output]
//! format = "csv"
//! ```

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::deformations::{DeformationKind, DeformationModel, PhysicalInputs, PhysicalParams};
use crate::noise::PulseKind;
use crate::protocol::OracleMode;
use crate::sensitivity::MomentumRange;

use super::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub deformation: DeformationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalInputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure1: Option<Figure1Config>,
    /// Only honoured with `--unsafe-constants`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationConfig {
    pub model: DeformationKind,
    #[serde(default = "one")]
    pub strength: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for DeformationConfig {
    fn default() -> Self {
        Self {
            model: DeformationKind::None,
            strength: 1.0,
        }
    }
}

impl DeformationConfig {
    pub fn model(&self) -> Result<DeformationModel, CliError> {
        Ok(DeformationModel::new(self.model, self.strength)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Cavity filtering factor; computed from the pulse when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseConfig>,
    /// Bath Monte Carlo sample count; 0 skips the estimate.
    #[serde(default)]
    pub monte_carlo_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub kind: PulseKind,
    /// Duration for analytic shapes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_s: Option<f64>,
    /// Two-column table for `kind = "tabulated"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_path: Option<String>,
    pub kappa_per_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub alpha: f64,
    #[serde(default)]
    pub nbar: f64,
    pub lambda: f64,
    pub opt_dim: usize,
    pub mech_dim: usize,
    /// Dimensionless strength for the oracle; the bare strength of a real
    /// oscillator is far too small to show up in Fock space.
    #[serde(default = "default_oracle_strength")]
    pub strength: f64,
    #[serde(default)]
    pub mode: OracleMode,
    /// Pass threshold; 1e-6 undeformed, 0.02 deformed when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn default_oracle_strength() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    MKg,
    Finesse,
    NP,
    NR,
    LambdaLM,
    OmegaMRadS,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::MKg => "m_kg",
            SweepParameter::Finesse => "finesse",
            SweepParameter::NP => "n_p",
            SweepParameter::NR => "n_r",
            SweepParameter::LambdaLM => "lambda_l_m",
            SweepParameter::OmegaMRadS => "omega_m_rad_s",
        }
    }

    pub fn set(self, i: &mut PhysicalInputs, v: f64) {
        match self {
            SweepParameter::MKg => i.m_kg = v,
            SweepParameter::Finesse => i.finesse = v,
            SweepParameter::NP => i.n_p = v,
            SweepParameter::NR => i.n_r = v,
            SweepParameter::LambdaLM => i.lambda_l_m = v,
            SweepParameter::OmegaMRadS => i.omega_m_rad_s = v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Figure1Config {
    pub beta0: Vec<f64>,
    pub range: MomentumRange,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Self {
            beta0: vec![0.0, 1.0],
            range: MomentumRange {
                min: 0.05,
                max: 20.0,
                points: 200,
                log: true,
            },
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Rejects a `[constants]` section unless explicitly allowed.
    pub fn check_constants(&self, unsafe_constants: bool) -> Result<(), CliError> {
        if self.constants.is_some() && !unsafe_constants {
            return Err(CliError::Config(
                "[constants] may only be overridden with --unsafe-constants".into(),
            ));
        }
        Ok(())
    }

    pub fn constants(&self) -> Constants {
        self.constants.unwrap_or(Constants::SI)
    }

    pub fn physical(&self) -> Result<PhysicalParams, CliError> {
        let inputs = self
            .physical
            .ok_or_else(|| CliError::Config("missing [physical] section".into()))?;
        Ok(PhysicalParams::new(inputs, self.constants())?)
    }

    /// Validates every present section against the module preconditions.
    pub fn validate(&self) -> Result<(), CliError> {
        self.deformation.model()?;
        if self.physical.is_some() {
            self.physical()?;
        }
        if let Some(o) = &self.oracle {
            if !(o.alpha >= 0.0) || !(o.nbar >= 0.0) || !(o.lambda >= 0.0) || !(o.strength >= 0.0) {
                return Err(CliError::Config("[oracle] alpha, nbar, lambda and strength must be ≥ 0".into()));
            }
            if o.opt_dim < 2 || o.mech_dim < 2 {
                return Err(CliError::Config("[oracle] opt_dim and mech_dim must be ≥ 2".into()));
            }
        }
        if let Some(n) = &self.noise {
            if let Some(z) = n.zeta {
                if !(z > 0.0 && z <= 1.0) {
                    return Err(CliError::Config(format!("[noise] zeta = {z} must lie in (0, 1]")));
                }
            }
            if n.monte_carlo_samples != 0 && n.monte_carlo_samples < 1000 {
                return Err(CliError::Config("[noise] monte_carlo_samples must be 0 or ≥ 1000".into()));
            }
            if let Some(p) = &n.pulse {
                let ok = match p.kind {
                    PulseKind::Tabulated => p.table_path.is_some(),
                    _ => p.tau_s.is_some(),
                };
                if !ok {
                    return Err(CliError::Config(
                        "[noise.pulse] needs tau_s, or table_path for tabulated pulses".into(),
                    ));
                }
            }
        }
        if let Some(s) = &self.sweep {
            if s.grid.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(CliError::Config("[sweep] grid values must be finite and > 0".into()));
            }
        }
        if let Some(f) = &self.figure1 {
            f.range.samples()?;
            if f.beta0.iter().any(|b| !(*b >= 0.0)) {
                return Err(CliError::Config("[figure1] beta0 values must be ≥ 0".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensitivity::table2_columns;

    fn full() -> RunConfig {
        RunConfig {
            deformation: DeformationConfig {
                model: DeformationKind::Beta,
                strength: 2.5,
            },
            physical: Some(table2_columns()[2].inputs),
            noise: Some(NoiseConfig {
                zeta: None,
                pulse: Some(PulseConfig {
                    kind: PulseKind::Gaussian,
                    tau_s: Some(1e-7),
                    table_path: None,
                    kappa_per_s: 1e9,
                }),
                monte_carlo_samples: 4000,
            }),
            oracle: Some(OracleConfig {
                alpha: 2.0,
                nbar: 0.5,
                lambda: 0.3,
                opt_dim: 40,
                mech_dim: 40,
                strength: 1e-3,
                mode: OracleMode::Lab,
                tolerance: Some(1e-7),
            }),
            output: OutputConfig {
                format: Format::Json,
                path: Some("out.json".into()),
            },
            sweep: Some(SweepConfig {
                parameter: SweepParameter::NP,
                grid: vec![1e8, 1e9],
            }),
            figure1: Some(Figure1Config::default()),
            constants: None,
        }
    }

    #[test]
    fn round_trip() {
        let c = full();
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
        let empty = RunConfig::default();
        assert_eq!(RunConfig::parse(&empty.to_toml().unwrap()).unwrap(), empty);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("[deformation]\nmodel = \"beta\"\nstrenght = 1.0\n").is_err());
        assert!(RunConfig::parse("[bogus]\nx = 1\n").is_err());
    }

    #[test]
    fn constants_need_escape_hatch() {
        let mut c = full();
        c.constants = Some(Constants::SI);
        assert!(c.check_constants(false).is_err());
        assert!(c.check_constants(true).is_ok());
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut c = full();
        c.physical.as_mut().unwrap().eta = 1.5;
        assert!(c.validate().is_err());
        let mut c = full();
        c.noise.as_mut().unwrap().monte_carlo_samples = 10;
        assert!(c.validate().is_err());
        assert!(full().validate().is_ok());
    }
}
