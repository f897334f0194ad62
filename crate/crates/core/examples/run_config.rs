//! Builds a run configuration in code and executes CLI subcommands on it.

use gup_optomech::cli::{execute, Command, DeformationConfig, RunConfig, SweepConfig, SweepParameter};
use gup_optomech::sensitivity::first_parameter_set;
use gup_optomech::DeformationKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig {
        deformation: DeformationConfig {
            model: DeformationKind::Beta,
            strength: 1.0,
        },
        physical: Some(first_parameter_set()),
        sweep: Some(SweepConfig {
            parameter: SweepParameter::NP,
            grid: vec![1e7, 1e8, 1e9],
        }),
        ..Default::default()
    };
    println!("{}", config.to_toml()?);
    print!("{}", execute(Command::Theta, &config, 0)?.to_csv());
    print!("{}", execute(Command::Sweep, &config, 0)?.to_csv());
    Ok(())
}
