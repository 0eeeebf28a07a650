use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use viral_nsfd::config::{apply_overrides, parse_config, RunConfig};
use viral_nsfd::run::{
    equilibria_report, r0_report, run_compare_diffusion, run_compare_sfd, run_sensitivity, run_simulate,
};
use viral_nsfd::{ConfigError, Error};

/// Diffusive within-host infection model: NSFD simulation, R0,
/// steady states and PRCC sensitivity.
#[derive(Debug, Parser)]
#[command(name = "viral-nsfd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Source {
    /// Configuration file (key = value lines).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset: scenario-a or scenario-b.
    #[arg(long)]
    preset: Option<String>,
    /// Override one key, e.g. --set dt=0.5 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (defaults to output_dir from the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the solver and write trajectory, Lyapunov series, summary and plots.
    Simulate(Source),
    /// Print the basic reproduction number and its two components.
    R0(Source),
    /// Print the disease-free and endemic steady states.
    Equilibria(Source),
    /// PRCC sensitivity of R0; writes tornado.csv and tornado.svg.
    Sensitivity(Source),
    /// Compare final states under two diffusion coefficients.
    CompareDiffusion {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1.0)]
        d_low: f64,
        #[arg(long, default_value_t = 100.0)]
        d_high: f64,
    },
    /// Compare the NSFD scheme with the explicit standard scheme.
    CompareSfd(Source),
}

impl Source {
    fn load(&self) -> Result<(RunConfig, PathBuf), Error> {
        let text = match (&self.config, &self.preset) {
            (Some(path), _) => fs::read_to_string(path)?,
            (None, Some(name)) => format!("preset = {name}\n"),
            (None, None) => {
                return Err(ConfigError::Validation {
                    key: "config".into(),
                    message: "pass --config FILE or --preset NAME".into(),
                }
                .into())
            }
        };
        let config = parse_config(&apply_overrides(&text, &self.overrides)?)?;
        let out = self.out.clone().unwrap_or_else(|| config.output_dir.clone());
        Ok((config, out))
    }
}

fn execute(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Simulate(src) => {
            let (config, out) = src.load()?;
            let outcome = run_simulate(&config, &out)?;
            print!("{}", outcome.summary.render());
            println!("wrote {} files to {}", outcome.files.len(), out.display());
            Ok(outcome.exit_code)
        }
        Command::R0(src) => {
            print!("{}", r0_report(&src.load()?.0)?);
            Ok(0)
        }
        Command::Equilibria(src) => {
            print!("{}", equilibria_report(&src.load()?.0)?);
            Ok(0)
        }
        Command::Sensitivity(src) => {
            let (config, out) = src.load()?;
            let outcome = run_sensitivity(&config, &out)?;
            for row in &outcome.study.tornado {
                println!(
                    "{:<6} {:+.4}{}",
                    row.parameter,
                    row.prcc,
                    if row.significant { "  *" } else { "" }
                );
            }
            println!("wrote tornado.csv and tornado.svg to {}", out.display());
            Ok(0)
        }
        Command::CompareDiffusion { source, d_low, d_high } => {
            let (config, out) = source.load()?;
            print!("{}", run_compare_diffusion(&config, d_low, d_high, &out)?.render());
            Ok(0)
        }
        Command::CompareSfd(src) => {
            let (config, out) = src.load()?;
            print!("{}", run_compare_sfd(&config, &out)?.render());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
