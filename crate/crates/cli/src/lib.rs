//! Command-line front end for the `pdem` toolkit.
//!
//! Units follow ħ² = 2: masses are in units of a reference mass and energies
//! are dimensionless. `PDEM_SEED` is reserved and ignored, since every
//! algorithm is deterministic.

pub mod commands;
pub mod config;
pub mod format;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::config::{Defaults, RunConfig, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "pdem",
    version,
    about = "Position-dependent effective mass toolkit (units: ħ² = 2)"
)]
pub struct Cli {
    /// TOML file of `key = value` settings; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isospectral ordering solutions with their constraint residuals
    Orderings {
        /// Residual report for one ordering (name or `alpha,beta,gamma`)
        #[arg(long, allow_hyphen_values = true)]
        check: Option<String>,
        /// List named orderings and profiles instead
        #[arg(long, conflicts_with = "check")]
        list: bool,
        #[command(flatten)]
        settings: Settings,
    },
    /// CSV of reflection and transmission at an abrupt mass step
    Transmission {
        #[command(flatten)]
        settings: Settings,
    },
    /// Compare PDEM levels with the bare mapped potential
    Isospectral {
        #[command(flatten)]
        settings: Settings,
    },
    /// CSV of the mass derivatives and the ordering term on a grid
    EffectivePotential {
        #[command(flatten)]
        settings: Settings,
    },
}

/// Exit status of a successful run: isospectral FAIL is not an error but
/// is reported as a distinct status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    CheckFailed,
}

fn layered(flags: Settings, config: Option<&PathBuf>, defaults: Defaults) -> Result<RunConfig> {
    let file = match config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    RunConfig::resolve(flags.over(file), defaults)
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let config = cli.config.as_ref();
    match cli.command {
        Command::Orderings { check, list, settings } => {
            let cfg = layered(settings, config, Defaults::OTHER)?;
            let text = if list {
                commands::catalog()
            } else {
                commands::cmd_orderings(cfg.mode, check.as_deref())?
            };
            commands::emit(cfg.out.as_deref(), &text)?;
        }
        Command::Transmission { settings } => {
            let cfg = layered(settings, config, Defaults::OTHER)?;
            commands::emit(cfg.out.as_deref(), &commands::cmd_transmission(&cfg)?)?;
        }
        Command::Isospectral { settings } => {
            let cfg = layered(settings, config, Defaults::ISOSPECTRAL)?;
            let outcome = commands::cmd_isospectral(&cfg)?;
            commands::emit(cfg.out.as_deref(), &outcome.text)?;
            if !outcome.pass {
                return Ok(Outcome::CheckFailed);
            }
        }
        Command::EffectivePotential { settings } => {
            let cfg = layered(settings, config, Defaults::EFFECTIVE_POTENTIAL)?;
            commands::emit(cfg.out.as_deref(), &commands::cmd_effective_potential(&cfg)?)?;
        }
    }
    Ok(Outcome::Done)
}
