use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_coeffs, parse_reals, ConfigError, ConfigFile, GridInput, MapSection, PotentialInput};
use crate::run::{Command, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "descm", version, about = "Sinc collocation eigenvalues for radial anharmonic potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Print the lowest eigenvalues at a single N.
    Solve(Flags),
    /// Run a convergence study over an N grid and write a CSV.
    Study(Flags),
    /// Count convergent eigenvalues for several scaling factors.
    TauSweep(Flags),
    /// Count convergent eigenvalues at the final grid point.
    Count(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML config file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in potential name (V1..V6).
    #[arg(long, conflicts_with = "coeffs")]
    pub potential: Option<String>,
    /// Explicit coefficients as power:value pairs, e.g. -2:2,2:1.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Built-in whose exact ground state applies to explicit coefficients.
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, value_parser = ["simple", "general"])]
    pub map: Option<String>,
    /// Generalized map parameters a,b,c,d.
    #[arg(long)]
    pub map_params: Option<String>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Comma-separated scaling factors for tau-sweep.
    #[arg(long)]
    pub taus: Option<String>,
    /// Grid as start:stop:step, start:stop or a single N.
    #[arg(long)]
    pub n: Option<String>,
    /// tuned, linear or carried.
    #[arg(long)]
    pub rate_mode: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub big_b: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Fail a grid point whose condition number exceeds this.
    #[arg(long)]
    pub max_condition: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of eigenvalues to print.
    #[arg(short = 'k', long)]
    pub k: Option<usize>,
}

impl Flags {
    pub fn overrides(&self) -> Result<ConfigFile, ConfigError> {
        let potential = match (&self.potential, &self.coeffs) {
            (Some(name), _) => Some(PotentialInput::Builtin(name.clone())),
            (None, Some(c)) => Some(PotentialInput::Pairs(parse_coeffs(c)?)),
            (None, None) => None,
        };
        let params = match &self.map_params {
            None => None,
            Some(s) => {
                let v = parse_reals("map.params", s)?;
                let arr: [f64; 4] = v.try_into().map_err(|v: Vec<f64>| ConfigError::Invalid {
                    key: "map.params".into(),
                    line: None,
                    message: format!("expected 4 values, got {}", v.len()),
                })?;
                Some(arr)
            }
        };
        let map = (self.map.is_some() || params.is_some()).then(|| MapSection { kind: self.map.clone(), params });
        Ok(ConfigFile {
            potential,
            reference: self.reference.clone(),
            exact_eigenvalues: None,
            map,
            tau: self.tau,
            taus: self.taus.as_deref().map(|s| parse_reals("taus", s)).transpose()?,
            n: self.n.clone().map(GridInput::Range),
            rate_mode: self.rate_mode.clone(),
            gamma: self.gamma,
            big_b: self.big_b,
            threshold: self.threshold,
            max_condition: self.max_condition,
            k: self.k,
            out: self.out.clone(),
        })
    }
}

impl Cli {
    pub fn manifest(&self) -> Result<RunManifest, ConfigError> {
        let (command, flags) = match &self.command {
            Cmd::Solve(f) => (Command::Solve, f),
            Cmd::Study(f) => (Command::Study, f),
            Cmd::TauSweep(f) => (Command::TauSweep, f),
            Cmd::Count(f) => (Command::Count, f),
        };
        Ok(RunManifest { command, config_path: flags.config.clone(), overrides: flags.overrides()? })
    }
}
