//! Command-line front end for the `descm` solver.
//!
//! Settings come from an optional TOML file (see [`config`]) overlaid by
//! command-line flags. Each flag sets exactly one config key.

pub mod args;
pub mod config;
pub mod run;

pub use args::{Cli, Cmd, Flags};
pub use config::{parse_config, ConfigError, ConfigFile, GridInput, MapSection, PotentialInput};
pub use run::{run, Command, RunManifest};
