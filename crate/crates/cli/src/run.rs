use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use descm::{count_convergent, format_significant, run_study, tau_sweep, write_csv, StudyConfig64};

use crate::config::{with_line, ConfigFile, GridInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Study,
    TauSweep,
    Count,
}

/// A fully parsed invocation: the command, an optional config file and the
/// flag overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    pub overrides: ConfigFile,
}

const DEFAULT_K: usize = 5;

/// Counting compares the last two refinements; these are used when no grid is given.
pub const COUNT_GRID: [usize; 2] = [99, 100];

impl RunManifest {
    /// Loads the config file, applies overrides and validates everything.
    pub fn resolve(&self) -> anyhow::Result<(ConfigFile, StudyConfig64)> {
        let (file, text) = match &self.config_path {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let file = ConfigFile::parse(&text).with_context(|| format!("in {}", path.display()))?;
                (file, text)
            }
            None => (ConfigFile::default(), String::new()),
        };
        let mut merged = file.merged(self.overrides.clone());
        if merged.n.is_none() && matches!(self.command, Command::Count | Command::TauSweep) {
            merged.n = Some(GridInput::List(COUNT_GRID.to_vec()));
        }
        let cfg = merged.study_config().map_err(|e| {
            // a key set on the command line has no line in the file
            let from_file = self.config_path.is_some() && self.overrides_key_unset(&e);
            let e = if from_file { with_line(e, &text) } else { e };
            anyhow::Error::new(e)
        })?;
        Ok((merged, cfg))
    }

    fn overrides_key_unset(&self, e: &crate::ConfigError) -> bool {
        let crate::ConfigError::Invalid { key, .. } = e else { return false };
        let o = &self.overrides;
        let set = match key.as_str() {
            "potential" => o.potential.is_some(),
            "reference" => o.reference.is_some(),
            "map.kind" | "map.params" => o.map.is_some(),
            "tau" => o.tau.is_some(),
            "taus" => o.taus.is_some(),
            "n" => o.n.is_some(),
            "rate_mode" => o.rate_mode.is_some(),
            "gamma" => o.gamma.is_some(),
            "big_b" => o.big_b.is_some(),
            "threshold" => o.threshold.is_some(),
            "max_condition" => o.max_condition.is_some(),
            _ => false,
        };
        !set
    }
}

fn out_dir(file: &ConfigFile) -> anyhow::Result<PathBuf> {
    let dir = file.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating output directory {}", dir.display()))?;
    if !dir.is_dir() {
        bail!("{} is not a directory", dir.display());
    }
    Ok(dir)
}

fn num(x: f64) -> String {
    format_significant(x, 15)
}

/// Executes the manifest, printing a summary to `stdout`.
pub fn run<W: Write>(manifest: &RunManifest, stdout: &mut W) -> anyhow::Result<()> {
    let (file, cfg) = manifest.resolve()?;
    match manifest.command {
        Command::Solve => {
            let n = *cfg.n_grid.last().expect("validated grid is non-empty");
            let k = file.k.unwrap_or(DEFAULT_K);
            let r = cfg.solve_at(n)?;
            writeln!(stdout, "# N = {n}, tau = {}, h = {}, condition = {}", num(cfg.tau), num(r.step), num(r.condition_number))?;
            for (i, e) in r.unscaled_eigenvalues().iter().take(k).enumerate() {
                writeln!(stdout, "{i}\t{}", num(*e))?;
            }
        }
        Command::Study => {
            let dir = out_dir(&file)?;
            let records = run_study(&cfg)?;
            let path = dir.join("study.csv");
            write_csv(&records, &path)?;
            let count = count_convergent(&records, cfg.threshold)?;
            writeln!(stdout, "wrote {}", path.display())?;
            writeln!(stdout, "convergent eigenvalues: {count}")?;
            for r in records.iter().filter(|r| r.failed()) {
                writeln!(stdout, "N = {} failed: {}", r.n, r.failure.as_deref().unwrap_or_default())?;
            }
        }
        Command::TauSweep => {
            let Some(taus) = file.taus.clone() else {
                bail!("tau-sweep needs scaling factors (`taus` key or --taus)");
            };
            let dir = out_dir(&file)?;
            let counts = tau_sweep(&cfg, &taus)?;
            let path = dir.join("tau_sweep.csv");
            let mut text = String::from("tau,count,last_solved\n");
            for c in &counts {
                let last = c.last_solved.map(|n| n.to_string()).unwrap_or_default();
                text.push_str(&format!("{},{},{last}\n", num(c.tau), c.count));
                writeln!(stdout, "tau = {}: {} convergent", num(c.tau), c.count)?;
            }
            write_file(&path, &text)?;
            writeln!(stdout, "wrote {}", path.display())?;
        }
        Command::Count => {
            let records = run_study(&cfg)?;
            writeln!(stdout, "{}", count_convergent(&records, cfg.threshold)?)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
