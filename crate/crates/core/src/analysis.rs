//! Convergence studies over the half-width `N`, error metrics and CSV output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::{decay_profile, ConformalMap, DecayProfile, RateMode};
use crate::potential::{BuiltinPotential, Potential, ScaledPotential};
use crate::scalar::Real;
use crate::solver::{assemble, solve, SolveOptions, SpectrumResult};

pub const DEFAULT_THRESHOLD: f64 = 5e-12;

/// `|exact − approx| / |exact|`.
pub fn relative_error<T: Real>(exact: T, approx: T) -> Result<T> {
    if exact == T::zero() {
        return Err(Error::UndefinedMetric);
    }
    Ok((exact - approx).abs() / exact.abs())
}

/// `|next − prev| / |next|`, the change between consecutive refinements.
pub fn relative_error_approximation<T: Real>(prev: T, next: T) -> Result<T> {
    if next == T::zero() {
        return Err(Error::UndefinedMetric);
    }
    Ok((next - prev).abs() / next.abs())
}

/// Inclusive `start, start+step, …, ≤ stop`.
pub fn n_range(start: usize, stop: usize, step: usize) -> Result<Vec<usize>> {
    if step == 0 {
        return Err(Error::Parameter("N range step must be positive".into()));
    }
    if start == 0 || stop < start {
        return Err(Error::Parameter(format!("invalid N range {start}:{stop}:{step}")));
    }
    Ok((start..=stop).step_by(step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord<T> {
    pub n: usize,
    /// Unscaled eigenvalues, ascending. Empty when the solve failed.
    pub eigenvalues: Vec<T>,
    pub relative_errors: Vec<Option<T>>,
    pub relative_error_approximations: Vec<Option<T>>,
    pub condition_number: Option<T>,
    pub step: Option<T>,
    pub failure: Option<String>,
}

impl<T: Real> ConvergenceRecord<T> {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig<T> {
    pub potential: Potential<T>,
    pub map: ConformalMap<T>,
    pub tau: T,
    pub n_grid: Vec<usize>,
    pub rate_mode: RateMode,
    /// Replaces the decay rate `γ` of the profile.
    pub gamma: Option<T>,
    /// Replaces the decay amplitude `B` of the profile.
    pub big_b: Option<T>,
    pub threshold: T,
    /// Known eigenvalues, lowest first.
    pub exact_eigenvalues: Vec<T>,
    pub solve: SolveOptions<T>,
}

impl<T: Real> StudyConfig<T> {
    /// Defaults: generalized map, `τ = 1`, `N = 10, 15, …, 50`.
    pub fn new(potential: Potential<T>) -> Self {
        Self {
            potential,
            map: ConformalMap::default(),
            tau: T::one(),
            n_grid: (10..=50).step_by(5).collect(),
            rate_mode: RateMode::default(),
            gamma: None,
            big_b: None,
            threshold: T::lit(DEFAULT_THRESHOLD),
            exact_eigenvalues: Vec::new(),
            solve: SolveOptions::default(),
        }
    }

    pub fn builtin(which: BuiltinPotential) -> Self {
        let mut cfg = Self::new(which.potential());
        cfg.exact_eigenvalues = vec![T::lit(which.exact_ground_state())];
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > T::zero() && self.tau.is_finite()) {
            return Err(Error::Parameter(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.threshold > T::zero() && self.threshold.is_finite()) {
            return Err(Error::Parameter(format!("threshold must be positive, got {}", self.threshold)));
        }
        if self.n_grid.contains(&0) {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("N grid must be strictly ascending".into()));
        }
        if let Some(limit) = self.solve.max_condition {
            if !(limit > T::zero()) {
                return Err(Error::Parameter("condition limit must be positive".into()));
            }
        }
        Ok(())
    }

    /// The dilated potential and the decay profile that fixes the mesh.
    pub fn setup(&self) -> Result<(ScaledPotential<T>, DecayProfile<T>)> {
        let scaled = self.potential.scale(self.tau)?;
        let profile = decay_profile(&self.map, scaled.as_potential(), self.rate_mode)?
            .with_overrides(self.gamma, self.big_b)?;
        Ok((scaled, profile))
    }

    /// A single solve at half-width `n`.
    pub fn solve_at(&self, n: usize) -> Result<SpectrumResult<T>> {
        let (scaled, profile) = self.setup()?;
        solve_with(&scaled, &profile, &self.map, n, &self.solve)
    }
}

fn solve_with<T: Real>(
    scaled: &ScaledPotential<T>,
    profile: &DecayProfile<T>,
    map: &ConformalMap<T>,
    n: usize,
    options: &SolveOptions<T>,
) -> Result<SpectrumResult<T>> {
    let system = assemble(scaled, map, n, profile)?;
    solve(&system, options)
}

/// Solves at every `N` of the grid. Per-`N` failures are recorded and the
/// study carries on.
pub fn run_study<T: Real>(cfg: &StudyConfig<T>) -> Result<Vec<ConvergenceRecord<T>>> {
    cfg.validate()?;
    let (scaled, profile) = cfg.setup()?;
    let results: Vec<Result<SpectrumResult<T>>> = cfg
        .n_grid
        .par_iter()
        .map(|&n| solve_with(&scaled, &profile, &cfg.map, n, &cfg.solve))
        .collect();

    let mut records: Vec<ConvergenceRecord<T>> = Vec::with_capacity(results.len());
    for (&n, result) in cfg.n_grid.iter().zip(results) {
        let record = match result {
            Ok(spectrum) => {
                let eigenvalues = spectrum.unscaled_eigenvalues();
                let relative_errors = eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| cfg.exact_eigenvalues.get(i).and_then(|&x| relative_error(x, e).ok()))
                    .collect();
                let prev = records.last().map(|r| r.eigenvalues.as_slice()).unwrap_or(&[]);
                let relative_error_approximations = eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| prev.get(i).and_then(|&p| relative_error_approximation(p, e).ok()))
                    .collect();
                ConvergenceRecord {
                    n,
                    eigenvalues,
                    relative_errors,
                    relative_error_approximations,
                    condition_number: Some(spectrum.condition_number),
                    step: Some(spectrum.step),
                    failure: None,
                }
            }
            Err(err) => {
                let condition_number = match err {
                    Error::IllConditioned { condition, .. } => Some(T::lit(condition)),
                    _ => None,
                };
                ConvergenceRecord {
                    n,
                    eigenvalues: Vec::new(),
                    relative_errors: Vec::new(),
                    relative_error_approximations: Vec::new(),
                    condition_number,
                    step: None,
                    failure: Some(err.to_string()),
                }
            }
        };
        records.push(record);
    }
    Ok(records)
}

/// Number of eigenvalues judged converged at the last grid point: the
/// relative error where an exact value is known, otherwise the change from
/// the previous grid point, must be below `threshold`.
pub fn count_convergent<T: Real>(records: &[ConvergenceRecord<T>], threshold: T) -> Result<usize> {
    if records.len() < 2 {
        return Err(Error::InsufficientData(records.len()));
    }
    let last = &records[records.len() - 1];
    let count = (0..last.eigenvalues.len())
        .filter(|&i| {
            let metric = match last.relative_errors.get(i).copied().flatten() {
                Some(err) => Some(err),
                None => last.relative_error_approximations.get(i).copied().flatten(),
            };
            metric.is_some_and(|m| m < threshold)
        })
        .count();
    Ok(count)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauCount<T> {
    pub tau: T,
    pub count: usize,
    /// Largest grid point that solved.
    pub last_solved: Option<usize>,
}

/// Repeats the study of `cfg` for every `τ` and counts converged eigenvalues.
pub fn tau_sweep<T: Real>(cfg: &StudyConfig<T>, taus: &[T]) -> Result<Vec<TauCount<T>>> {
    taus.iter()
        .map(|&tau| {
            let mut c = cfg.clone();
            c.tau = tau;
            let records = run_study(&c)?;
            Ok(TauCount {
                tau,
                count: count_convergent(&records, c.threshold)?,
                last_solved: records.iter().rev().find(|r| !r.failed()).map(|r| r.n),
            })
        })
        .collect()
}

/// `%.{sig}g`-style formatting.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

const CSV_HEADER: [&str; 6] = ["N", "index", "eigenvalue", "rel_error", "rel_error_approx", "condition_number"];

fn opt_field<T: Real>(v: Option<T>) -> String {
    v.map(|x| format_significant(x.as_f64(), 15)).unwrap_or_default()
}

/// Writes one row per `(N, index)`; failed grid points contribute no rows.
pub fn emit_csv<T: Real, W: Write>(records: &[ConvergenceRecord<T>], out: W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Precondition("no records to write".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let cond = opt_field(r.condition_number);
        for (i, &e) in r.eigenvalues.iter().enumerate() {
            w.write_record([
                r.n.to_string(),
                i.to_string(),
                format_significant(e.as_f64(), 15),
                opt_field(r.relative_errors.get(i).copied().flatten()),
                opt_field(r.relative_error_approximations.get(i).copied().flatten()),
                cond.clone(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_csv<T: Real>(records: &[ConvergenceRecord<T>], path: &Path) -> Result<()> {
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(io)?;
    let mut buf = BufWriter::new(file);
    emit_csv(records, &mut buf)?;
    buf.flush().map_err(io)
}
