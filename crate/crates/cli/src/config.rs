//! TOML study configuration.
//!
//! ```toml
//! potential = "V1"                  # or [[-2, 2.0], [2, 1.0]]
//! reference = "V5"                  # attach a built-in exact ground state
//! tau = 1.0
//! n = "10:50:5"                     # or [10, 20, 30], or 40
//! rate_mode = "tuned"
//! threshold = 5e-12
//!
//! [map]
//! kind = "general"
//! params = [1.05, 1.30, 1.20, 0.94]
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use descm::{
    n_range, BuiltinPotential, ConformalMap64, MapParams, Potential, RateMode, StudyConfig64, DEFAULT_THRESHOLD,
};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("{}`{key}`: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid { key: String, line: Option<usize>, message: String },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PotentialInput {
    Builtin(String),
    Pairs(Vec<(i32, f64)>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridInput {
    Single(usize),
    List(Vec<usize>),
    Range(String),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    pub kind: Option<String>,
    pub params: Option<[f64; 4]>,
}

/// Every key is optional; unset keys fall back to the library defaults.
/// Command-line overrides are expressed with the same type.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub potential: Option<PotentialInput>,
    pub reference: Option<String>,
    pub exact_eigenvalues: Option<Vec<f64>>,
    pub map: Option<MapSection>,
    pub tau: Option<f64>,
    pub taus: Option<Vec<f64>>,
    pub n: Option<GridInput>,
    pub rate_mode: Option<String>,
    pub gamma: Option<f64>,
    pub big_b: Option<f64>,
    pub threshold: Option<f64>,
    pub max_condition: Option<f64>,
    pub k: Option<usize>,
    pub out: Option<PathBuf>,
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key: key.into(), line: None, message: message.into() }
}

pub fn parse_rate_mode(s: &str) -> Result<RateMode, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "tuned" => Ok(RateMode::Tuned),
        "linear" => Ok(RateMode::Linear),
        "carried" => Ok(RateMode::Carried),
        other => Err(invalid("rate_mode", format!("unknown rate mode {other:?} (tuned, linear, carried)"))),
    }
}

/// `start:stop:step`, `start:stop` or a single `N`.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, ConfigError> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let num = |p: &str| p.parse::<usize>().map_err(|_| invalid("n", format!("not a non-negative integer: {p:?}")));
    let grid = match parts.as_slice() {
        [n] => vec![num(n)?],
        [a, b] => n_range(num(a)?, num(b)?, 1).map_err(|e| invalid("n", e.to_string()))?,
        [a, b, c] => n_range(num(a)?, num(b)?, num(c)?).map_err(|e| invalid("n", e.to_string()))?,
        _ => return Err(invalid("n", format!("expected start:stop:step, got {s:?}"))),
    };
    Ok(grid)
}

/// Comma-separated reals.
pub fn parse_reals(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| invalid(key, format!("not a number: {p:?}"))))
        .collect()
}

/// `power:coefficient` pairs separated by commas, e.g. `-2:2,-1:-16,2:0.0625`.
pub fn parse_coeffs(s: &str) -> Result<Vec<(i32, f64)>, ConfigError> {
    s.split(',')
        .map(|pair| {
            let (p, c) = pair
                .split_once(':')
                .ok_or_else(|| invalid("potential", format!("expected power:coefficient, got {pair:?}")))?;
            let p = p.trim().parse().map_err(|_| invalid("potential", format!("bad power {p:?}")))?;
            let c = c.trim().parse().map_err(|_| invalid("potential", format!("bad coefficient {c:?}")))?;
            Ok((p, c))
        })
        .collect()
}

fn builtin(key: &str, name: &str) -> Result<BuiltinPotential, ConfigError> {
    BuiltinPotential::from_str(name).map_err(|e| invalid(key, e.to_string()))
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))
    }

    /// Keys set in `over` replace those in `self`.
    pub fn merged(self, over: ConfigFile) -> ConfigFile {
        let map = match (self.map, over.map) {
            (Some(base), Some(top)) => Some(MapSection {
                kind: top.kind.or(base.kind),
                params: top.params.or(base.params),
            }),
            (base, top) => top.or(base),
        };
        ConfigFile {
            potential: over.potential.or(self.potential),
            reference: over.reference.or(self.reference),
            exact_eigenvalues: over.exact_eigenvalues.or(self.exact_eigenvalues),
            map,
            tau: over.tau.or(self.tau),
            taus: over.taus.or(self.taus),
            n: over.n.or(self.n),
            rate_mode: over.rate_mode.or(self.rate_mode),
            gamma: over.gamma.or(self.gamma),
            big_b: over.big_b.or(self.big_b),
            threshold: over.threshold.or(self.threshold),
            max_condition: over.max_condition.or(self.max_condition),
            k: over.k.or(self.k),
            out: over.out.or(self.out),
        }
    }

    pub fn grid(&self) -> Result<Option<Vec<usize>>, ConfigError> {
        match &self.n {
            None => Ok(None),
            Some(GridInput::Single(n)) => Ok(Some(vec![*n])),
            Some(GridInput::List(v)) => Ok(Some(v.clone())),
            Some(GridInput::Range(s)) => parse_grid(s).map(Some),
        }
    }

    fn map(&self) -> Result<ConformalMap64, ConfigError> {
        let section = self.map.clone().unwrap_or_default();
        let kind = section.kind.as_deref().unwrap_or("general").to_ascii_lowercase();
        match kind.as_str() {
            "simple" => {
                if section.params.is_some() {
                    return Err(invalid("map.params", "the simple map takes no parameters"));
                }
                Ok(ConformalMap64::Simple)
            }
            "general" | "generalized" => {
                let params = match section.params {
                    Some([a, b, c, d]) => MapParams::new(a, b, c, d).map_err(|e| invalid("map.params", e.to_string()))?,
                    None => MapParams::default(),
                };
                Ok(ConformalMap64::Generalized(params))
            }
            other => Err(invalid("map.kind", format!("unknown map {other:?} (simple, general)"))),
        }
    }

    /// Validated study configuration.
    pub fn study_config(&self) -> Result<StudyConfig64, ConfigError> {
        let (potential, mut exact) = match &self.potential {
            None => return Err(invalid("potential", "no potential given")),
            Some(PotentialInput::Builtin(name)) => {
                let b = builtin("potential", name)?;
                (b.potential::<f64>(), vec![b.exact_ground_state()])
            }
            Some(PotentialInput::Pairs(pairs)) => (
                Potential::new(pairs.iter().copied()).map_err(|e| invalid("potential", e.to_string()))?,
                Vec::new(),
            ),
        };
        if let Some(name) = &self.reference {
            let b = builtin("reference", name)?;
            if b.potential::<f64>() != potential {
                return Err(invalid("reference", format!("coefficients do not match {b}")));
            }
            exact = vec![b.exact_ground_state()];
        }
        if let Some(values) = &self.exact_eigenvalues {
            exact = values.clone();
        }

        let mut cfg = StudyConfig64::new(potential);
        cfg.exact_eigenvalues = exact;
        cfg.map = self.map()?;
        if let Some(tau) = self.tau {
            cfg.tau = tau;
        }
        if let Some(grid) = self.grid()? {
            cfg.n_grid = grid;
        }
        if let Some(mode) = &self.rate_mode {
            cfg.rate_mode = parse_rate_mode(mode)?;
        }
        cfg.gamma = self.gamma;
        cfg.big_b = self.big_b;
        cfg.threshold = self.threshold.unwrap_or(DEFAULT_THRESHOLD);
        cfg.solve.max_condition = self.max_condition;
        for (key, v) in [("gamma", self.gamma), ("big_b", self.big_b)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(key, format!("must be positive, got {v}")));
                }
            }
        }
        if let Some(taus) = &self.taus {
            if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
                return Err(invalid("taus", format!("must be positive, got {t}")));
            }
        }
        cfg.validate().map_err(|e| {
            let key = if e.to_string().contains("tau") {
                "tau"
            } else if e.to_string().contains("threshold") {
                "threshold"
            } else if e.to_string().contains("condition") {
                "max_condition"
            } else {
                "n"
            };
            invalid(key, e.to_string())
        })?;
        Ok(cfg)
    }
}

/// Attaches the line of `text` where the offending key is set.
pub fn with_line(err: ConfigError, text: &str) -> ConfigError {
    match err {
        ConfigError::Invalid { key, line: None, message } => {
            let leaf = key.rsplit('.').next().unwrap_or(&key).to_string();
            let line = text.lines().position(|l| {
                let l = l.trim_start();
                l.starts_with(&leaf) && l[leaf.len()..].trim_start().starts_with('=')
            });
            ConfigError::Invalid { key, line: line.map(|l| l + 1), message }
        }
        other => other,
    }
}

/// Parses and validates a config text in one go.
pub fn parse_config(text: &str) -> Result<StudyConfig64, ConfigError> {
    ConfigFile::parse(text)?.study_config().map_err(|e| with_line(e, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_name_expands() {
        let cfg = parse_config("potential = \"V1\"").unwrap();
        assert_eq!(cfg.potential.terms(), &[(-2, 2.0), (-1, -16.0), (1, 2.0), (2, 0.0625)]);
        assert_eq!(cfg.exact_eigenvalues, vec![-14.75]);
        assert_eq!(cfg.map, ConformalMap64::default());
        assert_eq!(cfg.n_grid, vec![10, 15, 20, 25, 30, 35, 40, 45, 50]);
        assert_eq!(cfg.threshold, 5e-12);
    }

    #[test]
    fn explicit_pairs_with_reference() {
        let cfg = parse_config("potential = [[-2, 2.0], [2, 1.0]]\nreference = \"V5\"").unwrap();
        assert_eq!(cfg.potential, BuiltinPotential::V5.potential());
        assert_eq!(cfg.exact_eigenvalues, vec![5.0]);
        let plain = parse_config("potential = [[-2, 2.0], [2, 1.0]]").unwrap();
        assert!(plain.exact_eigenvalues.is_empty());
    }

    #[test]
    fn reference_must_match() {
        let err = parse_config("potential = [[-2, 2.0], [2, 3.0]]\nreference = \"V5\"").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { line: Some(2), .. }), "{err}");
    }

    #[test]
    fn constant_term_is_rejected_with_line() {
        let err = parse_config("tau = 1.0\npotential = [[0, 1.0], [2, 1.0]]").unwrap_err();
        let text = err.to_string();
        assert!(text.starts_with("line 2: `potential`"), "{text}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("potential = \"V1\"\nsteps = 3").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax(_)));
        assert!(err.to_string().contains("steps"));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn malformed_syntax() {
        assert!(matches!(parse_config("potential = "), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn nested_map_section() {
        let cfg = parse_config("potential = \"V2\"\n[map]\nkind = \"general\"\nparams = [1.0, 1.2, 1.1, 0.9]").unwrap();
        assert_eq!(cfg.map, ConformalMap64::Generalized(MapParams::new(1.0, 1.2, 1.1, 0.9).unwrap()));
        let simple = parse_config("potential = \"V2\"\n[map]\nkind = \"simple\"").unwrap();
        assert_eq!(simple.map, ConformalMap64::Simple);
        let err = parse_config("potential = \"V2\"\n[map]\nkind = \"simple\"\nparams = [1.0, 1.2, 1.1, 0.9]").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
    }

    #[test]
    fn grid_forms() {
        assert_eq!(parse_config("potential = \"V1\"\nn = 40").unwrap().n_grid, vec![40]);
        assert_eq!(parse_config("potential = \"V1\"\nn = [5, 9]").unwrap().n_grid, vec![5, 9]);
        assert_eq!(parse_config("potential = \"V1\"\nn = \"1:3\"").unwrap().n_grid, vec![1, 2, 3]);
        assert!(parse_config("potential = \"V1\"\nn = [9, 5]").is_err());
        assert!(parse_grid("1:2:3:4").is_err());
        assert!(parse_grid("a:5").is_err());
    }

    #[test]
    fn rate_modes() {
        assert_eq!(parse_rate_mode("Tuned").unwrap(), RateMode::Tuned);
        assert_eq!(parse_rate_mode("linear").unwrap(), RateMode::Linear);
        assert_eq!(parse_rate_mode("carried").unwrap(), RateMode::Carried);
        assert!(parse_rate_mode("fast").is_err());
    }

    #[test]
    fn coefficient_strings() {
        assert_eq!(parse_coeffs("-2:2,-1:-16, 2:0.0625").unwrap(), vec![(-2, 2.0), (-1, -16.0), (2, 0.0625)]);
        assert!(parse_coeffs("-2=2").is_err());
    }

    #[test]
    fn overrides_win() {
        let file = ConfigFile::parse("potential = \"V1\"\ntau = 2.0\n[map]\nkind = \"simple\"").unwrap();
        let over = ConfigFile { tau: Some(1.75), ..Default::default() };
        let merged = file.merged(over);
        assert_eq!(merged.tau, Some(1.75));
        assert_eq!(merged.map.unwrap().kind.as_deref(), Some("simple"));
    }

    #[test]
    fn bad_numbers() {
        assert!(parse_config("potential = \"V1\"\ntau = -1.0").is_err());
        assert!(parse_config("potential = \"V1\"\nthreshold = 0.0").is_err());
        assert!(parse_config("potential = \"V1\"\ngamma = 0.0").is_err());
        assert!(parse_config("potential = \"V9\"").is_err());
    }
}
