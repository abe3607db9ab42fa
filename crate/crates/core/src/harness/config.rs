use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Main,
    Quasibalanced,
    Nthroot,
    Equality,
    Spectral,
    Metrics,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Main,
        Suite::Quasibalanced,
        Suite::Nthroot,
        Suite::Equality,
        Suite::Spectral,
        Suite::Metrics,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Quasibalanced => "quasibalanced",
            Suite::Nthroot => "nthroot",
            Suite::Equality => "equality",
            Suite::Spectral => "spectral",
            Suite::Metrics => "metrics",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Main => "H^n <= M and h1 <= M for random maps of the disk into G^n",
            Suite::Quasibalanced => "Schwarz lemma for quasi-balanced domains, gauge sandwich",
            Suite::Nthroot => "largest root of f(z) is at most |z|^(1/n) when f(0) = 0",
            Suite::Equality => "the n-th root map attains equality",
            Suite::Spectral => "spectral-ball Schwarz inequality and the annihilating self-map",
            Suite::Metrics => "invariant batteries for the Mobius metric and fiber distances",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Format {
    Csv,
    #[default]
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::Jsonl),
            _ => Err(Error::InvalidConfig(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub degree: usize,
    /// Sample points (or point pairs) per trial.
    pub grid: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 1;

impl SuiteConfig {
    pub fn defaults(suite: Suite) -> Self {
        let (trials, n, degree, grid, tol) = match suite {
            Suite::Main => (1000, 5, 6, 10, 1e-7),
            Suite::Quasibalanced | Suite::Nthroot => (1000, 5, 6, 10, 1e-7),
            Suite::Equality => (16, 4, 1, 64, 1e-8),
            Suite::Spectral => (500, 4, 4, 4, 1e-6),
            Suite::Metrics => (200, 5, 4, 16, 1e-6),
        };
        Self {
            suite,
            seed: DEFAULT_SEED,
            trials,
            n,
            degree,
            grid,
            tol,
            out: None,
            format: Format::Jsonl,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if !(1..=8).contains(&self.n) {
            return fail(format!("n must be in 1..=8, got {}", self.n));
        }
        if !(1..=12).contains(&self.degree) {
            return fail(format!("degree must be in 1..=12, got {}", self.degree));
        }
        if self.grid == 0 {
            return fail("grid must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return fail(format!("tol must be positive, got {}", self.tol));
        }
        if self.threads == Some(0) {
            return fail("threads must be at least 1".into());
        }
        Ok(())
    }
}

/// Partial configuration, as read from a flat `key = value` file or from
/// command-line flags. Later sources override earlier ones via [`merge`].
///
/// [`merge`]: ConfigOverrides::merge
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub n: Option<usize>,
    pub degree: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value {value:?} for {key}")))
}

impl ConfigOverrides {
    /// Parses `key = value` lines (`key: value` also accepted); blank lines
    /// and `#` comments are skipped.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", lineno + 1)))?;
            out.set(key.trim(), value.trim().trim_matches('"'))?;
        }
        Ok(out)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "suite" => self.suite = Some(value.to_string()),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "trials" => self.trials = Some(parse_value(key, value)?),
            "n" => self.n = Some(parse_value(key, value)?),
            "degree" => self.degree = Some(parse_value(key, value)?),
            "grid" => self.grid = Some(parse_value(key, value)?),
            "tol" => self.tol = Some(parse_value(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            "threads" => self.threads = Some(parse_value(key, value)?),
            _ => return Err(Error::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// `other` wins wherever it is set.
    pub fn merge(self, other: Self) -> Self {
        Self {
            suite: other.suite.or(self.suite),
            seed: other.seed.or(self.seed),
            trials: other.trials.or(self.trials),
            n: other.n.or(self.n),
            degree: other.degree.or(self.degree),
            grid: other.grid.or(self.grid),
            tol: other.tol.or(self.tol),
            out: other.out.or(self.out),
            format: other.format.or(self.format),
            threads: other.threads.or(self.threads),
        }
    }

    /// Suite defaults with every set field applied on top.
    pub fn resolve(&self, suite: Suite) -> SuiteConfig {
        let mut cfg = SuiteConfig::defaults(suite);
        self.apply_shared(&mut cfg);
        cfg.trials = self.trials.unwrap_or(cfg.trials);
        cfg.n = self.n.unwrap_or(cfg.n);
        cfg.degree = self.degree.unwrap_or(cfg.degree);
        cfg.grid = self.grid.unwrap_or(cfg.grid);
        cfg.tol = self.tol.unwrap_or(cfg.tol);
        cfg
    }

    /// Only the settings that make sense across every suite: seed, trials,
    /// output and threading. Used by `all`, where each suite keeps its own
    /// dimensions and tolerance.
    pub fn resolve_for_all(&self, suite: Suite) -> SuiteConfig {
        let mut cfg = SuiteConfig::defaults(suite);
        self.apply_shared(&mut cfg);
        cfg.trials = self.trials.unwrap_or(cfg.trials);
        cfg
    }

    fn apply_shared(&self, cfg: &mut SuiteConfig) {
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.out = self.out.clone().or(cfg.out.take());
        cfg.format = self.format.unwrap_or(cfg.format);
        cfg.threads = self.threads.or(cfg.threads);
    }
}
