//! Trial engine for the inequality suites.
//!
//! Each trial draws from its own generator `SplitMix64::for_stream(seed, trial)`,
//! so output does not depend on how trials are scheduled across threads.
//! Records come back sorted by trial index.

mod config;
mod report;
mod suites;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

pub use config::{ConfigOverrides, Format, Suite, SuiteConfig, DEFAULT_SEED};
pub use report::{CheckStats, MapDescriptor, Report, Summary, TrialRecord, CSV_HEADER};
pub use suites::{
    run_equality_suite, run_main_suite, run_metrics_suite, run_nthroot_suite, run_quasibalanced_suite,
    run_spectral_suite,
};

use crate::rng::{in_disk, SplitMix64};
use crate::{Error, Result, C64};

/// Sample points are drawn with modulus at most this.
pub const SAMPLE_RADIUS: f64 = 0.95;

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    match cfg.suite {
        Suite::Main => run_main_suite(cfg),
        Suite::Quasibalanced => run_quasibalanced_suite(cfg),
        Suite::Nthroot => run_nthroot_suite(cfg),
        Suite::Equality => run_equality_suite(cfg),
        Suite::Spectral => run_spectral_suite(cfg),
        Suite::Metrics => run_metrics_suite(cfg),
    }
}

/// State handed to a suite's per-trial body.
pub(crate) struct Trial<'a> {
    pub cfg: &'a SuiteConfig,
    pub index: u64,
    pub rng: SplitMix64,
    map: Option<MapDescriptor>,
    records: Vec<TrialRecord>,
    started: Instant,
}

fn pairs(points: &[C64]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.re, p.im]).collect()
}

impl<'a> Trial<'a> {
    fn new(cfg: &'a SuiteConfig, index: u64) -> Self {
        Self {
            cfg,
            index,
            rng: SplitMix64::for_stream(cfg.seed, index),
            map: None,
            records: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn set_map(&mut self, map: MapDescriptor) {
        self.map = Some(map);
    }

    /// Uniform integer in `lo..=hi`.
    pub fn pick(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo as u64..=hi as u64) as usize
    }

    pub fn sample_point(&mut self) -> C64 {
        in_disk(&mut self.rng, SAMPLE_RADIUS)
    }

    fn push(&mut self, check: &str, sample: usize, points: &[C64], lhs: f64, rhs: f64, margin: f64, tol: f64) {
        self.records.push(TrialRecord {
            suite: self.cfg.suite,
            trial: self.index,
            check: check.to_string(),
            sample: sample as u32,
            map: self.map.clone(),
            points: pairs(points),
            lhs,
            rhs,
            margin,
            tol,
            pass: margin >= -tol,
            wall_time_us: self.started.elapsed().as_micros() as u64,
            error: None,
        });
    }

    /// `lhs <= rhs`, margin `rhs - lhs`.
    pub fn inequality(&mut self, check: &str, sample: usize, points: &[C64], lhs: f64, rhs: f64, tol: f64) {
        self.push(check, sample, points, lhs, rhs, rhs - lhs, tol);
    }

    /// `lhs == rhs`, margin `-|lhs - rhs|`.
    pub fn agreement(&mut self, check: &str, sample: usize, points: &[C64], lhs: f64, rhs: f64, tol: f64) {
        self.push(check, sample, points, lhs, rhs, -(lhs - rhs).abs(), tol);
    }

    fn abort(&mut self, err: &Error) {
        log::warn!("{} trial {} aborted: {err}", self.cfg.suite, self.index);
        self.records.push(TrialRecord {
            suite: self.cfg.suite,
            trial: self.index,
            check: "abort".to_string(),
            sample: 0,
            map: self.map.clone(),
            points: Vec::new(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tol: self.cfg.tol,
            pass: false,
            wall_time_us: self.started.elapsed().as_micros() as u64,
            error: Some(err.to_string()),
        });
    }
}

/// Runs `body` once per trial, in parallel, and aggregates the records.
pub(crate) fn run_trials<F>(cfg: &SuiteConfig, body: F) -> Result<Report>
where
    F: Fn(&mut Trial<'_>) -> Result<()> + Sync,
{
    cfg.validate()?;
    let started = Instant::now();
    let run = || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .flat_map_iter(|index| {
                let mut trial = Trial::new(cfg, index);
                if let Err(e) = body(&mut trial) {
                    trial.abort(&e);
                }
                trial.records
            })
            .collect::<Vec<_>>()
    };
    let records = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    let report = Report::build(
        cfg.suite,
        cfg.seed,
        cfg.trials,
        records,
        started.elapsed().as_millis() as u64,
    );
    log::info!(
        "{}: {} trials, {} checks, {} violations, {} aborts in {} ms",
        cfg.suite,
        report.summary.trials,
        report.summary.checks,
        report.summary.violations,
        report.summary.aborts,
        report.summary.wall_time_ms
    );
    Ok(report)
}
