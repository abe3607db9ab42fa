use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::config::Suite;
use crate::holomaps::HoloMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub kind: String,
    pub seed: Option<u64>,
    pub degree: usize,
    pub n: usize,
}

impl MapDescriptor {
    pub fn of(map: &HoloMap) -> Self {
        Self {
            kind: map.kind().to_string(),
            seed: map.seed(),
            degree: map.degree(),
            n: map.target().order(),
        }
    }

    /// For maps built inside a suite rather than drawn by `random_map`.
    pub fn named(kind: &str, n: usize) -> Self {
        Self {
            kind: kind.to_string(),
            seed: None,
            degree: 0,
            n,
        }
    }
}

/// One checked inequality or agreement. `pass` is `margin >= -tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub suite: Suite,
    pub trial: u64,
    pub check: String,
    pub sample: u32,
    pub map: Option<MapDescriptor>,
    /// Sample points as `[re, im]` pairs.
    pub points: Vec<[f64; 2]>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
    pub wall_time_us: u64,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn is_abort(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckStats {
    pub count: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub mean_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub aborts: usize,
    pub checks: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub mean_margin: f64,
    pub by_check: BTreeMap<String, CheckStats>,
    pub wall_time_ms: u64,
}

impl Summary {
    pub fn is_clean(&self) -> bool {
        self.violations == 0 && self.aborts == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

fn stats<'a>(records: impl Iterator<Item = &'a TrialRecord>) -> CheckStats {
    let (mut count, mut violations, mut min, mut sum, mut finite) = (0, 0, f64::INFINITY, 0.0, 0);
    for r in records {
        count += 1;
        if !r.pass {
            violations += 1;
        }
        if r.margin.is_finite() {
            min = min.min(r.margin);
            sum += r.margin;
            finite += 1;
        } else if r.margin.is_nan() {
            min = f64::NAN;
        }
    }
    CheckStats {
        count,
        violations,
        min_margin: min,
        mean_margin: if finite > 0 { sum / finite as f64 } else { f64::NAN },
    }
}

impl Report {
    /// Aggregates records (already sorted by trial) into a report.
    pub fn build(suite: Suite, seed: u64, trials: usize, records: Vec<TrialRecord>, wall_time_ms: u64) -> Self {
        let mut aborted = vec![false; trials];
        let mut failed = vec![false; trials];
        for r in &records {
            let t = r.trial as usize;
            if r.is_abort() {
                aborted[t] = true;
            } else if !r.pass {
                failed[t] = true;
            }
        }
        let aborts = aborted.iter().filter(|&&a| a).count();
        let failures = (0..trials).filter(|&t| failed[t] && !aborted[t]).count();
        let checks: Vec<&TrialRecord> = records.iter().filter(|r| !r.is_abort()).collect();
        let overall = stats(checks.iter().copied());
        let mut names: Vec<&str> = checks.iter().map(|r| r.check.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        let by_check = names
            .into_iter()
            .map(|name| {
                (
                    name.to_string(),
                    stats(checks.iter().copied().filter(|r| r.check == name)),
                )
            })
            .collect();
        let summary = Summary {
            suite,
            seed,
            trials,
            passes: trials - aborts - failures,
            failures,
            aborts,
            checks: overall.count,
            violations: overall.violations,
            min_margin: overall.min_margin,
            mean_margin: overall.mean_margin,
            by_check,
            wall_time_ms,
        };
        Self { records, summary }
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        #[derive(Serialize)]
        struct Wrapped<'a> {
            summary: &'a Summary,
        }
        serde_json::to_writer(&mut w, &Wrapped { summary: &self.summary })?;
        w.write_all(b"\n")
    }

    /// CSV rows with the map descriptor flattened and points written as
    /// `re:im;re:im`; the summary follows as a `# summary {json}` comment.
    pub fn write_csv<W: Write>(&self, mut w: W, header: bool) -> io::Result<()> {
        {
            let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(&mut w);
            if header {
                csv.write_record(CSV_HEADER)?;
            }
            for r in &self.records {
                let map = r.map.as_ref();
                let opt = |v: Option<String>| v.unwrap_or_default();
                let points = r
                    .points
                    .iter()
                    .map(|[re, im]| format!("{re}:{im}"))
                    .collect::<Vec<_>>()
                    .join(";");
                csv.write_record([
                    r.suite.to_string(),
                    r.trial.to_string(),
                    r.check.clone(),
                    r.sample.to_string(),
                    opt(map.map(|m| m.kind.clone())),
                    opt(map.and_then(|m| m.seed).map(|s| s.to_string())),
                    opt(map.map(|m| m.degree.to_string())),
                    opt(map.map(|m| m.n.to_string())),
                    points,
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.margin.to_string(),
                    r.tol.to_string(),
                    r.pass.to_string(),
                    r.wall_time_us.to_string(),
                    opt(r.error.clone()),
                ])?;
            }
            csv.flush()?;
        }
        w.write_all(b"# summary ")?;
        serde_json::to_writer(&mut w, &self.summary)?;
        w.write_all(b"\n")
    }
}

pub const CSV_HEADER: [&str; 16] = [
    "suite",
    "trial",
    "check",
    "sample",
    "map_kind",
    "map_seed",
    "map_degree",
    "map_n",
    "points",
    "lhs",
    "rhs",
    "margin",
    "tol",
    "pass",
    "wall_time_us",
    "error",
];
