//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.
//!
//! Run alone with `cargo test -p schwarz-lab --test acceptance`.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use schwarz_core::harness::{run_suite, Report, Suite, SuiteConfig};
use schwarz_core::mobius::{hausdorff_euclidean, mobius_disk};
use schwarz_core::rng::{in_disk, SplitMix64};
use schwarz_core::sympoly::{gn_roots, symmetrize};
use schwarz_core::C64;

type Outcome = Result<String, String>;

fn run(cfg: SuiteConfig) -> Result<Report, String> {
    run_suite(&cfg).map_err(|e| e.to_string())
}

/// Fails unless every listed check ran and none was violated, and nothing aborted.
fn require_clean(report: &Report, checks: &[&str]) -> Outcome {
    let s = &report.summary;
    if s.aborts > 0 {
        return Err(format!("{} aborted trials", s.aborts));
    }
    let mut parts = Vec::new();
    for &name in checks {
        let stats = s
            .by_check
            .get(name)
            .ok_or_else(|| format!("check {name} never ran"))?;
        if stats.violations > 0 {
            return Err(format!(
                "{name}: {} of {} violated (min margin {:e})",
                stats.violations, stats.count, stats.min_margin
            ));
        }
        parts.push(format!("{name} n={} min={:.1e}", stats.count, stats.min_margin));
    }
    Ok(parts.join(", "))
}

fn disk_law() -> Outcome {
    let mut rng = SplitMix64::new(2024);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let z = in_disk(&mut rng, 0.999_999);
        let m = mobius_disk(z, C64::new(0.0, 0.0)).map_err(|e| e.to_string())?.get();
        worst = worst.max((m - z.norm()).abs());
    }
    if worst <= 1e-14 {
        Ok(format!("max deviation {worst:.1e} over 10000 samples"))
    } else {
        Err(format!("max deviation {worst:e} exceeds 1e-14"))
    }
}

fn round_trip() -> Outcome {
    let mut rng = SplitMix64::new(77);
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let n = 1 + (i % 8) as usize;
        let distinct = 1 + (i as usize / 8) % n;
        // Distinct points of a multiset with repeats stay 0.05 apart; closer
        // clusters of high multiplicity are blurred by rounding alone.
        let mut base: Vec<C64> = Vec::with_capacity(distinct);
        while base.len() < distinct {
            let z = in_disk(&mut rng, 0.95);
            if distinct == n || base.iter().all(|b| (b - z).norm() >= 0.05) {
                base.push(z);
            }
        }
        let pts: Vec<C64> = (0..n).map(|k| base[k % distinct]).collect();
        let roots = gn_roots(&symmetrize(&pts)).map_err(|e| e.to_string())?.roots.expanded();
        if roots.len() != n {
            return Err(format!("multiset {i}: {} roots for degree {n}", roots.len()));
        }
        worst = worst.max(hausdorff_euclidean(&roots, &pts).map_err(|e| e.to_string())?);
    }
    if worst <= 1e-8 {
        Ok(format!("max Hausdorff {worst:.1e} over 1000 multisets, n <= 8"))
    } else {
        Err(format!("max Hausdorff {worst:e} exceeds 1e-8"))
    }
}

fn main_theorem() -> Outcome {
    let cfg = SuiteConfig::defaults(Suite::Main);
    if (cfg.trials, cfg.n, cfg.degree, cfg.grid, cfg.tol) != (1000, 5, 6, 10, 1e-7) {
        return Err(format!("unexpected defaults {cfg:?}"));
    }
    require_clean(&run(cfg)?, &["hn_le_m", "h1_le_m", "hn_le_h1"])
}

fn equality() -> Outcome {
    let cfg = SuiteConfig::defaults(Suite::Equality);
    if (cfg.grid, cfg.tol) != (64, 1e-8) {
        return Err(format!("unexpected defaults {cfg:?}"));
    }
    let report = run(cfg)?;
    let seen: BTreeSet<usize> = report
        .records
        .iter()
        .filter_map(|r| r.map.as_ref().map(|m| m.n))
        .collect();
    if !(2..=4).all(|n| seen.contains(&n)) {
        return Err(format!("covered n = {seen:?}, need 2, 3, 4"));
    }
    let worst = report
        .records
        .iter()
        .filter(|r| r.check == "hn_equals_m")
        .map(|r| (r.lhs - r.rhs).abs())
        .fold(0.0, f64::max);
    require_clean(&report, &["hn_equals_m"]).map(|d| format!("{d}, max |H^n - M| {worst:.1e}"))
}

fn quasibalanced() -> Outcome {
    let q = run(SuiteConfig::defaults(Suite::Quasibalanced))?;
    let r = run(SuiteConfig::defaults(Suite::Nthroot))?;
    let a = require_clean(
        &q,
        &["schwarz", "sandwich_order", "sandwich_power", "sandwich_balanced", "bisection_target"],
    )?;
    let b = require_clean(&r, &["root_bound", "root_map_equality"])?;
    Ok(format!("{a}; {b}"))
}

fn spectral() -> Outcome {
    let cfg = SuiteConfig::defaults(Suite::Spectral);
    if (cfg.trials, cfg.n, cfg.degree, cfg.tol) != (500, 4, 4, 1e-6) {
        return Err(format!("unexpected defaults {cfg:?}"));
    }
    require_clean(&run(cfg)?, &["annihilation", "spectral_mapping", "bharali"])
}

fn metrics() -> Outcome {
    require_clean(
        &run(SuiteConfig::defaults(Suite::Metrics))?,
        &[
            "range",
            "symmetry",
            "automorphism",
            "mobius_submean",
            "h1_submean",
            "tanh_round_trip",
            "triangle",
        ],
    )
}

fn without_wall_time(text: &str) -> Result<Vec<serde_json::Value>, String> {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                map.remove("wall_time_us");
                map.remove("wall_time_ms");
                map.values_mut().for_each(strip);
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    text.lines()
        .map(|line| {
            let mut v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
            strip(&mut v);
            Ok(v)
        })
        .collect()
}

fn run_all(out: &Path, threads: usize) -> Result<Vec<serde_json::Value>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_schwarz-lab"))
        .args(["all", "--seed", "31337", "--format", "jsonl", "--threads"])
        .arg(threads.to_string())
        .arg("--out")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("schwarz-lab all --threads {threads} exited with {status}"));
    }
    without_wall_time(&std::fs::read_to_string(out).map_err(|e| e.to_string())?)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let one = run_all(&dir.path().join("one.jsonl"), 1)?;
    let two = run_all(&dir.path().join("two.jsonl"), 2)?;
    if one.is_empty() {
        return Err("empty output".into());
    }
    match one.iter().zip(&two).position(|(a, b)| a != b) {
        _ if one.len() != two.len() => Err(format!("{} vs {} lines", one.len(), two.len())),
        Some(i) => Err(format!("first difference at line {}", i + 1)),
        None => Ok(format!("{} identical lines with 1 and 2 threads", one.len())),
    }
}

fn main() {
    let criteria: [(u32, &str, Option<u64>, fn() -> Outcome); 8] = [
        (1, "exact disk law M(z,0) = |z| to 1e-14", Some(1), disk_law),
        (2, "symmetrize/roots round trip to 1e-8", Some(10), round_trip),
        (3, "main theorem H^n <= M, h1 <= M, h^n <= h1", Some(60), main_theorem),
        (4, "n-th root map equality to 1e-8, n = 2, 3, 4", Some(5), equality),
        (5, "quasi-balanced Schwarz lemma and gauge sandwich", Some(60), quasibalanced),
        (6, "spectral ball: annihilation, spectral mapping, Bharali bound", Some(120), spectral),
        (7, "metric battery", Some(30), metrics),
        (8, "determinism of `schwarz-lab all` across thread counts", None, determinism),
    ];
    let mut failed = 0;
    for (id, title, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(detail), Some(secs)) if elapsed > Duration::from_secs(secs) => {
                Err(format!("{detail}; took {:.1} s, budget {secs} s", elapsed.as_secs_f64()))
            }
            (other, _) => other,
        };
        let budget = budget.map(|s| format!(", budget {s} s")).unwrap_or_default();
        match outcome {
            Ok(detail) => println!(
                "criterion {id} PASS {title}: {detail} ({:.2} s{budget})",
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL {title}: {why} ({:.2} s{budget})", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
