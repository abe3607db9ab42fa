use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use schwarz_core::harness::{run_suite, ConfigOverrides, Format, Report, Suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "schwarz-lab", version)]
#[command(about = "Run numerical checks of Schwarz-type inequalities and emit per-trial reports")]
struct Cli {
    /// Suite to run (main, quasibalanced, nthroot, equality, spectral, metrics) or `all`
    suite: Option<String>,

    /// List the available suites and exit
    #[arg(long)]
    list: bool,

    /// Flat `key = value` config file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    trials: Option<usize>,

    /// Largest target dimension drawn per trial
    #[arg(long)]
    n: Option<usize>,

    /// Largest polynomial degree drawn per trial
    #[arg(long)]
    degree: Option<usize>,

    /// Sample points per trial
    #[arg(long)]
    grid: Option<usize>,

    /// Violation threshold: a check fails when its margin is below -tol
    #[arg(long)]
    tol: Option<f64>,

    /// Output file (defaults to stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv or jsonl
    #[arg(long)]
    format: Option<String>,

    /// Worker threads (defaults to one per core)
    #[arg(long)]
    threads: Option<usize>,
}

impl Cli {
    fn overrides(&self) -> Result<ConfigOverrides> {
        Ok(ConfigOverrides {
            suite: self.suite.clone(),
            seed: self.seed,
            trials: self.trials,
            n: self.n,
            degree: self.degree,
            grid: self.grid,
            tol: self.tol,
            out: self.out.clone(),
            format: self.format.as_deref().map(str::parse::<Format>).transpose()?,
            threads: self.threads,
        })
    }
}

fn list() {
    for s in Suite::ALL {
        let d = SuiteConfig::defaults(s);
        println!(
            "{:<14} {} (trials={}, n={}, degree={}, grid={}, tol={:e})",
            s.as_str(),
            s.description(),
            d.trials,
            d.n,
            d.degree,
            d.grid,
            d.tol
        );
    }
    println!("{:<14} every suite above with its own defaults", "all");
}

fn write_reports(reports: &[Report], format: Format, out: Option<&PathBuf>) -> Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for (i, report) in reports.iter().enumerate() {
        match format {
            Format::Jsonl => report.write_jsonl(&mut sink)?,
            Format::Csv => report.write_csv(&mut sink, i == 0)?,
        }
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let mut merged = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ConfigOverrides::from_kv_text(&text)?
        }
        None => ConfigOverrides::default(),
    };
    merged = merged.merge(cli.overrides()?);

    let Some(name) = merged.suite.clone() else {
        bail!("no suite given; pass one of the names from --list, or `all`");
    };
    let configs: Vec<SuiteConfig> = if name == "all" {
        Suite::ALL.iter().map(|&s| merged.resolve_for_all(s)).collect()
    } else {
        vec![merged.resolve(name.parse()?)]
    };
    for cfg in &configs {
        cfg.validate()?;
    }

    let mut reports = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let report = run_suite(cfg)?;
        let s = &report.summary;
        eprintln!(
            "{:<14} trials={} passes={} failures={} aborts={} checks={} violations={} min_margin={:e} ({} ms)",
            s.suite.as_str(),
            s.trials,
            s.passes,
            s.failures,
            s.aborts,
            s.checks,
            s.violations,
            s.min_margin,
            s.wall_time_ms
        );
        reports.push(report);
    }
    let first = &configs[0];
    write_reports(&reports, first.format, first.out.as_ref())?;
    Ok(reports.iter().all(|r| r.summary.is_clean()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.list {
        list();
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
