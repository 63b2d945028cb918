use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pqdsim::oracle::{exact_distribution, suggest_n_max, tv_distance, ProbabilityTable, TRUNCATION_TOL};
use pqdsim::sampler::{default_condition, empirical_stats};
use pqdsim::scenario::{format_table, threshold_table, ScenarioParams};
use pqdsim::{check_second_condition, load_experiment, Condition, Error, Experiment, RngStream, Sampler};
use serde::Serialize;

mod manifest;

use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(name = "pqdsim", version, about = "Phase-space sampling of lossy linear-optics experiments")]
struct Cli {
    /// Master seed for all random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory (for `sample`, a file path is also accepted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress human-readable output on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the experiment can be sampled; prints the report as JSON.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Draw click patterns.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: usize,
        /// Sampling route; defaults to 1 for Gaussian SPDC inputs, 2 otherwise.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        condition: Option<u8>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads (0 uses every core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Exact click distribution by Fock-space propagation.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        /// Photon cutoff per source; chosen automatically when omitted.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Total variation distance between sampled and exact distributions.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Experiment for the exact side, if different from `--config`.
        #[arg(long)]
        oracle_config: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        condition: Option<u8>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Threshold tables for uniformly lossy networks.
    Thresholds {
        /// JSON file overriding the scenario parameters.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Comma-separated mode counts.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u64>>,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSimulatable(_) | Error::SimulabilityViolated(_) | Error::UnsupportedSource { .. } => 3,
            Error::Io { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Failure { code: 1, message: format!("{}: {e}", path.display()) }
    }
}

struct Run<'a> {
    cli: &'a Cli,
    started: Instant,
    manifest: RunManifest,
}

impl Run<'_> {
    fn note(&self, text: &str) {
        if !self.cli.quiet {
            eprintln!("{text}");
        }
    }

    /// Writes `body` to `<out>/<name>` when `--out` is set, otherwise to stdout.
    fn emit(&mut self, name: &str, body: &str) -> Result<(), Failure> {
        match &self.cli.out {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| Failure::io(&path, e))?;
                self.manifest.outputs.push(path);
            }
            None => println!("{body}"),
        }
        Ok(())
    }

    fn finish(mut self, manifest_path: Option<PathBuf>) -> Result<(), Failure> {
        self.manifest.wall_time_s = self.started.elapsed().as_secs_f64();
        let path = manifest_path.or_else(|| self.cli.out.as_ref().map(|d| d.join("manifest.json")));
        match path {
            Some(p) => self.manifest.write(&p).map_err(|e| Failure::io(&p, e)),
            None => {
                if !self.cli.quiet {
                    eprintln!("{}", self.manifest.to_json());
                }
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn condition_of(flag: Option<u8>, exp: &Experiment) -> Condition {
    match flag {
        Some(1) => Condition::First,
        Some(_) => Condition::Second,
        None => default_condition(exp),
    }
}

fn pick_n_max(exp: &Experiment, flag: Option<usize>) -> Result<usize, Failure> {
    match flag {
        Some(n) => Ok(n),
        None => Ok(suggest_n_max(exp, TRUNCATION_TOL)?),
    }
}

fn check(run: &mut Run, config: &Path) -> Result<u8, Failure> {
    let exp = load_experiment(config)?;
    run.manifest.config_hash = Some(exp.config_hash());
    let report = check_second_condition(&exp)?;
    run.note(report.summary().trim_end());
    run.emit("report.json", &to_json(&report))?;
    Ok(if report.any_condition_holds() { 0 } else { 3 })
}

fn sample(
    run: &mut Run,
    config: &Path,
    samples: usize,
    condition: Option<u8>,
    format: Format,
    workers: usize,
) -> Result<(u8, Option<PathBuf>), Failure> {
    let exp = load_experiment(config)?;
    run.manifest.config_hash = Some(exp.config_hash());
    let condition = condition_of(condition, &exp);
    let sampler = Sampler::new(&exp, condition)?;
    let stream = RngStream::from_seed(run.cli.seed);
    let batch =
        if workers == 0 { sampler.run(samples, stream) } else { sampler.run_with_workers(samples, stream, workers)? };
    let ext = match format {
        Format::Csv => "csv",
        Format::Jsonl => "jsonl",
    };
    let write = |w: &mut dyn Write| match format {
        Format::Csv => batch.write_csv(w),
        Format::Jsonl => batch.write_jsonl(w),
    };
    let manifest_path = match &run.cli.out {
        Some(out) => {
            let path = if out.is_dir() || out.extension().is_none() {
                std::fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
                out.join(format!("samples.{ext}"))
            } else {
                if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent).map_err(|e| Failure::io(parent, e))?;
                }
                out.clone()
            };
            let file = File::create(&path).map_err(|e| Failure::io(&path, e))?;
            write(&mut BufWriter::new(file)).map_err(|e| Failure::io(&path, e))?;
            run.manifest.outputs.push(path.clone());
            let mut sidecar = path.into_os_string();
            sidecar.push(".manifest.json");
            Some(PathBuf::from(sidecar))
        }
        None => {
            let stdout = io::stdout();
            write(&mut BufWriter::new(stdout.lock())).map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
            None
        }
    };
    run.manifest.condition = Some(condition);
    run.manifest.samples = Some(samples);
    if let Ok(stats) = empirical_stats(&batch) {
        run.note(&format!(
            "{samples} samples (condition {}), mean clicks {:.4}",
            u8::from(condition),
            stats.mean_clicks
        ));
    }
    Ok((0, manifest_path))
}

fn oracle(run: &mut Run, config: &Path, n_max: Option<usize>) -> Result<u8, Failure> {
    let exp = load_experiment(config)?;
    run.manifest.config_hash = Some(exp.config_hash());
    let n_max = pick_n_max(&exp, n_max)?;
    let table = exact_distribution(&exp, n_max)?;
    run.note(&format!("n_max {n_max}, truncation error {:.3e}", table.truncation_error));
    run.emit("oracle.json", &to_json(&table))?;
    Ok(0)
}

#[derive(Serialize)]
struct Comparison {
    samples: usize,
    condition: Condition,
    n_max: usize,
    tv_distance: f64,
    tolerance: f64,
    pass: bool,
}

fn compare(
    run: &mut Run,
    config: &Path,
    oracle_config: Option<&Path>,
    samples: usize,
    tolerance: f64,
    condition: Option<u8>,
    n_max: Option<usize>,
) -> Result<u8, Failure> {
    let exp = load_experiment(config)?;
    run.manifest.config_hash = Some(exp.config_hash());
    let reference = match oracle_config {
        Some(p) => load_experiment(p)?,
        None => exp.clone(),
    };
    // refuse oversized problems before spending time on sampling
    let n_max = pick_n_max(&reference, n_max)?;
    let exact = exact_distribution(&reference, n_max)?;
    let condition = condition_of(condition, &exp);
    let batch = Sampler::new(&exp, condition)?.run(samples, RngStream::from_seed(run.cli.seed));
    let tv = tv_distance(&exact, &ProbabilityTable::from_batch(&batch)?)?;
    let result = Comparison { samples, condition, n_max, tv_distance: tv, tolerance, pass: tv <= tolerance };
    run.note(&format!(
        "TV distance {tv:.5} ({}) against tolerance {tolerance}",
        if result.pass { "PASS" } else { "FAIL" }
    ));
    run.manifest.condition = Some(condition);
    run.manifest.samples = Some(samples);
    run.emit("compare.json", &to_json(&result))?;
    Ok(if result.pass { 0 } else { 1 })
}

fn thresholds(run: &mut Run, params: Option<&Path>, modes: Option<Vec<u64>>, json: bool) -> Result<u8, Failure> {
    let mut p = match params {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?
        }
        None => ScenarioParams::default(),
    };
    if let Some(m) = modes {
        p.modes = m;
    }
    let rows = threshold_table(&p)?;
    if json {
        run.emit("thresholds.json", &to_json(&rows))?;
    } else {
        run.emit("thresholds.txt", format_table(&rows).trim_end())?;
    }
    Ok(0)
}

fn dispatch(cli: &Cli) -> Result<u8, Failure> {
    let name = match cli.command {
        Command::Check { .. } => "check",
        Command::Sample { .. } => "sample",
        Command::Oracle { .. } => "oracle",
        Command::Compare { .. } => "compare",
        Command::Thresholds { .. } => "thresholds",
    };
    let mut run = Run { cli, started: Instant::now(), manifest: RunManifest::new(name, cli.seed) };
    let mut manifest_path = None;
    let code = match &cli.command {
        Command::Check { config } => check(&mut run, config)?,
        Command::Sample { config, samples, condition, format, workers } => {
            let (code, path) = sample(&mut run, config, *samples, *condition, *format, *workers)?;
            manifest_path = path;
            code
        }
        Command::Oracle { config, n_max } => oracle(&mut run, config, *n_max)?,
        Command::Compare { config, oracle_config, samples, tolerance, condition, n_max } => {
            compare(&mut run, config, oracle_config.as_deref(), *samples, *tolerance, *condition, *n_max)?
        }
        Command::Thresholds { params, modes, json } => thresholds(&mut run, params.as_deref(), modes.clone(), *json)?,
    };
    run.finish(manifest_path)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
