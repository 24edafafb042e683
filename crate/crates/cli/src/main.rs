//! Command-line front end: sequence construction, exact counts, gap
//! distributions, oracle verification, Monte Carlo sampling, and convergence
//! tables. Every run prints its primary result to stdout and, with `--out`,
//! writes the same data plus a reproduction manifest to files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource-guard abort.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lattice_gaps::exactmath::BigCount;
use lattice_gaps::gaps::{self, GapKind, GapVector};
use lattice_gaps::paths::{self, DEFAULT_ENUMERATION_GUARD};
use lattice_gaps::sampling::{
    self, LongestGapMetric, SamplerConfig, CHUNK_SEED_SCHEME, CHUNK_SIZE, GENERATOR_ID,
};
use lattice_gaps::sequence;
use lattice_gaps::verify;
use lattice_gaps::Error as CoreError;

const GUARD_ENV: &str = "LATTICE_GAPS_GUARD";

#[derive(Parser)]
#[command(
    name = "lattice-gaps",
    version,
    about = "Exact counts, gap distributions, and sampling for strictly decreasing lattice paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory for result files and the run manifest (created if missing).
    /// Without it, results go to stdout and the manifest to stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sampling commands.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Output format; `grid` applies to `sequence` only.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Significant digits in decimal columns.
    #[arg(long, global = true, default_value_t = 30)]
    digits: usize,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Csv,
    Json,
    Grid,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum KindArg {
    Vector,
    Sum,
    Sqdistance,
}

impl From<KindArg> for GapKind {
    fn from(k: KindArg) -> GapKind {
        match k {
            KindArg::Vector => GapKind::Vector,
            KindArg::Sum => GapKind::Sum,
            KindArg::Sqdistance => GapKind::SqDistance,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum MetricArg {
    Sum,
    #[value(alias = "max_component")]
    MaxComponent,
    Sqdistance,
}

impl From<MetricArg> for LongestGapMetric {
    fn from(m: MetricArg) -> LongestGapMetric {
        match m {
            MetricArg::Sum => LongestGapMetric::Sum,
            MetricArg::MaxComponent => LongestGapMetric::MaxComponent,
            MetricArg::Sqdistance => LongestGapMetric::SqDistance,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the lattice sequence over the first diagonals.
    Sequence {
        #[arg(long)]
        diagonals: u32,
        /// Abort if this many integers get scanned before the grid fills.
        #[arg(long, default_value_t = sequence::DEFAULT_CANDIDATE_CAP)]
        candidate_cap: u64,
    },
    /// Exact path counts, length table, gap total, and mean steps for
    /// paths from (n+1, n+1).
    Count {
        #[arg(long)]
        n: u64,
    },
    /// Exact gap distribution at finite n, optionally against the limit law.
    Gapdist {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = KindArg::Vector)]
        kind: KindArg,
        /// Largest gap component tabulated (vector kind) or largest key kept
        /// (scalar kinds). Vector default: min(n+1, 64).
        #[arg(long)]
        v_max: Option<u64>,
        /// Add limit and error columns.
        #[arg(long)]
        with_limit: bool,
    },
    /// Check every closed form against exhaustive enumeration up to n-max.
    Verify {
        #[arg(long)]
        n_max: u64,
        /// Corrupt the gap-count formula to exercise failure reporting.
        #[arg(long, hide = true)]
        self_test_corrupt: bool,
    },
    /// Sample paths uniformly; tally a gap distribution or longest-gap stats.
    Sample {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, conflicts_with = "longest")]
        kind: Option<KindArg>,
        /// Longest-gap mode with the given per-gap metric.
        #[arg(long, value_enum)]
        longest: Option<MetricArg>,
    },
    /// Exact finite-n probabilities against the limit for chosen gap vectors.
    Converge {
        /// Gap vectors, e.g. "1,1;1,2;2,2".
        #[arg(long)]
        v: String,
        /// Lattice sizes, e.g. "10,100,1000".
        #[arg(long)]
        n_list: String,
    },
}

/// Result files produced by one command, plus what to print.
struct RunOutput {
    stdout: String,
    files: Vec<(String, String)>,
    parameters: serde_json::Value,
    exit: ExitCode,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let common = cli.common.clone();
    match run(cli.command, &common) {
        Ok(output) => {
            if let Err(e) = emit(&output, &common, started) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            output.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Core(CoreError::TooLargeForEnumeration { .. })
        | CliError::Core(CoreError::CandidateCapExceeded { .. }) => 3,
        _ => 2,
    }
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Io(std::io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn enumeration_guard() -> Result<u64, CliError> {
    match std::env::var(GUARD_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| usage(format!("{GUARD_ENV} must be an integer, got {raw:?}"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_GUARD),
    }
}

/// The format actually in effect for a command, with `grid` policed.
fn effective_format(common: &Common, default: Format, allow_grid: bool) -> Result<Format, CliError> {
    let f = common.format.unwrap_or(default);
    if f == Format::Grid && !allow_grid {
        return Err(usage("--format grid only applies to the sequence command"));
    }
    Ok(f)
}

fn run(command: Command, common: &Common) -> Result<RunOutput, CliError> {
    match command {
        Command::Sequence { diagonals, candidate_cap } => {
            cmd_sequence(common, diagonals, candidate_cap)
        }
        Command::Count { n } => cmd_count(common, n),
        Command::Gapdist { n, kind, v_max, with_limit } => {
            cmd_gapdist(common, n, kind.into(), v_max, with_limit)
        }
        Command::Verify { n_max, self_test_corrupt } => {
            cmd_verify(common, n_max, self_test_corrupt)
        }
        Command::Sample { n, paths, seed, kind, longest } => {
            cmd_sample(common, n, paths, seed, kind, longest)
        }
        Command::Converge { v, n_list } => cmd_converge(common, &v, &n_list),
    }
}

fn emit(output: &RunOutput, common: &Common, started: Instant) -> Result<(), CliError> {
    print!("{}", output.stdout);
    let manifest = json!({
        "schema_version": 1,
        "command": output.parameters["command"],
        "parameters": output.parameters,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "outputs": output.files.iter().map(|(name, _)| name.clone()).collect::<Vec<_>>(),
        "timing_seconds": started.elapsed().as_secs_f64(),
    });
    match &common.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, contents) in &output.files {
                std::fs::write(dir.join(name), contents)?;
            }
            std::fs::write(dir.join("manifest.json"), format!("{manifest:#}\n"))?;
        }
        None => eprintln!("{manifest}"),
    }
    Ok(())
}

fn cmd_sequence(common: &Common, diagonals: u32, candidate_cap: u64) -> Result<RunOutput, CliError> {
    let format = effective_format(common, Format::Grid, true)?;
    let seq = sequence::build_sequence_capped(diagonals, candidate_cap)?;
    let parameters = json!({
        "command": "sequence",
        "diagonals": diagonals,
        "candidate_cap": candidate_cap,
        "format": format_name(format),
    });
    let (stdout, files) = match format {
        Format::Grid => {
            let grid = seq.to_grid();
            (grid.clone(), vec![("sequence.txt".into(), grid)])
        }
        Format::Csv => {
            let csv = seq.to_csv();
            (csv.clone(), vec![("sequence.csv".into(), csv)])
        }
        Format::Json => {
            let doc = render::sequence_json(&seq);
            let text = format!("{doc:#}\n");
            (text.clone(), vec![("sequence.json".into(), text)])
        }
    };
    Ok(RunOutput { stdout, files, parameters, exit: ExitCode::SUCCESS })
}

fn cmd_count(common: &Common, n: u64) -> Result<RunOutput, CliError> {
    let format = effective_format(common, Format::Csv, false)?;
    let start = [(n + 1) as u32, (n + 1) as u32];
    let s2 = paths::total_paths_2d(n + 1, n + 1);
    let lengths: Vec<(u64, BigCount)> = (1..=n + 1)
        .map(|k| Ok((k, paths::paths_with_length(k, &start)?)))
        .collect::<Result<_, CoreError>>()?;
    let total_gaps = gaps::total_gap_count(n);
    let mean = paths::mean_path_length(n + 1);
    let parameters = json!({
        "command": "count",
        "n": n,
        "format": format_name(format),
    });
    let (stdout, files) = match format {
        Format::Csv => {
            let summary = render::count_summary_csv(n, &s2, &total_gaps, &mean, common.digits);
            let table = render::count_lengths_csv(&lengths);
            let stdout = format!("{summary}\n{table}");
            (
                stdout,
                vec![
                    ("count_summary.csv".into(), summary),
                    ("count_lengths.csv".into(), table),
                ],
            )
        }
        Format::Json => {
            let doc = render::count_json(n, &s2, &total_gaps, &mean, &lengths, common.digits);
            let text = format!("{doc:#}\n");
            (text.clone(), vec![("count.json".into(), text)])
        }
        Format::Grid => unreachable!("rejected above"),
    };
    Ok(RunOutput { stdout, files, parameters, exit: ExitCode::SUCCESS })
}

fn cmd_gapdist(
    common: &Common,
    n: u64,
    kind: GapKind,
    v_max: Option<u64>,
    with_limit: bool,
) -> Result<RunOutput, CliError> {
    let format = effective_format(common, Format::Csv, false)?;
    if let Some(v) = v_max {
        if v > n + 1 {
            return Err(usage(format!("--v-max {v} exceeds n+1 = {}", n + 1)));
        }
        if v == 0 {
            return Err(usage("--v-max must be positive"));
        }
    }
    let dist = match kind {
        GapKind::Vector => {
            let v = v_max.unwrap_or_else(|| (n + 1).min(64));
            gaps::gap_vector_distribution(n, v)?
        }
        _ => {
            // scalar tables marginalize the complete vector table
            let full = gaps::gap_vector_distribution(n, n + 1)?;
            let mut rolled = gaps::marginalize(&full, kind)?;
            if let Some(v) = v_max {
                rolled = render::truncate_scalar_keys(&rolled, v);
            }
            rolled
        }
    };
    let parameters = json!({
        "command": "gapdist",
        "n": n,
        "kind": kind.as_str(),
        "v_max": v_max,
        "with_limit": with_limit,
        "format": format_name(format),
    });
    let limits = with_limit.then_some(kind);
    let (stdout, files) = match format {
        Format::Csv => {
            let csv = render::distribution_csv(&dist, common.digits, limits)?;
            (csv.clone(), vec![("gapdist.csv".into(), csv)])
        }
        Format::Json => {
            let doc = render::distribution_json(&dist, common.digits, limits, "gapdist")?;
            let text = format!("{doc:#}\n");
            (text.clone(), vec![("gapdist.json".into(), text)])
        }
        Format::Grid => unreachable!("rejected above"),
    };
    Ok(RunOutput { stdout, files, parameters, exit: ExitCode::SUCCESS })
}

fn cmd_verify(common: &Common, n_max: u64, corrupt: bool) -> Result<RunOutput, CliError> {
    if matches!(common.format, Some(Format::Csv) | Some(Format::Grid)) {
        return Err(usage("verify reports as text (default) or --format json"));
    }
    let guard = enumeration_guard()?;
    let report = if corrupt {
        let broken = |n: u64, v1: u64, v2: u64| {
            let mut c = gaps::gap_vector_count(n, v1, v2)?;
            if (v1, v2) == (1, 1) {
                c += 1u32;
            }
            Ok(c)
        };
        verify::run_verification_with(n_max, guard, &broken)?
    } else {
        verify::run_verification(n_max, guard)?
    };
    let mut text = String::new();
    for check in &report.checks {
        if check.passed {
            text.push_str(&format!("ok: {}\n", check.name));
        } else {
            text.push_str(&format!(
                "FAIL: {} — {}\n",
                check.name,
                check.counterexample.as_deref().unwrap_or("no detail")
            ));
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        text.push_str(&format!("PASS: all {} checks\n", report.checks.len()));
    } else {
        text.push_str(&format!(
            "FAILED: {failed} of {} checks\n",
            report.checks.len()
        ));
    }
    let doc = render::verify_json(&report, guard);
    let parameters = json!({
        "command": "verify",
        "n_max": n_max,
        "guard": guard,
        "self_test_corrupt": corrupt,
    });
    let exit = if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
    let json_text = format!("{doc:#}\n");
    let stdout = if common.format == Some(Format::Json) {
        json_text.clone()
    } else {
        text.clone()
    };
    Ok(RunOutput {
        stdout,
        files: vec![
            ("verify.txt".into(), text),
            ("verify.json".into(), json_text),
        ],
        parameters,
        exit,
    })
}

fn cmd_sample(
    common: &Common,
    n: u64,
    num_paths: u64,
    seed: u64,
    kind: Option<KindArg>,
    longest: Option<MetricArg>,
) -> Result<RunOutput, CliError> {
    let format = effective_format(common, Format::Csv, false)?;
    let cfg = SamplerConfig { n, num_paths, seed, workers: common.workers };
    let rng_meta = json!({
        "generator": GENERATOR_ID,
        "chunk_seed_scheme": CHUNK_SEED_SCHEME,
        "chunk_size": CHUNK_SIZE,
        "seed": seed,
    });
    match longest {
        Some(metric) => {
            let metric: LongestGapMetric = metric.into();
            let stats = sampling::longest_gap_stats(&cfg, metric)?;
            let parameters = json!({
                "command": "sample",
                "mode": "longest",
                "n": n,
                "paths": num_paths,
                "seed": seed,
                "workers": common.workers,
                "metric": metric.as_str(),
                "format": format_name(format),
                "rng": rng_meta,
            });
            let stats_doc = render::longest_stats_json(&stats, n, &rng_meta);
            let stats_text = format!("{stats_doc:#}\n");
            let (stdout, mut files) = match format {
                Format::Csv => {
                    let csv = render::histogram_csv(&stats.histogram);
                    (csv.clone(), vec![("sample_longest.csv".into(), csv)])
                }
                Format::Json => {
                    (stats_text.clone(), vec![])
                }
                Format::Grid => unreachable!("rejected above"),
            };
            files.push(("sample_stats.json".into(), stats_text));
            Ok(RunOutput { stdout, files, parameters, exit: ExitCode::SUCCESS })
        }
        None => {
            let kind: GapKind = kind.unwrap_or(KindArg::Vector).into();
            let dist = sampling::sample_gap_distribution(&cfg, kind)?;
            let parameters = json!({
                "command": "sample",
                "mode": "distribution",
                "n": n,
                "paths": num_paths,
                "seed": seed,
                "workers": common.workers,
                "kind": kind.as_str(),
                "format": format_name(format),
                "rng": rng_meta,
            });
            let meta_doc = json!({
                "schema_version": 1,
                "source": "empirical",
                "n": n,
                "paths": num_paths,
                "total_gaps": dist.total().to_string(),
                "rng": rng_meta,
            });
            let meta_text = format!("{meta_doc:#}\n");
            let (stdout, mut files) = match format {
                Format::Csv => {
                    let csv = render::distribution_csv(&dist, common.digits, None)?;
                    (csv.clone(), vec![("sample_dist.csv".into(), csv)])
                }
                Format::Json => {
                    let doc = render::distribution_json(&dist, common.digits, None, "sample")?;
                    let text = format!("{doc:#}\n");
                    (text.clone(), vec![("sample_dist.json".into(), text)])
                }
                Format::Grid => unreachable!("rejected above"),
            };
            files.push(("sample_meta.json".into(), meta_text));
            Ok(RunOutput { stdout, files, parameters, exit: ExitCode::SUCCESS })
        }
    }
}

fn cmd_converge(common: &Common, v_spec: &str, n_spec: &str) -> Result<RunOutput, CliError> {
    let format = effective_format(common, Format::Csv, false)?;
    let vs = parse_gap_vectors(v_spec)?;
    let ns = parse_n_list(n_spec)?;
    let rows = gaps::convergence_report(&vs, &ns)?;
    let parameters = json!({
        "command": "converge",
        "v": v_spec,
        "n_list": n_spec,
        "format": format_name(format),
    });
    let (stdout, files) = match format {
        Format::Csv => {
            let csv = render::convergence_csv(&rows, common.digits);
            (csv.clone(), vec![("converge.csv".into(), csv)])
        }
        Format::Json => {
            let doc = render::convergence_json(&rows, common.digits);
            let text = format!("{doc:#}\n");
            (text.clone(), vec![("converge.json".into(), text)])
        }
        Format::Grid => unreachable!("rejected above"),
    };
    Ok(RunOutput { stdout, files, parameters, exit: ExitCode::SUCCESS })
}

fn parse_gap_vectors(spec: &str) -> Result<Vec<GapVector>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        let components: Vec<u32> = part
            .split(',')
            .map(|c| c.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| usage(format!("bad gap vector {part:?} in --v")))?;
        out.push(GapVector::new(components)?);
    }
    if out.is_empty() {
        return Err(usage("--v needs at least one gap vector, e.g. \"1,1;2,2\""));
    }
    Ok(out)
}

fn parse_n_list(spec: &str) -> Result<Vec<u64>, CliError> {
    let ns: Vec<u64> = spec
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("bad --n-list {spec:?}")))?;
    if ns.is_empty() {
        return Err(usage("--n-list needs at least one value"));
    }
    Ok(ns)
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Grid => "grid",
    }
}
