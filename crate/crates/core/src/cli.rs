//! Command-line front end: `simulate`, `estimate`, `sweep` and `verify`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or I/O error, 3 failed
//! verification. Output never contains timestamps, so identical invocations
//! produce identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::estimator::{default_block_size, default_hill_k, estimate_beta, hill_estimator};
use crate::montecarlo::{mc_sweep, with_threads};
use crate::samplers::{sample_log_y, sample_x, substream, DistSpec};
use crate::special_fn::Alpha;
use crate::statistics::PositiveSample;
use crate::tolerances::DEFAULT_LEVY_TOL;
use crate::verify::{run_verify, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Header of `estimate --format csv`.
pub const ESTIMATE_CSV_HEADER: &str =
    "alpha,n,block_size,n_blocks,gamma_hat,gamma_stderr,beta_hat,ci_low,ci_high,hill_beta,hill_k,seed";

#[derive(Debug, Parser)]
#[command(name = "heavyratio", version, about = "Ratio statistics for heavy-tailed samples")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write n draws from a distribution, one per line.
    Simulate(SimulateArgs),
    /// Estimate the tail index of a positive sample.
    Estimate(EstimateArgs),
    /// Tabulate E S_n(alpha) over a grid of sample sizes.
    Sweep(SweepArgs),
    /// Run the numerical verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// e.g. pareto:0.5, slowvary, posstable:0.5, exp:1, normal:1, rademacher, symstable:1.5:1
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Data file; `-` or omitted reads standard input.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub block_size: Option<usize>,
    #[arg(long)]
    pub hill_k: Option<usize>,
    /// Echoed into the report.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long)]
    pub alpha: f64,
    /// Comma-separated sample sizes, e.g. 100,1000,10000
    #[arg(long)]
    pub n_grid: String,
    #[arg(long, default_value_t = 200)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run (comma-separated); default all.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Check the LePage oracle at this beta only.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Alpha for --beta (default 2).
    #[arg(long, requires = "beta")]
    pub alpha: Option<f64>,
    /// Replace every check's tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_LEVY_TOL)]
    pub levy_tol: f64,
    /// LePage replicates per grid point.
    #[arg(long, default_value_t = 20_000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn data(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_DATA,
        message: message.into(),
    }
}

fn io_failure(what: &str, e: io::Error) -> Failure {
    data(format!("{what}: {e}"))
}

/// Parameter problems are usage errors; everything else is a data error.
fn classify(e: Error) -> Failure {
    match e {
        Error::Domain { .. } | Error::InvalidParameter(_) | Error::InsufficientData { .. } => usage(e.to_string()),
        _ => data(e.to_string()),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let threads = cli.threads;
    let piped = match &cli.command {
        Command::Estimate(a) if a.input.as_ref().is_none_or(|p| p.as_os_str() == "-") => {
            let mut s = String::new();
            if let Err(e) = stdin.read_to_string(&mut s) {
                let _ = writeln!(stderr, "error: cannot read standard input: {e}");
                return EXIT_DATA;
            }
            Some(s)
        }
        _ => None,
    };
    let outcome = match with_threads(threads, || dispatch(cli.command, piped)) {
        Ok(r) => r,
        Err(e) => Err(classify(e)),
    };
    match outcome.and_then(|(code, bytes, out)| emit(&bytes, out, stdout).map(|_| code)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

type Output = (i32, Vec<u8>, Option<PathBuf>);

fn dispatch(command: Command, piped: Option<String>) -> std::result::Result<Output, Failure> {
    match command {
        Command::Simulate(a) => {
            let out = a.out.clone();
            simulate(&a).map(|b| (EXIT_OK, b, out))
        }
        Command::Estimate(a) => {
            let out = a.out.clone();
            estimate(&a, piped).map(|b| (EXIT_OK, b, out))
        }
        Command::Sweep(a) => {
            let out = a.out.clone();
            sweep(&a).map(|b| (EXIT_OK, b, out))
        }
        Command::Verify(a) => {
            let out = a.out.clone();
            verify(&a).map(|(code, b)| (code, b, out))
        }
    }
}

fn emit(bytes: &[u8], out: Option<PathBuf>, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| io_failure(&format!("cannot create {}", path.display()), e))?;
            let mut w = BufWriter::new(file);
            w.write_all(bytes)
                .and_then(|_| w.flush())
                .map_err(|e| io_failure(&format!("cannot write {}", path.display()), e))
        }
        None => stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| io_failure("cannot write output", e)),
    }
}

fn parse_alpha(v: f64) -> std::result::Result<Alpha, Failure> {
    Alpha::new(v).map_err(classify)
}

fn parse_dist(s: &str) -> std::result::Result<DistSpec, Failure> {
    s.parse::<DistSpec>().map_err(|e| usage(format!("--dist: {e}")))
}

/// Decimal form of `e^l`; values beyond `f64::MAX` are written as
/// `<mantissa>e<exponent>` computed from the logarithm.
pub fn format_from_log(l: f64) -> String {
    let v = l.exp();
    if v.is_finite() && v > 0.0 {
        return format!("{v:e}");
    }
    let e10 = l / std::f64::consts::LN_10;
    let mut exp = e10.floor();
    let mut mantissa = 10f64.powf(e10 - exp);
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exp += 1.0;
    }
    format!("{mantissa}e{exp}")
}

/// Natural log of a positive decimal, accepting magnitudes outside the
/// `f64` range. `None` for anything that is not a positive finite number.
pub fn parse_log_value(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    if v.is_nan() || v < 0.0 {
        return None;
    }
    if v.is_finite() && v > 0.0 {
        return Some(v.ln());
    }
    let lower = s.to_ascii_lowercase();
    if lower.contains("inf") {
        return None;
    }
    // out of range: split into mantissa and decimal exponent
    let (m, e) = lower.split_once('e')?;
    let m: f64 = m.parse().ok()?;
    let e: i64 = e.parse().ok()?;
    (m > 0.0 && m.is_finite()).then(|| m.ln() + e as f64 * std::f64::consts::LN_10)
}

/// Reads a data file: one value per line, `#` comments and blank lines skipped.
pub fn read_positive_sample(text: &str) -> std::result::Result<PositiveSample, String> {
    let mut logs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match parse_log_value(t) {
            Some(l) => logs.push(l),
            None => {
                return Err(format!(
                    "line {}: '{t}' is not a positive finite number",
                    i + 1
                ))
            }
        }
    }
    PositiveSample::from_logs(logs).map_err(|_| "data file contains no values".to_string())
}

fn simulate(a: &SimulateArgs) -> std::result::Result<Vec<u8>, Failure> {
    let spec = parse_dist(&a.dist)?;
    let mut stream = substream(a.seed, 0);
    let mut buf = Vec::with_capacity(a.n * 24);
    match spec {
        DistSpec::Y(y) => {
            for l in sample_log_y(&y, a.n, &mut stream).map_err(classify)? {
                writeln!(buf, "{}", format_from_log(l)).expect("vec write");
            }
        }
        DistSpec::X(x) => {
            for v in sample_x(&x, a.n, &mut stream).map_err(classify)? {
                writeln!(buf, "{v:e}").expect("vec write");
            }
        }
    }
    Ok(buf)
}

#[derive(Debug, Serialize)]
struct EstimateReport {
    command: &'static str,
    alpha: f64,
    n: usize,
    block_size: usize,
    n_blocks: usize,
    gamma_hat: f64,
    gamma_stderr: f64,
    beta_hat: f64,
    ci_low: f64,
    ci_high: f64,
    hill_beta: f64,
    hill_k: usize,
    seed: u64,
}

fn estimate(a: &EstimateArgs, piped: Option<String>) -> std::result::Result<Vec<u8>, Failure> {
    let alpha = parse_alpha(a.alpha)?;
    let text = match (piped, &a.input) {
        (Some(s), _) => s,
        (None, Some(p)) => {
            std::fs::read_to_string(p).map_err(|e| io_failure(&format!("cannot read {}", p.display()), e))?
        }
        (None, None) => String::new(),
    };
    let sample = read_positive_sample(&text).map_err(data)?;
    let n = sample.len();
    let block_size = a.block_size.unwrap_or_else(|| default_block_size(n));
    let est = estimate_beta(&sample, alpha, block_size).map_err(classify)?;
    let hill_k = a.hill_k.unwrap_or_else(|| default_hill_k(n));
    let hill_beta = hill_estimator(&sample, hill_k).map_err(|e| match a.hill_k {
        Some(_) => usage(format!("--hill-k: {e}")),
        None => data(e.to_string()),
    })?;
    let report = EstimateReport {
        command: "estimate",
        alpha: alpha.value(),
        n,
        block_size,
        n_blocks: est.gamma_hat.replicates,
        gamma_hat: est.gamma_hat.mean,
        gamma_stderr: est.gamma_hat.stderr,
        beta_hat: est.beta_hat,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        hill_beta,
        hill_k,
        seed: a.seed,
    };
    Ok(match a.format {
        Format::Json => json_bytes(&report),
        Format::Csv => {
            let r = &report;
            format!(
                "{ESTIMATE_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.alpha,
                r.n,
                r.block_size,
                r.n_blocks,
                r.gamma_hat,
                r.gamma_stderr,
                r.beta_hat,
                r.ci_low,
                r.ci_high,
                r.hill_beta,
                r.hill_k,
                r.seed
            )
            .into_bytes()
        }
    })
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report serializes");
    v.push(b'\n');
    v
}

/// Parses `100,1000,10000` into sizes; every entry must be a positive integer.
pub fn parse_n_grid(s: &str) -> std::result::Result<Vec<usize>, String> {
    let grid = s
        .split(',')
        .map(|p| {
            let p = p.trim();
            match p.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(format!("--n-grid: '{p}' is not a positive integer")),
            }
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(grid)
}

fn sweep(a: &SweepArgs) -> std::result::Result<Vec<u8>, Failure> {
    let alpha = parse_alpha(a.alpha)?;
    let yspec = match parse_dist(&a.dist)? {
        DistSpec::Y(y) => y,
        DistSpec::X(x) => return Err(usage(format!("--dist: sweep needs a positive family, got {x}"))),
    };
    let grid = parse_n_grid(&a.n_grid).map_err(usage)?;
    let table = mc_sweep(&yspec, alpha, &grid, a.replicates, a.seed).map_err(classify)?;
    Ok(table.to_csv().into_bytes())
}

fn verify(a: &VerifyArgs) -> std::result::Result<(i32, Vec<u8>), Failure> {
    let suites = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .iter()
            .map(|s| s.parse::<Suite>().map_err(|e| usage(format!("--suite: {e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?
    };
    let cfg = VerifyConfig {
        suites,
        seed: a.seed,
        levy_tol: a.levy_tol,
        levy_replicates: a.replicates,
        levy_point: a.beta.map(|b| (b, a.alpha.unwrap_or(2.0))),
        tol_override: a.tol,
        ..VerifyConfig::default()
    };
    let report = run_verify(&cfg).map_err(classify)?;
    let code = if report.all_pass { EXIT_OK } else { EXIT_VERIFY };
    Ok((code, json_bytes(&report)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_value_round_trip() {
        for l in [-3.0, 0.0, 1.5, 700.0, 709.7, 800.0, 1e4, 1e6] {
            let s = format_from_log(l);
            let back = parse_log_value(&s).unwrap();
            assert!((back - l).abs() <= 1e-12 * l.abs().max(1.0), "{l} -> {s} -> {back}");
        }
    }

    #[test]
    fn bad_values_rejected() {
        for s in ["0", "-1", "nan", "NaN", "inf", "-inf", "1e99999x", "abc", ""] {
            assert!(parse_log_value(s).is_none(), "{s}");
        }
        assert!(parse_log_value("2e400").is_some());
    }

    #[test]
    fn data_file_reports_line() {
        let err = read_positive_sample("# header\n1.5\n\n0\n").unwrap_err();
        assert!(err.starts_with("line 4"), "{err}");
        assert_eq!(read_positive_sample("# x\n2\n3e0\n").unwrap().len(), 2);
        assert!(read_positive_sample("# only comments\n").is_err());
    }

    #[test]
    fn n_grid_parsing() {
        assert_eq!(parse_n_grid("100,1000, 10000").unwrap(), vec![100, 1000, 10000]);
        assert!(parse_n_grid("100,,1000").is_err());
        assert!(parse_n_grid("10,-5").is_err());
        assert!(parse_n_grid("0").is_err());
    }
}
