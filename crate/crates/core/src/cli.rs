//! The `discmax` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::corpus::{manifest_from_json, manifest_to_json, materialize, standard_corpus, GeneratorSpec};
use crate::czdecomp::{cz_decompose, CZParams};
use crate::error::Error;
use crate::maxops::{CenteredDivisor, Operator, OperatorConfig, Profile};
use crate::seq::{FiniteSequence, IntInterval};
use crate::verify::{
    certified_window, estimate_constant, lp_power_certified, run_checks, CheckId, Corpus, RatioId, SearchConfig,
    VerificationReport, VerifyConfig,
};

/// Exit status: success, or every check passed.
pub const EXIT_OK: i32 = 0;
/// Exit status: at least one inequality violation (the report is still written).
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status: bad flags or unreadable input.
pub const EXIT_USAGE: i32 = 2;

const MAX_EVAL_POINTS: u64 = 1 << 24;

#[derive(Debug, Parser)]
#[command(name = "discmax", version, about = "Discrete maximal operators on finitely supported sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an operator over a window and write CSV "m,value".
    Eval(EvalArgs),
    /// Calderón-Zygmund decomposition at height t.
    Cz(CzArgs),
    /// Run one check or all checks over a corpus manifest.
    Verify(VerifyArgs),
    /// Search for an extremal ratio.
    Constants(ConstantsArgs),
    /// Certified ℓᵖ powers of operator outputs.
    Norms(NormsArgs),
    /// Materialize a corpus manifest into sequence files.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct OperatorFlags {
    /// Centered divisor: 2r+1 or 2r.
    #[arg(long, default_value = "2r+1")]
    divisor: String,
    /// Smallest dyadic level of M_d.
    #[arg(long, default_value_t = 1)]
    min_level: u32,
    /// Leave one-point intervals out of M and M♯.
    #[arg(long)]
    no_singletons: bool,
}

impl OperatorFlags {
    fn config(&self) -> Result<OperatorConfig, CliError> {
        let divisor: CenteredDivisor = self.divisor.parse().map_err(flag("--divisor"))?;
        if self.min_level > crate::dyadic::MAX_LEVEL {
            return Err(CliError::usage(format!(
                "--min-level: {} exceeds the largest level {}",
                self.min_level,
                crate::dyadic::MAX_LEVEL
            )));
        }
        Ok(OperatorConfig {
            centered_divisor: divisor,
            dyadic_min_level: self.min_level,
            include_singleton_intervals: !self.no_singletons,
        })
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// centered, uncentered, dyadic or sharp.
    #[arg(long)]
    op: String,
    /// Sequence file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Window lo:hi (default: the certified window).
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    ops: OperatorFlags,
}

#[derive(Debug, Args)]
struct CzArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Height.
    #[arg(long)]
    t: f64,
    /// Fractional exponent in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    min_level: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Check id, or "all".
    #[arg(long)]
    check: String,
    /// Corpus manifest (JSON list of generator specs).
    #[arg(long)]
    corpus: PathBuf,
    /// JSON report (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat CSV of per-sequence rows.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Comma-separated exponents for lp_domination.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Comma-separated γ values for good_lambda.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// Comma-separated λ values (default: breakpoint grids).
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Relative slack for real inequalities.
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    ops: OperatorFlags,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    /// sandwich_pointwise, weak_compare or fefferman_stein_p.
    #[arg(long)]
    ratio: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    restarts: u32,
    #[arg(long, default_value_t = 200)]
    iterations: u32,
    #[arg(long, default_value_t = 8)]
    width: usize,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    ops: OperatorFlags,
}

#[derive(Debug, Args)]
struct NormsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// One operator (default: all four).
    #[arg(long)]
    op: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3")]
    p: Vec<f64>,
    /// Relative accuracy aimed for.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    ops: OperatorFlags,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["corpus", "standard"]))]
struct GenArgs {
    /// Corpus manifest.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Use the built-in 1000-sequence corpus.
    #[arg(long)]
    standard: bool,
    /// Directory for seq_NNNN.json files and manifest.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Prefixes a library error with the flag or file it came from.
fn flag(name: impl std::fmt::Display) -> impl FnOnce(Error) -> CliError {
    move |e| CliError::usage(format!("{name}: {e}"))
}

fn read_text(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{what} {}: {}", path.display(), Error::io(path, e))))
}

fn read_sequence(path: &Path) -> Result<FiniteSequence, CliError> {
    let text = read_text(path, "--in")?;
    FiniteSequence::from_json(&text).map_err(flag(format!("--in {}", path.display())))
}

fn read_manifest(path: &Path) -> Result<Vec<GeneratorSpec>, CliError> {
    let text = read_text(path, "--corpus")?;
    manifest_from_json(&text).map_err(flag(format!("--corpus {}", path.display())))
}

fn write_output(out: Option<&Path>, what: &str, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("{what} {}: {}", path.display(), Error::io(path, e)))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::usage(format!("stdout: {e}")))
        }
    }
}

fn parse_window(text: &str) -> Result<IntInterval, CliError> {
    let bad = || CliError::usage(format!("--window: expected lo:hi with integers lo <= hi, got '{text}'"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    IntInterval::new(lo, hi).map_err(flag("--window"))
}

fn positive_finite(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!("{name}: {v} must be positive and finite")))
    }
}

fn csv_values(rows: impl Iterator<Item = (i64, f64)>) -> String {
    let mut s = String::from("m,value\n");
    for (m, v) in rows {
        let _ = writeln!(s, "{m},{v:?}");
    }
    s
}

fn eval(args: &EvalArgs) -> Result<i32, CliError> {
    let op: Operator = args.op.parse().map_err(flag("--op"))?;
    let cfg = args.ops.config()?;
    let window = args.window.as_deref().map(parse_window).transpose()?;
    let a = read_sequence(&args.input)?;
    let window = window.or_else(|| certified_window(&a));
    if let Some(w) = window {
        if w.len() > MAX_EVAL_POINTS {
            return Err(CliError::usage(format!(
                "--window: {} points exceed the limit of {MAX_EVAL_POINTS}",
                w.len()
            )));
        }
    }
    let profile = Profile::new(&a, op, &cfg);
    let csv = csv_values(window.into_iter().flat_map(|w| w.iter()).map(|m| (m, profile.at(m))));
    write_output(args.out.as_deref(), "--out", &csv)?;
    Ok(EXIT_OK)
}

fn cz(args: &CzArgs) -> Result<i32, CliError> {
    positive_finite("--t", args.t)?;
    if !(0.0..1.0).contains(&args.alpha) {
        return Err(CliError::usage(format!("--alpha: {} must lie in [0, 1)", args.alpha)));
    }
    let a = read_sequence(&args.input)?;
    let params = CZParams {
        min_level: args.min_level,
        ..CZParams::new(args.t, args.alpha)
    };
    let result = cz_decompose(&a, &params).map_err(flag("--t/--alpha/--min-level"))?;
    let mut json = result.to_json();
    json.push('\n');
    write_output(args.out.as_deref(), "--out", &json)?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let checks: Vec<CheckId> = if args.check == "all" {
        CheckId::ALL.to_vec()
    } else {
        vec![CheckId::ALL
            .into_iter()
            .find(|c| c.name() == args.check)
            .ok_or_else(|| {
                let names: Vec<&str> = CheckId::ALL.iter().map(|c| c.name()).collect();
                CliError::usage(format!(
                    "--check: unknown check '{}' (expected all, {})",
                    args.check,
                    names.join(", ")
                ))
            })?]
    };
    let mut cfg = VerifyConfig {
        operators: args.ops.config()?,
        ..VerifyConfig::default()
    };
    if let Some(p) = &args.p {
        if let Some(&bad) = p.iter().find(|&&p| !(p > 1.0 && p.is_finite())) {
            return Err(CliError::usage(format!("--p: {bad} must be > 1 and finite")));
        }
        cfg.p_grid = p.clone();
    }
    if let Some(g) = &args.gamma {
        for &v in g {
            positive_finite("--gamma", v)?;
        }
        cfg.gamma_grid = g.clone();
    }
    if let Some(l) = &args.lambda {
        for &v in l {
            positive_finite("--lambda", v)?;
        }
        cfg.lambdas = l.clone();
    }
    if let Some(tol) = args.tolerance {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::usage(format!("--tolerance: {tol} must be >= 0 and finite")));
        }
        cfg.tolerance = tol;
    }
    let specs = read_manifest(&args.corpus)?;
    let sequences = materialize(&specs).map_err(flag(format!("--corpus {}", args.corpus.display())))?;
    let corpus = Corpus::new(args.corpus.display().to_string(), sequences);
    let reports = run_checks(&checks, &corpus, &cfg).map_err(flag("verify"))?;

    let mut json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    };
    json.push('\n');
    if let Some(path) = &args.csv {
        let mut csv = String::from(VerificationReport::csv_header());
        for r in &reports {
            csv.push_str(&r.csv_rows());
        }
        write_output(Some(path), "--csv", &csv)?;
    }
    write_output(args.out.as_deref(), "--out", &json)?;
    for r in &reports {
        eprintln!(
            "{}: {} ({} violations, extremal ratio {})",
            r.check_id,
            if r.pass { "pass" } else { "FAIL" },
            r.violations.len(),
            r.extremal_ratio
        );
    }
    Ok(if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[derive(Serialize)]
struct ConstantsOutput<'a> {
    ratio_id: RatioId,
    best_ratio: f64,
    witness: serde_json::Value,
    search: &'a SearchConfig,
}

fn constants(args: &ConstantsArgs) -> Result<i32, CliError> {
    let id: RatioId = args.ratio.parse().map_err(flag("--ratio"))?;
    if args.width == 0 || args.width > 4096 {
        return Err(CliError::usage(format!("--width: {} must lie in 1..=4096", args.width)));
    }
    if !(args.p > 1.0 && args.p.is_finite()) {
        return Err(CliError::usage(format!("--p: {} must be > 1 and finite", args.p)));
    }
    let search = SearchConfig {
        seed: args.seed,
        restarts: args.restarts,
        iterations: args.iterations,
        width: args.width,
        p: args.p,
        operators: args.ops.config()?,
    };
    let result = estimate_constant(id, &search).map_err(flag("constants"))?;
    let out = ConstantsOutput {
        ratio_id: id,
        best_ratio: result.best_ratio,
        witness: serde_json::from_str(&result.witness.to_json()).expect("sequence json"),
        search: &search,
    };
    let mut json = serde_json::to_string_pretty(&out).expect("output serializes");
    json.push('\n');
    write_output(args.out.as_deref(), "--out", &json)?;
    Ok(EXIT_OK)
}

fn norms(args: &NormsArgs) -> Result<i32, CliError> {
    let ops: Vec<Operator> = match &args.op {
        Some(s) => vec![s.parse().map_err(flag("--op"))?],
        None => Operator::ALL.to_vec(),
    };
    for &p in &args.p {
        if !(p > 1.0 && p.is_finite()) {
            return Err(CliError::usage(format!("--p: {p} must be > 1 and finite")));
        }
    }
    positive_finite("--eps", args.eps)?;
    let cfg = args.ops.config()?;
    let a = read_sequence(&args.input)?;
    let mut csv = String::from("op,p,value,tail_bound\n");
    for op in ops {
        for &p in &args.p {
            let s = lp_power_certified(op, &a, p, args.eps, &cfg).map_err(flag("--p"))?;
            let _ = writeln!(csv, "{},{p:?},{:?},{:?}", op.name(), s.value, s.tail_bound);
        }
    }
    write_output(args.out.as_deref(), "--out", &csv)?;
    Ok(EXIT_OK)
}

fn gen(args: &GenArgs) -> Result<i32, CliError> {
    let specs = match &args.corpus {
        Some(path) => read_manifest(path)?,
        None => standard_corpus(),
    };
    let what = args
        .corpus
        .as_ref()
        .map_or_else(|| "--standard".to_string(), |p| format!("--corpus {}", p.display()));
    let sequences = materialize(&specs).map_err(flag(what))?;
    let dir = &args.out_dir;
    fs::create_dir_all(dir)
        .map_err(|e| CliError::usage(format!("--out-dir {}: {}", dir.display(), Error::io(dir, e))))?;
    let digits = sequences.len().saturating_sub(1).to_string().len().max(4);
    for (i, a) in sequences.iter().enumerate() {
        let path = dir.join(format!("seq_{i:0digits$}.json"));
        write_output(Some(&path), "--out-dir", &(a.to_json() + "\n"))?;
    }
    write_output(Some(&dir.join("manifest.json")), "--out-dir", &(manifest_to_json(&specs) + "\n"))?;
    Ok(EXIT_OK)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Cz(a) => cz(a),
        Command::Verify(a) => verify(a),
        Command::Constants(a) => constants(a),
        Command::Norms(a) => norms(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("discmax: {}", e.message);
            e.code
        }
    }
}
