//! Command dispatch for the `harnack` binary.
//!
//! Exit codes: 0 when every asserted bound holds, 1 on a violation or a
//! conjecture finding, 2 on any input error. JSON goes to stdout (or
//! `--output`); diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harnack::inequalities::{
    conjecture_eval, counterexample_with, harnack_bounds, published_matrices, verify_corollary,
    verify_general_lower, verify_marcus, verify_multi, verify_psd, verify_tung,
    CounterexampleOutcome, EnsembleSpec, ExtendedReal, InequalityReport,
};
use harnack::linalg::{haar_unitary, svd_values, ComplexMatrix, RngState};
use harnack::majorization::WeightVector;
use harnack::search::{run_search, InequalityKind, MatrixKind, SearchConfig, WeightKind};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "HARNACK_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "harnack",
    version,
    about = "Verify Harnack-type determinant bounds for contractive matrices"
)]
struct Cli {
    /// Write the JSON document here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one inequality on matrices read from JSON files.
    Verify(VerifyArgs),
    /// Print singular values and the two-sided bound products of one matrix.
    Bounds {
        /// Matrix JSON file.
        file: PathBuf,
    },
    /// Seeded Monte-Carlo search over random instances.
    Search(SearchArgs),
    /// Recompute the published 2x2 counterexample.
    Repro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Tung,
    Marcus,
    GeneralLower,
    Psd,
    Multi,
    Corollary,
    Conjecture,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Matrix JSON files; several for multi, corollary and conjecture.
    #[arg(required = true)]
    files: Vec<PathBuf>,

    #[arg(long, value_enum)]
    theorem: Theorem,

    /// identity, neg-identity, haar:SEED or a matrix JSON file.
    #[arg(long)]
    unitary: Option<String>,

    /// Comma-separated convex weights; defaults to uniform.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    inequality: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// psd, general-contraction or polar-shifted.
    #[arg(long, default_value = "psd")]
    kind: String,
    /// uniform or dirichlet-flat.
    #[arg(long, default_value = "uniform")]
    weight_kind: String,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_EIG_LO)]
    eig_lo: f64,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_EIG_HI)]
    eig_hi: f64,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_TOP_K)]
    top_k: usize,
}

/// A one-line diagnostic that maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl From<harnack::Error> for InputError {
    fn from(e: harnack::Error) -> Self {
        InputError(format!("{}: {e}", e.kind()))
    }
}

/// A rendered document plus its exit code and stderr notes.
struct Rendered {
    json: String,
    code: i32,
    notes: Vec<String>,
}

fn render<T: Serialize>(value: &T, code: i32, notes: Vec<String>) -> Rendered {
    let json = serde_json::to_string_pretty(value).expect("report types serialize");
    Rendered { json, code, notes }
}

/// Names the first malformed field of a matrix document, if any can be
/// pinpointed structurally.
fn locate_bad_field(text: &str) -> Option<String> {
    use serde_json::Value;
    let doc: Value = serde_json::from_str(text).ok()?;
    let obj = doc.as_object()?;
    if !obj.get("n").is_some_and(Value::is_u64) {
        return Some("n: expected a positive integer".into());
    }
    let Some(rows) = obj.get("entries").and_then(Value::as_array) else {
        return Some("entries: expected an array of rows".into());
    };
    for (i, row) in rows.iter().enumerate() {
        let Some(row) = row.as_array() else {
            return Some(format!("entries[{i}]: expected an array"));
        };
        for (j, e) in row.iter().enumerate() {
            let ok = e.is_number()
                || e.as_array()
                    .is_some_and(|p| p.len() == 2 && p.iter().all(Value::is_number));
            if !ok {
                return Some(format!(
                    "entries[{i}][{j}]: expected a real number or a [re, im] pair, got {e}"
                ));
            }
        }
    }
    None
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let detail = locate_bad_field(&text).unwrap_or_else(|| e.to_string());
        InputError(format!("{}: {detail}", path.display()))
    })
}

enum UnitarySource {
    Identity,
    NegIdentity,
    Haar(u64),
    File(PathBuf),
}

impl FromStr for UnitarySource {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, InputError> {
        match s {
            "identity" => Ok(Self::Identity),
            "neg-identity" => Ok(Self::NegIdentity),
            _ => match s.strip_prefix("haar:") {
                Some(seed) => seed
                    .parse()
                    .map(Self::Haar)
                    .map_err(|_| InputError(format!("--unitary: bad seed in '{s}'"))),
                None => Ok(Self::File(PathBuf::from(s))),
            },
        }
    }
}

fn build_unitary(src: &str, n: usize) -> Result<ComplexMatrix, InputError> {
    let u = match src.parse::<UnitarySource>()? {
        UnitarySource::Identity => ComplexMatrix::identity(n)?,
        UnitarySource::NegIdentity => ComplexMatrix::identity(n)?.scale_real(-1.0),
        UnitarySource::Haar(seed) => haar_unitary(n, &mut RngState::new(seed, 0))?,
        UnitarySource::File(p) => load_matrix(&p)?,
    };
    if u.order() != n {
        return Err(InputError(format!(
            "--unitary: order {} does not match matrix order {n}",
            u.order()
        )));
    }
    Ok(u)
}

pub fn parse_weights(csv: &str) -> Result<WeightVector, InputError> {
    let raw = csv
        .split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| InputError(format!("--weights[{i}]: '{}' is not a number", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    WeightVector::new(raw).map_err(|e| InputError(format!("--weights: {e}")))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Rendered, InputError> {
    let zs = args
        .files
        .iter()
        .map(|p| load_matrix(p))
        .collect::<Result<Vec<_>, _>>()?;
    let n = zs[0].order();
    let single = matches!(
        args.theorem,
        Theorem::Tung | Theorem::Marcus | Theorem::GeneralLower | Theorem::Psd
    );
    if single && zs.len() != 1 {
        return Err(InputError(format!(
            "files: {:?} takes exactly one matrix, got {}",
            args.theorem,
            zs.len()
        )));
    }
    if single && args.weights.is_some() {
        return Err(InputError(
            "--weights: only used by multi, corollary and conjecture".into(),
        ));
    }
    let needs_u = !matches!(args.theorem, Theorem::Marcus | Theorem::Conjecture);
    let u = match (&args.unitary, needs_u) {
        (Some(src), true) => Some(build_unitary(src, n)?),
        (None, true) => return Err(InputError("--unitary: required for this theorem".into())),
        (Some(_), false) => {
            return Err(InputError(
                "--unitary: not used by marcus or conjecture".into(),
            ))
        }
        (None, false) => None,
    };
    let weights = || -> Result<WeightVector, InputError> {
        let w = match &args.weights {
            Some(csv) => parse_weights(csv)?,
            None => WeightVector::uniform(zs.len())?,
        };
        if w.len() != zs.len() {
            return Err(InputError(format!(
                "--weights: {} weights for {} matrices",
                w.len(),
                zs.len()
            )));
        }
        Ok(w)
    };

    let u = u.as_ref();
    let report: InequalityReport = match args.theorem {
        Theorem::Tung => verify_tung(&zs[0], u.unwrap())?,
        Theorem::Marcus => verify_marcus(&zs[0])?,
        Theorem::GeneralLower => verify_general_lower(&zs[0], u.unwrap())?,
        Theorem::Psd => verify_psd(&zs[0], u.unwrap())?,
        Theorem::Multi => verify_multi(&EnsembleSpec::new(zs.clone(), weights()?)?, u.unwrap())?,
        Theorem::Corollary => verify_corollary(&zs, &weights()?, u.unwrap())?,
        Theorem::Conjecture => conjecture_eval(&zs, &weights()?)?,
    };

    let mut notes = Vec::new();
    if args.theorem == Theorem::Conjecture {
        if !report.holds_lower {
            notes.push(format!(
                "finding: conjectured lower side fails (slack {:.6e})",
                report.slack_lower
            ));
        }
        if !report.holds_upper {
            notes.push(format!(
                "finding: conjectured upper side fails (slack {:.6e})",
                report.slack_upper
            ));
        }
    } else if !report.holds() {
        notes.push(format!("violation: min slack {:.6e}", report.min_slack()));
    }
    let code = if report.holds() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(render(&report, code, notes))
}

#[derive(Serialize)]
struct BoundsOutput {
    singular_values: Vec<f64>,
    lower: ExtendedReal,
    upper: ExtendedReal,
}

fn cmd_bounds(file: &Path) -> Result<Rendered, InputError> {
    let z = load_matrix(file)?;
    let s = svd_values(&z);
    let (lower, upper) = harnack_bounds(&s);
    let out = BoundsOutput {
        singular_values: s.into_vec(),
        lower,
        upper,
    };
    Ok(render(&out, EXIT_OK, vec![]))
}

fn cmd_search(a: &SearchArgs) -> Result<Rendered, InputError> {
    let cfg = SearchConfig {
        inequality: a.inequality.parse::<InequalityKind>()?,
        n: a.n,
        m: a.m,
        trials: a.trials,
        seed: a.seed,
        eig_lo: a.eig_lo,
        eig_hi: a.eig_hi,
        matrix_kind: a.kind.parse::<MatrixKind>()?,
        weight_kind: a.weight_kind.parse::<WeightKind>()?,
        top_k: a.top_k,
    };
    cfg.validate()?;
    let out = run_search(&cfg)?;
    let notes = vec![
        format!(
            "search: {} trials of {} (n={}, m={}, seed={}) in {:.2}s",
            cfg.trials,
            cfg.inequality,
            cfg.n,
            cfg.m,
            cfg.seed,
            out.stats.elapsed.as_secs_f64()
        ),
        format!(
            "search: {} violations, {} errors, min slack {}",
            out.stats.violation_count,
            out.stats.error_count,
            out.stats
                .min_slack
                .map_or_else(|| "n/a".to_string(), |s| format!("{s:.6e}"))
        ),
    ];
    let code = if out.has_violations() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    Ok(render(&out, code, notes))
}

/// Exit code for a counterexample reproduction.
pub fn repro_exit_code(out: &CounterexampleOutcome) -> i32 {
    if out.passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

/// Runs the reproduction on arbitrary matrices and writes its JSON; used
/// by tests to check that tampered inputs fail.
pub fn repro_with(
    z1: &ComplexMatrix,
    z2: &ComplexMatrix,
    u: &ComplexMatrix,
    stdout: &mut dyn Write,
) -> Result<i32, InputError> {
    let out = counterexample_with(z1, z2, u)?;
    let r = render(&out, repro_exit_code(&out), vec![]);
    writeln!(stdout, "{}", r.json).map_err(|e| InputError(format!("stdout: {e}")))?;
    Ok(r.code)
}

fn cmd_repro() -> Result<Rendered, InputError> {
    let (z1, z2, u) = published_matrices();
    let out = counterexample_with(&z1, &z2, &u)?;
    let notes = vec![format!(
        "repro: lower {:.4} (match {}), mid {:.4} (match {})",
        out.lower_rounded, out.lower_matches, out.mid_rounded, out.mid_matches
    )];
    Ok(render(&out, repro_exit_code(&out), notes))
}

fn emit(
    rendered: &Rendered,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), InputError> {
    match output {
        Some(p) => std::fs::write(p, format!("{}\n", rendered.json))
            .map_err(|e| InputError(format!("--output {}: {e}", p.display()))),
        None => {
            writeln!(stdout, "{}", rendered.json).map_err(|e| InputError(format!("stdout: {e}")))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return EXIT_INPUT;
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Bounds { file } => cmd_bounds(file),
        Command::Search(a) => cmd_search(a),
        Command::Repro => cmd_repro(),
    };
    let outcome = result.and_then(|r| {
        emit(&r, cli.output.as_deref(), stdout)?;
        Ok(r)
    });
    match outcome {
        Ok(r) => {
            for note in &r.notes {
                let _ = writeln!(stderr, "{note}");
            }
            r.code
        }
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}
