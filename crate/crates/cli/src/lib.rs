//! Subcommand implementations for the `charpoly` binary.
//!
//! Every command returns its rendered output together with the process exit
//! code, so the binary itself only parses flags and prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use charpoly::berkowitz::{det_from_char_poly, multiply_columns, toeplitz_columns};
use charpoly::clow::{clow_sum_coefficients, enumerate_clow_sequences, minor_sum_coefficients};
use charpoly::identities::{run_check, Check};
use charpoly::random::TrialRng;
use charpoly::{depth_report, matrix_file, CoefficientVector, Matrix, Mode, RingElement, RingSpec};
use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const RESOURCE_CAP: u8 = 3;
}

/// Environment variable overriding the enumeration cap.
pub const ENUM_CAP_VAR: &str = "CHARPOLY_ENUM_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: charpoly::Error,
    },
    #[error(transparent)]
    Core(#[from] charpoly::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Input { source, .. } | CliError::Core(source) => source,
            _ => return exit::USAGE,
        };
        match core {
            charpoly::Error::EnumerationTooLarge { .. } | charpoly::Error::SizeOverCap { .. } => {
                exit::RESOURCE_CAP
            }
            _ => exit::USAGE,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Rendered output plus exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            code: exit::OK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Berkowitz,
    ClowOracle,
    MinorSum,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Berkowitz => "berkowitz",
            Algorithm::ClowOracle => "clow-oracle",
            Algorithm::MinorSum => "minor-sum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    #[default]
    Sequential,
    Parallel,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sequential => Mode::Sequential,
            ModeArg::Parallel => Mode::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Emit {
    #[default]
    Text,
    JsonLines,
}

/// Parse `int`, `rational`, `mod:<p>` or `mod <p>`.
pub fn parse_ring_flag(text: &str) -> Result<RingSpec, String> {
    matrix_file::parse_ring(&text.replacen(':', " ", 1)).map_err(|e| e.to_string())
}

/// Enumeration cap from the environment value, defaulting to 10^6.
pub fn enum_cap_from(value: Option<&str>) -> Result<u64> {
    match value {
        None => Ok(charpoly::DEFAULT_ENUM_CAP),
        Some(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{ENUM_CAP_VAR} must be a nonnegative integer, got {v:?}"
            ))
        }),
    }
}

pub fn read_matrix(path: &Path, ring: Option<RingSpec>) -> Result<Matrix> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    matrix_file::parse(&text, ring).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn join(coeffs: &[RingElement]) -> String {
    coeffs
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct ComputeRecord<'a> {
    algorithm: &'a str,
    ring: String,
    n: usize,
    coefficients: Vec<String>,
    determinant: String,
}

pub struct ComputeArgs<'a> {
    pub input: &'a Path,
    pub ring: Option<RingSpec>,
    pub algorithm: Algorithm,
    pub mode: ModeArg,
    pub emit: Emit,
    pub enum_cap: u64,
}

pub fn cmd_compute(args: &ComputeArgs<'_>) -> Result<Output> {
    let a = read_matrix(args.input, args.ring)?;
    let coeffs = match args.algorithm {
        Algorithm::Berkowitz => charpoly::char_poly(&a, args.mode.into())?.coeffs,
        Algorithm::ClowOracle => clow_sum_coefficients(&a, args.enum_cap)?,
        Algorithm::MinorSum => minor_sum_coefficients(&a, args.enum_cap)?,
    };
    let det = det_from_char_poly(&CoefficientVector {
        coeffs: coeffs.clone(),
    });
    let text = match args.emit {
        Emit::Text => format!(
            "algorithm: {}\nring: {}\nn: {}\ncoefficients: {}\ndeterminant: {}\n",
            args.algorithm.name(),
            a.spec(),
            a.rows(),
            join(&coeffs),
            det
        ),
        Emit::JsonLines => json_line(&ComputeRecord {
            algorithm: args.algorithm.name(),
            ring: a.spec().to_string(),
            n: a.rows(),
            coefficients: coeffs.iter().map(ToString::to_string).collect(),
            determinant: det.to_string(),
        }),
    };
    Ok(Output::ok(text))
}

fn json_line<T: Serialize>(record: &T) -> String {
    let mut line = serde_json::to_string(record).expect("records serialize");
    line.push('\n');
    line
}

pub struct EnumerateArgs<'a> {
    pub n: Option<usize>,
    pub length: usize,
    pub with_signs: bool,
    pub matrix: Option<&'a Path>,
    pub enum_cap: u64,
}

/// One clow sequence per line in canonical order, optionally with its sign
/// and, given a matrix, its weight monomial and value.
pub fn cmd_enumerate(args: &EnumerateArgs<'_>) -> Result<Output> {
    let matrix = args.matrix.map(|p| read_matrix(p, None)).transpose()?;
    let n = match (args.n, &matrix) {
        (Some(n), Some(m)) if n != m.rows() => {
            return Err(CliError::Usage(format!(
                "--n {n} does not match the {}x{} matrix",
                m.rows(),
                m.rows()
            )))
        }
        (Some(n), _) => n,
        (None, Some(m)) => m.rows(),
        (None, None) => return Err(CliError::Usage("either --n or --matrix is required".into())),
    };
    let seqs = enumerate_clow_sequences(n, args.length, args.enum_cap)?;
    let mut text = String::new();
    for cs in &seqs {
        text.push_str(&cs.to_string());
        if args.with_signs {
            let _ = write!(
                text,
                "\tsign={}",
                if cs.sign_is_negative() { "-1" } else { "+1" }
            );
        }
        if let Some(m) = &matrix {
            let _ = write!(text, "\tweight={}={}", cs.monomial(), cs.weight(m));
        }
        text.push('\n');
    }
    Ok(Output::ok(text))
}

pub struct VerifyArgs<'a> {
    pub check: &'a str,
    pub size: usize,
    pub trials: usize,
    pub seed: u64,
    pub ring: RingSpec,
    pub emit: Emit,
    pub enum_cap: u64,
}

/// Run one named check, or every check for `all`. The 3x3 structure check
/// always runs at size 3 under `all`.
pub fn cmd_verify(args: &VerifyArgs<'_>) -> Result<Output> {
    let checks: Vec<(Check, usize)> = if args.check == "all" {
        Check::ALL
            .into_iter()
            .map(|c| {
                let size = if c == Check::BerkowitzStructure3x3 {
                    3
                } else {
                    args.size
                };
                (c, size)
            })
            .collect()
    } else {
        vec![(args.check.parse::<Check>()?, args.size)]
    };
    let mut text = String::new();
    let mut failed = 0;
    for (i, (check, size)) in checks.iter().enumerate() {
        let report = run_check(
            *check,
            *size,
            args.trials,
            args.seed,
            args.ring,
            args.enum_cap,
        )?;
        if !report.passed() {
            failed += 1;
        }
        match args.emit {
            Emit::Text => {
                if i > 0 {
                    text.push('\n');
                }
                text.push_str(&report.render_text());
            }
            Emit::JsonLines => text.push_str(&json_line(&report)),
        }
    }
    if args.emit == Emit::Text && checks.len() > 1 {
        let _ = writeln!(text, "\nsummary: {} checks, {failed} failed", checks.len());
    }
    Ok(Output {
        text,
        code: if failed == 0 {
            exit::OK
        } else {
            exit::VERIFY_FAILED
        },
    })
}

pub struct BenchArgs {
    pub size: usize,
    pub ring: RingSpec,
    pub mode: ModeArg,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRun {
    pub columns: Duration,
    pub product: Duration,
}

/// Time the two Berkowitz phases on a seeded random matrix.
pub fn cmd_bench(args: &BenchArgs) -> Result<Output> {
    if args.size == 0 {
        return Err(CliError::Usage("--size must be at least 1".into()));
    }
    let a = TrialRng::new(args.seed, 0).matrix(args.ring, args.size);
    let mode: Mode = args.mode.into();
    let depth = depth_report(&a)?;
    let mut runs = Vec::with_capacity(args.repeats);
    let mut reference = None;
    for _ in 0..args.repeats.max(1) {
        let start = Instant::now();
        let columns = toeplitz_columns(&a, mode)?;
        let built = Instant::now();
        let p = multiply_columns(&columns, mode)?;
        let done = Instant::now();
        if let Some(prev) = &reference {
            if *prev != p {
                return Err(CliError::Usage(
                    "nondeterministic result across repeats".into(),
                ));
            }
        }
        reference = Some(p);
        runs.push(BenchRun {
            columns: built - start,
            product: done - built,
        });
    }
    let mut text = String::new();
    let _ = writeln!(text, "n: {}", args.size);
    let _ = writeln!(text, "ring: {}", args.ring);
    let _ = writeln!(
        text,
        "mode: {}",
        if mode == Mode::Parallel {
            "parallel"
        } else {
            "sequential"
        }
    );
    let _ = writeln!(text, "column_stages: {}", depth.column_stages);
    let _ = writeln!(text, "product_stages: {}", depth.product_stages);
    let _ = writeln!(text, "total_stages: {}", depth.total_stages);
    let _ = writeln!(
        text,
        "{:<8}{:>14}{:>14}{:>14}",
        "repeat", "columns_ms", "product_ms", "total_ms"
    );
    for (i, r) in runs.iter().enumerate() {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        let _ = writeln!(
            text,
            "{:<8}{:>14.3}{:>14.3}{:>14.3}",
            i + 1,
            ms(r.columns),
            ms(r.product),
            ms(r.columns + r.product)
        );
    }
    Ok(Output::ok(text))
}
