use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use charpoly::ring::{RingSpec, M61};
use charpoly_cli::{
    cmd_bench, cmd_compute, cmd_enumerate, cmd_verify, enum_cap_from, exit, parse_ring_flag,
    Algorithm, BenchArgs, CliError, ComputeArgs, Emit, EnumerateArgs, ModeArg, Output, VerifyArgs,
    ENUM_CAP_VAR,
};
use clap::{Parser, Subcommand};

/// Exact characteristic polynomials, determinants and combinatorial checks.
#[derive(Parser)]
#[command(name = "charpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial and determinant of a matrix file.
    Compute {
        input: PathBuf,
        /// Read the literals in this ring instead of the file's header ring.
        #[arg(long, value_parser = parse_ring_flag)]
        ring: Option<RingSpec>,
        #[arg(long, value_enum, default_value = "berkowitz")]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "sequential")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// List clow sequences of a given length in canonical order.
    Enumerate {
        /// Number of vertices; defaults to the matrix dimension.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        with_signs: bool,
        /// Matrix file used to print weights.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Run a named verification campaign, or `all`.
    Verify {
        #[arg(long)]
        check: String,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_ring_flag, default_value = "int")]
        ring: RingSpec,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Time column construction and the product phase.
    Bench {
        #[arg(long)]
        size: usize,
        #[arg(long, value_parser = parse_ring_flag, default_value_t = default_bench_ring())]
        ring: RingSpec,
        #[arg(long, value_enum, default_value = "sequential")]
        mode: ModeArg,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn default_bench_ring() -> RingSpec {
    RingSpec::PrimeField { modulus: M61 }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let enum_cap = enum_cap_from(std::env::var(ENUM_CAP_VAR).ok().as_deref())?;
    match cli.command {
        Command::Compute {
            input,
            ring,
            algorithm,
            mode,
            emit,
        } => cmd_compute(&ComputeArgs {
            input: &input,
            ring,
            algorithm,
            mode,
            emit,
            enum_cap,
        }),
        Command::Enumerate {
            n,
            length,
            with_signs,
            matrix,
        } => cmd_enumerate(&EnumerateArgs {
            n,
            length,
            with_signs,
            matrix: matrix.as_deref(),
            enum_cap,
        }),
        Command::Verify {
            check,
            size,
            trials,
            seed,
            ring,
            emit,
        } => cmd_verify(&VerifyArgs {
            check: &check,
            size,
            trials,
            seed,
            ring,
            emit,
            enum_cap,
        }),
        Command::Bench {
            size,
            ring,
            mode,
            repeats,
            seed,
        } => cmd_bench(&BenchArgs {
            size,
            ring,
            mode,
            repeats,
            seed,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            });
        }
    };
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
