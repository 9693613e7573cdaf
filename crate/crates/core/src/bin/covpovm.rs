use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use covpovm::io::{self, CliResult, Output, SampleArgs, VerifyArgs};
use covpovm::Execution;

#[derive(Parser)]
#[command(name = "covpovm", version, about = "Covariant POVMs on finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print cosets, annihilator, dual cosets and pairing table.
    Group { spec: PathBuf },
    /// Build the POVM and print class measure and densities.
    Build { scenario: PathBuf },
    /// Check axioms, covariance and the compression oracle.
    Verify {
        scenario: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        dump_matrices: Option<PathBuf>,
        #[arg(long, env = "COVPOVM_TOLERANCE", default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Print M(ω) in the orthonormal basis (ω ≡ 1 by default).
    Matrix {
        scenario: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Sample measurement outcomes; prints CSV `outcome,count`.
    Sample {
        scenario: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(short, long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
    },
}

fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Group { spec } => io::cmd_group(&spec),
        Command::Build { scenario } => io::cmd_build(&scenario),
        Command::Verify {
            scenario,
            omega,
            dump_matrices,
            tolerance,
        } => io::cmd_verify(
            &scenario,
            &VerifyArgs {
                omega: omega.as_deref(),
                dump_matrices: dump_matrices.as_deref(),
                tolerance: Some(tolerance),
            },
        ),
        Command::Matrix { scenario, omega } => io::cmd_matrix(&scenario, omega.as_deref()),
        Command::Sample {
            scenario,
            state,
            partition,
            n,
            seed,
            sequential,
        } => io::cmd_sample(
            &scenario,
            &SampleArgs {
                state: &state,
                partition: partition.as_deref(),
                count: n,
                seed,
                execution: if sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, code) = match run(cli) {
        Ok(out) => (Some(out.stdout), out.code),
        Err(e) => {
            eprintln!("covpovm: {}", e.message);
            (e.stdout, e.code)
        }
    };
    if let Some(s) = stdout {
        let mut lock = std::io::stdout().lock();
        if lock.write_all(s.as_bytes()).and_then(|_| lock.flush()).is_err() {
            return ExitCode::from(io::EXIT_INPUT);
        }
    }
    ExitCode::from(code)
}
