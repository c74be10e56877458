use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frobmon_cli::{cmd_build, cmd_count, cmd_fuzz, prime_bound_from_env, CliError, FuzzBounds, Outcome};

/// Frobenius and monodromy of semistable curves, in exact arithmetic.
#[derive(Parser)]
#[command(name = "frobmon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the (phi, N)-module of an instance file and run every check.
    Build {
        file: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Count points on y^2 = x^3 + a4 x + a6 over F_p.
    #[command(allow_negative_numbers = true)]
    Count { p: u64, a4: i64, a6: i64 },
    /// Check seeded random curve instances.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long, default_value_t = 14)]
        max_edges: usize,
        #[arg(long, default_value_t = 50)]
        max_prime: u64,
        /// Directory for failing instance files.
        #[arg(long, default_value = ".")]
        dump_dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let bound = prime_bound_from_env()?;
    match cli.command {
        Command::Build { file, out, timing } => cmd_build(&file, out.as_deref(), timing, bound),
        Command::Count { p, a4, a6 } => cmd_count(p, a4, a6, bound),
        Command::Fuzz {
            seed,
            count,
            max_vertices,
            max_edges,
            max_prime,
            dump_dir,
        } => {
            let bounds = FuzzBounds {
                max_vertices,
                max_edges,
                max_prime,
            };
            cmd_fuzz(seed, count, bounds, bound, &dump_dir)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
