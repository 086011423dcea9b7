use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exact_reals_cli::bench::{default_suite, read_suite, run_suite, write_csv};
use exact_reals_cli::{eval, Options};

/// Exact real arithmetic from the command line.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an expression to a fixed number of decimals.
    ///
    /// Functions: exp, arctan, sqrt; constant: pi; operators + - * / and
    /// ^ with a natural exponent.
    Eval {
        expr: String,
        #[arg(short, long, default_value_t = 20)]
        digits: usize,
        /// Assert 2^k <= |x| for every divisor and sqrt argument whose
        /// size cannot be read off its literals.
        #[arg(short, long, allow_negative_numbers = true)]
        witness: Option<i64>,
    },
    /// Time a suite of evaluations and check their digits.
    Bench {
        /// CSV file with columns expr,digits. Defaults to the built-in suite.
        #[arg(long)]
        suite: Option<PathBuf>,
        /// Where to write the report. Defaults to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Eval { expr, digits, witness } => match eval(&expr, digits, &Options { witness }) {
            Ok(s) => {
                println!("{s}");
                Ok(true)
            }
            Err(e) => {
                eprintln!("error: {e}");
                if let Some(pos) = error_pos(&e) {
                    eprintln!("  {expr}\n  {:>width$}", "^", width = pos + 1);
                }
                Ok(false)
            }
        },
        Command::Bench { suite, csv } => {
            let cases = match suite {
                Some(path) => read_suite(File::open(path)?)?,
                None => default_suite(),
            };
            let rows = run_suite(&cases, &Options::default());
            match csv {
                Some(path) => write_csv(&rows, File::create(path)?)?,
                None => write_csv(&rows, io::stdout().lock())?,
            }
            io::stdout().flush()?;
            Ok(rows.iter().all(|r| r.correct))
        }
    }
}

fn error_pos(e: &exact_reals_cli::EvalError) -> Option<usize> {
    use exact_reals_cli::EvalError::*;
    match e {
        Parse(p) => Some(p.pos()),
        DivisionByZero { pos } | NoWitness { pos, .. } | Domain { pos, .. } | Core { pos, .. } => Some(*pos),
        Aborted(_) => None,
    }
}

fn main() -> ExitCode {
    // Broken witnesses surface as errors; keep the default panic message
    // off stderr.
    std::panic::set_hook(Box::new(|_| {}));
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
