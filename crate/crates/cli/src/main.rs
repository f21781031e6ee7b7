//! `legzeros` — zeros of integral-degree associated Legendre functions with
//! respect to the order, from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure (non-convergence,
//! pole, range), 3 verification failure. Data goes to standard output (or
//! `--output`); diagnostics go to the error stream.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use legzeros::trajectory::{sample, write_csv, write_json, zeros_by_method, Method};
use legzeros::{eval_psi, verify, Error, LegendreParams};

#[derive(Parser)]
#[command(
    name = "legzeros",
    version,
    about = "Zeros of Gamma(1-z) P_n^z(tanh x) with respect to the order z",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    /// Eigenvalues of the symmetric trajectory matrix.
    Spectral,
    /// Spectral seed refined on the algebraic system.
    Newton,
    /// Continuation along the differential system.
    Ode,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Spectral => Method::Spectral,
            MethodArg::Newton => Method::Newton,
            MethodArg::Ode => Method::Ode,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the zero set at one x, largest zero first.
    Zeros {
        /// Degree of the Legendre function.
        #[arg(long)]
        n: usize,
        /// Argument parameter (the Legendre argument is tanh x).
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        /// Method tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Sample the zero trajectories over a uniform x grid.
    Trace {
        /// Degree of the Legendre function.
        #[arg(long)]
        n: usize,
        #[arg(long = "x-min", allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long = "x-max", allow_negative_numbers = true)]
        x_max: f64,
        /// Number of grid points (endpoints included).
        #[arg(long)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        /// Method tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate psi_n(x, z) = Gamma(1-z) P_n^z(tanh x).
    Psi {
        /// Degree of the Legendre function.
        #[arg(long)]
        n: usize,
        /// Argument parameter.
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Order.
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
    /// Run the cross-method verification suite and print a report.
    Verify {
        /// Largest degree to exercise.
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: usize,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) => 1,
        _ => 2,
    }
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    let stdout = io::stdout();
    match cli.command {
        Command::Zeros { n, x, method, tol } => {
            let zs = zeros_by_method(n, x, method.into(), tol)?;
            let mut out = stdout.lock();
            let line = zs
                .zeros
                .iter()
                .map(|z| format!("{z}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{line}")?;
            Ok(0)
        }
        Command::Trace {
            n,
            x_min,
            x_max,
            samples,
            method,
            tol,
            format,
            output,
        } => {
            let table = sample(n, x_min, x_max, samples, method.into(), tol)?;
            let mut sink: Box<dyn Write> = match output {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(BufWriter::new(stdout.lock())),
            };
            match format {
                FormatArg::Csv => write_csv(&table, &mut sink)?,
                FormatArg::Json => write_json(&table, &mut sink)?,
            }
            sink.flush()?;
            Ok(0)
        }
        Command::Psi { n, x, z } => {
            let value = eval_psi(&LegendreParams::new(n, x, z))?;
            let mut out = stdout.lock();
            writeln!(out, "{value}")?;
            Ok(0)
        }
        Command::Verify { n_max } => {
            if n_max == 0 {
                return Err(Error::InvalidInput("--n-max must be at least 1".into()));
            }
            let outcomes = verify::run_all(n_max);
            let mut out = stdout.lock();
            let mut failures = 0usize;
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {} ({})", o.name, o.detail)?;
                if !o.passed {
                    failures += 1;
                }
            }
            writeln!(
                out,
                "{} of {} checks passed (n-max {n_max})",
                outcomes.len() - failures,
                outcomes.len()
            )?;
            Ok(if failures == 0 { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    // Map argument parsing to exit code 1 with usage on stderr; --help and
    // --version stay successful.
    if let Err(e) = Cli::try_parse() {
        let _ = e.print();
        return match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
            _ => ExitCode::from(1),
        };
    }
    match run() {
        Ok(code) => ExitCode::from(code),
        // A consumer closing the pipe early is not a failure of ours.
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
