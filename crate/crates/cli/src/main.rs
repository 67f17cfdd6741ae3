//! Command-line front end for the Laguerre-Sobolev toolkit: polynomial
//! tables, identity verification, connection expansions, and kernel values
//! from a JSON description of the inner product.

mod commands;
mod failure;
mod output;
mod specfile;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{BasisArg, FamilyChoice};
use failure::Failure;
use output::{write_output, Format};
use sobolag::KernelRequest;
use specfile::{Backend, SpecFile};

#[derive(Parser)]
#[command(
    name = "sobolag",
    version,
    about = "Laguerre orthogonal polynomials under discrete Sobolev inner products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON spec file
    #[arg(value_name = "SPEC", conflicts_with = "spec_flag")]
    spec_pos: Option<PathBuf>,

    /// Path to the JSON spec file (alternative to the positional form)
    #[arg(long = "spec", value_name = "PATH")]
    spec_flag: Option<PathBuf>,

    /// Arithmetic backend; defaults to the spec file's choice, then exact
    #[arg(long, value_enum)]
    backend: Option<Backend>,

    /// Output format (default csv; verify always reports JSON)
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn spec_path(&self) -> Result<&Path, Failure> {
        self.spec_pos
            .as_deref()
            .or(self.spec_flag.as_deref())
            .ok_or_else(|| Failure::usage("no spec file given (pass a path or --spec)"))
    }

    fn load(&self) -> Result<SpecFile, Failure> {
        SpecFile::load(self.spec_path()?)
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print coefficient tables of the Sobolev family (or the classical one)
    Poly {
        #[command(flatten)]
        common: CommonArgs,

        /// Highest degree to print
        #[arg(short = 'n', long = "degree")]
        degree: usize,

        /// Print the classical Laguerre family instead
        #[arg(long)]
        classical: bool,

        /// Evaluate on this comma-separated grid (float backend) instead of
        /// printing coefficients
        #[arg(long, value_name = "X0,X1,...", value_delimiter = ',', num_args = 1)]
        eval: Option<Vec<String>>,
    },

    /// Run the identity suite against a spec and emit a JSON report
    Verify {
        #[command(flatten)]
        common: CommonArgs,

        /// Highest degree to check
        #[arg(short = 'n', long = "degree-max")]
        degree_max: usize,
    },

    /// Expand one Sobolev polynomial over a connection basis
    Connect {
        #[command(flatten)]
        common: CommonArgs,

        /// Degree of the polynomial to expand
        #[arg(short = 'n', long = "degree")]
        degree: usize,

        /// Basis to expand over
        #[arg(long, value_enum)]
        basis: BasisArg,
    },

    /// Evaluate a kernel derivative through both computation paths
    Kernel {
        #[command(flatten)]
        common: CommonArgs,

        /// Kernel index
        #[arg(short = 'n', long = "degree")]
        degree: usize,

        /// Derivative order in the first argument
        #[arg(short = 'j', long)]
        #[arg(default_value_t = 0)]
        j: usize,

        /// Derivative order in the second argument
        #[arg(short = 'k', long)]
        #[arg(default_value_t = 0)]
        k: usize,

        /// First evaluation point
        #[arg(short = 'x', long)]
        x: String,

        /// Second evaluation point
        #[arg(short = 'y', long)]
        y: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Poly {
            common,
            degree,
            classical,
            eval,
        } => {
            let file = common.load()?;
            let family = if classical {
                FamilyChoice::Classical
            } else {
                FamilyChoice::Sobolev
            };
            let rendered = match &eval {
                Some(grid) => {
                    commands::cmd_poly_eval(&file, degree, family, grid, common.format())?
                }
                None => commands::cmd_poly(
                    &file,
                    degree,
                    family,
                    file.backend(common.backend),
                    common.format(),
                )?,
            };
            write_output(common.out.as_deref(), &rendered)?;
            Ok(0)
        }
        Command::Verify { common, degree_max } => {
            if common.backend == Some(Backend::Float) {
                return Err(Failure::usage("verification runs on the exact backend"));
            }
            if common.format == Some(Format::Csv) {
                return Err(Failure::usage(
                    "the verify report is JSON; use --format json",
                ));
            }
            let file = common.load()?;
            let (report, code, note) = verify::cmd_verify(&file, degree_max)?;
            write_output(common.out.as_deref(), &report)?;
            if let Some(note) = note {
                eprintln!("{}", note);
            }
            Ok(code)
        }
        Command::Connect {
            common,
            degree,
            basis,
        } => {
            let file = common.load()?;
            let (rendered, warning) = commands::cmd_connect(
                &file,
                degree,
                basis,
                file.backend(common.backend),
                common.format(),
            )?;
            if let Some(warning) = warning {
                eprintln!("{}", warning);
            }
            write_output(common.out.as_deref(), &rendered)?;
            Ok(0)
        }
        Command::Kernel {
            common,
            degree,
            j,
            k,
            x,
            y,
        } => {
            let file = common.load()?;
            let rendered = commands::cmd_kernel(
                &file,
                KernelRequest { n: degree, j, k },
                &x,
                &y,
                file.backend(common.backend),
                common.format(),
            )?;
            write_output(common.out.as_deref(), &rendered)?;
            Ok(0)
        }
    }
}
