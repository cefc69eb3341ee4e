//! Thin command-line front-end; all logic lives in the library.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qmball::cli::{run, CliError, Command, OutputFormat, RunConfig};
use qmball::parse::parse_rational;

#[derive(Parser)]
#[command(
    name = "qmball",
    version,
    about = "Exact computation in the quantum matrix ball",
    long_about = "Exact symbolic computation in the quantum matrix ball: normal ordering,\n\
                  quantum symmetry actions, Gram matrices, and the invariant integral.\n\
                  Expressions use letters z[a,c], zs[a,c] (the star of z), f0, scalars in\n\
                  q and s = q^(1/2), and the operators + - * / ^ ( )."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Column count m (superscript range)
    #[arg(long)]
    m: u8,
    /// Row count n (subscript range)
    #[arg(long)]
    n: u8,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ExprInput {
    /// Expression text; read from --file or stdin when omitted
    expr: Option<String>,
    /// Read the expression from a file
    #[arg(long, conflicts_with = "expr")]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal-order an expression into the canonical basis
    Normalize {
        #[command(flatten)]
        common: Common,
        /// Apply the star involution before printing
        #[arg(long)]
        star: bool,
        #[command(flatten)]
        input: ExprInput,
    },
    /// Apply a generator word (tokens E<k>, F<k>, K<k>, Ki<k>; `n` names
    /// the distinguished node), left to right
    Act {
        #[command(flatten)]
        common: Common,
        /// Generator word, e.g. "En Fn K1"
        generators: String,
        #[command(flatten)]
        input: ExprInput,
    },
    /// Integrate a finite element; prints the exact scalar, and its value
    /// when --q is given
    Integrate {
        #[command(flatten)]
        common: Common,
        /// Evaluate at rational q in (0,1), e.g. 1/2
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        input: ExprInput,
    },
    /// Print the Gram matrix of the degree-j graded component
    Gram {
        #[command(flatten)]
        common: Common,
        /// Grading degree j
        #[arg(long)]
        degree: usize,
        /// Evaluate entries at rational q in (0,1)
        #[arg(long)]
        q: Option<String>,
    },
    /// Run the verification suites (covariance, positivity, invariance);
    /// exits 3 on any failure
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest graded degree checked for positivity
        #[arg(long, default_value_t = 3)]
        degree_cap: usize,
        #[arg(long, hide = true)]
        inject_rprime_bug: bool,
    },
}

fn read_expr(input: &ExprInput) -> std::io::Result<String> {
    if let Some(text) = &input.expr {
        return Ok(text.clone());
    }
    if let Some(path) = &input.file {
        return std::fs::read_to_string(path);
    }
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf)?;
    Ok(buf)
}

fn build(
    common: &Common,
    q: Option<&String>,
    degree_cap: Option<usize>,
) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::new(common.m, common.n);
    config.format = match common.format {
        Format::Text => OutputFormat::Text,
        Format::Json => OutputFormat::Json,
    };
    if let Some(q) = q {
        config.q_value = Some(parse_rational(q)?);
    }
    if let Some(cap) = degree_cap {
        config.degree_cap = cap;
    }
    Ok(config)
}

fn dispatch(cmd: &Cmd) -> Result<String, CliError> {
    let io_err = |e: std::io::Error| CliError::Config(format!("cannot read expression: {e}"));
    match cmd {
        Cmd::Normalize {
            common,
            star,
            input,
        } => {
            let config = build(common, None, None)?;
            let expr = read_expr(input).map_err(io_err)?;
            run(&config, &Command::Normalize { expr, star: *star })
        }
        Cmd::Act {
            common,
            generators,
            input,
        } => {
            let config = build(common, None, None)?;
            let expr = read_expr(input).map_err(io_err)?;
            run(
                &config,
                &Command::Act {
                    generators: generators.clone(),
                    expr,
                },
            )
        }
        Cmd::Integrate { common, q, input } => {
            let config = build(common, q.as_ref(), None)?;
            let expr = read_expr(input).map_err(io_err)?;
            run(&config, &Command::Integrate { expr })
        }
        Cmd::Gram { common, degree, q } => {
            let config = build(common, q.as_ref(), None)?;
            run(&config, &Command::Gram { degree: *degree })
        }
        Cmd::Verify {
            common,
            degree_cap,
            inject_rprime_bug,
        } => {
            let config = build(common, None, Some(*degree_cap))?;
            run(
                &config,
                &Command::Verify {
                    inject_rprime_defect: *inject_rprime_bug,
                },
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(CliError::VerifyFailed { report }) => {
            println!("{report}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
