//! Command-line front end: argument parsing, dispatch and JSON/CSV emission.
//!
//! Every command is deterministic given its flags; `--seed` drives all
//! randomness. Exit status: 0 on success, 1 when a verification fails,
//! 2 on usage errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use skein_core::freealg::PresentationId;
use skein_core::pts::Coords;
use skein_core::Error;

mod commands;

pub use commands::export::export;

#[derive(Parser, Debug)]
#[command(name = "skein", version, about = "Skein algebra of the twice-punctured annulus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of an expression in a registered presentation.
    Reduce {
        #[arg(long, default_value = "ry022-4gen")]
        presentation: PresentationId,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Overlap ambiguities of one presentation, or of all of them.
    Confluence {
        #[arg(long)]
        presentation: Option<PresentationId>,
        #[command(flatten)]
        output: Output,
    },
    /// Confluence, defining relations and the commutative shadow map.
    VerifyPresentation {
        #[arg(long)]
        presentation: Option<PresentationId>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Registered algebra maps and curve images on the torus.
    PhiCheck {
        #[arg(long, default_value_t = 8)]
        max_index: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Expansion of a curve expression such as `C(1,0)*C(2,3)`.
    Pts {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Discrepancy `D[[n1,n2],[k1,k2]]`, given as `--expr "[[n1,n2],[k1,k2]]"`.
    Discrepancy {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Positivity scan over all products with `|n|, |k| <= max-index`.
    Positivity {
        #[arg(long, default_value_t = 4)]
        max_index: i64,
        #[arg(long, value_enum, default_value_t = CoordsArg::Grouped)]
        coords: CoordsArg,
        #[command(flatten)]
        output: Output,
    },
    /// Representations at odd roots of unity.
    #[command(subcommand)]
    Reps(RepsCommand),
    /// Writes every table into a directory.
    Export {
        #[arg(long, default_value_t = 4)]
        max_index: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepsCommand {
    /// Samples admissible shadow data.
    Sample {
        #[command(flatten)]
        shadow: ShadowArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Builds the matrices for shadow data.
    Build {
        #[command(flatten)]
        shadow: ShadowArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Builds and verifies a representation.
    Verify {
        #[command(flatten)]
        shadow: ShadowArgs,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
pub struct ShadowArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shadow data JSON to use instead of sampling.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoordsArg {
    Raw,
    Grouped,
}

impl From<CoordsArg> for Coords {
    fn from(c: CoordsArg) -> Self {
        match c {
            CoordsArg::Raw => Coords::Raw,
            CoordsArg::Grouped => Coords::Grouped,
        }
    }
}

impl Cli {
    /// File named by `--out` for single-document commands.
    pub fn out_path(&self) -> Option<&Path> {
        let output = match &self.command {
            Command::Reduce { output, .. }
            | Command::Confluence { output, .. }
            | Command::VerifyPresentation { output, .. }
            | Command::PhiCheck { output, .. }
            | Command::Pts { output, .. }
            | Command::Discrepancy { output, .. }
            | Command::Positivity { output, .. } => output,
            Command::Reps(
                RepsCommand::Sample { output, .. } | RepsCommand::Build { output, .. } | RepsCommand::Verify { output, .. },
            ) => output,
            Command::Export { .. } => return None,
        };
        output.out.as_deref()
    }
}

/// Rendered result of a command. `ok` is false when a verification failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub ok: bool,
    pub body: String,
}

impl Outcome {
    pub fn new(ok: bool, body: String) -> Self {
        Self { ok, body }
    }

    /// Writes the body to `path`, or to stdout.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) => fs::write(p, &self.body),
            None => io::stdout().lock().write_all(self.body.as_bytes()),
        }
    }
}

/// Exit status for an error: 2 for bad input, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::AlphabetMismatch(_)
        | Error::ZeroUnit(_)
        | Error::UncoveredFamily(_) => 2,
        _ => 1,
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> skein_core::Result<Outcome> {
    use commands::{algebra, curves, reps};
    match &cli.command {
        Command::Reduce { presentation, expr, output } => algebra::reduce(*presentation, expr, output.format),
        Command::Confluence { presentation, output } => algebra::confluence(*presentation, output.format),
        Command::VerifyPresentation { presentation, seed, output } => {
            algebra::verify_presentation(*presentation, *seed, output.format)
        }
        Command::PhiCheck { max_index, output } => algebra::phi_check(*max_index, output.format),
        Command::Pts { expr, output } => curves::pts(expr, output.format),
        Command::Discrepancy { expr, output } => curves::discrepancy(expr, output.format),
        Command::Positivity { max_index, coords, output } => {
            curves::positivity(*max_index, (*coords).into(), output.format)
        }
        Command::Reps(RepsCommand::Sample { shadow, output }) => reps::sample(shadow, output.format),
        Command::Reps(RepsCommand::Build { shadow, output }) => reps::build(shadow, output.format),
        Command::Reps(RepsCommand::Verify { shadow, output }) => reps::verify(shadow, output.format),
        Command::Export { max_index, seed, out } => export(*max_index, *seed, out),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> skein_core::Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    run(&cli)
}

pub(crate) fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub(crate) fn csv_unavailable(command: &str) -> Error {
    Error::InvalidArgument(format!("csv output is not available for {command}"))
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Residuals are reported as decimal strings.
pub(crate) fn decimal(x: f64) -> String {
    format!("{x:.3e}")
}
