//! Command-line front end.
//!
//! Exit status: `0` success, `1` a check failed or the request is infeasible,
//! `2` bad usage, `3` an input file could not be read or parsed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::edmatrix::is_weakly_mds;
use crate::galois::{FieldMatrix, FieldOrder};
use crate::planner::{plan_greedy, plan_reconstruction, plan_repair};
use crate::ringsim::{Event, RingState};
use crate::scheme::{
    build_scheme, reconstruct_bound, repair_bound, validate_ordss, Construction, DataVector, RingParams, Scheme,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ringstore",
    version,
    about = "Storage schemes over unidirectional ring networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Ed,
    Mds,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::Ed => Construction::Ed,
            ConstructionArg::Mds => Construction::Mds,
        }
    }
}

#[derive(Debug, clap::Args)]
struct ParamArgs {
    /// Number of storage nodes
    #[arg(long)]
    n: usize,
    /// Symbols stored per node
    #[arg(long)]
    alpha: usize,
    /// Size of the original data
    #[arg(long = "m")]
    m_size: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a scheme and write it as JSON
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "ed")]
        construction: ConstructionArg,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the optimal-reconstruction window conditions
    Validate {
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Print the reconstruction and repair bandwidth bounds
    Bounds {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Plan and run one reconstruction
    Reconstruct {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        user: usize,
        /// Use the greedy planner, which also handles non-optimal schemes
        #[arg(long)]
        greedy: bool,
        /// Write the plan JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Plan and run the repair of one node
    Repair {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        node: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a list of events from a JSON file
    Simulate {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        events: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the weakly MDS property of a matrix
    WeaklyMds {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Failure(String),
    Input(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Failure(_) => EXIT_FAILURE,
            CliError::Input(_) => EXIT_INPUT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Failure(m) | CliError::Input(m) => m,
        }
    }
}

fn failure(e: impl ToString) -> CliError {
    CliError::Failure(e.to_string())
}

/// Data vector for a seed: ChaCha8 seeded with `seed`, `M` draws uniform in `0..q`.
pub fn seeded_data(order: FieldOrder, len: usize, seed: u64) -> DataVector {
    DataVector::random(order, len, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| failure(format!("cannot write {}: {e}", path.display())))
}

fn load_scheme(path: &Path) -> Result<Scheme, CliError> {
    Scheme::from_json(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(failure)
}

fn params(p: &ParamArgs) -> Result<RingParams, CliError> {
    RingParams::new(p.n, p.alpha, p.m_size, FieldOrder::GF2).map_err(failure)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Build {
            params: p,
            construction,
            out: path,
        } => {
            let scheme = build_scheme(construction.into(), p.n, p.alpha, p.m_size).map_err(failure)?;
            let json = scheme.to_json();
            match path {
                Some(path) => write_text(&path, &json)?,
                None => emit(out, &json)?,
            }
            Ok(EXIT_OK)
        }
        Command::Validate { scheme } => {
            let report = validate_ordss(&load_scheme(&scheme)?);
            emit(out, &format!("{report}\n"))?;
            if report.is_ordss() {
                Ok(EXIT_OK)
            } else {
                Err(failure("scheme is not an ORDSS"))
            }
        }
        Command::Bounds { params: p } => {
            let p = params(&p)?;
            emit(
                out,
                &format!("reconstruct: {}, repair: {}\n", reconstruct_bound(&p), repair_bound(&p)),
            )?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct {
            scheme,
            user,
            greedy,
            out: path,
            seed,
        } => {
            let scheme = load_scheme(&scheme)?;
            let plan = if greedy {
                plan_greedy(&scheme, user)
            } else {
                plan_reconstruction(&scheme, user)
            }
            .map_err(failure)?;
            let data = seeded_data(scheme.order(), scheme.params().m_size(), seed);
            let mut state = RingState::new(scheme, data).map_err(failure)?;
            let trace = state.run_reconstruction(&plan).map_err(failure)?;
            if let Some(path) = path {
                write_text(&path, &plan.to_json())?;
            }
            emit(out, &format!("{}total: {} symbols\n", trace.to_text(), trace.total()))?;
            Ok(EXIT_OK)
        }
        Command::Repair {
            scheme,
            node,
            out: path,
            seed,
        } => {
            let scheme = load_scheme(&scheme)?;
            let plan = plan_repair(&scheme, node).map_err(failure)?;
            let data = seeded_data(scheme.order(), scheme.params().m_size(), seed);
            let mut state = RingState::new(scheme, data).map_err(failure)?;
            let trace = state
                .run(&[Event::NodeFailure { node }, Event::Repair { node }])
                .map_err(failure)?;
            if let Some(path) = path {
                write_text(&path, &plan.to_json())?;
            }
            emit(out, &format!("{}total: {} symbols\n", trace.to_text(), trace.total()))?;
            Ok(EXIT_OK)
        }
        Command::Simulate { scheme, events, seed } => {
            let scheme = load_scheme(&scheme)?;
            let events: Vec<Event> = serde_json::from_str(&read_text(&events)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", events.display())))?;
            let data = seeded_data(scheme.order(), scheme.params().m_size(), seed);
            let mut state = RingState::new(scheme, data).map_err(failure)?;
            let trace = state.run(&events).map_err(failure)?;
            emit(out, &format!("{}{}\n", trace.to_text(), trace.summary_json()))?;
            Ok(EXIT_OK)
        }
        Command::WeaklyMds { matrix } => {
            let m = load_matrix(&matrix)?;
            let report = is_weakly_mds(&m);
            match report.failing_start {
                None => {
                    emit(out, "weakly MDS: yes\n")?;
                    Ok(EXIT_OK)
                }
                Some(start) => {
                    emit(
                        out,
                        &format!("weakly MDS: no (first dependent window starts at {start})\n"),
                    )?;
                    Err(failure("matrix is not weakly MDS"))
                }
            }
        }
    }
}

/// `{"q": 2, "matrix": [[...]]}`; a scheme file is accepted too.
#[derive(Deserialize)]
struct MatrixFile {
    #[serde(default = "default_q")]
    q: u32,
    #[serde(alias = "generator")]
    matrix: Vec<Vec<u32>>,
}

fn default_q() -> u32 {
    2
}

fn load_matrix(path: &Path) -> Result<FieldMatrix, CliError> {
    let text = read_text(path)?;
    let bad = |e: String| CliError::Input(format!("{}: {e}", path.display()));
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let order = FieldOrder::new(file.q).map_err(|e| bad(e.to_string()))?;
    FieldMatrix::from_rows(order, &file.matrix).map_err(|e| bad(e.to_string()))
}
