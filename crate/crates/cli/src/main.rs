//! `bicrit`: command-line driver for the bicriteria network design library.
//!
//! Exit codes: 0 success, 2 infeasible instance, 3 oracle cap exceeded,
//! 1 anything else (bad input, broken guarantee, internal failure).

mod gen;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use bicrit::dcst::PathMode;
use bicrit::{Cost, Error, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bicrit",
    version,
    about = "Bicriteria spanning and Steiner tree solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a generated instance on stdout.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Diameter-bounded Steiner tree by cluster merging.
    Dcst {
        #[command(flatten)]
        common: Common,
        #[arg(long = "D")]
        d: Cost,
        #[arg(long, default_value = "1/2", value_parser = rational)]
        eps: Rational,
        #[arg(long = "path-mode", value_enum, default_value_t = PathArg::Auto)]
        path_mode: PathArg,
    },
    /// Budget on c, minimize d, through a unicriterion spanning tree solver.
    Parametric {
        #[command(flatten)]
        common: Common,
        #[arg(long = "C")]
        c: Cost,
        #[arg(long, default_value = "1", value_parser = rational)]
        gamma: Rational,
        #[arg(long, value_enum, default_value_t = UniArg::Mst)]
        solver: UniArg,
    },
    /// Budget the total c-cost, minimize the d-diameter, by binary search
    /// over a diameter-budgeted solver.
    Equivalence {
        #[command(flatten)]
        common: Common,
        #[arg(long = "C")]
        c: Cost,
        #[arg(long, default_value = "1/2", value_parser = rational)]
        eps: Rational,
        #[arg(long, value_enum, default_value_t = BiArg::Dcst)]
        solver: BiArg,
        #[arg(long = "path-mode", value_enum, default_value_t = PathArg::Auto)]
        path_mode: PathArg,
    },
    /// Minimize d-diameter plus total c-cost over geometric budgets.
    Convert {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1/2", value_parser = rational)]
        eps: Rational,
        #[arg(long, value_enum, default_value_t = BiArg::Dcst)]
        solver: BiArg,
        #[arg(long = "path-mode", value_enum, default_value_t = PathArg::Auto)]
        path_mode: PathArg,
    },
    /// Exact series-parallel DP; give exactly one of --D or --C.
    SpdpExact {
        #[command(flatten)]
        common: Common,
        #[arg(long = "D", conflicts_with = "c", required_unless_present = "c")]
        d: Option<Cost>,
        #[arg(long = "C")]
        c: Option<Cost>,
    },
    /// Series-parallel approximation scheme for the diameter-bounded tree.
    SpdpFpas {
        #[command(flatten)]
        common: Common,
        #[arg(long = "D")]
        d: Cost,
        #[arg(long, default_value = "1/2", value_parser = rational)]
        eps: Rational,
    },
    /// Exact Pareto front (d-diameter, total c-cost) by enumeration.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
    /// Restricted shortest path; exact unless --eps is given.
    Rsp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long = "D")]
        d: Cost,
        #[arg(long, value_parser = rational)]
        eps: Option<Rational>,
    },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Series-parallel PARTITION gadget as a parse tree.
    Partition {
        /// Comma-separated positive items.
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<Cost>,
        /// Emit the edge-list form instead of the parse tree.
        #[arg(long)]
        edge_list: bool,
    },
    /// Set-cover gadget; sets are `e1,e2,...:cost`.
    Setcover {
        #[arg(long)]
        elements: usize,
        #[arg(long = "set", required = true, value_parser = gen::parse_set)]
        sets: Vec<(Vec<usize>, Cost)>,
    },
    /// Seeded connected random multigraph.
    Random {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        /// Inclusive c range `lo..hi`.
        #[arg(long = "c-range", default_value = "0..10", value_parser = gen::parse_range)]
        c_range: (Cost, Cost),
        #[arg(long = "d-range", default_value = "0..10", value_parser = gen::parse_range)]
        d_range: (Cost, Cost),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Terminal count; all nodes when absent.
        #[arg(long)]
        terminals: Option<usize>,
    },
    /// Seeded random series-parallel parse tree.
    RandomSp {
        #[arg(long)]
        edges: usize,
        #[arg(long = "c-range", default_value = "0..10", value_parser = gen::parse_range)]
        c_range: (Cost, Cost),
        #[arg(long = "d-range", default_value = "0..10", value_parser = gen::parse_range)]
        d_range: (Cost, Cost),
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Edge-list instance or series-parallel expression.
    input: PathBuf,
    /// Compare against the brute-force oracle when the instance is small.
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the solution tree here as an edge-list instance.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Include wall time in the report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum PathArg {
    Exact,
    Fptas,
    Auto,
}

impl From<PathArg> for PathMode {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Exact => PathMode::Exact,
            PathArg::Fptas => PathMode::Fptas,
            PathArg::Auto => PathMode::Auto,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum UniArg {
    /// Minimum spanning tree: total c-cost vs total d-cost.
    Mst,
    /// Minimum-diameter spanning tree: c-diameter vs d-diameter.
    Mdst,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum BiArg {
    Dcst,
    /// Exact solver over the enumerated front (small instances only).
    Oracle,
}

fn rational(s: &str) -> Result<Rational, String> {
    bicrit::rational::parse_rational(s).map_err(|e| e.to_string())
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Infeasible(_) | Error::Disconnected => 2,
            Error::CapExceeded { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn dispatch(cli: Cli) -> Result<run::Outcome, Failure> {
    use run::{Algorithm, Job};
    let (common, algorithm) = match cli.command {
        Command::Gen(g) => return gen::run(g),
        Command::Dcst {
            common,
            d,
            eps,
            path_mode,
        } => (
            common,
            Algorithm::Dcst {
                d,
                eps,
                path_mode: path_mode.into(),
            },
        ),
        Command::Parametric {
            common,
            c,
            gamma,
            solver,
        } => (
            common,
            Algorithm::Parametric {
                c,
                gamma,
                diameter: matches!(solver, UniArg::Mdst),
            },
        ),
        Command::Equivalence {
            common,
            c,
            eps,
            solver,
            path_mode,
        } => (
            common,
            Algorithm::Equivalence {
                c,
                eps,
                exact: matches!(solver, BiArg::Oracle),
                path_mode: path_mode.into(),
            },
        ),
        Command::Convert {
            common,
            eps,
            solver,
            path_mode,
        } => (
            common,
            Algorithm::Convert {
                eps,
                exact: matches!(solver, BiArg::Oracle),
                path_mode: path_mode.into(),
            },
        ),
        Command::SpdpExact { common, d, c } => (common, Algorithm::SpdpExact { d, c }),
        Command::SpdpFpas { common, d, eps } => (common, Algorithm::SpdpFpas { d, eps }),
        Command::Oracle { common } => (common, Algorithm::Oracle),
        Command::Rsp {
            common,
            source,
            target,
            d,
            eps,
        } => (
            common,
            Algorithm::Rsp {
                source,
                target,
                d,
                eps,
            },
        ),
    };
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| Failure::internal(format!("cannot read {}: {e}", common.input.display())))?;
    let job = Job {
        name: common
            .input
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        text,
        check: common.check,
        timing: common.timing,
        format: common.format,
        witness: common.witness,
    };
    run::run(&job, algorithm)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // keep exit code 2 for infeasible instances
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{}", out.text);
            match out.violation {
                None => ExitCode::SUCCESS,
                Some(v) => {
                    eprintln!("bicrit: {v}");
                    ExitCode::from(1)
                }
            }
        }
        Err(f) => {
            eprintln!("bicrit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
