//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for computational
//! failures. Errors are written to standard error as one JSON object.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gh::gh_distance;
use crate::io::{load_boundary, load_space, read_document, to_dot, GhOutput, SolveOutput};
use crate::solver::{solve, SolveConfig};
use crate::topology::TopologyMode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ghsteiner", version, about = "Steiner trees in Gromov-Hausdorff space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every space in a file against the metric axioms.
    Validate { file: PathBuf },
    /// Gromov-Hausdorff distance between two spaces.
    Ghdist { a: PathBuf, b: PathBuf },
    /// Approximate a Steiner minimal tree for a boundary set.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Boundary set: `{"spaces": [...]}`.
    file: PathBuf,
    /// Points per Steiner space [default: total boundary points].
    #[arg(long)]
    max_steiner_size: Option<usize>,
    /// Random starts per topology [default: 8].
    #[arg(long)]
    restarts: Option<usize>,
    /// Random seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Convergence tolerance on the tree length [default: 1e-7].
    #[arg(long)]
    tol: Option<f64>,
    /// Alternation rounds per start [default: 200].
    #[arg(long)]
    max_iters: Option<usize>,
    /// Full topologies only, or degenerate ones too [default: full].
    #[arg(long, value_name = "full|all")]
    topologies: Option<TopologyMode>,
    /// Output JSON path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the tree as a Graphviz file.
    #[arg(long)]
    dot: Option<PathBuf>,
}

impl SolveArgs {
    fn config(&self) -> SolveConfig {
        let mut c = SolveConfig::default();
        if let Some(v) = self.max_steiner_size {
            c.max_steiner_size = Some(v);
        }
        if let Some(v) = self.restarts {
            c.restarts = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if let Some(v) = self.max_iters {
            c.max_iters = v;
        }
        if let Some(v) = self.topologies {
            c.topology_mode = v;
        }
        c
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Validate { file } => validate_cmd(file, &mut out),
        Command::Ghdist { a, b } => ghdist_cmd(a, b, &mut out),
        Command::Solve(args) => solve_cmd(args, &mut out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            report(&e);
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_COMPUTE
    }
}

fn report(e: &Error) {
    let msg = json!({ "error": e.kind(), "message": e.to_string() });
    eprintln!("{msg}");
}

fn validate_cmd(file: &Path, out: &mut impl Write) -> Result<i32> {
    let spaces = read_document(file)?.into_spaces();
    let mut seen = std::collections::BTreeSet::new();
    let mut code = EXIT_OK;
    for s in &spaces {
        let verdict = if !seen.insert(s.name.as_str()) {
            Err(Error::DuplicateName(s.name.clone()))
        } else {
            s.parse().map(|_| ())
        };
        match verdict {
            Ok(()) => writeln!(out, "{}: ok", s.name)?,
            Err(e) => {
                writeln!(out, "{}: {e}", s.name)?;
                report(&e);
                code = code.max(exit_code(&e));
            }
        }
    }
    Ok(code)
}

fn ghdist_cmd(a: &Path, b: &Path, out: &mut impl Write) -> Result<i32> {
    let x = load_space(a)?;
    let y = load_space(b)?;
    let r = gh_distance(&x, &y)?;
    writeln!(out, "{}", serde_json::to_string(&GhOutput::from(&r))?)?;
    Ok(EXIT_OK)
}

fn solve_cmd(args: &SolveArgs, out: &mut impl Write) -> Result<i32> {
    let boundary = load_boundary(&args.file)?;
    let report = solve(&boundary, &args.config())?;
    let mut json = serde_json::to_string(&SolveOutput::from(&report))?;
    json.push('\n');
    match &args.out {
        Some(p) => std::fs::write(p, &json)?,
        None => out.write_all(json.as_bytes())?,
    }
    if let Some(p) = &args.dot {
        std::fs::write(p, to_dot(&report.tree))?;
    }
    Ok(EXIT_OK)
}
