use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use polyvar_cli::format::read_json;
use polyvar_cli::{
    cmd_bound, cmd_synthesize, cmd_verify, json, CliError, ModelFile, PolytopeFile, ProblemFile,
    RunReport, EXIT_ERROR,
};

#[derive(Parser)]
#[command(
    name = "polyvar",
    version,
    about = "Polynomial bounds and polytopic invariants through blossom LP relaxations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified lower bound of a polynomial over a constrained rectangle.
    Bound {
        problem: PathBuf,
        /// Also report the minimum over a regular grid.
        #[arg(long)]
        oracle: bool,
        /// Grid points per axis for --oracle.
        #[arg(long, default_value_t = 51, requires = "oracle")]
        steps: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a polytope for invariance; exit 0 when certified, 1 otherwise.
    Verify {
        model: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Polytope file to check instead of the model's own offsets.
        #[arg(long)]
        polytope: Option<PathBuf>,
        /// Replace the model's normals, e.g. `uniform:8`.
        #[arg(long)]
        template: Option<UniformTemplate>,
    },
    /// Search for an invariant polytope; exit 0 when one is found, 1 otherwise.
    Synthesize {
        model: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Where to write the certified polytope.
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long)]
        template: Option<UniformTemplate>,
    },
}

#[derive(Clone, Copy, Debug)]
struct UniformTemplate(usize);

impl FromStr for UniformTemplate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.strip_prefix("uniform:")
            .and_then(|m| m.parse().ok())
            .map(UniformTemplate)
            .ok_or_else(|| format!("expected uniform:<facets>, got {s:?}"))
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the report to `path`, or to stdout when no path is given.
fn emit(report: &RunReport, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, &report.to_json()),
        None => {
            print!("{}", report.to_json());
            Ok(())
        }
    }
}

fn summary(report: &RunReport) -> String {
    if let Some(b) = &report.bound {
        return format!("d* = {}", b.d_star);
    }
    let verdict = match report.verdict {
        polyvar_cli::Verdict::Invariant => "invariant",
        _ => "not certified",
    };
    match &report.synthesis {
        Some(s) => format!(
            "{verdict} ({}, {} iterations)",
            s.status,
            s.iterations.len()
        ),
        None => verdict.to_string(),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let report = match cli.command {
        Command::Bound {
            problem,
            oracle,
            steps,
            report,
        } => {
            let file: ProblemFile = read_json(&problem)?;
            let r = cmd_bound(
                &file,
                &problem.display().to_string(),
                oracle.then_some(steps),
            )?;
            emit(&r, report.as_deref())?;
            (r, report.is_some())
        }
        Command::Verify {
            model,
            report,
            polytope,
            template,
        } => {
            let file: ModelFile = read_json(&model)?;
            let poly: Option<PolytopeFile> = polytope.as_deref().map(read_json).transpose()?;
            let r = cmd_verify(
                &file,
                &model.display().to_string(),
                poly.as_ref(),
                template.map(|t| t.0),
            )?;
            emit(&r, report.as_deref())?;
            (r, report.is_some())
        }
        Command::Synthesize {
            model,
            report,
            polytope,
            template,
        } => {
            let file: ModelFile = read_json(&model)?;
            let out = cmd_synthesize(&file, &model.display().to_string(), template.map(|t| t.0))?;
            if let (Some(path), Some(poly)) = (&polytope, &out.polytope) {
                write(path, &json::to_string(poly))?;
            }
            emit(&out.report, report.as_deref())?;
            (out.report, report.is_some())
        }
    };
    let (report, to_file) = report;
    if to_file {
        println!("{}", summary(&report));
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
