use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use asymprimes::problem::{self, render_human, Overrides, Problem, ProblemDescription, Task};
use clap::{Parser, ValueEnum};

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Human,
    Machine,
}

/// Degreewise associated primes, Hilbert polynomials and grades of graded families.
#[derive(Parser, Debug)]
#[command(name = "asymprimes", version)]
struct Args {
    /// Problem description (JSON).
    input: PathBuf,
    /// Analysis window, e.g. 0:20.
    #[arg(long, value_parser = parse_window)]
    window: Option<[i64; 2]>,
    /// Confirmation width for stabilization.
    #[arg(long)]
    confirm: Option<usize>,
    /// Saturation exponent for H^0.
    #[arg(long)]
    sat: Option<usize>,
    /// Held-out degrees for polynomial fitting.
    #[arg(long)]
    holdout: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated task list, e.g. ass_stability,hilbert.
    #[arg(long, value_delimiter = ',', value_parser = parse_task)]
    tasks: Option<Vec<Task>>,
    #[arg(long, value_enum, default_value = "machine")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn parse_window(s: &str) -> Result<[i64; 2], String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
    Ok([lo, hi])
}

fn parse_task(s: &str) -> Result<Task, String> {
    Task::parse(s.trim()).ok_or_else(|| format!("unknown task {s}"))
}

enum Failure {
    Io(anyhow::Error),
    Core(asymprimes::Error),
}

fn execute(args: &Args) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))
        .map_err(Failure::Io)?;
    let mut description = ProblemDescription::parse(&text).map_err(Failure::Core)?;
    description.apply(&Overrides {
        window: args.window,
        confirm: args.confirm,
        saturation: args.sat,
        holdout: args.holdout,
        seed: args.seed,
        tasks: args.tasks.clone(),
    });
    let problem = Problem::compile(description).map_err(Failure::Core)?;
    let started = Instant::now();
    let mut report = problem::run(&problem).map_err(Failure::Core)?;
    if args.timing {
        report.timing_ms = Some(started.elapsed().as_millis());
    }
    let mut body = match args.format {
        Format::Machine => report.to_json(),
        Format::Human => render_human(&report),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Io)?,
        None => print!("{body}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => {
            if code != problem::EXIT_OK {
                eprintln!("{}", describe_code(code));
            }
            ExitCode::from(code as u8)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(problem::EXIT_IO as u8)
        }
        Err(Failure::Core(e)) => {
            let code = problem::exit_code(&e);
            let err = match e {
                asymprimes::Error::Validation(issues) => {
                    let lines: Vec<String> = issues.iter().map(ToString::to_string).collect();
                    anyhow!("invalid problem description:\n  {}", lines.join("\n  "))
                }
                other => anyhow!(other),
            };
            eprintln!("error: {err:#}");
            ExitCode::from(code as u8)
        }
    }
}

fn describe_code(code: i32) -> &'static str {
    match code {
        problem::EXIT_WINDOW => "warning: analysis window insufficient for a requested detection",
        problem::EXIT_INVARIANT => "error: oracle identities failed",
        _ => "error",
    }
}
