mod pretty;
mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use edgeideal::oracle::Field;
use edgeideal::Error;
use serde_json::Value;

use report::Outcome;

#[derive(Parser)]
#[command(
    name = "edgeideal",
    version,
    about = "Invariants and arithmetic-rank generators for edge ideals of bipartite graphs"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Coefficient field: q or p:<prime>.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<Field>,
    /// Largest variable count handed to the Hochster oracle.
    #[arg(long, global = true, default_value_t = 14)]
    pub max_oracle_vars: usize,
    /// Budget in seconds for each radical membership test.
    #[arg(long, global = true, default_value_t = 300.0)]
    pub gb_timeout: f64,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Print nothing; the exit code carries the result.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Aligned text tables instead of JSON on stdout.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Keep wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Perfect matching, unmixed and Cohen-Macaulay tests, and the acyclic reduction.
    Classify { input: String },
    /// Height, regularity, depth, projective dimension and related numbers.
    Invariants {
        input: String,
        /// Compare against Betti numbers from Hochster's formula.
        #[arg(long)]
        oracle: bool,
    },
    /// Associated primes, cross-checked against the minimal vertex covers.
    Primes { input: String },
    /// Polynomials generating the edge ideal up to radical.
    Stci {
        input: String,
        /// Plane embedding `{"x1": [a, b], ...}` keyed by x-label.
        #[arg(long, value_name = "PATH")]
        embedding: Option<PathBuf>,
        /// Check every edge monomial lies in the radical.
        #[arg(long)]
        verify: bool,
    },
    /// Betti table of the edge ideal from Hochster's formula.
    Oracle { input: String },
    /// Generate instances from a JSON spec.
    Gen {
        spec: String,
        /// Write each graph (and embedding) as a separate file here.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Run the formula and oracle cross-checks over a family of instances.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::Exhaustive)]
        suite: Suite,
        /// Largest c for the exhaustive suite.
        #[arg(long, default_value_t = 3)]
        max_c: usize,
        /// Rounds of random instances for the random suite.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Radical verification for each instance's generators.
        #[arg(long)]
        verify: bool,
        /// Drop one edge of every grid graph (negative control).
        #[arg(long)]
        mutate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Exhaustive,
    Random,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A path, `-` for stdin, or an inline JSON document.
fn read_input(arg: &str) -> anyhow::Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(e) = e.downcast_ref::<Error>() {
        return match e {
            Error::Parse(_)
            | Error::IsolatedVertex(_)
            | Error::DuplicateEdge(..)
            | Error::DuplicateLabel(_)
            | Error::UnknownLabel(_)
            | Error::EmptyGraph => 2,
            Error::NotUnmixed | Error::NotCohenMacaulay | Error::NotTransitivelyClosed => 3,
            Error::NotTwoDimensional(_) => 4,
            Error::Timeout { .. } => 5,
            Error::InvariantViolation(_) => 6,
            _ => 1,
        };
    }
    if e.downcast_ref::<serde_json::Error>().is_some() {
        return 2;
    }
    1
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| k != "millis" && k != "total_millis");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn emit(common: &Common, outcome: &mut Outcome) -> anyhow::Result<()> {
    if !common.timings {
        strip_timings(&mut outcome.json);
    }
    if let Some(path) = &common.json {
        write_json(path, &outcome.json)?;
    }
    if common.quiet {
        return Ok(());
    }
    if common.pretty {
        print!("{}", outcome.text);
    } else {
        println!("{}", serde_json::to_string_pretty(&outcome.json)?);
    }
    Ok(())
}

fn write_json(path: &Path, v: &Value) -> anyhow::Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("EDGEIDEAL_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow!("EDGEIDEAL_THREADS must be a positive integer"))?;
        if n == 0 {
            return Err(anyhow!("EDGEIDEAL_THREADS must be a positive integer"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    configure_threads()?;
    let common = &cli.common;
    if common.max_oracle_vars == 0 {
        return Err(anyhow!("--max-oracle-vars must be positive"));
    }
    if !(common.gb_timeout > 0.0 && common.gb_timeout.is_finite()) {
        return Err(anyhow!("--gb-timeout must be a positive number of seconds"));
    }
    let budget = Duration::from_secs_f64(common.gb_timeout);
    let mut outcome = match &cli.command {
        Command::Classify { input } => report::classify_report(&read_input(input)?)?,
        Command::Invariants { input, oracle } => {
            report::invariants(&read_input(input)?, *oracle, common)?
        }
        Command::Primes { input } => report::primes(&read_input(input)?)?,
        Command::Stci {
            input,
            embedding,
            verify,
        } => {
            let emb = embedding
                .as_ref()
                .map(|p| read_input(&p.to_string_lossy()))
                .transpose()?;
            report::stci(&read_input(input)?, emb.as_deref(), *verify, budget, common)?
        }
        Command::Oracle { input } => report::oracle(&read_input(input)?, common)?,
        Command::Gen { spec, out_dir } => {
            report::generate(&read_input(spec)?, common.seed, out_dir.as_deref())?
        }
        Command::Check {
            suite,
            max_c,
            count,
            verify,
            mutate,
        } => {
            let kind = match suite {
                Suite::Exhaustive => edgeideal::suite::SuiteKind::Exhaustive,
                Suite::Random => edgeideal::suite::SuiteKind::Random,
            };
            report::check(kind, *max_c, *count, *verify, *mutate, budget, common)?
        }
    };
    emit(common, &mut outcome)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.common.quiet;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !quiet {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
