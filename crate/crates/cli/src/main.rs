mod commands;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potts::Error;
use serde_json::json;

use output::{Format, Outcome};

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_TOO_LARGE: u8 = 4;
pub const EXIT_VERDICT: u8 = 5;
pub const EXIT_NOT_FOUND: u8 = 6;

#[derive(Parser)]
#[command(name = "potts", version, about = "Exact MAP inference and stability tools for Potts models")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "POTTS_FORMAT", default_value = "human")]
    format: FormatArg,

    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true, env = "POTTS_THREADS", default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the energy of an instance.
    Solve(SolveArgs),
    /// Check (beta, gamma)-stability, or weak stability on a node set.
    CheckStability(StabilityArgs),
    /// Compute the largest weakly stable node set.
    StableSet(ParamArgs),
    /// Run the tightness (1) or recovery (2) harness on an instance.
    Verify(VerifyArgs),
    /// Search for a random stable instance.
    Generate(GenerateArgs),
    /// Round a near-integral fractional solution.
    Round(RoundArgs),
    /// Re-run the bundled counterexample battery.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Method {
    Brute,
    Expansion,
    Lp,
    LocalPolytope,
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value = "brute")]
    pub method: Method,
    /// Initial labeling for expansion: `(2,2,3,3)`, `uniform:L` or `random:SEED`.
    #[arg(long, default_value = "uniform:1")]
    pub init: String,
    /// Instance file.
    pub instance: PathBuf,
}

#[derive(Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub beta: String,
    #[arg(long)]
    pub gamma: String,
    pub instance: PathBuf,
}

#[derive(Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated node names for weak stability.
    #[arg(long)]
    pub stable_set: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = ["1", "2"])]
    pub theorem: String,
    /// Stable set for theorem 2 (node names); defaults to every node.
    #[arg(long)]
    pub stable_set: Option<String>,
    /// Initial labelings for theorem 2: `all` or `random:COUNT:SEED`.
    #[arg(long, default_value = "all")]
    pub inits: String,
    pub instance: PathBuf,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long)]
    pub labels: usize,
    #[arg(long)]
    pub beta: String,
    #[arg(long)]
    pub gamma: String,
    #[arg(long, default_value = "none")]
    pub predicate: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    #[arg(long, default_value = "1/2")]
    pub connect_prob: String,
    #[arg(long, default_value_t = 4)]
    pub weight_max: u64,
    #[arg(long, default_value_t = 20)]
    pub cost_max: u64,
    /// Write the instance here instead of printing it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct RoundArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub fractional: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the full outcome distribution instead of one sample.
    #[arg(long)]
    pub exact: bool,
    /// Closeness used to find the anchor labeling; defaults to 1/(10k).
    #[arg(long)]
    pub epsilon: Option<String>,
}

#[derive(Args)]
pub struct ReproduceArgs {
    /// Replacement for the bundled first counterexample.
    #[arg(long)]
    pub fig1: Option<PathBuf>,
    /// Replacement for the bundled second counterexample.
    #[arg(long)]
    pub fig2: Option<PathBuf>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::Validation(_) | Error::Unsupported(_) => EXIT_VALIDATION,
        Error::TooLarge { .. } => EXIT_TOO_LARGE,
        Error::Io(_) => EXIT_INTERNAL,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Parse(_) => "parse",
        Error::Validation(_) => "validation",
        Error::Unsupported(_) => "unsupported",
        Error::TooLarge { .. } => "too-large",
        Error::Io(_) => "io",
    }
}

fn run(command: &Command) -> potts::Result<(&'static str, Outcome)> {
    Ok(match command {
        Command::Solve(a) => ("solve", commands::solve(a)?),
        Command::CheckStability(a) => ("check-stability", commands::check_stability(a)?),
        Command::StableSet(a) => ("stable-set", commands::stable_set(a)?),
        Command::Verify(a) => ("verify", commands::verify(a)?),
        Command::Generate(a) => ("generate", commands::generate(a)?),
        Command::Round(a) => ("round", commands::round(a)?),
        Command::Reproduce(a) => ("reproduce", reproduce::run(a)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Json => Format::Json,
    };
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_PARSE);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let started = Instant::now();
    match run(&cli.command) {
        Ok((name, outcome)) => {
            match format {
                Format::Json => {
                    let doc = json!({ "command": name, "args": args, "result": outcome.result });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
                }
                Format::Human => {
                    for line in &outcome.human {
                        println!("{line}");
                    }
                    println!("{:<18} {:.3?}", "elapsed:", started.elapsed());
                }
            }
            ExitCode::from(outcome.exit)
        }
        Err(err) => {
            match format {
                Format::Json => {
                    let doc = json!({
                        "args": args,
                        "error": { "kind": error_kind(&err), "message": err.to_string() },
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
                }
                Format::Human => eprintln!("error: {err}"),
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
