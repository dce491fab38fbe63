use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;
mod output;
mod verify;

use output::Report;

#[derive(Parser, Debug)]
#[command(name = "gmech", version, about = "Exchange mechanisms on opportunity graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure of a graph: class, circuit rank, collapsible edges, rigidity.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Prices by the tree formula and by the balance solve, with residuals.
    Price {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Time and price complexity profiles.
    Complexity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[command(flatten)]
        common: Common,
    },
    /// Pareto frontier of all mechanisms on m commodities.
    Frontier {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Screened)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = RuleArg::Pareto)]
        rule: RuleArg,
        #[command(flatten)]
        common: Common,
    },
    /// Minimiser of lambda * pi + mu * tau and the bound m0.
    Minimize {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Screened)]
        method: MethodArg,
        /// Cross-check against full enumeration (default for m <= 5; m = 6 takes minutes).
        #[arg(long)]
        enumerate: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a trading session, optionally with randomized property checks.
    Simulate {
        #[arg(long)]
        session: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Convert one commodity into another along a shortest path.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value = "1")]
        amount: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance and property suites.
    Verify {
        /// Smaller sample sizes and no m = 5 timing budget.
        #[arg(long)]
        quick: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "GMECH_WORKERS", default_value_t = 0)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave wall time out of the manifest so reruns are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Exact,
    Screened,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleArg {
    Pareto,
    Strict,
    Both,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: unreadable, unparsable, or rejected by validation.
    Input(anyhow::Error),
    /// A checked property did not hold; the report is still written.
    Property(Box<Report>),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn run(command: Command) -> std::result::Result<(Report, Common), Failure> {
    let started = Instant::now();
    let (mut report, common) = match command {
        Command::Analyze { graph, common } => (commands::analyze(&graph, &common)?, common),
        Command::Price { graph, weights, common } => (commands::price(&graph, &weights, &common)?, common),
        Command::Complexity { graph, method, common } => (commands::complexity(&graph, method, &common)?, common),
        Command::Frontier { m, method, rule, common } => (commands::frontier(m, method, rule, &common)?, common),
        Command::Minimize { m, lambda, mu, method, enumerate, common } => {
            (commands::minimize(m, &lambda, &mu, method, enumerate, &common)?, common)
        }
        Command::Simulate { session, common } => (commands::simulate(&session, &common)?, common),
        Command::Route { graph, weights, from, to, amount, common } => {
            (commands::route(&graph, &weights, from, to, &amount, &common)?, common)
        }
        Command::Verify { quick, common } => (verify::run(quick, &common)?, common),
    };
    if !common.omit_timing {
        report.manifest.wall_time_seconds = Some(started.elapsed().as_secs_f64());
    }
    if report.success {
        Ok((report, common))
    } else {
        emit(&report, &common)?;
        Err(Failure::Property(Box::new(report)))
    }
}

fn emit(report: &Report, common: &Common) -> Result<()> {
    let text = report.render(common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Exit status for an outcome whose report, if any, was already written.
fn exit_code(outcome: &std::result::Result<(), Failure>) -> u8 {
    match outcome {
        Ok(()) => 0,
        Err(Failure::Property(_)) => 1,
        Err(Failure::Input(_)) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).and_then(|(report, common)| Ok(emit(&report, &common)?));
    match &outcome {
        Ok(()) => {}
        Err(Failure::Property(report)) => eprintln!("error: {} reported a property failure", report.manifest.command),
        Err(Failure::Input(e)) => eprintln!("error: {e:#}"),
    }
    ExitCode::from(exit_code(&outcome))
}
