//! Command-line front end: check a model under one strategy, generate
//! built-in models to files, and compare all strategies on one model.
//!
//! Exit status encodes tool health, not the verification verdict: 0 for a
//! completed analysis (the answer is in the report), 1 for input errors,
//! 2 for internal limits such as an oracle overflow under `--verify`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zonecheck::compare::{self, CompareConfig, StrategyOutcome};
use zonecheck::model::{generate, parse_network, render_network};
use zonecheck::report::StatsReport;
use zonecheck::search::Strategy;
use zonecheck::Network;

#[derive(Parser)]
#[command(
    name = "zonecheck",
    version,
    about = "Zone-based reachability checker for networks of timed automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check reachability of an accepting state under one strategy.
    Check {
        #[command(flatten)]
        source: Source,
        /// Search strategy: bfs, dfs, rank-bfs, waiting, tw-bfs.
        #[arg(long)]
        strategy: StrategyArg,
        #[command(flatten)]
        common: Common,
    },
    /// Run every strategy on one model and compare the metrics.
    Compare {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
    /// Write a built-in model to a file in the text model format.
    Gen {
        /// Generator spec: racing, blowup:N, or fischer:N.
        spec: String,
        /// Output path.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Read the model from a file in the text model format.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Use a built-in model: racing, blowup:N, or fischer:N.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args)]
struct Common {
    /// Permute transition enumeration order with this seed.
    #[arg(long, value_name = "SEED")]
    shuffle_edges: Option<u64>,
    /// Permute the DFS child order behind the topological orders.
    #[arg(long, value_name = "SEED")]
    shuffle_order: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cross-check answers and coverage against exhaustive enumeration.
    #[arg(long)]
    verify: bool,
    /// Node cap for the enumeration oracle.
    #[arg(long, default_value_t = 1_000_000, value_name = "N")]
    oracle_limit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone)]
struct StrategyArg(Strategy);

impl ValueEnum for StrategyArg {
    fn value_variants<'a>() -> &'a [Self] {
        const VARIANTS: [StrategyArg; 5] = [
            StrategyArg(Strategy::Bfs),
            StrategyArg(Strategy::Dfs),
            StrategyArg(Strategy::RankBfs),
            StrategyArg(Strategy::Waiting),
            StrategyArg(Strategy::TwBfs),
        ];
        &VARIANTS
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.0.name()))
    }
}

fn load_model(source: &Source) -> Result<Network, String> {
    match (&source.model, &source.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_network(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
        (None, Some(spec)) => generate::from_spec(spec).map_err(|e| e.to_string()),
        _ => Err("exactly one of --model and --gen is required".into()),
    }
}

/// Input errors exit 1, internal limits exit 2.
enum Failure {
    Input(String),
    Limit(String),
}

fn analyze(
    source: &Source,
    strategies: &[Strategy],
    common: &Common,
) -> Result<StatsReport, Failure> {
    let net = load_model(source).map_err(Failure::Input)?;
    let cfg = CompareConfig {
        edge_shuffle_seed: common.shuffle_edges,
        order_shuffle_seed: common.shuffle_order,
        check_invariants: false,
    };
    let outcomes: Vec<StrategyOutcome> = if strategies.len() == Strategy::ALL.len() {
        compare::run_all_strategies(&net, &cfg)
    } else {
        strategies
            .iter()
            .map(|&strategy| StrategyOutcome {
                strategy,
                outcome: compare::run_strategy(&net, strategy, &cfg),
            })
            .collect()
    };
    let mut report = compare::report(&net, &cfg, &outcomes);
    if common.verify {
        let verify = compare::verify_against_oracle(&net, &outcomes, common.oracle_limit)
            .map_err(|e| Failure::Limit(e.to_string()))?;
        report = report.with_verify(verify);
    }
    Ok(report)
}

fn emit(report: &StatsReport, format: Format) {
    match format {
        Format::Table => print!("{}", report.to_table()),
        Format::Json => println!("{}", report.to_json()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check {
            source,
            strategy,
            common,
        } => {
            let report = analyze(&source, &[strategy.0], &common)?;
            emit(&report, common.format);
            Ok(())
        }
        Command::Compare { source, common } => {
            let report = analyze(&source, &Strategy::ALL, &common)?;
            emit(&report, common.format);
            Ok(())
        }
        Command::Gen { spec, output } => {
            let net = generate::from_spec(&spec).map_err(|e| Failure::Input(e.to_string()))?;
            fs::write(&output, render_network(&net))
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", output.display())))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Limit(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
