//! Multi-strategy harness: run every policy on one model under identical
//! seeds and assemble the paper-style metrics table, optionally cross-checked
//! against the enumeration oracle. Runs are independent over shared
//! immutable inputs, so the `parallel` feature fans them out on a rayon
//! pool; results are assembled in strategy order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::automaton::Network;
use crate::order::JointOrder;
use crate::report::{Seeds, StatsReport, StrategyRow, VerifyReport};
use crate::search::{
    check_reachability, Answer, SearchError, SearchOutcome, Strategy, StrategyConfig,
};
use crate::symgraph::{node_subsumes, oracle_enumerate, OracleOverflow, SymNode};

/// Common knobs of a multi-run comparison.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompareConfig {
    pub edge_shuffle_seed: Option<u64>,
    pub order_shuffle_seed: Option<u64>,
    pub check_invariants: bool,
}

impl CompareConfig {
    pub fn seeds(&self) -> Seeds {
        Seeds {
            edge_shuffle: self.edge_shuffle_seed,
            order_shuffle: self.order_shuffle_seed,
        }
    }
}

/// One strategy's outcome inside a comparison.
#[derive(Clone, Debug)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub outcome: SearchOutcome,
}

fn config_for(net: &Network, strategy: Strategy, cfg: &CompareConfig) -> StrategyConfig {
    let mut sc = StrategyConfig::new(strategy).with_edge_shuffle(cfg.edge_shuffle_seed);
    if strategy.needs_order() {
        sc = sc.with_order(JointOrder::compute(net, cfg.order_shuffle_seed));
    }
    if cfg.check_invariants {
        sc = sc.with_invariant_checks();
    }
    sc
}

/// Runs a single strategy under the comparison seeds, building the joint
/// order on demand.
pub fn run_strategy(net: &Network, strategy: Strategy, cfg: &CompareConfig) -> SearchOutcome {
    match check_reachability(net, &config_for(net, strategy, cfg)) {
        Ok(outcome) => outcome,
        Err(SearchError::MissingOrder(_)) => unreachable!("order built on demand"),
    }
}

/// Runs all five strategies sequentially.
pub fn run_all_strategies_serial(net: &Network, cfg: &CompareConfig) -> Vec<StrategyOutcome> {
    Strategy::ALL
        .iter()
        .map(|&strategy| StrategyOutcome {
            strategy,
            outcome: run_strategy(net, strategy, cfg),
        })
        .collect()
}

/// Runs all five strategies, on the rayon pool when the `parallel` feature
/// is enabled. Output order and contents match the sequential variant.
#[cfg(feature = "parallel")]
pub fn run_all_strategies(net: &Network, cfg: &CompareConfig) -> Vec<StrategyOutcome> {
    Strategy::ALL
        .par_iter()
        .map(|&strategy| StrategyOutcome {
            strategy,
            outcome: run_strategy(net, strategy, cfg),
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_all_strategies(net: &Network, cfg: &CompareConfig) -> Vec<StrategyOutcome> {
    run_all_strategies_serial(net, cfg)
}

/// Assembles the metrics report for a set of runs.
pub fn report(net: &Network, cfg: &CompareConfig, outcomes: &[StrategyOutcome]) -> StatsReport {
    let rows = outcomes
        .iter()
        .map(|o| StrategyRow::new(o.strategy, o.outcome.answer, &o.outcome.stats))
        .collect();
    StatsReport::new(net.name.clone(), cfg.seeds(), rows)
}

/// Cross-checks runs against the enumeration oracle: answers must agree, and
/// every unreachable run's final store must cover the whole zone graph.
pub fn verify_against_oracle(
    net: &Network,
    outcomes: &[StrategyOutcome],
    node_limit: usize,
) -> Result<VerifyReport, OracleOverflow> {
    let oracle = oracle_enumerate(net, node_limit)?;
    let oracle_answer = if oracle.reachable {
        Answer::Reachable
    } else {
        Answer::Unreachable
    };
    let answers_match = outcomes.iter().all(|o| o.outcome.answer == oracle_answer);
    let coverage_ok = outcomes.iter().all(|o| {
        o.outcome.answer == Answer::Reachable || covers(&o.outcome.final_passed, &oracle.nodes)
    });
    Ok(VerifyReport {
        oracle_answer: oracle_answer.to_string(),
        oracle_nodes: oracle.nodes.len(),
        answers_match,
        coverage_ok,
    })
}

fn covers(passed: &[crate::search::PassedNode], oracle_nodes: &[SymNode]) -> bool {
    oracle_nodes
        .iter()
        .all(|node| passed.iter().any(|p| node_subsumes(&p.node, node)))
}
