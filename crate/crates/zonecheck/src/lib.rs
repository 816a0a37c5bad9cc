//! Zone-based reachability checking for networks of timed automata.
//!
//! The crate builds the abstract zone graph of a network on the fly —
//! difference bound matrices under LU widening — and explores it with a
//! subsumption-maximal passed store. The exploration core supports five
//! waiting-list policies (FIFO, LIFO, rank priority, topological waiting,
//! and topological waiting with true-zone priority) and instruments every
//! run with mistake metrics: nodes that were expanded but later evicted
//! because a bigger node turned up.

pub mod automaton;
pub mod compare;
pub mod model;
pub mod order;
pub mod report;
pub mod search;
pub mod symgraph;
pub mod zone;

pub use automaton::{Network, ProductState, TimedAutomaton};
pub use search::{
    check_reachability, Answer, SearchOutcome, SearchStats, Strategy, StrategyConfig,
};
pub use symgraph::{initial_node, node_subsumes, oracle_enumerate, successors, SymNode};
pub use zone::{AtomicConstraint, Bound, ClockId, Dbm, LuBounds, RelOp, Valuation};
