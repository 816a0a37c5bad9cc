//! The exploration core: a reachability loop over the abstract zone graph
//! with a subsumption-maximal passed store, five waiting-list policies, the
//! passed-tree and rank machinery, and full statistics accounting.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Network, ProductState};
use crate::order::{JointOrder, LinearKey};
use crate::symgraph::{initial_node, successors_with, SymNode};
use crate::zone::Dbm;

/// Priority of a stored node: a natural number or infinity, infinity on top.
/// New nodes start at zero, nodes with the universal zone at infinity (they
/// can never be covered, so exploring them first is never wasted), and a
/// covering node outranks the waiting descendants of whatever it evicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn initial(zone: &Dbm) -> Rank {
        if zone.is_true() {
            Rank::Infinite
        } else {
            Rank::Finite(0)
        }
    }

    fn successor(self) -> Rank {
        match self {
            Rank::Finite(n) => Rank::Finite(n + 1),
            Rank::Infinite => Rank::Infinite,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// The five waiting-list policies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// First in, first out.
    Bfs,
    /// Last in, first out.
    Dfs,
    /// Highest rank first, FIFO among ties.
    RankBfs,
    /// Minimal topological key first, FIFO among ties.
    Waiting,
    /// True-zone nodes first (FIFO among them), then minimal topological
    /// key, FIFO among ties.
    TwBfs,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Bfs,
        Strategy::Dfs,
        Strategy::RankBfs,
        Strategy::Waiting,
        Strategy::TwBfs,
    ];

    /// True for the policies that select by the joint topological order.
    pub fn needs_order(self) -> bool {
        matches!(self, Strategy::Waiting | Strategy::TwBfs)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bfs => "bfs",
            Strategy::Dfs => "dfs",
            Strategy::RankBfs => "rank-bfs",
            Strategy::Waiting => "waiting",
            Strategy::TwBfs => "tw-bfs",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "dfs" => Ok(Strategy::Dfs),
            "rank-bfs" => Ok(Strategy::RankBfs),
            "waiting" => Ok(Strategy::Waiting),
            "tw-bfs" => Ok(Strategy::TwBfs),
            other => Err(format!(
                "unknown strategy {other:?} (expected bfs, dfs, rank-bfs, waiting, tw-bfs)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Answer {
    Reachable,
    Unreachable,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Reachable => write!(f, "reachable"),
            Answer::Unreachable => write!(f, "unreachable"),
        }
    }
}

/// Counters of one search run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Nodes popped from the waiting list and expanded.
    pub visited: u64,
    /// Expanded nodes later evicted from the passed store by a bigger node.
    pub mistakes: u64,
    /// Peak size of the passed store.
    pub stored_max: u64,
    /// Size of the passed store at termination.
    pub stored_final: u64,
    /// Nodes touched while walking the passed tree to update ranks.
    pub visited_ranking: u64,
}

/// How one run should select nodes and whether to self-check its invariants.
#[derive(Clone, Debug)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    /// Required by the order-driven policies.
    pub joint_order: Option<JointOrder>,
    /// Permutes successor enumeration per expansion, deterministically.
    pub edge_shuffle_seed: Option<u64>,
    /// Assert the structural invariants of the store, tree, and ranks at
    /// every step. Slow; meant for tests.
    pub check_invariants: bool,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy) -> StrategyConfig {
        StrategyConfig {
            strategy,
            joint_order: None,
            edge_shuffle_seed: None,
            check_invariants: false,
        }
    }

    pub fn with_order(mut self, order: JointOrder) -> StrategyConfig {
        self.joint_order = Some(order);
        self
    }

    pub fn with_edge_shuffle(mut self, seed: Option<u64>) -> StrategyConfig {
        self.edge_shuffle_seed = seed;
        self
    }

    pub fn with_invariant_checks(mut self) -> StrategyConfig {
        self.check_invariants = true;
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("strategy {0} needs a joint topological order")]
    MissingOrder(Strategy),
}

/// A node of the final passed store.
#[derive(Clone, Debug)]
pub struct PassedNode {
    pub node: SymNode,
    pub expanded: bool,
}

/// Verdict and accounting of one run.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub answer: Answer,
    pub stats: SearchStats,
    /// The passed store at termination, in discovery order.
    pub final_passed: Vec<PassedNode>,
}

type NodeId = usize;

struct StoredNode {
    node: SymNode,
    rank: Rank,
    in_waiting: bool,
    expanded: bool,
    removed: bool,
    /// Tree links, maintained in rank mode only. `parent == None` hangs the
    /// node under the virtual root.
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

/// The passed store: a slab of nodes, per-state buckets for subsumption
/// scans, and (in rank mode) the discovery tree over live nodes. Slots are
/// never reused, so stale waiting-list entries cannot alias a new node.
struct Store {
    nodes: Vec<StoredNode>,
    by_state: HashMap<ProductState, Vec<NodeId>>,
    roots: Vec<NodeId>,
    live: u64,
    tree_mode: bool,
}

impl Store {
    fn new(tree_mode: bool) -> Store {
        Store {
            nodes: Vec::new(),
            by_state: HashMap::new(),
            roots: Vec::new(),
            live: 0,
            tree_mode,
        }
    }

    fn bucket(&self, state: &ProductState) -> &[NodeId] {
        self.by_state.get(state).map_or(&[], |b| b.as_slice())
    }

    fn insert(&mut self, node: SymNode, rank: Rank, parent: Option<NodeId>) -> NodeId {
        let id = self.nodes.len();
        self.by_state
            .entry(node.state.clone())
            .or_default()
            .push(id);
        self.nodes.push(StoredNode {
            node,
            rank,
            in_waiting: true,
            expanded: false,
            removed: false,
            parent,
            children: Vec::new(),
        });
        if self.tree_mode {
            match parent {
                Some(p) => self.nodes[p].children.push(id),
                None => self.roots.push(id),
            }
        }
        self.live += 1;
        id
    }

    /// Evicts a subsumed node: out of the store, out of the waiting list,
    /// and — in rank mode — out of the tree, its children reattached to its
    /// parent so waiting descendants stay reachable. An expanded node
    /// removed here was visited for nothing, which is what the mistake
    /// counter measures.
    fn remove(&mut self, id: NodeId, stats: &mut SearchStats) {
        debug_assert!(!self.nodes[id].removed);
        if self.nodes[id].expanded {
            stats.mistakes += 1;
        }
        self.nodes[id].removed = true;
        self.nodes[id].in_waiting = false;
        self.live -= 1;
        let bucket = self
            .by_state
            .get_mut(&self.nodes[id].node.state)
            .expect("stored node has a bucket");
        bucket.retain(|&n| n != id);
        if self.tree_mode {
            let parent = self.nodes[id].parent;
            let children = std::mem::take(&mut self.nodes[id].children);
            match parent {
                Some(p) => {
                    self.nodes[p].children.retain(|&n| n != id);
                    for &child in &children {
                        self.nodes[child].parent = Some(p);
                        self.nodes[p].children.push(child);
                    }
                }
                None => {
                    self.roots.retain(|&n| n != id);
                    for &child in &children {
                        self.nodes[child].parent = None;
                        self.roots.push(child);
                    }
                }
            }
        }
    }

    /// The nearest live ancestor of a node, following parent links through
    /// evicted nodes; `None` is the virtual root. Needed when the node being
    /// expanded is itself evicted by one of its own successors.
    fn live_ancestor(&self, mut id: NodeId) -> Option<NodeId> {
        loop {
            if !self.nodes[id].removed {
                return Some(id);
            }
            id = self.nodes[id].parent?;
        }
    }

    /// Maximum rank among waiting nodes in the subtree of `id`; zero if none.
    /// Every node the walk touches is counted, since re-visiting stored nodes
    /// is the price of the rank machinery.
    fn max_rank_waiting(&self, id: NodeId, stats: &mut SearchStats) -> Rank {
        let mut best = Rank::Finite(0);
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            stats.visited_ranking += 1;
            let node = &self.nodes[n];
            if node.in_waiting {
                best = best.max(node.rank);
            } else {
                stack.extend(node.children.iter().copied());
            }
        }
        best
    }

    fn live_nodes(&self) -> Vec<PassedNode> {
        self.nodes
            .iter()
            .filter(|n| !n.removed)
            .map(|n| PassedNode {
                node: n.node.clone(),
                expanded: n.expanded,
            })
            .collect()
    }
}

/// Heap key of one waiting entry; smaller pops first. Only one variant is in
/// play per run.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PolicyKey {
    Fifo,
    Lifo(Reverse<u64>),
    Rank(Reverse<Rank>),
    Topo(LinearKey),
    /// `(false, floor)` for true-zone nodes, `(true, key)` otherwise, so the
    /// true-zone class pops first and in insertion order.
    TrueTopo(bool, LinearKey),
}

struct WaitList {
    heap: BinaryHeap<Reverse<(PolicyKey, u64, NodeId)>>,
    seq: u64,
}

impl WaitList {
    fn new() -> WaitList {
        WaitList {
            heap: BinaryHeap::new(),
            seq: 0,
        }
    }

    fn next_seq(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    fn push(&mut self, key: PolicyKey, seq: u64, id: NodeId) {
        self.heap.push(Reverse((key, seq, id)));
    }

    /// Pops the best live waiting node, skipping entries whose node was
    /// evicted since insertion.
    fn pop(&mut self, store: &mut Store) -> Option<NodeId> {
        while let Some(Reverse((_, _, id))) = self.heap.pop() {
            let node = &mut store.nodes[id];
            if node.removed || !node.in_waiting {
                continue;
            }
            node.in_waiting = false;
            return Some(id);
        }
        None
    }
}

fn policy_key(
    strategy: Strategy,
    order: Option<&JointOrder>,
    node: &SymNode,
    rank: Rank,
    seq: u64,
) -> PolicyKey {
    match strategy {
        Strategy::Bfs => PolicyKey::Fifo,
        Strategy::Dfs => PolicyKey::Lifo(Reverse(seq)),
        Strategy::RankBfs => PolicyKey::Rank(Reverse(rank)),
        Strategy::Waiting => PolicyKey::Topo(
            order
                .expect("waiting policy has an order")
                .linear_key(&node.state),
        ),
        Strategy::TwBfs => {
            if node.zone.is_true() {
                PolicyKey::TrueTopo(false, LinearKey::floor())
            } else {
                PolicyKey::TrueTopo(
                    true,
                    order
                        .expect("tw-bfs policy has an order")
                        .linear_key(&node.state),
                )
            }
        }
    }
}

/// Decides reachability of an accepting product state under the configured
/// strategy and reports the exploration statistics plus the final passed
/// store.
///
/// The loop keeps the waiting list inside the passed store and the store
/// subsumption-maximal: a successor covered by a stored node is dropped, and
/// a stored node covered by a fresh successor is evicted (costing a mistake
/// if it was already expanded). Under the rank policy the store doubles as a
/// discovery tree so a covering node can outrank the waiting descendants of
/// the nodes it evicts.
pub fn check_reachability(
    net: &Network,
    cfg: &StrategyConfig,
) -> Result<SearchOutcome, SearchError> {
    if cfg.strategy.needs_order() && cfg.joint_order.is_none() {
        return Err(SearchError::MissingOrder(cfg.strategy));
    }
    let order = cfg.joint_order.as_ref();
    let rank_mode = cfg.strategy == Strategy::RankBfs;
    let lu = net.lu_bounds();
    let mut rng = cfg.edge_shuffle_seed.map(StdRng::seed_from_u64);
    let mut stats = SearchStats::default();
    let mut store = Store::new(rank_mode);
    let mut wait = WaitList::new();

    let root = initial_node(net, &lu);
    let root_rank = Rank::initial(&root.zone);
    let seq = wait.next_seq();
    let key = policy_key(cfg.strategy, order, &root, root_rank, seq);
    let root_id = store.insert(root, root_rank, None);
    wait.push(key, seq, root_id);
    stats.stored_max = 1;

    let answer = loop {
        let Some(current) = wait.pop(&mut store) else {
            break Answer::Unreachable;
        };
        if cfg.check_invariants && rank_mode {
            assert_popped_rank_is_maximal(&store, current);
        }
        stats.visited += 1;
        store.nodes[current].expanded = true;
        if net.is_accepting(&store.nodes[current].node.state) {
            break Answer::Reachable;
        }
        for succ in successors_with(net, &lu, &store.nodes[current].node, rng.as_mut()) {
            if store
                .bucket(&succ.state)
                .iter()
                .any(|&id| store.nodes[id].node.zone.includes(&succ.zone))
            {
                continue;
            }
            let mut rank = Rank::initial(&succ.zone);
            let covered: Vec<NodeId> = store
                .bucket(&succ.state)
                .iter()
                .copied()
                .filter(|&id| succ.zone.includes(&store.nodes[id].node.zone))
                .collect();
            for id in covered {
                if rank_mode && !store.nodes[id].in_waiting {
                    let below = store.max_rank_waiting(id, &mut stats);
                    rank = rank.max(below.successor());
                }
                store.remove(id, &mut stats);
            }
            let parent = if rank_mode {
                store.live_ancestor(current)
            } else {
                None
            };
            let seq = wait.next_seq();
            let key = policy_key(cfg.strategy, order, &succ, rank, seq);
            let id = store.insert(succ, rank, parent);
            wait.push(key, seq, id);
            stats.stored_max = stats.stored_max.max(store.live);
        }
        if cfg.check_invariants {
            assert_store_invariants(&store, rank_mode);
        }
    };
    stats.stored_final = store.live;
    Ok(SearchOutcome {
        answer,
        stats,
        final_passed: store.live_nodes(),
    })
}

/// The popped node carries a rank at least as high as everything waiting.
fn assert_popped_rank_is_maximal(store: &Store, popped: NodeId) {
    let rank = store.nodes[popped].rank;
    for n in &store.nodes {
        if !n.removed && n.in_waiting {
            assert!(
                n.rank <= rank,
                "popped rank {rank:?} below waiting rank {:?}",
                n.rank
            );
        }
    }
}

/// Structural self-checks between expansions: the store is an antichain,
/// the frontier is exactly the unexpanded live nodes, waiting nodes are
/// leaves of the tree, true zones carry infinite rank, and every live node
/// hangs off the virtual root.
fn assert_store_invariants(store: &Store, rank_mode: bool) {
    for (state, bucket) in &store.by_state {
        for (i, &a) in bucket.iter().enumerate() {
            assert_eq!(&store.nodes[a].node.state, state);
            for &b in &bucket[i + 1..] {
                let za = &store.nodes[a].node.zone;
                let zb = &store.nodes[b].node.zone;
                assert!(
                    !za.includes(zb) && !zb.includes(za),
                    "stored nodes must be incomparable"
                );
            }
        }
    }
    for n in &store.nodes {
        if n.removed {
            continue;
        }
        assert_eq!(
            n.in_waiting, !n.expanded,
            "the frontier is the unexpanded live set"
        );
        if rank_mode {
            if n.in_waiting {
                assert!(n.children.is_empty(), "waiting nodes are tree leaves");
            }
            if n.node.zone.is_true() {
                assert_eq!(n.rank, Rank::Infinite, "true-zone nodes rank infinite");
            }
        }
    }
    if rank_mode {
        let mut reachable = 0u64;
        let mut stack: Vec<NodeId> = store.roots.clone();
        while let Some(id) = stack.pop() {
            assert!(!store.nodes[id].removed, "tree links only reach live nodes");
            reachable += 1;
            stack.extend(store.nodes[id].children.iter().copied());
        }
        assert_eq!(
            reachable, store.live,
            "every live node is reachable from the virtual root"
        );
    }
}
