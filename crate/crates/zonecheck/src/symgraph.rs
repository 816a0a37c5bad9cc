//! The abstract zone graph: initial node, symbolic successors, node
//! subsumption, and a brute-force enumeration oracle used as ground truth.

use std::collections::{HashMap, VecDeque};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use thiserror::Error;

use crate::automaton::Network;
use crate::zone::{Dbm, LuBounds};

/// A node of the abstract zone graph: a product state paired with a
/// nonempty canonical zone that is a fixed point of the LU widening.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymNode {
    pub state: crate::automaton::ProductState,
    pub zone: Dbm,
}

/// The root node: the initial product state with the widened time closure of
/// the all-zeros valuation.
pub fn initial_node(net: &Network, lu: &LuBounds) -> SymNode {
    SymNode {
        state: net.initial_state(),
        zone: Dbm::initial(net.nclocks()).extrapolate_lu(lu),
    }
}

/// Symbolic successors of a node, one per enabled product edge whose zone
/// stays nonempty: let time elapse, intersect the guard, apply the resets,
/// then widen. Output follows edge enumeration order; a supplied RNG permutes
/// that order first.
pub fn successors_with(
    net: &Network,
    lu: &LuBounds,
    node: &SymNode,
    shuffle: Option<&mut StdRng>,
) -> Vec<SymNode> {
    debug_assert_eq!(node.zone, node.zone.extrapolate_lu(lu));
    let mut edges = net.enabled_edges(&node.state);
    if let Some(rng) = shuffle {
        edges.shuffle(rng);
    }
    let delayed = node.zone.delay();
    let mut out = Vec::with_capacity(edges.len());
    for edge in edges {
        let mut zone = delayed.clone();
        let mut empty = false;
        for atom in &edge.guard {
            match zone.constrain(atom) {
                Some(z) => zone = z,
                None => {
                    empty = true;
                    break;
                }
            }
        }
        if empty {
            continue;
        }
        let zone = zone.reset(&edge.resets).extrapolate_lu(lu);
        out.push(SymNode {
            state: edge.target,
            zone,
        });
    }
    out
}

/// Successors in plain edge enumeration order.
pub fn successors(net: &Network, lu: &LuBounds, node: &SymNode) -> Vec<SymNode> {
    successors_with(net, lu, node, None)
}

/// True iff `big` covers `small`: equal product states and zone inclusion.
pub fn node_subsumes(big: &SymNode, small: &SymNode) -> bool {
    big.state == small.state && big.zone.includes(&small.zone)
}

/// Result of exhaustively enumerating the abstract zone graph.
#[derive(Clone, Debug)]
pub struct EnumeratedGraph {
    pub reachable: bool,
    pub nodes: Vec<SymNode>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("zone graph enumeration exceeded {limit} nodes")]
pub struct OracleOverflow {
    pub limit: usize,
}

/// Enumerates every node of the abstract zone graph by breadth-first search
/// with exact-equality deduplication and no subsumption. Ground truth for the
/// search strategies: slower, but independent of any exploration order.
pub fn oracle_enumerate(
    net: &Network,
    node_limit: usize,
) -> Result<EnumeratedGraph, OracleOverflow> {
    let lu = net.lu_bounds();
    let root = initial_node(net, &lu);
    let mut seen: HashMap<SymNode, ()> = HashMap::new();
    let mut nodes = Vec::new();
    let mut queue = VecDeque::new();
    let mut reachable = net.is_accepting(&root.state);
    seen.insert(root.clone(), ());
    nodes.push(root.clone());
    queue.push_back(root);
    while let Some(node) = queue.pop_front() {
        for succ in successors(net, &lu, &node) {
            if seen.contains_key(&succ) {
                continue;
            }
            if nodes.len() >= node_limit {
                return Err(OracleOverflow { limit: node_limit });
            }
            reachable = reachable || net.is_accepting(&succ.state);
            seen.insert(succ.clone(), ());
            nodes.push(succ.clone());
            queue.push_back(succ);
        }
    }
    Ok(EnumeratedGraph { reachable, nodes })
}
