//! Topological-like orderings that drive the waiting strategies: a DFS over
//! each process drops the edges that close cycles, reverse postorder of the
//! rest gives a per-process linear order, and product states compare
//! pointwise. A monotone total key linearizes the pointwise order for the
//! heap-backed waiting list.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::automaton::{LocId, Network, ProductState, TimedAutomaton};

/// A linear order on the locations of one process: `index[loc]` is the
/// position, a bijection onto `0..locations`. Every edge kept by the DFS
/// points strictly forward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoOrder {
    index: Vec<usize>,
}

impl TopoOrder {
    /// Runs a DFS from the initial location, ignoring transitions whose
    /// target is on the current search stack, and indexes locations by
    /// reverse postorder of the remaining acyclic graph. Children are visited
    /// in edge declaration order, permuted by `shuffle` when given;
    /// unreachable locations sort after all reachable ones in declaration
    /// order.
    pub fn from_dfs(process: &TimedAutomaton, shuffle: Option<&mut StdRng>) -> TopoOrder {
        Self::from_dfs_tracking(process, shuffle).0
    }

    /// As [`from_dfs`](Self::from_dfs), also reporting which edges were kept
    /// (true) versus dropped (false). Dropped edges are the cycle-closing
    /// ones plus everything leaving an unreachable location, which the DFS
    /// never explores.
    pub fn from_dfs_tracking(
        process: &TimedAutomaton,
        mut shuffle: Option<&mut StdRng>,
    ) -> (TopoOrder, Vec<bool>) {
        let n = process.locations.len();
        let mut kept = vec![false; process.edges.len()];
        let mut on_stack = vec![false; n];
        let mut visited = vec![false; n];
        let mut postorder: Vec<LocId> = Vec::with_capacity(n);
        // Explicit stack of (location, pending child edges in visit order).
        let mut stack: Vec<(LocId, Vec<usize>, usize)> = Vec::new();

        let child_edges = |loc: LocId, shuffle: &mut Option<&mut StdRng>| -> Vec<usize> {
            let mut edges: Vec<usize> = process.outgoing(loc).to_vec();
            if let Some(rng) = shuffle {
                edges.shuffle(rng);
            }
            edges
        };

        visited[process.initial] = true;
        on_stack[process.initial] = true;
        let first = child_edges(process.initial, &mut shuffle);
        stack.push((process.initial, first, 0));
        while let Some((loc, edges, cursor)) = stack.last_mut() {
            if *cursor == edges.len() {
                on_stack[*loc] = false;
                postorder.push(*loc);
                stack.pop();
                continue;
            }
            let edge_idx = edges[*cursor];
            *cursor += 1;
            let target = process.edges[edge_idx].target;
            if on_stack[target] {
                continue;
            }
            kept[edge_idx] = true;
            if !visited[target] {
                visited[target] = true;
                on_stack[target] = true;
                let children = child_edges(target, &mut shuffle);
                stack.push((target, children, 0));
            }
        }

        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for &loc in postorder.iter().rev() {
            index[loc] = next;
            next += 1;
        }
        for loc in 0..n {
            if !visited[loc] {
                index[loc] = next;
                next += 1;
            }
        }
        (TopoOrder { index }, kept)
    }

    pub fn index(&self, loc: LocId) -> usize {
        self.index[loc]
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Plain-text dump `location -> index`, one line per location in
    /// declaration order.
    pub fn dump(&self, process: &TimedAutomaton) -> String {
        let mut out = String::new();
        for (loc, l) in process.locations.iter().enumerate() {
            out.push_str(&format!(
                "{}:{} -> {}\n",
                process.name, l.name, self.index[loc]
            ));
        }
        out
    }
}

/// Outcome of comparing two product states pointwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JointCmp {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// One topological-like order per process; product states compare pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointOrder {
    per_process: Vec<TopoOrder>,
}

/// Total key linearizing the strict part of the joint order: componentwise
/// dominance strictly increases the index sum, and the lexicographic vector
/// breaks ties deterministically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearKey {
    sum: usize,
    lex: Vec<usize>,
}

impl LinearKey {
    /// Sorts before every key a real product state can produce; used to give
    /// priority classes a fixed slot inside heap entries.
    pub fn floor() -> LinearKey {
        LinearKey {
            sum: 0,
            lex: Vec::new(),
        }
    }
}

impl JointOrder {
    /// Computes one DFS order per process. A seed permutes the child visit
    /// order of every DFS (one generator threaded through the processes in
    /// order), exercising the sensitivity of the waiting strategies to the
    /// chosen ordering.
    pub fn compute(net: &Network, shuffle_seed: Option<u64>) -> JointOrder {
        let mut rng = shuffle_seed.map(StdRng::seed_from_u64);
        let per_process = net
            .processes
            .iter()
            .map(|p| TopoOrder::from_dfs(p, rng.as_mut()))
            .collect();
        JointOrder { per_process }
    }

    pub fn from_orders(per_process: Vec<TopoOrder>) -> JointOrder {
        JointOrder { per_process }
    }

    pub fn compare(&self, a: &ProductState, b: &ProductState) -> JointCmp {
        debug_assert_eq!(a.0.len(), self.per_process.len());
        debug_assert_eq!(b.0.len(), self.per_process.len());
        let mut some_less = false;
        let mut some_greater = false;
        for (order, (&la, &lb)) in self.per_process.iter().zip(a.0.iter().zip(b.0.iter())) {
            let (ia, ib) = (order.index(la), order.index(lb));
            some_less |= ia < ib;
            some_greater |= ia > ib;
        }
        match (some_less, some_greater) {
            (false, false) => JointCmp::Equal,
            (true, false) => JointCmp::Less,
            (false, true) => JointCmp::Greater,
            (true, true) => JointCmp::Incomparable,
        }
    }

    pub fn linear_key(&self, s: &ProductState) -> LinearKey {
        let lex: Vec<usize> = self
            .per_process
            .iter()
            .zip(s.0.iter())
            .map(|(o, &loc)| o.index(loc))
            .collect();
        LinearKey {
            sum: lex.iter().sum(),
            lex,
        }
    }

    pub fn dump(&self, net: &Network) -> String {
        let mut out = String::new();
        for (order, process) in self.per_process.iter().zip(&net.processes) {
            out.push_str(&order.dump(process));
        }
        out
    }
}
