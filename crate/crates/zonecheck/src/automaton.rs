//! Timed-automaton and network model: locations, guarded edges, binary
//! synchronization, on-the-fly product edges, and guard-bound extraction.

use std::fmt;

use thiserror::Error;

use crate::zone::{AtomicConstraint, ClockId, LuBounds, RelOp};

pub type LocId = usize;
pub type ProcId = usize;
pub type ActionId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub name: String,
    pub accepting: bool,
}

/// One transition of a process: `source --guard, action, resets--> target`.
/// An empty guard is `true`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: LocId,
    pub guard: Vec<AtomicConstraint>,
    pub resets: Vec<ClockId>,
    pub action: ActionId,
    pub target: LocId,
}

/// A single process of a network. Clock ids refer to the network-global
/// clock list; actions are process-local and matched through explicit sync
/// declarations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedAutomaton {
    pub name: String,
    pub locations: Vec<Location>,
    pub initial: LocId,
    pub actions: Vec<String>,
    pub edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
}

impl TimedAutomaton {
    pub fn new(
        name: String,
        locations: Vec<Location>,
        initial: LocId,
        actions: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<TimedAutomaton, ModelError> {
        if initial >= locations.len() {
            return Err(ModelError::UnknownLocation {
                process: name,
                location: format!("#{initial}"),
            });
        }
        for e in &edges {
            if e.source >= locations.len() || e.target >= locations.len() {
                return Err(ModelError::UnknownLocation {
                    process: name,
                    location: format!("#{}", e.source.max(e.target)),
                });
            }
            if e.action >= actions.len() {
                return Err(ModelError::UnknownAction {
                    process: name,
                    action: format!("#{}", e.action),
                });
            }
        }
        let mut outgoing = vec![Vec::new(); locations.len()];
        for (idx, e) in edges.iter().enumerate() {
            outgoing[e.source].push(idx);
        }
        Ok(TimedAutomaton {
            name,
            locations,
            initial,
            actions,
            edges,
            outgoing,
        })
    }

    /// Indices into `edges` of the transitions leaving `loc`, in declaration
    /// order.
    pub fn outgoing(&self, loc: LocId) -> &[usize] {
        &self.outgoing[loc]
    }

    pub fn action_id(&self, action: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == action)
    }

    pub fn location_id(&self, location: &str) -> Option<LocId> {
        self.locations.iter().position(|l| l.name == location)
    }
}

/// A binary synchronization: the two named process/action slots move
/// together; everything else stays put.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncPair {
    pub left: (ProcId, ActionId),
    pub right: (ProcId, ActionId),
}

/// A network of timed automata over a shared clock set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub name: String,
    pub clock_names: Vec<String>,
    pub processes: Vec<TimedAutomaton>,
    pub syncs: Vec<SyncPair>,
    /// `synced[p][a]`: action `a` of process `p` occurs in some sync pair.
    synced: Vec<Vec<bool>>,
}

/// A tuple of per-process locations, one per process.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState(pub Vec<LocId>);

/// One enabled transition of the product automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEdge {
    pub guard: Vec<AtomicConstraint>,
    pub resets: Vec<ClockId>,
    pub label: String,
    pub target: ProductState,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown clock {0}")]
    UnknownClock(String),
    #[error("unknown location {location} in process {process}")]
    UnknownLocation { process: String, location: String },
    #[error("unknown action {action} in process {process}")]
    UnknownAction { process: String, action: String },
    #[error("sync pair stays within process {0}")]
    SyncWithinProcess(String),
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}

impl Network {
    pub fn new(
        name: String,
        clock_names: Vec<String>,
        processes: Vec<TimedAutomaton>,
        syncs: Vec<SyncPair>,
    ) -> Result<Network, ModelError> {
        let nclocks = clock_names.len();
        for p in &processes {
            for e in &p.edges {
                for atom in &e.guard {
                    if atom.clock.index() > nclocks || atom.clock.is_reference() {
                        return Err(ModelError::UnknownClock(format!("#{}", atom.clock.index())));
                    }
                }
                for r in &e.resets {
                    if r.index() > nclocks || r.is_reference() {
                        return Err(ModelError::UnknownClock(format!("#{}", r.index())));
                    }
                }
            }
        }
        let mut synced: Vec<Vec<bool>> = processes
            .iter()
            .map(|p| vec![false; p.actions.len()])
            .collect();
        for s in &syncs {
            let (lp, la) = s.left;
            let (rp, ra) = s.right;
            if lp == rp {
                return Err(ModelError::SyncWithinProcess(
                    processes
                        .get(lp)
                        .map_or_else(|| format!("#{lp}"), |p| p.name.clone()),
                ));
            }
            for &(p, a) in [&s.left, &s.right] {
                if p >= processes.len() {
                    return Err(ModelError::UnknownAction {
                        process: format!("#{p}"),
                        action: format!("#{a}"),
                    });
                }
                if a >= processes[p].actions.len() {
                    return Err(ModelError::UnknownAction {
                        process: processes[p].name.clone(),
                        action: format!("#{a}"),
                    });
                }
            }
            synced[lp][la] = true;
            synced[rp][ra] = true;
        }
        Ok(Network {
            name,
            clock_names,
            processes,
            syncs,
            synced,
        })
    }

    pub fn nclocks(&self) -> usize {
        self.clock_names.len()
    }

    pub fn clock_id(&self, name: &str) -> Option<ClockId> {
        self.clock_names
            .iter()
            .position(|c| c == name)
            .map(|i| ClockId::new(i + 1))
    }

    pub fn initial_state(&self) -> ProductState {
        ProductState(self.processes.iter().map(|p| p.initial).collect())
    }

    /// True iff every component location is accepting in its process.
    pub fn is_accepting(&self, s: &ProductState) -> bool {
        debug_assert_eq!(s.0.len(), self.processes.len());
        self.processes
            .iter()
            .zip(&s.0)
            .all(|(p, &loc)| p.locations[loc].accepting)
    }

    /// Per-clock guard bounds over the whole network: `l` collects constants
    /// from lower-bound comparisons (`>`, `>=`, `=`), `u` from upper-bound
    /// comparisons (`<`, `<=`, `=`).
    pub fn lu_bounds(&self) -> LuBounds {
        let mut lu = LuBounds::new(self.nclocks());
        for p in &self.processes {
            for e in &p.edges {
                for atom in &e.guard {
                    let c = atom.constant as i64;
                    match atom.op {
                        RelOp::Gt | RelOp::Ge => lu.record_lower(atom.clock, c),
                        RelOp::Lt | RelOp::Le => lu.record_upper(atom.clock, c),
                        RelOp::Eq => {
                            lu.record_lower(atom.clock, c);
                            lu.record_upper(atom.clock, c);
                        }
                    }
                }
            }
        }
        lu
    }

    /// The transitions of the product automaton enabled in `s`, in
    /// deterministic order: local edges by process then declaration order,
    /// followed by synchronized pairs in sync declaration order.
    pub fn enabled_edges(&self, s: &ProductState) -> Vec<ProductEdge> {
        debug_assert_eq!(s.0.len(), self.processes.len());
        let mut out = Vec::new();
        for (pid, p) in self.processes.iter().enumerate() {
            for &eidx in p.outgoing(s.0[pid]) {
                let e = &p.edges[eidx];
                if self.synced[pid][e.action] {
                    continue;
                }
                let mut target = s.clone();
                target.0[pid] = e.target;
                out.push(ProductEdge {
                    guard: e.guard.clone(),
                    resets: e.resets.clone(),
                    label: format!("{}.{}", p.name, p.actions[e.action]),
                    target,
                });
            }
        }
        for sync in &self.syncs {
            let (lp, la) = sync.left;
            let (rp, ra) = sync.right;
            let left_proc = &self.processes[lp];
            let right_proc = &self.processes[rp];
            for &lidx in left_proc.outgoing(s.0[lp]) {
                let le = &left_proc.edges[lidx];
                if le.action != la {
                    continue;
                }
                for &ridx in right_proc.outgoing(s.0[rp]) {
                    let re = &right_proc.edges[ridx];
                    if re.action != ra {
                        continue;
                    }
                    let mut guard = le.guard.clone();
                    guard.extend(re.guard.iter().cloned());
                    let mut resets = le.resets.clone();
                    for r in &re.resets {
                        if !resets.contains(r) {
                            resets.push(*r);
                        }
                    }
                    let mut target = s.clone();
                    target.0[lp] = le.target;
                    target.0[rp] = re.target;
                    out.push(ProductEdge {
                        guard,
                        resets,
                        label: format!(
                            "{}.{}|{}.{}",
                            left_proc.name,
                            left_proc.actions[la],
                            right_proc.name,
                            right_proc.actions[ra]
                        ),
                        target,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, loc) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{loc}")?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc(name: &str) -> Location {
        Location {
            name: name.to_string(),
            accepting: false,
        }
    }

    fn accepting(name: &str) -> Location {
        Location {
            name: name.to_string(),
            accepting: true,
        }
    }

    fn atom(clock: usize, op: RelOp, c: u64) -> AtomicConstraint {
        AtomicConstraint::new(ClockId::new(clock), op, c)
    }

    /// Two processes over clocks x, y with one synced action each plus one
    /// local action on the first process.
    fn two_process_net() -> Network {
        let p1 = TimedAutomaton::new(
            "p1".into(),
            vec![loc("a0"), loc("a1"), loc("a2")],
            0,
            vec!["go".into(), "solo".into()],
            vec![
                Edge {
                    source: 0,
                    guard: vec![atom(1, RelOp::Gt, 1)],
                    resets: vec![],
                    action: 0,
                    target: 1,
                },
                Edge {
                    source: 0,
                    guard: vec![],
                    resets: vec![ClockId::new(1)],
                    action: 1,
                    target: 2,
                },
            ],
        )
        .unwrap();
        let p2 = TimedAutomaton::new(
            "p2".into(),
            vec![loc("b0"), accepting("b1")],
            0,
            vec!["go".into()],
            vec![Edge {
                source: 0,
                guard: vec![atom(2, RelOp::Le, 5)],
                resets: vec![ClockId::new(2)],
                action: 0,
                target: 1,
            }],
        )
        .unwrap();
        Network::new(
            "pair".into(),
            vec!["x".into(), "y".into()],
            vec![p1, p2],
            vec![SyncPair {
                left: (0, 0),
                right: (1, 0),
            }],
        )
        .unwrap()
    }

    #[test]
    fn lu_bounds_collect_guard_constants() {
        let net = two_process_net();
        let lu = net.lu_bounds();
        assert_eq!(lu.lower(ClockId::new(1)), Some(1));
        assert_eq!(lu.upper(ClockId::new(1)), None);
        assert_eq!(lu.upper(ClockId::new(2)), Some(5));
        assert_eq!(lu.lower(ClockId::new(2)), None);
    }

    #[test]
    fn lu_bounds_of_guardless_model_are_absent() {
        let p = TimedAutomaton::new(
            "p".into(),
            vec![loc("q0"), loc("q1")],
            0,
            vec!["a".into()],
            vec![Edge {
                source: 0,
                guard: vec![],
                resets: vec![],
                action: 0,
                target: 1,
            }],
        )
        .unwrap();
        let net = Network::new("m".into(), vec!["x".into()], vec![p], vec![]).unwrap();
        let lu = net.lu_bounds();
        assert_eq!(lu.lower(ClockId::new(1)), None);
        assert_eq!(lu.upper(ClockId::new(1)), None);
    }

    #[test]
    fn equality_guard_feeds_both_bounds() {
        let p = TimedAutomaton::new(
            "p".into(),
            vec![loc("q0"), loc("q1")],
            0,
            vec!["a".into()],
            vec![Edge {
                source: 0,
                guard: vec![atom(1, RelOp::Eq, 3)],
                resets: vec![],
                action: 0,
                target: 1,
            }],
        )
        .unwrap();
        let net = Network::new("m".into(), vec!["x".into()], vec![p], vec![]).unwrap();
        let lu = net.lu_bounds();
        assert_eq!(lu.lower(ClockId::new(1)), Some(3));
        assert_eq!(lu.upper(ClockId::new(1)), Some(3));
    }

    #[test]
    fn synced_edges_conjoin_guards_and_union_resets() {
        let net = two_process_net();
        let edges = net.enabled_edges(&net.initial_state());
        // One local edge (p1.solo first, by process order), then the sync.
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].label, "p1.solo");
        assert_eq!(edges[1].label, "p1.go|p2.go");
        let sync = &edges[1];
        assert_eq!(
            sync.guard,
            vec![atom(1, RelOp::Gt, 1), atom(2, RelOp::Le, 5)]
        );
        assert_eq!(sync.resets, vec![ClockId::new(2)]);
        assert_eq!(sync.target, ProductState(vec![1, 1]));
    }

    #[test]
    fn sync_without_partner_is_blocked() {
        let net = two_process_net();
        // From <a2, b0> the p1 side of the sync has no "go" edge, so the
        // p2 edge may not fire alone.
        let edges = net.enabled_edges(&ProductState(vec![2, 0]));
        assert!(edges.is_empty());
    }

    #[test]
    fn single_process_product_mirrors_the_process() {
        let p = TimedAutomaton::new(
            "p".into(),
            vec![loc("q0"), loc("q1")],
            0,
            vec!["a".into(), "b".into()],
            vec![
                Edge {
                    source: 0,
                    guard: vec![atom(1, RelOp::Gt, 2)],
                    resets: vec![ClockId::new(1)],
                    action: 0,
                    target: 1,
                },
                Edge {
                    source: 0,
                    guard: vec![],
                    resets: vec![],
                    action: 1,
                    target: 0,
                },
            ],
        )
        .unwrap();
        let net = Network::new("m".into(), vec!["x".into()], vec![p], vec![]).unwrap();
        let edges = net.enabled_edges(&net.initial_state());
        assert_eq!(edges.len(), 2);
        for (edge, original) in edges.iter().zip(&net.processes[0].edges) {
            assert_eq!(edge.guard, original.guard);
            assert_eq!(edge.resets, original.resets);
            assert_eq!(edge.target, ProductState(vec![original.target]));
        }
    }

    #[test]
    fn acceptance_requires_every_component() {
        let net = two_process_net();
        assert!(!net.is_accepting(&ProductState(vec![0, 1])));
        let all_accepting = {
            let mut n = net.clone();
            n.processes[0].locations[1].accepting = true;
            n
        };
        assert!(all_accepting.is_accepting(&ProductState(vec![1, 1])));
        assert!(!all_accepting.is_accepting(&ProductState(vec![0, 1])));
    }

    #[test]
    fn guards_over_unknown_clocks_are_rejected() {
        let p = TimedAutomaton::new(
            "p".into(),
            vec![loc("q0"), loc("q1")],
            0,
            vec!["a".into()],
            vec![Edge {
                source: 0,
                guard: vec![atom(3, RelOp::Lt, 1)],
                resets: vec![],
                action: 0,
                target: 1,
            }],
        )
        .unwrap();
        let err = Network::new("m".into(), vec!["x".into()], vec![p], vec![]).unwrap_err();
        assert!(matches!(err, ModelError::UnknownClock(_)));
    }

    #[test]
    fn sync_within_one_process_is_rejected() {
        let p =
            TimedAutomaton::new("p".into(), vec![loc("q0")], 0, vec!["a".into()], vec![]).unwrap();
        let err = Network::new(
            "m".into(),
            vec!["x".into()],
            vec![p],
            vec![SyncPair {
                left: (0, 0),
                right: (0, 0),
            }],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::SyncWithinProcess("p".into()));
    }
}
