//! Built-in model generators: the racing automaton, the BlowUp family, and
//! Fischer's mutual-exclusion protocol, plus a random-model fuzzer for
//! cross-checking the search strategies against the enumeration oracle.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::automaton::{Edge, Location, ModelError, Network, SyncPair, TimedAutomaton};
use crate::zone::{AtomicConstraint, ClockId, RelOp};

fn loc(name: &str, accepting: bool) -> Location {
    Location {
        name: name.to_string(),
        accepting,
    }
}

fn atom(clock: usize, op: RelOp, constant: u64) -> AtomicConstraint {
    AtomicConstraint::new(ClockId::new(clock), op, constant)
}

/// A single-process automaton over one clock where a longer path produces a
/// bigger zone than a shorter one, so naive search orders expand a node that
/// a later, bigger node makes redundant. No accepting location.
///
/// Locations q1..q4; edges q1->q2, q2->q3, q1->q3 (y>1), q3->q4 (y<=5),
/// q4->q1 (reset y).
pub fn racing() -> Network {
    let edges = vec![
        Edge {
            source: 0,
            guard: vec![],
            resets: vec![],
            action: 0,
            target: 1,
        },
        Edge {
            source: 1,
            guard: vec![],
            resets: vec![],
            action: 1,
            target: 2,
        },
        Edge {
            source: 0,
            guard: vec![atom(1, RelOp::Gt, 1)],
            resets: vec![],
            action: 2,
            target: 2,
        },
        Edge {
            source: 2,
            guard: vec![atom(1, RelOp::Le, 5)],
            resets: vec![],
            action: 3,
            target: 3,
        },
        Edge {
            source: 3,
            guard: vec![],
            resets: vec![ClockId::new(1)],
            action: 4,
            target: 0,
        },
    ];
    let process = TimedAutomaton::new(
        "race".into(),
        vec![
            loc("q1", false),
            loc("q2", false),
            loc("q3", false),
            loc("q4", false),
        ],
        0,
        vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()],
        edges,
    )
    .expect("racing model is well formed");
    Network::new("racing".into(), vec!["y".into()], vec![process], vec![])
        .expect("racing model is well formed")
}

/// A chain of `n` diamond segments over segment clocks x1..xn plus one
/// never-reset witness clock w. Segment `i` offers a short edge gated by
/// `x_i >= i` and a two-edge detour; both reset `x_i`. Until its reset, `x_i`
/// stays equal to `w`, so a taken gate lifts the witness and the reset
/// freezes the current witness floor into the bound on `w - x_i`. Every
/// combination of gates therefore leaves a distinct zone at the last join
/// (the graph has `2^n` paths to it), all of them inside the gate-free
/// all-detour zone: later, longer paths produce strictly bigger zones. The
/// short edge is declared first so breadth-first search reaches each join
/// through a small zone; the accepting sink hangs behind an unsatisfiable
/// guard, forcing full exploration.
pub fn blowup(n: usize) -> Result<Network, ModelError> {
    if n == 0 {
        return Err(ModelError::InvalidParameter(
            "blowup needs at least one segment".into(),
        ));
    }
    let mut locations: Vec<Location> = (1..=2 * n + 1)
        .map(|i| loc(&format!("q{i}"), false))
        .collect();
    locations.push(loc("qf", true));
    let mut edges = Vec::new();
    for i in 1..=n {
        let entry = 2 * i - 2;
        let mid = 2 * i - 1;
        let exit = 2 * i;
        edges.push(Edge {
            source: entry,
            guard: vec![atom(i, RelOp::Ge, i as u64)],
            resets: vec![ClockId::new(i)],
            action: 0,
            target: exit,
        });
        edges.push(Edge {
            source: entry,
            guard: vec![],
            resets: vec![ClockId::new(i)],
            action: 0,
            target: mid,
        });
        edges.push(Edge {
            source: mid,
            guard: vec![],
            resets: vec![],
            action: 0,
            target: exit,
        });
    }
    // Unsatisfiable exit; the upper bound on the witness only protects the
    // frozen marks from being widened away.
    edges.push(Edge {
        source: 2 * n,
        guard: vec![atom(1, RelOp::Lt, 0), atom(n + 1, RelOp::Le, n as u64)],
        resets: vec![],
        action: 0,
        target: 2 * n + 1,
    });
    let mut clocks: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    clocks.push("w".into());
    let process = TimedAutomaton::new("chain".into(), locations, 0, vec!["t".into()], edges)
        .expect("blowup model is well formed");
    Network::new(format!("blowup{n}"), clocks, vec![process], vec![])
}

/// Fischer's timed mutual-exclusion protocol for `n` processes, with the
/// shared id variable modeled as an extra lock process and binary
/// synchronizations for reads and writes. Each process cycles idle -> req
/// (reads id = 0) -> wait (writes id := i within `x_i <= 1`) -> cs (re-reads
/// id = i after `x_i > 2`) -> idle (writes id := 0); the read delay strictly
/// dominating the write window makes the critical section exclusive.
///
/// Product acceptance requires every component to accept, so the violation
/// "two processes in the critical section at once" is encoded as the first
/// two processes sitting in their critical sections while every other
/// component accepts anywhere; the protocol is symmetric, so this captures
/// mutual exclusion for reachability purposes.
pub fn fischer(n: usize) -> Result<Network, ModelError> {
    fischer_model(n, false)
}

/// The protocol-breaking mutant of [`fischer`]: the read-delay lower bound is
/// weakened to `x_i >= 0`, reintroducing the race that lets two processes
/// enter the critical section.
pub fn fischer_weakened(n: usize) -> Result<Network, ModelError> {
    fischer_model(n, true)
}

fn fischer_model(n: usize, weakened: bool) -> Result<Network, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidParameter(
            "fischer needs at least two processes".into(),
        ));
    }
    let mut processes = Vec::new();
    for i in 1..=n {
        let enter_guard = if weakened {
            vec![atom(i, RelOp::Ge, 0)]
        } else {
            vec![atom(i, RelOp::Gt, 2)]
        };
        let in_pair = i <= 2;
        let locations = vec![
            loc("idle", !in_pair),
            loc("req", !in_pair),
            loc("wait", !in_pair),
            loc("cs", true),
        ];
        let edges = vec![
            Edge {
                source: 0,
                guard: vec![],
                resets: vec![ClockId::new(i)],
                action: 0,
                target: 1,
            },
            Edge {
                source: 1,
                guard: vec![atom(i, RelOp::Le, 1)],
                resets: vec![ClockId::new(i)],
                action: 1,
                target: 2,
            },
            Edge {
                source: 2,
                guard: enter_guard,
                resets: vec![],
                action: 2,
                target: 3,
            },
            Edge {
                source: 3,
                guard: vec![],
                resets: vec![ClockId::new(i)],
                action: 3,
                target: 0,
            },
        ];
        processes.push(
            TimedAutomaton::new(
                format!("p{i}"),
                locations,
                0,
                vec!["probe".into(), "set".into(), "enter".into(), "exit".into()],
                edges,
            )
            .expect("fischer process is well formed"),
        );
    }

    // The lock process carries the value of the shared id variable: location
    // l{v} means id = v. Reads are self-loops, writes move between values.
    let lock_locations: Vec<Location> = (0..=n).map(|v| loc(&format!("l{v}"), true)).collect();
    let mut lock_actions = Vec::new();
    let mut lock_edges = Vec::new();
    for i in 1..=n {
        let peek = lock_actions.len();
        lock_actions.push(format!("peek{i}"));
        lock_edges.push(Edge {
            source: 0,
            guard: vec![],
            resets: vec![],
            action: peek,
            target: 0,
        });
        let grab = lock_actions.len();
        lock_actions.push(format!("grab{i}"));
        for from in 0..=n {
            lock_edges.push(Edge {
                source: from,
                guard: vec![],
                resets: vec![],
                action: grab,
                target: i,
            });
        }
        let matched = lock_actions.len();
        lock_actions.push(format!("match{i}"));
        lock_edges.push(Edge {
            source: i,
            guard: vec![],
            resets: vec![],
            action: matched,
            target: i,
        });
        let free = lock_actions.len();
        lock_actions.push(format!("free{i}"));
        lock_edges.push(Edge {
            source: i,
            guard: vec![],
            resets: vec![],
            action: free,
            target: 0,
        });
    }
    processes.push(
        TimedAutomaton::new("id".into(), lock_locations, 0, lock_actions, lock_edges)
            .expect("fischer lock process is well formed"),
    );

    let lock = n;
    let mut syncs = Vec::new();
    for i in 1..=n {
        let p = i - 1;
        let base = 4 * (i - 1);
        syncs.push(SyncPair {
            left: (p, 0),
            right: (lock, base),
        }); // probe / peek
        syncs.push(SyncPair {
            left: (p, 1),
            right: (lock, base + 1),
        }); // set / grab
        syncs.push(SyncPair {
            left: (p, 2),
            right: (lock, base + 2),
        }); // enter / match
        syncs.push(SyncPair {
            left: (p, 3),
            right: (lock, base + 3),
        }); // exit / free
    }

    let clocks: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let suffix = if weakened { "-weak" } else { "" };
    Network::new(format!("fischer{n}{suffix}"), clocks, processes, syncs)
}

/// Parses a generator spec of the form `racing`, `blowup:N`, or `fischer:N`.
pub fn from_spec(spec: &str) -> Result<Network, ModelError> {
    let (name, arg) = match spec.split_once(':') {
        Some((name, arg)) => (name, Some(arg)),
        None => (spec, None),
    };
    let parse_arg = |what: &str| -> Result<usize, ModelError> {
        arg.ok_or_else(|| {
            ModelError::InvalidParameter(format!("{what} needs a size, e.g. {what}:3"))
        })?
        .parse()
        .map_err(|_| ModelError::InvalidParameter(format!("bad size for {what}: {arg:?}")))
    };
    match name {
        "racing" => {
            if arg.is_some() {
                return Err(ModelError::InvalidParameter("racing takes no size".into()));
            }
            Ok(racing())
        }
        "blowup" => blowup(parse_arg("blowup")?),
        "fischer" => fischer(parse_arg("fischer")?),
        other => Err(ModelError::InvalidParameter(format!(
            "unknown generator {other:?}"
        ))),
    }
}

/// A small random network for cross-checking strategies against the oracle:
/// at most two processes, two clocks, and six locations overall, with random
/// guards, resets, accepting flags, and binary syncs. Deterministic per seed.
pub fn random_network(seed: u64) -> Network {
    let mut rng = StdRng::seed_from_u64(seed);
    let nprocs = rng.random_range(1..=2usize);
    let nclocks = rng.random_range(1..=2usize);
    let clocks: Vec<String> = (1..=nclocks).map(|i| format!("c{i}")).collect();
    let letters = ["a", "b", "c"];

    let mut processes = Vec::new();
    let mut used_actions: Vec<Vec<String>> = Vec::new();
    for pid in 0..nprocs {
        let nlocs = rng.random_range(1..=6 / nprocs);
        let locations: Vec<Location> = (0..nlocs)
            .map(|l| loc(&format!("s{l}"), rng.random_range(0..4u8) == 0))
            .collect();
        let nedges = rng.random_range(0..=2 * nlocs);
        let mut actions: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for _ in 0..nedges {
            let letter = letters[rng.random_range(0..letters.len())];
            let action = match actions.iter().position(|a| a == letter) {
                Some(id) => id,
                None => {
                    actions.push(letter.to_string());
                    actions.len() - 1
                }
            };
            let mut guard = Vec::new();
            for _ in 0..rng.random_range(0..=2u32) {
                let clock_idx = rng.random_range(1..=nclocks);
                let op = match rng.random_range(0..5u8) {
                    0 => RelOp::Lt,
                    1 => RelOp::Le,
                    2 => RelOp::Eq,
                    3 => RelOp::Ge,
                    _ => RelOp::Gt,
                };
                guard.push(atom(clock_idx, op, rng.random_range(0..=5u64)));
            }
            let resets = (1..=nclocks)
                .filter(|_| rng.random_range(0..3u8) == 0)
                .map(ClockId::new)
                .collect();
            edges.push(Edge {
                source: rng.random_range(0..nlocs),
                guard,
                resets,
                action,
                target: rng.random_range(0..nlocs),
            });
        }
        used_actions.push(actions.clone());
        processes.push(
            TimedAutomaton::new(format!("p{pid}"), locations, 0, actions, edges)
                .expect("random process is well formed"),
        );
    }

    let mut syncs = Vec::new();
    if nprocs == 2 && !used_actions[0].is_empty() && !used_actions[1].is_empty() {
        for _ in 0..rng.random_range(0..=2u32) {
            let la = rng.random_range(0..used_actions[0].len());
            let ra = rng.random_range(0..used_actions[1].len());
            let pair = SyncPair {
                left: (0, la),
                right: (1, ra),
            };
            if !syncs.contains(&pair) {
                syncs.push(pair);
            }
        }
    }

    Network::new(format!("random{seed}"), clocks, processes, syncs)
        .expect("random network is well formed")
}
