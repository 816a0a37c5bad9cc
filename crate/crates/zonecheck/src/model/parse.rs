//! Line-based text format for networks of timed automata, one declaration
//! per line:
//!
//! ```text
//! system:<name>
//! clock:<name>
//! process:<name>
//! location:<process>:<name>[:initial][:accepting]
//! edge:<process>:<src>:<dst>:<action>[:guard=<atom>(&&<atom>)*][:reset=<clock>(,<clock>)*]
//! sync:<process>@<action>:<process>@<action>
//! ```
//!
//! Atoms are `<clock><op><nat>` with ops `<`, `<=`, `=`, `>=`, `>`; comments
//! start with `#`; whitespace around tokens is ignored. Actions appear by
//! being named on edges, and an action is local unless a sync line names it.

use std::fmt;

use thiserror::Error;

use crate::automaton::{Edge, Location, Network, SyncPair, TimedAutomaton};
use crate::zone::{AtomicConstraint, ClockId, RelOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Syntax,
            message: message.into(),
        }
    }

    fn semantic(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Semantic,
            message: message.into(),
        }
    }
}

struct ProcessBuilder {
    name: String,
    decl_line: usize,
    locations: Vec<Location>,
    initial: Option<usize>,
    actions: Vec<String>,
    edges: Vec<Edge>,
}

struct NetworkBuilder {
    system: Option<String>,
    clocks: Vec<String>,
    processes: Vec<ProcessBuilder>,
    syncs: Vec<SyncPair>,
}

/// Splits a line on `:`, keeping the 1-based column of each trimmed field.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in line.split(':') {
        let trimmed = piece.trim();
        let offset = piece.len() - piece.trim_start().len();
        out.push((start + offset + 1, trimmed));
        start += piece.len() + 1;
    }
    out
}

fn check_name(line: usize, column: usize, name: &str, what: &str) -> Result<(), ParseError> {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(ParseError::syntax(
            line,
            column,
            format!("invalid {what} name {name:?}"),
        ));
    }
    Ok(())
}

fn parse_atom(
    line: usize,
    column: usize,
    text: &str,
    builder: &NetworkBuilder,
) -> Result<AtomicConstraint, ParseError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let op_at = compact.find(['<', '>', '=']).ok_or_else(|| {
        ParseError::syntax(
            line,
            column,
            format!("no comparison operator in atom {text:?}"),
        )
    })?;
    let clock_name = &compact[..op_at];
    let rest = &compact[op_at..];
    let (op, const_text) = if let Some(r) = rest.strip_prefix("<=") {
        (RelOp::Le, r)
    } else if let Some(r) = rest.strip_prefix(">=") {
        (RelOp::Ge, r)
    } else if let Some(r) = rest.strip_prefix('<') {
        (RelOp::Lt, r)
    } else if let Some(r) = rest.strip_prefix('>') {
        (RelOp::Gt, r)
    } else {
        (RelOp::Eq, rest.strip_prefix('=').unwrap())
    };
    let constant: u64 = const_text
        .parse()
        .map_err(|_| ParseError::syntax(line, column, format!("bad constant in atom {text:?}")))?;
    let clock = builder
        .clocks
        .iter()
        .position(|c| c == clock_name)
        .ok_or_else(|| {
            ParseError::semantic(line, column, format!("unknown clock {clock_name:?}"))
        })?;
    Ok(AtomicConstraint::new(ClockId::new(clock + 1), op, constant))
}

/// Parses the text model format into a validated network.
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut builder = NetworkBuilder {
        system: None,
        clocks: Vec::new(),
        processes: Vec::new(),
        syncs: Vec::new(),
    };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let parts = fields(content);
        let (head_col, head) = parts[0];
        match head {
            "system" => parse_system(lineno, &parts, &mut builder)?,
            "clock" => parse_clock(lineno, &parts, &mut builder)?,
            "process" => parse_process(lineno, &parts, &mut builder)?,
            "location" => parse_location(lineno, &parts, &mut builder)?,
            "edge" => parse_edge(lineno, &parts, &mut builder)?,
            "sync" => parse_sync(lineno, &parts, &mut builder)?,
            other => {
                return Err(ParseError::syntax(
                    lineno,
                    head_col,
                    format!("unknown declaration {other:?}"),
                ));
            }
        }
    }

    let system = builder
        .system
        .clone()
        .ok_or_else(|| ParseError::semantic(last_line.max(1), 1, "missing system declaration"))?;
    let mut processes = Vec::new();
    for p in builder.processes {
        let initial = p.initial.ok_or_else(|| {
            ParseError::semantic(
                p.decl_line,
                1,
                format!("process {:?} has no initial location", p.name),
            )
        })?;
        processes.push(
            TimedAutomaton::new(p.name, p.locations, initial, p.actions, p.edges)
                .map_err(|e| ParseError::semantic(p.decl_line, 1, e.to_string()))?,
        );
    }
    Network::new(system, builder.clocks, processes, builder.syncs)
        .map_err(|e| ParseError::semantic(last_line.max(1), 1, e.to_string()))
}

fn expect_arity(
    lineno: usize,
    parts: &[(usize, &str)],
    min: usize,
    max: usize,
) -> Result<(), ParseError> {
    if parts.len() < min || parts.len() > max {
        let (col, head) = parts[0];
        return Err(ParseError::syntax(
            lineno,
            col,
            format!("malformed {head} declaration"),
        ));
    }
    Ok(())
}

fn parse_system(
    lineno: usize,
    parts: &[(usize, &str)],
    b: &mut NetworkBuilder,
) -> Result<(), ParseError> {
    expect_arity(lineno, parts, 2, 2)?;
    let (col, name) = parts[1];
    check_name(lineno, col, name, "system")?;
    if b.system.is_some() {
        return Err(ParseError::semantic(
            lineno,
            parts[0].0,
            "duplicate system declaration",
        ));
    }
    b.system = Some(name.to_string());
    Ok(())
}

fn parse_clock(
    lineno: usize,
    parts: &[(usize, &str)],
    b: &mut NetworkBuilder,
) -> Result<(), ParseError> {
    expect_arity(lineno, parts, 2, 2)?;
    let (col, name) = parts[1];
    check_name(lineno, col, name, "clock")?;
    if b.clocks.iter().any(|c| c == name) {
        return Err(ParseError::semantic(
            lineno,
            col,
            format!("duplicate clock {name:?}"),
        ));
    }
    b.clocks.push(name.to_string());
    Ok(())
}

fn parse_process(
    lineno: usize,
    parts: &[(usize, &str)],
    b: &mut NetworkBuilder,
) -> Result<(), ParseError> {
    expect_arity(lineno, parts, 2, 2)?;
    let (col, name) = parts[1];
    check_name(lineno, col, name, "process")?;
    if b.processes.iter().any(|p| p.name == name) {
        return Err(ParseError::semantic(
            lineno,
            col,
            format!("duplicate process {name:?}"),
        ));
    }
    b.processes.push(ProcessBuilder {
        name: name.to_string(),
        decl_line: lineno,
        locations: Vec::new(),
        initial: None,
        actions: Vec::new(),
        edges: Vec::new(),
    });
    Ok(())
}

fn find_process<'b>(
    lineno: usize,
    col: usize,
    name: &str,
    b: &'b mut NetworkBuilder,
) -> Result<&'b mut ProcessBuilder, ParseError> {
    b.processes
        .iter_mut()
        .find(|p| p.name == name)
        .ok_or_else(|| ParseError::semantic(lineno, col, format!("unknown process {name:?}")))
}

fn parse_location(
    lineno: usize,
    parts: &[(usize, &str)],
    b: &mut NetworkBuilder,
) -> Result<(), ParseError> {
    expect_arity(lineno, parts, 3, 5)?;
    let (pcol, pname) = parts[1];
    let (ncol, name) = parts[2];
    check_name(lineno, ncol, name, "location")?;
    let mut initial = false;
    let mut accepting = false;
    for &(fcol, flag) in &parts[3..] {
        match flag {
            "initial" if !initial => initial = true,
            "accepting" if !accepting => accepting = true,
            _ => {
                return Err(ParseError::syntax(
                    lineno,
                    fcol,
                    format!("unexpected location flag {flag:?}"),
                ))
            }
        }
    }
    let process = find_process(lineno, pcol, pname, b)?;
    if process.locations.iter().any(|l| l.name == name) {
        return Err(ParseError::semantic(
            lineno,
            ncol,
            format!("duplicate location {name:?}"),
        ));
    }
    process.locations.push(Location {
        name: name.to_string(),
        accepting,
    });
    if initial {
        if process.initial.is_some() {
            return Err(ParseError::semantic(
                lineno,
                ncol,
                format!("second initial location {name:?}"),
            ));
        }
        process.initial = Some(process.locations.len() - 1);
    }
    Ok(())
}

fn parse_edge(
    lineno: usize,
    parts: &[(usize, &str)],
    b: &mut NetworkBuilder,
) -> Result<(), ParseError> {
    expect_arity(lineno, parts, 5, 7)?;
    let (pcol, pname) = parts[1];
    let (scol, src) = parts[2];
    let (tcol, dst) = parts[3];
    let (acol, action_name) = parts[4];
    check_name(lineno, acol, action_name, "action")?;

    let mut guard = Vec::new();
    let mut resets = Vec::new();
    let mut seen_guard = false;
    let mut seen_reset = false;
    for &(fcol, field) in &parts[5..] {
        if let Some(spec) = field.strip_prefix("guard=") {
            if seen_guard {
                return Err(ParseError::syntax(lineno, fcol, "duplicate guard clause"));
            }
            seen_guard = true;
            for atom_text in spec.split("&&") {
                guard.push(parse_atom(lineno, fcol, atom_text, b)?);
            }
        } else if let Some(spec) = field.strip_prefix("reset=") {
            if seen_reset {
                return Err(ParseError::syntax(lineno, fcol, "duplicate reset clause"));
            }
            seen_reset = true;
            for clock_name in spec.split(',') {
                let clock_name = clock_name.trim();
                let idx = b
                    .clocks
                    .iter()
                    .position(|c| c == clock_name)
                    .ok_or_else(|| {
                        ParseError::semantic(lineno, fcol, format!("unknown clock {clock_name:?}"))
                    })?;
                resets.push(ClockId::new(idx + 1));
            }
        } else {
            return Err(ParseError::syntax(
                lineno,
                fcol,
                format!("unexpected edge clause {field:?}"),
            ));
        }
    }

    let process = find_process(lineno, pcol, pname, b)?;
    let source = process
        .locations
        .iter()
        .position(|l| l.name == src)
        .ok_or_else(|| ParseError::semantic(lineno, scol, format!("unknown location {src:?}")))?;
    let target = process
        .locations
        .iter()
        .position(|l| l.name == dst)
        .ok_or_else(|| ParseError::semantic(lineno, tcol, format!("unknown location {dst:?}")))?;
    let action = match process.actions.iter().position(|a| a == action_name) {
        Some(id) => id,
        None => {
            process.actions.push(action_name.to_string());
            process.actions.len() - 1
        }
    };
    process.edges.push(Edge {
        source,
        guard,
        resets,
        action,
        target,
    });
    Ok(())
}

fn parse_sync(
    lineno: usize,
    parts: &[(usize, &str)],
    b: &mut NetworkBuilder,
) -> Result<(), ParseError> {
    expect_arity(lineno, parts, 3, 3)?;
    let mut sides = Vec::new();
    for &(col, side) in &parts[1..3] {
        let (pname, aname) = side.split_once('@').ok_or_else(|| {
            ParseError::syntax(
                lineno,
                col,
                format!("sync side {side:?} is not process@action"),
            )
        })?;
        let pname = pname.trim();
        let aname = aname.trim();
        let pid = b
            .processes
            .iter()
            .position(|p| p.name == pname)
            .ok_or_else(|| {
                ParseError::semantic(lineno, col, format!("unknown process {pname:?}"))
            })?;
        let action = b.processes[pid]
            .actions
            .iter()
            .position(|a| a == aname)
            .ok_or_else(|| {
                ParseError::semantic(
                    lineno,
                    col,
                    format!("unknown action {aname:?} in process {pname:?}"),
                )
            })?;
        sides.push((pid, action, col));
    }
    if sides[0].0 == sides[1].0 {
        return Err(ParseError::semantic(
            lineno,
            parts[0].0,
            "sync pair stays within one process",
        ));
    }
    b.syncs.push(SyncPair {
        left: (sides[0].0, sides[0].1),
        right: (sides[1].0, sides[1].1),
    });
    Ok(())
}

fn write_atom(out: &mut String, net: &Network, atom: &AtomicConstraint) {
    out.push_str(&net.clock_names[atom.clock.index() - 1]);
    out.push_str(atom.op.symbol());
    out.push_str(&atom.constant.to_string());
}

/// Renders a network in the text model format; `parse_network` reproduces a
/// structurally identical network.
pub fn render_network(net: &Network) -> String {
    let mut out = String::new();
    out.push_str(&format!("system:{}\n", net.name));
    for clock in &net.clock_names {
        out.push_str(&format!("clock:{clock}\n"));
    }
    for p in &net.processes {
        out.push_str(&format!("process:{}\n", p.name));
        for (idx, l) in p.locations.iter().enumerate() {
            out.push_str(&format!("location:{}:{}", p.name, l.name));
            if idx == p.initial {
                out.push_str(":initial");
            }
            if l.accepting {
                out.push_str(":accepting");
            }
            out.push('\n');
        }
        for e in &p.edges {
            out.push_str(&format!(
                "edge:{}:{}:{}:{}",
                p.name, p.locations[e.source].name, p.locations[e.target].name, p.actions[e.action]
            ));
            if !e.guard.is_empty() {
                out.push_str(":guard=");
                for (i, atom) in e.guard.iter().enumerate() {
                    if i > 0 {
                        out.push_str("&&");
                    }
                    write_atom(&mut out, net, atom);
                }
            }
            if !e.resets.is_empty() {
                out.push_str(":reset=");
                for (i, clock) in e.resets.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&net.clock_names[clock.index() - 1]);
                }
            }
            out.push('\n');
        }
    }
    for s in &net.syncs {
        let (lp, la) = s.left;
        let (rp, ra) = s.right;
        out.push_str(&format!(
            "sync:{}@{}:{}@{}\n",
            net.processes[lp].name,
            net.processes[lp].actions[la],
            net.processes[rp].name,
            net.processes[rp].actions[ra]
        ));
    }
    out
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax => write!(f, "syntax"),
            ParseErrorKind::Semantic => write!(f, "semantic"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generate;

    const RACING_TEXT: &str = "\
# one process racing to a pinched interval
system:racing
clock:y
process:race
location:race:q1:initial
location:race:q2
location:race:q3
location:race:q4
edge:race:q1:q2:a
edge:race:q2:q3:b
edge:race:q1:q3:c:guard=y>1
edge:race:q3:q4:d:guard=y<=5
edge:race:q4:q1:e:reset=y
";

    #[test]
    fn racing_text_round_trips_to_the_generator() {
        let parsed = parse_network(RACING_TEXT).unwrap();
        assert_eq!(parsed, generate::racing());
        assert_eq!(parsed.processes[0].locations.len(), 4);
        assert_eq!(parsed.processes[0].edges.len(), 5);
    }

    #[test]
    fn generators_round_trip_through_render() {
        let mut nets = vec![
            generate::racing(),
            generate::fischer(2).unwrap(),
            generate::fischer(3).unwrap(),
        ];
        for n in 1..=4 {
            nets.push(generate::blowup(n).unwrap());
        }
        for seed in 0..20 {
            nets.push(generate::random_network(seed));
        }
        for net in nets {
            let text = render_network(&net);
            let back = parse_network(&text).unwrap_or_else(|e| panic!("{}: {e}", net.name));
            assert_eq!(back, net, "round trip of {}", net.name);
        }
    }

    #[test]
    fn second_initial_location_is_rejected() {
        let text = "system:s\nclock:x\nprocess:p\nlocation:p:a:initial\nlocation:p:b:initial\n";
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert_eq!(err.line, 5);
        assert!(err.message.contains("second initial"));
    }

    #[test]
    fn empty_guard_and_reset_default_to_true_and_nothing() {
        let text = "system:s\nclock:x\nprocess:p\nlocation:p:a:initial\nedge:p:a:a:tick\n";
        let net = parse_network(text).unwrap();
        assert!(net.processes[0].edges[0].guard.is_empty());
        assert!(net.processes[0].edges[0].resets.is_empty());
    }

    #[test]
    fn whitespace_around_tokens_is_ignored() {
        let text = "system: s\nclock: x\nprocess: p\nlocation: p : a : initial\nedge: p : a : a : tick : guard= x <= 5 && x>1 : reset= x\n";
        let net = parse_network(text).unwrap();
        let edge = &net.processes[0].edges[0];
        assert_eq!(edge.guard.len(), 2);
        assert_eq!(edge.guard[0].op, RelOp::Le);
        assert_eq!(edge.guard[1].op, RelOp::Gt);
        assert_eq!(edge.resets.len(), 1);
    }

    #[test]
    fn unknown_clock_in_guard_is_semantic_with_position() {
        let text = "system:s\nclock:x\nprocess:p\nlocation:p:a:initial\nedge:p:a:a:t:guard=z>1\n";
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert_eq!(err.line, 5);
        assert!(err.message.contains("unknown clock"));
    }

    #[test]
    fn sync_inside_one_process_is_rejected() {
        let text =
            "system:s\nclock:x\nprocess:p\nlocation:p:a:initial\nedge:p:a:a:t\nsync:p@t:p@t\n";
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert!(err.message.contains("within one process"));
    }

    #[test]
    fn duplicate_clock_names_are_rejected() {
        let err = parse_network("system:s\nclock:x\nclock:x\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert_eq!(err.line, 3);
        assert!(err.message.contains("duplicate clock"));
    }

    #[test]
    fn edge_with_unknown_location_is_rejected() {
        let text = "system:s\nclock:x\nprocess:p\nlocation:p:a:initial\nedge:p:a:nowhere:t\n";
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert!(err.message.contains("unknown location"));
    }

    #[test]
    fn missing_system_line_is_reported() {
        let err = parse_network("clock:x\n").unwrap_err();
        assert!(err.message.contains("missing system"));
    }

    #[test]
    fn garbage_is_a_syntax_error_with_location() {
        let err = parse_network("system:s\nwhatever:x\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!((err.line, err.column), (2, 1));
    }

    #[test]
    fn missing_operator_in_atom_is_syntactic() {
        let text = "system:s\nclock:x\nprocess:p\nlocation:p:a:initial\nedge:p:a:a:t:guard=x5\n";
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
    }
}
