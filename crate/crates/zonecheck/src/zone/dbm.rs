use std::fmt;

use crate::zone::{AtomicConstraint, Bound, ClockId, RelOp, Valuation};

/// Per-clock extrapolation parameters: the largest constant a clock is
/// compared against in lower-bound guards (`l`) and upper-bound guards (`u`).
/// `None` stands for "never compared", the neutral element of the maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LuBounds {
    lower: Vec<Option<i64>>,
    upper: Vec<Option<i64>>,
}

impl LuBounds {
    pub fn new(nclocks: usize) -> LuBounds {
        LuBounds {
            lower: vec![None; nclocks],
            upper: vec![None; nclocks],
        }
    }

    pub fn nclocks(&self) -> usize {
        self.lower.len()
    }

    pub fn record_lower(&mut self, clock: ClockId, constant: i64) {
        let slot = &mut self.lower[clock.index() - 1];
        *slot = Some(slot.map_or(constant, |c| c.max(constant)));
    }

    pub fn record_upper(&mut self, clock: ClockId, constant: i64) {
        let slot = &mut self.upper[clock.index() - 1];
        *slot = Some(slot.map_or(constant, |c| c.max(constant)));
    }

    pub fn lower(&self, clock: ClockId) -> Option<i64> {
        self.lower[clock.index() - 1]
    }

    pub fn upper(&self, clock: ClockId) -> Option<i64> {
        self.upper[clock.index() - 1]
    }
}

/// A nonempty zone in canonical difference bound matrix form.
///
/// Row and column 0 belong to the reference clock, which is constantly zero;
/// entry `(i, j)` is an upper bound on `x_i - x_j`. Canonical means closed
/// under the triangle inequality, which makes the representation unique per
/// zone and turns inclusion into an entrywise comparison. Emptiness is not
/// representable: operations that can empty a zone return `Option<Dbm>`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dbm {
    dim: usize,
    entries: Box<[Bound]>,
}

impl Dbm {
    /// The zone reachable from the all-zeros valuation by letting time
    /// elapse: all clocks equal and nonnegative, unbounded above.
    pub fn initial(nclocks: usize) -> Dbm {
        assert!(nclocks >= 1);
        let dim = nclocks + 1;
        let mut entries = vec![Bound::LE_ZERO; dim * dim].into_boxed_slice();
        for i in 1..dim {
            entries[i * dim] = Bound::INFINITY;
        }
        let dbm = Dbm { dim, entries };
        debug_assert!(dbm.is_closed());
        dbm
    }

    /// The universal zone: every clock nonnegative, nothing else.
    pub fn true_zone(nclocks: usize) -> Dbm {
        assert!(nclocks >= 1);
        let dim = nclocks + 1;
        let mut entries = vec![Bound::INFINITY; dim * dim].into_boxed_slice();
        for i in 0..dim {
            entries[i * dim + i] = Bound::LE_ZERO;
        }
        for j in 1..dim {
            entries[j] = Bound::LE_ZERO;
        }
        Dbm { dim, entries }
    }

    /// Canonicalizes an arbitrary bound matrix into a `Dbm`, or `None` if the
    /// constraints are unsatisfiable. Lower bounds are first clamped so no
    /// clock may go negative. Idempotent on already-canonical input.
    pub fn from_entries(dim: usize, entries: Vec<Bound>) -> Option<Dbm> {
        assert!(dim >= 1 && entries.len() == dim * dim);
        let mut dbm = Dbm {
            dim,
            entries: entries.into_boxed_slice(),
        };
        for i in 0..dim {
            let diag = dbm.get(i, i).min(Bound::LE_ZERO);
            dbm.set(i, i, diag);
        }
        for j in 1..dim {
            let clamped = dbm.get(0, j).min(Bound::LE_ZERO);
            dbm.set(0, j, clamped);
        }
        if dbm.close() {
            Some(dbm)
        } else {
            None
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nclocks(&self) -> usize {
        self.dim - 1
    }

    pub fn get(&self, i: usize, j: usize) -> Bound {
        self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, bound: Bound) {
        self.entries[i * self.dim + j] = bound;
    }

    /// Floyd-Warshall closure. Returns false iff a negative cycle shows up,
    /// i.e. the zone is empty.
    fn close(&mut self) -> bool {
        let dim = self.dim;
        for k in 0..dim {
            for i in 0..dim {
                let d_ik = self.get(i, k);
                if d_ik.is_infinite() {
                    continue;
                }
                for j in 0..dim {
                    let via = d_ik + self.get(k, j);
                    if via < self.get(i, j) {
                        self.set(i, j, via);
                    }
                }
            }
            for i in 0..dim {
                if self.get(i, i) < Bound::LE_ZERO {
                    return false;
                }
            }
        }
        true
    }

    #[allow(dead_code)]
    fn is_closed(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    if self.get(i, k) + self.get(k, j) < self.get(i, j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Intersection with a single guard atom, or `None` if that empties the
    /// zone. Panics on a clock index outside this matrix.
    pub fn constrain(&self, atom: &AtomicConstraint) -> Option<Dbm> {
        let x = atom.clock.index();
        assert!(x >= 1 && x < self.dim, "unknown clock index {x}");
        let c = atom.constant as i64;
        let mut out = self.clone();
        // x # c splits into an upper bound at (x, 0) and/or a lower bound,
        // i.e. an upper bound on 0 - x, at (0, x).
        let ok = match atom.op {
            RelOp::Lt => out.tighten(x, 0, Bound::strict(c)),
            RelOp::Le => out.tighten(x, 0, Bound::weak(c)),
            RelOp::Gt => out.tighten(0, x, Bound::strict(-c)),
            RelOp::Ge => out.tighten(0, x, Bound::weak(-c)),
            RelOp::Eq => out.tighten(x, 0, Bound::weak(c)) && out.tighten(0, x, Bound::weak(-c)),
        };
        if ok {
            debug_assert!(out.is_closed());
            Some(out)
        } else {
            None
        }
    }

    /// Tightens one entry and restores canonical form by relaxing every pair
    /// through it. Returns false iff the zone becomes empty.
    fn tighten(&mut self, r: usize, c: usize, bound: Bound) -> bool {
        if self.get(r, c) <= bound {
            return true;
        }
        if self.get(c, r) + bound < Bound::LE_ZERO {
            return false;
        }
        self.set(r, c, bound);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let via_rc = self.get(i, r) + bound + self.get(c, j);
                if via_rc < self.get(i, j) {
                    self.set(i, j, via_rc);
                }
            }
        }
        true
    }

    /// The zone after the given clocks are set to zero. Preserves canonical
    /// form and never empties a nonempty zone.
    pub fn reset(&self, clocks: &[ClockId]) -> Dbm {
        let mut out = self.clone();
        for clock in clocks {
            let r = clock.index();
            assert!(r >= 1 && r < self.dim, "unknown clock index {r}");
            for j in 0..self.dim {
                out.set(r, j, out.get(0, j));
                out.set(j, r, out.get(j, 0));
            }
            out.set(r, r, Bound::LE_ZERO);
        }
        debug_assert!(out.is_closed());
        out
    }

    /// Up closure under time elapse: upper bounds on individual clocks are
    /// erased, differences stay. Preserves canonical form.
    pub fn delay(&self) -> Dbm {
        let mut out = self.clone();
        for i in 1..self.dim {
            out.set(i, 0, Bound::INFINITY);
        }
        debug_assert!(out.is_closed());
        out
    }

    /// Entrywise widening driven by the per-clock guard bounds, then
    /// re-canonicalization. Extensive and idempotent; absent (`None`) bounds
    /// make the corresponding rules fire unconditionally.
    ///
    /// For `i != j`, the entry `(i, j)` becomes unbounded when the upper
    /// bound it carries already exceeds `l(x_i)`, when the zone forces
    /// `x_i` strictly above `l(x_i)`, or (for `i, j != 0`) when the zone
    /// forces `x_j` strictly above `u(x_j)`. A row-0 entry collapses to
    /// `< -u(x_j)` when the zone forces `x_j` strictly above `u(x_j)`; with
    /// no upper-bound guard on `x_j` that leaves only nonnegativity.
    pub fn extrapolate_lu(&self, lu: &LuBounds) -> Dbm {
        assert_eq!(lu.nclocks(), self.nclocks());
        let dim = self.dim;
        let mut out = self.clone();
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                if i != 0 {
                    let xi = ClockId::new(i);
                    let above_l = match lu.lower(xi) {
                        None => true,
                        Some(l) => self.get(i, j) > Bound::weak(l),
                    };
                    let forced_above_l = match lu.lower(xi) {
                        None => true,
                        Some(l) => self.get(0, i) < Bound::weak(-l),
                    };
                    let forced_above_u_j = j != 0 && {
                        let xj = ClockId::new(j);
                        match lu.upper(xj) {
                            None => true,
                            Some(u) => self.get(0, j) < Bound::weak(-u),
                        }
                    };
                    if above_l || forced_above_l || forced_above_u_j {
                        out.set(i, j, Bound::INFINITY);
                    }
                } else {
                    let xj = ClockId::new(j);
                    match lu.upper(xj) {
                        None => out.set(0, j, Bound::LE_ZERO),
                        Some(u) => {
                            if self.get(0, j) < Bound::weak(-u) {
                                out.set(0, j, Bound::strict(-u));
                            }
                        }
                    }
                }
            }
        }
        // Widening only relaxes entries, so the zone stays nonempty; the
        // relaxation can break the triangle inequality, hence the re-closure.
        let closed = Dbm::from_entries(dim, out.entries.into_vec());
        closed.expect("widened zone is nonempty")
    }

    /// Entrywise inclusion test; valid because both sides are canonical.
    pub fn includes(&self, other: &Dbm) -> bool {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(other.entries.iter())
            .all(|(big, small)| small <= big)
    }

    /// True iff this is the universal zone.
    pub fn is_true(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expected = if i == j || i == 0 {
                    Bound::LE_ZERO
                } else {
                    Bound::INFINITY
                };
                if self.get(i, j) != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Membership test for the valuation oracle.
    pub fn contains(&self, v: &Valuation) -> bool {
        assert_eq!(v.nclocks(), self.nclocks());
        for i in 0..self.dim {
            for j in 0..self.dim {
                let diff = v.quarters(ClockId::new(i)) - v.quarters(ClockId::new(j));
                if !self.get(i, j).admits_quarters(diff) {
                    return false;
                }
            }
        }
        true
    }

    /// Renders the zone as a conjunction like `1<y<=5 && x-y=0`, clocks in
    /// declaration order, `true` for the universal zone. Deterministic, for
    /// stats traces and golden tests.
    pub fn render(&self, clock_names: &[String]) -> String {
        assert_eq!(clock_names.len(), self.nclocks());
        let mut parts = Vec::new();
        for i in 1..self.dim {
            let lower = self.get(0, i);
            let upper = self.get(i, 0);
            // "clock >= 0" says nothing unless it pairs with "<= 0" into "= 0".
            let trivial_lower = lower == Bound::LE_ZERO && upper != Bound::LE_ZERO;
            if trivial_lower && upper.is_infinite() {
                continue;
            }
            if lower == Bound::LE_ZERO && upper.is_infinite() {
                continue;
            }
            parts.push(range_text(&clock_names[i - 1], lower, upper, trivial_lower));
        }
        for i in 1..self.dim {
            for j in 1..self.dim {
                if i >= j {
                    continue;
                }
                let upper = self.get(i, j);
                let lower = self.get(j, i);
                if upper.is_infinite() && lower.is_infinite() {
                    continue;
                }
                let term = format!("{}-{}", clock_names[i - 1], clock_names[j - 1]);
                parts.push(range_text(&term, lower, upper, lower.is_infinite()));
            }
        }
        if parts.is_empty() {
            "true".to_string()
        } else {
            parts.join(" && ")
        }
    }
}

/// Textual form of `lo # term # hi` where `lower` bounds `-term` and `upper`
/// bounds `term`.
fn range_text(term: &str, lower: Bound, upper: Bound, skip_lower: bool) -> String {
    let lower_part = if skip_lower {
        None
    } else {
        Some((-lower.constant(), lower.is_strict()))
    };
    match (lower_part, upper.is_infinite()) {
        (None, true) => term.to_string(),
        (None, false) => {
            let op = if upper.is_strict() { "<" } else { "<=" };
            format!("{term}{op}{}", upper.constant())
        }
        (Some((lv, strict)), true) => {
            let op = if strict { ">" } else { ">=" };
            format!("{term}{op}{lv}")
        }
        (Some((lv, l_strict)), false) => {
            let uv = upper.constant();
            if lv == uv && !l_strict && !upper.is_strict() {
                return format!("{term}={lv}");
            }
            let lop = if l_strict { "<" } else { "<=" };
            let uop = if upper.is_strict() { "<" } else { "<=" };
            format!("{lv}{lop}{term}{uop}{uv}")
        }
    }
}

impl fmt::Debug for Dbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..self.dim).map(|i| format!("x{i}")).collect();
        write!(f, "Dbm({})", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock(i: usize) -> ClockId {
        ClockId::new(i)
    }

    fn atom(i: usize, op: RelOp, c: u64) -> AtomicConstraint {
        AtomicConstraint::new(clock(i), op, c)
    }

    /// One-clock zone built by constraining the universal zone.
    fn zone1(atoms: &[(RelOp, u64)]) -> Dbm {
        let mut d = Dbm::true_zone(1);
        for &(op, c) in atoms {
            d = d.constrain(&atom(1, op, c)).expect("satisfiable");
        }
        d
    }

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn closure_derives_implied_bounds() {
        // x <= 3 and y - x <= 2 force y <= 5 through the path 0 -> x -> y.
        let dim = 3;
        let mut entries = vec![Bound::INFINITY; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Bound::LE_ZERO;
        }
        entries[1] = Bound::LE_ZERO; // x >= 0
        entries[2] = Bound::LE_ZERO; // y >= 0
        entries[dim] = Bound::weak(3); // x <= 3
        entries[2 * dim + 1] = Bound::weak(2); // y - x <= 2
        let d = Dbm::from_entries(dim, entries).unwrap();
        assert_eq!(d.get(2, 0), Bound::weak(5));
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        let d = Dbm::true_zone(1).constrain(&atom(1, RelOp::Ge, 3)).unwrap();
        assert!(d.constrain(&atom(1, RelOp::Le, 2)).is_none());
    }

    #[test]
    fn canonicalization_is_idempotent_on_a_sample() {
        let d = zone1(&[(RelOp::Gt, 1), (RelOp::Le, 5)]);
        let again = Dbm::from_entries(d.dim(), d.entries.to_vec()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn initial_zone_of_one_clock_is_universal() {
        assert!(Dbm::initial(1).is_true());
    }

    #[test]
    fn initial_zone_of_two_clocks_keeps_clocks_equal() {
        let d = Dbm::initial(2);
        assert!(!d.is_true());
        assert_eq!(d.render(&names(&["x", "y"])), "x-y=0");
        assert!(d.contains(&Valuation::from_quarters(vec![6, 6])));
        assert!(!d.contains(&Valuation::from_quarters(vec![4, 8])));
    }

    #[test]
    fn constrain_tightens_lower_bound() {
        let d = zone1(&[(RelOp::Gt, 1)]);
        assert_eq!(d.render(&names(&["y"])), "y>1");
        assert_eq!(d.get(0, 1), Bound::strict(-1));
    }

    #[test]
    fn constrain_combines_into_interval() {
        let d = zone1(&[(RelOp::Gt, 1), (RelOp::Le, 5)]);
        assert_eq!(d.render(&names(&["y"])), "1<y<=5");
    }

    #[test]
    fn constrain_below_zero_is_empty() {
        let d = zone1(&[(RelOp::Gt, 1)]);
        assert!(d.constrain(&atom(1, RelOp::Lt, 0)).is_none());
    }

    #[test]
    fn equality_constrains_both_sides() {
        let d = Dbm::true_zone(1).constrain(&atom(1, RelOp::Eq, 3)).unwrap();
        assert_eq!(d.render(&names(&["y"])), "y=3");
    }

    #[test]
    fn reset_pins_single_clock() {
        let d = zone1(&[(RelOp::Gt, 1)]).reset(&[clock(1)]);
        assert_eq!(d.render(&names(&["y"])), "y=0");
    }

    #[test]
    fn reset_of_nothing_is_identity() {
        let d = zone1(&[(RelOp::Gt, 1), (RelOp::Le, 5)]);
        assert_eq!(d.reset(&[]), d);
    }

    #[test]
    fn reset_rederives_difference_bounds() {
        // Resetting x in (x = y, both >= 0) leaves x = 0 with y >= 0 free
        // above x: the old y value survives as the difference y - x.
        let d = Dbm::initial(2).reset(&[clock(1)]);
        assert_eq!(d.get(1, 0), Bound::LE_ZERO); // x <= 0
        assert_eq!(d.get(0, 1), Bound::LE_ZERO); // x >= 0
        assert_eq!(d.get(2, 0), Bound::INFINITY); // y unbounded
        assert_eq!(d.get(0, 2), Bound::LE_ZERO); // y >= 0
        assert_eq!(d.get(1, 2), Bound::LE_ZERO); // x - y <= 0
        assert_eq!(d.get(2, 1), Bound::INFINITY); // y - x unbounded
        assert!(d.contains(&Valuation::from_quarters(vec![0, 9])));
        assert!(!d.contains(&Valuation::from_quarters(vec![1, 9])));
    }

    #[test]
    fn delay_erases_upper_bounds() {
        let d = zone1(&[(RelOp::Gt, 1), (RelOp::Le, 5)]).delay();
        assert_eq!(d.render(&names(&["y"])), "y>1");
    }

    #[test]
    fn delay_is_identity_on_up_closed_zones() {
        let d = Dbm::true_zone(1);
        assert_eq!(d.delay(), d);
        let i = Dbm::initial(2);
        assert_eq!(i.delay(), i);
    }

    fn lu1(l: Option<i64>, u: Option<i64>) -> LuBounds {
        let mut lu = LuBounds::new(1);
        if let Some(l) = l {
            lu.record_lower(clock(1), l);
        }
        if let Some(u) = u {
            lu.record_upper(clock(1), u);
        }
        lu
    }

    #[test]
    fn widening_caps_lower_bounds_above_u() {
        // y > 7 with l(y)=1, u(y)=5 widens to y > 5: the zone sits strictly
        // above every upper-bound guard, so only "above 5" is observable.
        let d = zone1(&[(RelOp::Gt, 7)]);
        let widened = d.extrapolate_lu(&lu1(Some(1), Some(5)));
        assert_eq!(widened.render(&names(&["y"])), "y>5");
    }

    #[test]
    fn widening_leaves_small_zones_alone() {
        let d = zone1(&[(RelOp::Gt, 1)]);
        assert_eq!(d.extrapolate_lu(&lu1(Some(1), Some(5))), d);
    }

    #[test]
    fn widening_is_extensive_and_idempotent_on_samples() {
        let lu = lu1(Some(1), Some(5));
        for d in [
            zone1(&[(RelOp::Gt, 7)]),
            zone1(&[(RelOp::Ge, 2), (RelOp::Lt, 9)]),
            zone1(&[(RelOp::Eq, 6)]),
        ] {
            let w = d.extrapolate_lu(&lu);
            assert!(w.includes(&d));
            assert_eq!(w.extrapolate_lu(&lu), w);
        }
    }

    #[test]
    fn widening_without_guards_reaches_the_true_zone() {
        let d = Dbm::initial(2);
        assert!(d.extrapolate_lu(&LuBounds::new(2)).is_true());
    }

    #[test]
    fn inclusion_orders_nested_zones() {
        let big = Dbm::true_zone(1);
        let small = zone1(&[(RelOp::Gt, 1)]);
        assert!(big.includes(&small));
        assert!(!small.includes(&big));
        assert!(small.includes(&small));
    }

    #[test]
    fn true_zone_detection() {
        assert!(Dbm::true_zone(1).is_true());
        assert!(Dbm::true_zone(3).is_true());
        assert!(!zone1(&[(RelOp::Gt, 1)]).is_true());
        assert!(!Dbm::initial(2).is_true());
    }

    #[test]
    fn membership_respects_strictness() {
        let d = zone1(&[(RelOp::Gt, 1)]);
        assert!(d.contains(&Valuation::from_quarters(vec![8]))); // y = 2
        assert!(!d.contains(&Valuation::from_quarters(vec![4]))); // y = 1
        assert!(d.contains(&Valuation::from_quarters(vec![5]))); // y = 1.25
    }

    #[test]
    fn render_of_true_zone() {
        assert_eq!(Dbm::true_zone(2).render(&names(&["x", "y"])), "true");
    }
}
