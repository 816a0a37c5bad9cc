//! Difference-bound-matrix algebra: zone construction, canonicalization,
//! guard intersection, reset, time elapse, LU widening, inclusion, and a
//! valuation-membership oracle for tests.

mod bound;
mod dbm;
mod valuation;

pub use bound::Bound;
pub use dbm::{Dbm, LuBounds};
pub use valuation::Valuation;

use std::fmt;

/// Index of a clock inside a DBM. Index 0 is the constant-zero reference
/// clock; real clocks start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockId(usize);

impl ClockId {
    pub const REFERENCE: ClockId = ClockId(0);

    pub fn new(index: usize) -> ClockId {
        ClockId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn is_reference(self) -> bool {
        self.0 == 0
    }
}

/// Comparison operator of a guard atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Eq => "=",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
        }
    }
}

/// A single guard atom `clock # constant` with a natural constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomicConstraint {
    pub clock: ClockId,
    pub op: RelOp,
    pub constant: u64,
}

impl AtomicConstraint {
    pub fn new(clock: ClockId, op: RelOp, constant: u64) -> AtomicConstraint {
        assert!(!clock.is_reference(), "guards constrain real clocks");
        assert!(
            constant < (i64::MAX >> 9) as u64,
            "guard constant out of range"
        );
        AtomicConstraint {
            clock,
            op,
            constant,
        }
    }

    /// True iff the valuation satisfies this atom.
    pub fn admits(&self, v: &Valuation) -> bool {
        let q = v.quarters(self.clock);
        let c = 4 * self.constant as i64;
        match self.op {
            RelOp::Lt => q < c,
            RelOp::Le => q <= c,
            RelOp::Eq => q == c,
            RelOp::Ge => q >= c,
            RelOp::Gt => q > c,
        }
    }
}

impl fmt::Display for AtomicConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x{}{}{}",
            self.clock.index(),
            self.op.symbol(),
            self.constant
        )
    }
}
