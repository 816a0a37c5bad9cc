use std::fmt;
use std::ops::Add;

/// Largest constant magnitude a finite bound may carry. Guard constants are
/// small naturals, so this only exists to catch arithmetic running away.
const MAX_CONST: i64 = i64::MAX >> 8;

/// Packed representation: `constant << 1 | weak_bit`, with `i64::MAX - 1`
/// (even, so strict) reserved for the missing bound. The packing makes the
/// derived order exactly the bound order: a smaller constant is tighter, and
/// at equal constants strict is tighter than weak.
const INF_REPR: i64 = i64::MAX - 1;

/// An upper bound `x - y < c` or `x - y <= c` on a clock difference, or
/// "unbounded". One entry of a difference bound matrix.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound(i64);

impl Bound {
    /// The absent bound. Canonically strict.
    pub const INFINITY: Bound = Bound(INF_REPR);
    /// `<= 0`, the diagonal entry of every nonempty canonical DBM.
    pub const LE_ZERO: Bound = Bound(1);
    /// `< 0`, the tightest unsatisfiable self-difference.
    pub const LT_ZERO: Bound = Bound(0);

    pub fn strict(constant: i64) -> Bound {
        assert!(constant.abs() < MAX_CONST, "bound constant out of range");
        Bound(constant << 1)
    }

    pub fn weak(constant: i64) -> Bound {
        assert!(constant.abs() < MAX_CONST, "bound constant out of range");
        Bound((constant << 1) | 1)
    }

    pub fn is_infinite(self) -> bool {
        self.0 == INF_REPR
    }

    pub fn is_strict(self) -> bool {
        self.0 & 1 == 0
    }

    /// The finite constant. Panics on the infinite bound.
    pub fn constant(self) -> i64 {
        assert!(!self.is_infinite(), "infinite bound has no constant");
        self.0 >> 1
    }

    /// True iff `a - b # self` holds for the exact difference `a - b`,
    /// given in quarter units (see [`super::Valuation`]).
    pub fn admits_quarters(self, diff_quarters: i64) -> bool {
        if self.is_infinite() {
            return true;
        }
        let limit = 4 * self.constant();
        if self.is_strict() {
            diff_quarters < limit
        } else {
            diff_quarters <= limit
        }
    }
}

impl Add for Bound {
    type Output = Bound;

    /// Shortest-path addition: infinity absorbs, constants add, and the sum
    /// is weak only when both operands are weak.
    fn add(self, other: Bound) -> Bound {
        if self.is_infinite() || other.is_infinite() {
            return Bound::INFINITY;
        }
        let sum = Bound(self.0 + other.0 - ((self.0 & 1) | (other.0 & 1)));
        debug_assert!(sum.constant().abs() < MAX_CONST);
        sum
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.is_strict() {
            write!(f, "<{}", self.constant())
        } else {
            write!(f, "<={}", self.constant())
        }
    }
}
