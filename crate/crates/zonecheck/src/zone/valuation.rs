use crate::zone::ClockId;

/// A clock valuation used by the test oracles. Values are stored in quarter
/// time units so that strict guard comparisons stay exact: a quarter grid is
/// dense enough to witness every strict/weak distinction that integer-valued
/// constraints can make.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    quarters: Vec<i64>,
}

impl Valuation {
    /// The valuation mapping every clock to zero.
    pub fn zero(nclocks: usize) -> Valuation {
        Valuation {
            quarters: vec![0; nclocks],
        }
    }

    /// Builds a valuation from per-clock values in quarter units.
    pub fn from_quarters(quarters: Vec<i64>) -> Valuation {
        assert!(
            quarters.iter().all(|&q| q >= 0),
            "clock values are nonnegative"
        );
        Valuation { quarters }
    }

    pub fn nclocks(&self) -> usize {
        self.quarters.len()
    }

    /// Value of a clock in quarter units; the reference clock reads zero.
    pub fn quarters(&self, clock: ClockId) -> i64 {
        if clock.is_reference() {
            0
        } else {
            self.quarters[clock.index() - 1]
        }
    }

    /// The valuation after `delta` quarter units of time elapse.
    pub fn delayed(&self, delta_quarters: i64) -> Valuation {
        assert!(delta_quarters >= 0);
        Valuation {
            quarters: self.quarters.iter().map(|q| q + delta_quarters).collect(),
        }
    }

    /// The valuation with the given clocks reset to zero.
    pub fn with_reset(&self, clocks: &[ClockId]) -> Valuation {
        let mut quarters = self.quarters.clone();
        for c in clocks {
            quarters[c.index() - 1] = 0;
        }
        Valuation { quarters }
    }
}
