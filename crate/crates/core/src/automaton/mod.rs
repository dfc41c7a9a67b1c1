//! LTL to Büchi automata, accepting-lasso extraction and trace checking.

mod buchi;
mod containment;
mod nnf;
mod search;
mod tableau;

use std::cell::Cell;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formula::Ltl;
use crate::trace::SymbolicTrace;

pub use buchi::{
    degeneralize, extract_accepting_lasso, extract_accepting_lasso_within, ltl_to_gba, ltl_to_nba, ltl_to_nba_within,
    BuchiAutomaton, GbaTransition, GeneralizedBuchi, Transition,
};
pub use containment::{check_containment, check_containment_within, ContainmentChecker, Verdict};
pub use search::{Graph, Lasso};
pub use tableau::Cube;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("deadline exceeded")]
pub struct Timeout;

/// Limits for automaton construction and search: an optional wall-clock
/// instant and an optional number of steps. A step is one state expansion or
/// search iteration, so a step budget times out at the same point on every
/// run.
#[derive(Debug, Clone, Default)]
pub struct Deadline {
    until: Option<Instant>,
    steps: Option<Cell<u64>>,
}

impl Deadline {
    pub fn none() -> Deadline {
        Deadline::default()
    }

    pub fn after(d: Duration) -> Deadline {
        Deadline { until: Some(Instant::now() + d), steps: None }
    }

    /// `after(ms)` for a positive budget, no limit for zero.
    pub fn from_millis(ms: u64) -> Deadline {
        if ms == 0 {
            Deadline::none()
        } else {
            Deadline::after(Duration::from_millis(ms))
        }
    }

    /// Adds a step budget; zero leaves steps unlimited.
    pub fn with_steps(mut self, steps: u64) -> Deadline {
        self.steps = (steps > 0).then(|| Cell::new(steps));
        self
    }

    pub fn check(&self) -> Result<(), Timeout> {
        if let Some(left) = &self.steps {
            if left.get() == 0 {
                return Err(Timeout);
            }
            left.set(left.get() - 1);
        }
        match self.until {
            Some(t) if Instant::now() >= t => Err(Timeout),
            _ => Ok(()),
        }
    }
}

pub fn is_satisfiable(formula: &Ltl) -> bool {
    !ltl_to_nba(formula).is_empty()
}

pub fn is_satisfiable_within(formula: &Ltl, deadline: &Deadline) -> Result<bool, Timeout> {
    Ok(!ltl_to_nba_within(formula, deadline)?.is_empty())
}

/// A symbolic trace all of whose words satisfy `formula`, or `None` if it is
/// unsatisfiable.
pub fn solve(formula: &Ltl, deadline: &Deadline) -> Result<Option<SymbolicTrace>, Timeout> {
    let nba = ltl_to_nba_within(formula, deadline)?;
    extract_accepting_lasso_within(&nba, deadline)
}
