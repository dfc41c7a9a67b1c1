//! Propositional reasoning: CNF conversion, a DPLL solver with assumptions,
//! minimal unsatisfiable cores and partial satisfying assignments.

mod assignment;
mod cnf;
mod core;
mod solver;

use std::fmt;
use std::ops::Not;

use thiserror::Error;

use crate::formula::Prop;

pub use self::core::{minimal_unsat_core, minimal_unsat_core_indices, shrink_assumptions};
pub use assignment::{check_partial_assignment, derive_partial_assignment, AssignmentError, PartialAssignment};
pub use cnf::{to_cnf, Clause, Cnf};
pub use solver::{SolveResult, Solver};

/// A solver literal: variable index and polarity packed as `2 * var + neg`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var() + 1)
        } else {
            write!(f, "-{}", self.var() + 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("formula is unsatisfiable")]
    Unsatisfiable,
    #[error("clause set is satisfiable, it has no unsatisfiable core")]
    Satisfiable,
}

pub fn is_satisfiable(formula: &Prop) -> bool {
    Solver::new(&to_cnf(formula)).solve(&[]).is_sat()
}

/// A model of `formula` as a letter (set of true propositions), or `None`.
pub fn find_model(formula: &Prop) -> Option<u32> {
    let cnf = to_cnf(formula);
    match Solver::new(&cnf).solve(&[]) {
        SolveResult::Sat(m) => Some(cnf.project(&m)),
        SolveResult::Unsat(_) => None,
    }
}
