use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Prop, Supply, UnknownProposition, Var};

use super::{shrink_assumptions, to_cnf, Lit, SatError, SolveResult, Solver};

/// Propositions fixed by an answer; absent ones are don't-cares.
/// Prints as `<prop><0|1>` pairs in alphabetical order, e.g. `a0b0c1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PartialAssignment(BTreeMap<Var, bool>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("malformed assignment at byte {pos}")]
    Malformed { pos: usize },
    #[error("proposition `{var}` assigned twice")]
    Duplicate { var: Var },
    #[error("proposition `{var}` is outside the supply")]
    Unknown { var: Var },
}

impl PartialAssignment {
    pub fn new() -> PartialAssignment {
        PartialAssignment::default()
    }

    pub fn insert(&mut self, v: Var, value: bool) -> Option<bool> {
        self.0.insert(v, value)
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn remove(&mut self, v: Var) -> Option<bool> {
        self.0.remove(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    pub fn vars(&self) -> Supply {
        self.0.keys().fold(Supply::empty(), |s, &v| s.with(v))
    }

    /// Parses the wire form, rejecting propositions outside `supply`.
    pub fn parse(text: &str, supply: Supply) -> Result<PartialAssignment, AssignmentError> {
        let a = Self::parse_any(text)?;
        match a.0.keys().find(|v| !supply.contains(**v)) {
            Some(&var) => Err(AssignmentError::Unknown { var }),
            None => Ok(a),
        }
    }

    fn parse_any(text: &str) -> Result<PartialAssignment, AssignmentError> {
        let bytes = text.as_bytes();
        let mut out = BTreeMap::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let var = Var::from_char(bytes[pos] as char).ok_or(AssignmentError::Malformed { pos })?;
            let value = match bytes.get(pos + 1) {
                Some(b'0') => false,
                Some(b'1') => true,
                _ => return Err(AssignmentError::Malformed { pos: pos + 1 }),
            };
            if out.insert(var, value).is_some() {
                return Err(AssignmentError::Duplicate { var });
            }
            pos += 2;
        }
        Ok(PartialAssignment(out))
    }

    /// The assignment as a conjunction of literals (`1` when empty).
    pub fn to_prop(&self) -> Prop {
        Prop::conjunction(self.iter().map(|(v, b)| Prop::literal(v, b)))
    }
}

impl FromIterator<(Var, bool)> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        PartialAssignment(iter.into_iter().collect())
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, b) in self.iter() {
            write!(f, "{v}{}", u8::from(b))?;
        }
        Ok(())
    }
}

impl FromStr for PartialAssignment {
    type Err = AssignmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_any(s)
    }
}

impl From<PartialAssignment> for String {
    fn from(a: PartialAssignment) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for PartialAssignment {
    type Error = AssignmentError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A literal-minimal assignment under which every completion satisfies
/// `formula`.
///
/// A total model is fixed first. Its literals are then used as assumptions
/// against the clauses of the negated formula, which is necessarily
/// unsatisfiable, and the failed assumptions are shrunk by deletion in
/// alphabetical order.
pub fn derive_partial_assignment(formula: &Prop) -> Result<PartialAssignment, SatError> {
    let pos_cnf = to_cnf(formula);
    let model = match Solver::new(&pos_cnf).solve(&[]) {
        SolveResult::Sat(m) => m,
        SolveResult::Unsat(_) => return Err(SatError::Unsatisfiable),
    };
    let neg_cnf = to_cnf(&Prop::not(formula.clone()));
    // both encodings number the propositions 0..k alphabetically
    let assumptions: Vec<Lit> = pos_cnf.prop_vars.values().map(|&x| Lit::new(x, model[x as usize])).collect();
    let mut solver = Solver::new(&neg_cnf);
    let failed = match solver.solve(&assumptions) {
        SolveResult::Unsat(core) => core,
        SolveResult::Sat(_) => unreachable!("a model of the formula satisfies its negation"),
    };
    let initial: Vec<Lit> = assumptions.into_iter().filter(|l| failed.contains(l)).collect();
    let minimal = shrink_assumptions(&mut solver, initial);
    let names: Vec<Var> = neg_cnf.prop_vars.keys().copied().collect();
    Ok(minimal.into_iter().map(|l| (names[l.var() as usize], l.is_positive())).collect())
}

/// Whether every completion of `assignment` satisfies `formula`.
///
/// Fails if the assignment mentions a proposition that does not occur in
/// the formula.
pub fn check_partial_assignment(formula: &Prop, assignment: &PartialAssignment) -> Result<bool, UnknownProposition> {
    let known = formula.vars();
    if let Some(v) = assignment.vars().vars().find(|v| !known.contains(*v)) {
        return Err(UnknownProposition(v));
    }
    let cnf = to_cnf(&Prop::not(formula.clone()));
    let assumptions: Vec<Lit> = assignment.iter().map(|(v, b)| cnf.lit(v, b).expect("checked above")).collect();
    Ok(!Solver::new(&cnf).solve(&assumptions).is_sat())
}
