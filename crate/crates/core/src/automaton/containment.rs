use std::collections::HashMap;

use crate::formula::Ltl;
use crate::sat::{to_cnf, Cnf, SolveResult, Solver};
use crate::trace::{ConcreteTrace, SymbolicTrace};

use super::buchi::{advance, compact_lasso};
use super::search::Graph;
use super::tableau::{Cube, Tableau};
use super::{Deadline, Timeout};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// A word described by the trace that falsifies the formula.
    Violated(ConcreteTrace),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Decides whether every word of a symbolic trace satisfies a fixed formula.
/// The tableau of the negated formula is built lazily and shared across
/// calls, so checking many traces against one formula is cheap.
pub struct ContainmentChecker {
    formula: Ltl,
    negation: Tableau,
}

struct Position {
    cnf: Cnf,
    solver: Solver,
}

impl ContainmentChecker {
    pub fn new(formula: &Ltl) -> ContainmentChecker {
        ContainmentChecker { formula: formula.clone(), negation: Tableau::new(formula, true) }
    }

    pub fn formula(&self) -> &Ltl {
        &self.formula
    }

    pub fn check(&mut self, trace: &SymbolicTrace) -> Verdict {
        self.check_within(trace, &Deadline::none()).expect("no deadline")
    }

    /// Searches the product of the trace's lasso with the negated formula's
    /// automaton for an accepting cycle. A product edge exists when the
    /// position constraint and the tableau guard have a common letter.
    pub fn check_within(&mut self, trace: &SymbolicTrace, deadline: &Deadline) -> Result<Verdict, Timeout> {
        let k = self.negation.num_sets();
        let mut positions: Vec<Position> = (0..trace.len())
            .map(|i| {
                let cnf = to_cnf(trace.position(i));
                let solver = Solver::new(&cnf);
                Position { cnf, solver }
            })
            .collect();
        let mut letter_cache: HashMap<(usize, Cube), Option<u32>> = HashMap::new();
        let mut letters: Vec<u32> = Vec::new();

        let mut ids: HashMap<(usize, u32, u32), usize> = HashMap::new();
        let start = (0, self.negation.initial(), 0);
        let mut states = vec![start];
        ids.insert(start, 0);
        let mut g = Graph { initial: vec![0], ..Graph::default() };
        let mut s = 0;
        while s < states.len() {
            deadline.check()?;
            let (i, q, c) = states[s];
            let mut succ = Vec::new();
            for e in self.negation.edges(q).iter() {
                let letter =
                    *letter_cache.entry((i, e.cube)).or_insert_with(|| common_letter(&mut positions[i], e.cube));
                let Some(letter) = letter else { continue };
                let key = (trace.succ(i), e.target, advance(c, k, &e.postponed));
                let id = *ids.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                letters.push(letter);
                succ.push((id, letters.len() as u32 - 1));
            }
            g.succ.push(succ);
            g.accepting.push(c == k);
            s += 1;
        }

        let Some(lasso) = g.find_lasso(deadline, |_| 0)? else { return Ok(Verdict::Holds) };
        let mut prefix: Vec<u32> = lasso.prefix.iter().map(|&(_, l, _)| letters[l as usize]).collect();
        let mut period: Vec<u32> = lasso.cycle.iter().map(|&(_, l, _)| letters[l as usize]).collect();
        compact_lasso(&mut prefix, &mut period);
        let supply = self.formula.vars().union(trace.vars());
        let witness = ConcreteTrace::new(supply, prefix, period).expect("letters range over the supply");
        Ok(Verdict::Violated(witness))
    }
}

/// A letter satisfying both the position constraint and `cube`; propositions
/// constrained by neither are false.
fn common_letter(p: &mut Position, cube: Cube) -> Option<u32> {
    let mut assumptions = Vec::new();
    let mut extra = 0;
    for (v, b) in cube.literals() {
        match p.cnf.lit(v, b) {
            Some(l) => assumptions.push(l),
            None if b => extra |= v.bit(),
            None => {}
        }
    }
    match p.solver.solve(&assumptions) {
        SolveResult::Sat(model) => Some(p.cnf.project(&model) | extra),
        SolveResult::Unsat(_) => None,
    }
}

/// Whether every word described by `trace` satisfies `formula`.
pub fn check_containment(trace: &SymbolicTrace, formula: &Ltl) -> Verdict {
    ContainmentChecker::new(formula).check(trace)
}

pub fn check_containment_within(trace: &SymbolicTrace, formula: &Ltl, deadline: &Deadline) -> Result<Verdict, Timeout> {
    ContainmentChecker::new(formula).check_within(trace, deadline)
}
