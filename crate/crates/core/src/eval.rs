//! Evaluation of LTL formulas on concrete lassos.

use crate::formula::{Ltl, UnknownProposition};
use crate::trace::ConcreteTrace;

/// Verdicts of every subformula occurrence at every lasso position.
///
/// Rows are in post-order, so the root is the last row and children come
/// before their parents.
pub struct SubformulaTable<'a> {
    nodes: Vec<&'a Ltl>,
    rows: Vec<Vec<bool>>,
}

impl<'a> SubformulaTable<'a> {
    pub fn build(formula: &'a Ltl, trace: &ConcreteTrace) -> Result<SubformulaTable<'a>, UnknownProposition> {
        formula.check_supply(trace.supply())?;
        let mut table = SubformulaTable { nodes: Vec::new(), rows: Vec::new() };
        table.fill(formula, trace);
        Ok(table)
    }

    pub fn subformulas(&self) -> &[&'a Ltl] {
        &self.nodes
    }

    pub fn row(&self, index: usize) -> &[bool] {
        &self.rows[index]
    }

    pub fn root(&self) -> &[bool] {
        self.rows.last().expect("a formula has at least one node")
    }

    fn fill(&mut self, f: &'a Ltl, t: &ConcreteTrace) -> usize {
        let len = t.len();
        let row: Vec<bool> = match f {
            Ltl::Prop(v) => (0..len).map(|i| t.letter(i) & v.bit() != 0).collect(),
            Ltl::True => vec![true; len],
            Ltl::False => vec![false; len],
            Ltl::Not(a) => {
                let a = self.fill(a, t);
                self.rows[a].iter().map(|x| !x).collect()
            }
            Ltl::Next(a) => {
                let a = self.fill(a, t);
                (0..len).map(|i| self.rows[a][t.succ(i)]).collect()
            }
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) => {
                let (a, b) = (self.fill(a, t), self.fill(b, t));
                let (ra, rb) = (&self.rows[a], &self.rows[b]);
                (0..len)
                    .map(|i| match f {
                        Ltl::And(..) => ra[i] && rb[i],
                        Ltl::Or(..) => ra[i] || rb[i],
                        _ => !ra[i] || rb[i],
                    })
                    .collect()
            }
            Ltl::Until(a, b) => {
                let (a, b) = (self.fill(a, t), self.fill(b, t));
                until(t, &self.rows[a], &self.rows[b])
            }
            Ltl::Eventually(b) => {
                let b = self.fill(b, t);
                until(t, &vec![true; len], &self.rows[b])
            }
            Ltl::Globally(a) => {
                let a = self.fill(a, t);
                globally(t, &self.rows[a])
            }
            Ltl::WeakUntil(a, b) => {
                let (a, b) = (self.fill(a, t), self.fill(b, t));
                let u = until(t, &self.rows[a], &self.rows[b]);
                let g = globally(t, &self.rows[a]);
                u.into_iter().zip(g).map(|(u, g)| u || g).collect()
            }
        };
        self.nodes.push(f);
        self.rows.push(row);
        self.rows.len() - 1
    }
}

/// Solves `x[i] = step(i, x[succ(i)])` starting from `init` on the period:
/// two backward passes over the period reach the fixpoint, one more pass
/// covers the prefix.
fn backward_fixpoint(t: &ConcreteTrace, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let m = t.prefix().len();
    let len = t.len();
    let mut x = vec![init; len];
    for _ in 0..2 {
        for i in (m..len).rev() {
            x[i] = step(i, x[t.succ(i)]);
        }
    }
    for i in (0..m).rev() {
        x[i] = step(i, x[i + 1]);
    }
    x
}

fn until(t: &ConcreteTrace, a: &[bool], b: &[bool]) -> Vec<bool> {
    backward_fixpoint(t, false, |i, next| b[i] || (a[i] && next))
}

fn globally(t: &ConcreteTrace, a: &[bool]) -> Vec<bool> {
    backward_fixpoint(t, true, |i, next| a[i] && next)
}

/// Whether the infinite word of `trace` satisfies `formula`.
pub fn eval_concrete(formula: &Ltl, trace: &ConcreteTrace) -> Result<bool, UnknownProposition> {
    Ok(SubformulaTable::build(formula, trace)?.root()[0])
}
