use std::collections::BTreeMap;

use crate::formula::{Prop, Var};

use super::Lit;

pub type Clause = Vec<Lit>;

/// A clause set produced by the definitional (Tseitin) transformation.
///
/// The formula's propositions occupy solver variables `0..k` in alphabetical
/// order; gate variables follow. Every total model of the clauses restricted
/// to the proposition variables is a model of the source formula and every
/// model of the formula extends to exactly one model of the clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
    pub prop_vars: BTreeMap<Var, u32>,
}

#[derive(Clone, Copy)]
enum Node {
    Const(bool),
    Lit(Lit),
}

impl Cnf {
    pub fn from_prop(formula: &Prop) -> Cnf {
        let prop_vars: BTreeMap<Var, u32> = formula.vars().vars().zip(0..).collect();
        let mut cnf = Cnf { num_vars: prop_vars.len() as u32, clauses: Vec::new(), prop_vars };
        match cnf.encode(formula) {
            Node::Const(true) => {}
            Node::Const(false) => cnf.clauses.push(Vec::new()),
            Node::Lit(l) => cnf.clauses.push(vec![l]),
        }
        cnf
    }

    /// Solver literal for proposition `v`, if it occurs in the formula.
    pub fn lit(&self, v: Var, positive: bool) -> Option<Lit> {
        self.prop_vars.get(&v).map(|&x| Lit::new(x, positive))
    }

    /// The letter (set of true propositions) a solver model describes.
    pub fn project(&self, model: &[bool]) -> u32 {
        self.prop_vars.iter().filter(|(_, &x)| model[x as usize]).fold(0, |acc, (v, _)| acc | v.bit())
    }

    fn fresh(&mut self) -> Lit {
        let l = Lit::new(self.num_vars, true);
        self.num_vars += 1;
        l
    }

    fn encode(&mut self, f: &Prop) -> Node {
        match f {
            Prop::Var(v) => Node::Lit(Lit::new(self.prop_vars[v], true)),
            Prop::True => Node::Const(true),
            Prop::False => Node::Const(false),
            Prop::Not(a) => match self.encode(a) {
                Node::Const(b) => Node::Const(!b),
                Node::Lit(l) => Node::Lit(!l),
            },
            Prop::And(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.and(a, b)
            }
            Prop::Or(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                not(self.and(not(a), not(b)))
            }
            Prop::Implies(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                not(self.and(a, not(b)))
            }
            Prop::Iff(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.iff(a, b)
            }
            Prop::Xor(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                not(self.iff(a, b))
            }
        }
    }

    fn and(&mut self, a: Node, b: Node) -> Node {
        match (a, b) {
            (Node::Const(false), _) | (_, Node::Const(false)) => Node::Const(false),
            (Node::Const(true), x) | (x, Node::Const(true)) => x,
            (Node::Lit(x), Node::Lit(y)) => {
                let g = self.fresh();
                self.clauses.push(vec![!g, x]);
                self.clauses.push(vec![!g, y]);
                self.clauses.push(vec![g, !x, !y]);
                Node::Lit(g)
            }
        }
    }

    fn iff(&mut self, a: Node, b: Node) -> Node {
        match (a, b) {
            (Node::Const(p), Node::Const(q)) => Node::Const(p == q),
            (Node::Const(true), x) | (x, Node::Const(true)) => x,
            (Node::Const(false), x) | (x, Node::Const(false)) => not(x),
            (Node::Lit(x), Node::Lit(y)) => {
                let g = self.fresh();
                self.clauses.push(vec![!g, !x, y]);
                self.clauses.push(vec![!g, x, !y]);
                self.clauses.push(vec![g, x, y]);
                self.clauses.push(vec![g, !x, !y]);
                Node::Lit(g)
            }
        }
    }
}

fn not(n: Node) -> Node {
    match n {
        Node::Const(b) => Node::Const(!b),
        Node::Lit(l) => Node::Lit(!l),
    }
}

/// Shorthand for [`Cnf::from_prop`].
pub fn to_cnf(formula: &Prop) -> Cnf {
    Cnf::from_prop(formula)
}
