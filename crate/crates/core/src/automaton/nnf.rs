use std::collections::HashMap;

use crate::formula::{Ltl, Var};

pub type NodeId = u32;

/// Negation normal form node. Negation only sits on literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Lit(Var, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

/// Hash-consed store of NNF nodes; equal subformulas share one id.
#[derive(Default, Debug)]
pub struct Arena {
    nodes: Vec<Node>,
    ids: HashMap<Node, NodeId>,
}

impl Arena {
    pub fn new() -> Arena {
        Arena::default()
    }

    pub fn get(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n);
        self.ids.insert(n, id);
        id
    }

    pub fn tt(&mut self) -> NodeId {
        self.intern(Node::True)
    }

    pub fn ff(&mut self) -> NodeId {
        self.intern(Node::False)
    }

    fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (self.get(a), self.get(b)) {
            (Node::False, _) | (_, Node::False) => self.ff(),
            (Node::True, _) => b,
            (_, Node::True) => a,
            _ if a == b => a,
            _ => self.intern(Node::And(a.min(b), a.max(b))),
        }
    }

    fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (self.get(a), self.get(b)) {
            (Node::True, _) | (_, Node::True) => self.tt(),
            (Node::False, _) => b,
            (_, Node::False) => a,
            _ if a == b => a,
            _ => self.intern(Node::Or(a.min(b), a.max(b))),
        }
    }

    fn next(&mut self, a: NodeId) -> NodeId {
        match self.get(a) {
            Node::True | Node::False => a,
            _ => self.intern(Node::Next(a)),
        }
    }

    fn until(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match self.get(b) {
            Node::True | Node::False => b,
            _ if matches!(self.get(a), Node::False) => b,
            _ => self.intern(Node::Until(a, b)),
        }
    }

    fn release(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match self.get(b) {
            Node::True | Node::False => b,
            _ if matches!(self.get(a), Node::True) => b,
            _ => self.intern(Node::Release(a, b)),
        }
    }

    /// NNF of `f`, or of its negation when `negate` is set.
    pub fn nnf(&mut self, f: &Ltl, negate: bool) -> NodeId {
        match (f, negate) {
            (Ltl::Prop(v), n) => self.intern(Node::Lit(*v, !n)),
            (Ltl::True, false) | (Ltl::False, true) => self.tt(),
            (Ltl::True, true) | (Ltl::False, false) => self.ff(),
            (Ltl::Not(a), n) => self.nnf(a, !n),
            (Ltl::Next(a), n) => {
                let a = self.nnf(a, n);
                self.next(a)
            }
            (Ltl::And(a, b), false) | (Ltl::Or(a, b), true) => {
                let (a, b) = (self.nnf(a, negate), self.nnf(b, negate));
                self.and(a, b)
            }
            (Ltl::Or(a, b), false) | (Ltl::And(a, b), true) => {
                let (a, b) = (self.nnf(a, negate), self.nnf(b, negate));
                self.or(a, b)
            }
            (Ltl::Implies(a, b), false) => {
                let (a, b) = (self.nnf(a, true), self.nnf(b, false));
                self.or(a, b)
            }
            (Ltl::Implies(a, b), true) => {
                let (a, b) = (self.nnf(a, false), self.nnf(b, true));
                self.and(a, b)
            }
            (Ltl::Until(a, b), false) => {
                let (a, b) = (self.nnf(a, false), self.nnf(b, false));
                self.until(a, b)
            }
            (Ltl::Until(a, b), true) => {
                let (a, b) = (self.nnf(a, true), self.nnf(b, true));
                self.release(a, b)
            }
            (Ltl::Eventually(a), false) => {
                let (t, a) = (self.tt(), self.nnf(a, false));
                self.until(t, a)
            }
            (Ltl::Eventually(a), true) => {
                let (f, a) = (self.ff(), self.nnf(a, true));
                self.release(f, a)
            }
            (Ltl::Globally(a), false) => {
                let (f, a) = (self.ff(), self.nnf(a, false));
                self.release(f, a)
            }
            (Ltl::Globally(a), true) => {
                let (t, a) = (self.tt(), self.nnf(a, true));
                self.until(t, a)
            }
            // a W b = b R (a | b)
            (Ltl::WeakUntil(a, b), false) => {
                let (a, b) = (self.nnf(a, false), self.nnf(b, false));
                let ab = self.or(a, b);
                self.release(b, ab)
            }
            // !(a W b) = !b U (!a & !b)
            (Ltl::WeakUntil(a, b), true) => {
                let (a, b) = (self.nnf(a, true), self.nnf(b, true));
                let ab = self.and(a, b);
                self.until(b, ab)
            }
        }
    }
}
