use std::collections::HashMap;
use std::rc::Rc;

use crate::formula::{Ltl, Prop, Var};

use super::nnf::{Arena, Node, NodeId};

/// A conjunction of literals as two bit masks over propositions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub pos: u32,
    pub neg: u32,
}

impl Cube {
    pub const TOP: Cube = Cube { pos: 0, neg: 0 };

    pub fn with(self, v: Var, positive: bool) -> Option<Cube> {
        let (pos, neg) = if positive { (self.pos | v.bit(), self.neg) } else { (self.pos, self.neg | v.bit()) };
        (pos & neg == 0).then_some(Cube { pos, neg })
    }

    /// Every literal of `self` is also in `other`.
    pub fn implied_by(self, other: Cube) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    pub fn literal_count(self) -> u32 {
        self.pos.count_ones() + self.neg.count_ones()
    }

    pub fn satisfied_by(self, letter: u32) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }

    pub fn literals(self) -> impl Iterator<Item = (Var, bool)> {
        (0..Var::MAX_VARS).filter_map(move |i| {
            let v = Var::from_index(i)?;
            if self.pos & v.bit() != 0 {
                Some((v, true))
            } else if self.neg & v.bit() != 0 {
                Some((v, false))
            } else {
                None
            }
        })
    }

    /// Left-nested conjunction in alphabetical order, `1` when empty.
    pub fn to_prop(self) -> Prop {
        Prop::conjunction(self.literals().map(|(v, b)| Prop::literal(v, b)))
    }
}

pub type StateId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub cube: Cube,
    pub target: StateId,
    /// Indices of the untils delayed on this edge, sorted. The edge belongs
    /// to the acceptance set of every other until.
    pub postponed: Rc<[u32]>,
}

#[derive(Clone)]
struct Branch {
    todo: Vec<NodeId>,
    done: Vec<u64>,
    cube: Cube,
    next: Vec<NodeId>,
    postponed: Vec<u32>,
}

impl Branch {
    fn has(&self, id: NodeId) -> bool {
        self.done[id as usize / 64] >> (id % 64) & 1 == 1
    }

    fn mark(&mut self, id: NodeId) {
        self.done[id as usize / 64] |= 1 << (id % 64);
    }
}

/// Lazily expanded tableau of an LTL formula. A state is the set of
/// obligations for the rest of the word; its outgoing edges come from
/// splitting every obligation into what must hold now and what must hold
/// next.
pub struct Tableau {
    arena: Arena,
    until_index: HashMap<NodeId, u32>,
    states: Vec<Vec<NodeId>>,
    ids: HashMap<Vec<NodeId>, StateId>,
    edges: Vec<Option<Rc<[Edge]>>>,
}

impl Tableau {
    /// Tableau of `formula`, or of its negation when `negate` is set.
    pub fn new(formula: &Ltl, negate: bool) -> Tableau {
        let mut arena = Arena::new();
        let root = arena.nnf(formula, negate);
        let mut until_index = HashMap::new();
        for id in 0..arena.node_count() as NodeId {
            if let Node::Until(..) = arena.get(id) {
                let k = until_index.len() as u32;
                until_index.insert(id, k);
            }
        }
        let mut t = Tableau { arena, until_index, states: Vec::new(), ids: HashMap::new(), edges: Vec::new() };
        let init = if matches!(t.arena.get(root), Node::True) { vec![] } else { vec![root] };
        t.intern(init);
        t
    }

    pub fn initial(&self) -> StateId {
        0
    }

    /// Number of generalized acceptance sets, one per until.
    pub fn num_sets(&self) -> u32 {
        self.until_index.len() as u32
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    fn intern(&mut self, set: Vec<NodeId>) -> StateId {
        if let Some(&id) = self.ids.get(&set) {
            return id;
        }
        let id = self.states.len() as StateId;
        self.states.push(set.clone());
        self.ids.insert(set, id);
        self.edges.push(None);
        id
    }

    pub fn edges(&mut self, s: StateId) -> Rc<[Edge]> {
        if let Some(e) = &self.edges[s as usize] {
            return e.clone();
        }
        let expansions = self.expand(s);
        let edges: Rc<[Edge]> = expansions
            .into_iter()
            .map(|(cube, next, postponed)| Edge { cube, target: self.intern(next), postponed: postponed.into() })
            .collect();
        self.edges[s as usize] = Some(edges.clone());
        edges
    }

    fn expand(&self, s: StateId) -> Vec<(Cube, Vec<NodeId>, Vec<u32>)> {
        let words = self.arena.node_count().div_ceil(64);
        let start = Branch {
            todo: self.states[s as usize].iter().rev().copied().collect(),
            done: vec![0; words],
            cube: Cube::TOP,
            next: Vec::new(),
            postponed: Vec::new(),
        };
        let mut out = Vec::new();
        self.expand_branch(start, &mut out);
        for (_, next, postponed) in &mut out {
            next.sort_unstable();
            next.dedup();
            postponed.sort_unstable();
            postponed.dedup();
        }
        out.sort();
        out.dedup();
        // drop expansions made redundant by a weaker one with the same successor
        let keep: Vec<bool> = (0..out.len())
            .map(|i| {
                let (c, n, p) = &out[i];
                !out.iter().enumerate().any(|(j, (c2, n2, p2))| {
                    j != i && n2 == n && c2.implied_by(*c) && is_subset(p2, p) && (c2, p2) != (c, p)
                })
            })
            .collect();
        out.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect()
    }

    fn expand_branch(&self, mut b: Branch, out: &mut Vec<(Cube, Vec<NodeId>, Vec<u32>)>) {
        while let Some(f) = b.todo.pop() {
            if b.has(f) {
                continue;
            }
            b.mark(f);
            match self.arena.get(f) {
                Node::True => {}
                Node::False => return,
                Node::Lit(v, p) => match b.cube.with(v, p) {
                    Some(c) => b.cube = c,
                    None => return,
                },
                Node::And(x, y) => {
                    b.todo.push(y);
                    b.todo.push(x);
                }
                Node::Or(x, y) => {
                    if b.has(x) || b.has(y) {
                        continue;
                    }
                    let mut other = b.clone();
                    other.todo.push(y);
                    self.expand_branch(other, out);
                    b.todo.push(x);
                }
                Node::Next(x) => b.next.push(x),
                Node::Until(x, y) => {
                    if b.has(y) {
                        continue;
                    }
                    let mut other = b.clone();
                    other.todo.push(y);
                    self.expand_branch(other, out);
                    b.todo.push(x);
                    b.next.push(f);
                    b.postponed.push(self.until_index[&f]);
                }
                Node::Release(x, y) => {
                    if b.has(x) && b.has(y) {
                        continue;
                    }
                    let mut other = b.clone();
                    other.todo.push(y);
                    other.todo.push(x);
                    self.expand_branch(other, out);
                    b.todo.push(y);
                    b.next.push(f);
                }
            }
        }
        out.push((b.cube, b.next, b.postponed));
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}
