use std::collections::HashMap;
use std::fmt::Write as _;

use crate::formula::{Ltl, Prop};
use crate::trace::{ConcreteTrace, SymbolicTrace};

use super::search::Graph;
use super::tableau::{Cube, Tableau};
use super::{Deadline, Timeout};

/// Transition-based generalized Büchi automaton. A run is accepting if it
/// takes a transition of every acceptance set infinitely often; a
/// transition belongs to set `j` unless it postpones until number `j`.
#[derive(Debug, Clone)]
pub struct GeneralizedBuchi {
    pub num_states: usize,
    pub initial: usize,
    pub num_sets: u32,
    pub transitions: Vec<GbaTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbaTransition {
    pub source: usize,
    pub guard: Cube,
    pub target: usize,
    pub postponed: Vec<u32>,
}

impl GbaTransition {
    pub fn in_set(&self, j: u32) -> bool {
        self.postponed.binary_search(&j).is_err()
    }
}

/// State-based Büchi automaton with one acceptance set.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    num_states: usize,
    initial: Vec<usize>,
    transitions: Vec<Transition>,
    accepting: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub source: usize,
    pub guard: Cube,
    pub target: usize,
}

impl Transition {
    pub fn guard_prop(&self) -> Prop {
        self.guard.to_prop()
    }
}

/// Next degeneralization counter after a transition that leaves the untils
/// in `postponed` pending. Counter `k` marks an accepting visit.
pub(crate) fn advance(counter: u32, k: u32, postponed: &[u32]) -> u32 {
    let mut j = if counter == k { 0 } else { counter };
    while j < k && postponed.binary_search(&j).is_err() {
        j += 1;
    }
    j
}

/// Explores the whole tableau of `formula`.
pub fn ltl_to_gba(formula: &Ltl, deadline: &Deadline) -> Result<GeneralizedBuchi, Timeout> {
    let mut t = Tableau::new(formula, false);
    let mut transitions = Vec::new();
    let mut s = 0;
    while s < t.num_states() {
        deadline.check()?;
        for e in t.edges(s as u32).iter() {
            transitions.push(GbaTransition {
                source: s,
                guard: e.cube,
                target: e.target as usize,
                postponed: e.postponed.to_vec(),
            });
        }
        s += 1;
    }
    Ok(GeneralizedBuchi {
        num_states: t.num_states(),
        initial: t.initial() as usize,
        num_sets: t.num_sets(),
        transitions,
    })
}

/// Counter construction: state `(q, c)` has seen acceptance sets `0..c` in
/// order since the last accepting visit; `(q, k)` is accepting.
pub fn degeneralize(gba: &GeneralizedBuchi, deadline: &Deadline) -> Result<BuchiAutomaton, Timeout> {
    let k = gba.num_sets;
    let mut out_edges: Vec<Vec<&GbaTransition>> = vec![Vec::new(); gba.num_states];
    for tr in &gba.transitions {
        out_edges[tr.source].push(tr);
    }
    let mut ids: HashMap<(usize, u32), usize> = HashMap::new();
    let mut states = vec![(gba.initial, 0)];
    ids.insert((gba.initial, 0), 0);
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < states.len() {
        deadline.check()?;
        let (q, c) = states[i];
        for tr in &out_edges[q] {
            let key = (tr.target, advance(c, k, &tr.postponed));
            let target = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            transitions.push(Transition { source: i, guard: tr.guard, target });
        }
        i += 1;
    }
    Ok(BuchiAutomaton {
        num_states: states.len(),
        initial: vec![0],
        transitions,
        accepting: states.iter().map(|&(_, c)| c == k).collect(),
    })
}

/// Büchi automaton accepting exactly the models of `formula`.
pub fn ltl_to_nba(formula: &Ltl) -> BuchiAutomaton {
    ltl_to_nba_within(formula, &Deadline::none()).expect("no deadline")
}

pub fn ltl_to_nba_within(formula: &Ltl, deadline: &Deadline) -> Result<BuchiAutomaton, Timeout> {
    degeneralize(&ltl_to_gba(formula, deadline)?, deadline)
}

impl BuchiAutomaton {
    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    /// The reachable graph, transitions labeled by their index.
    pub fn graph(&self) -> Graph {
        let mut succ = vec![Vec::new(); self.num_states];
        for (i, tr) in self.transitions.iter().enumerate() {
            succ[tr.source].push((tr.target, i as u32));
        }
        Graph { initial: self.initial.clone(), succ, accepting: self.accepting.clone() }
    }

    pub fn is_empty(&self) -> bool {
        !self.graph().has_accepting_cycle()
    }

    /// Whether the infinite word of `trace` is accepted.
    pub fn accepts(&self, trace: &ConcreteTrace) -> bool {
        let mut out_edges = vec![Vec::new(); self.num_states];
        for tr in &self.transitions {
            out_edges[tr.source].push(*tr);
        }
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states: Vec<(usize, usize)> = Vec::new();
        for &q in &self.initial {
            ids.insert((0, q), states.len());
            states.push((0, q));
        }
        let mut g = Graph { initial: (0..states.len()).collect(), ..Graph::default() };
        let mut i = 0;
        while i < states.len() {
            let (pos, q) = states[i];
            let letter = trace.letter(pos);
            let mut succ = Vec::new();
            for tr in out_edges[q].iter().filter(|tr| tr.guard.satisfied_by(letter)) {
                let key = (trace.succ(pos), tr.target);
                let id = *ids.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                succ.push((id, 0));
            }
            g.succ.push(succ);
            g.accepting.push(self.accepting[q]);
            i += 1;
        }
        g.has_accepting_cycle()
    }

    /// Line-based text form for inspection.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states {}", self.num_states);
        let _ = writeln!(out, "initial {}", join(&self.initial));
        let acc: Vec<usize> = (0..self.num_states).filter(|&s| self.accepting[s]).collect();
        let _ = writeln!(out, "accepting {}", join(&acc));
        for tr in &self.transitions {
            let _ = writeln!(out, "edge {} {} {}", tr.source, tr.target, tr.guard_prop().to_polish());
        }
        out
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Moves trailing prefix positions equal to the period's last position into
/// the period: `u x (v x)^ω = u (x v)^ω`.
pub(crate) fn compact_lasso<T: PartialEq>(prefix: &mut Vec<T>, period: &mut [T]) {
    while prefix.last().is_some() && prefix.last() == period.last() {
        prefix.pop();
        period.rotate_right(1);
    }
}

/// A symbolic trace read off a shortest accepting lasso, or `None` if the
/// language is empty.
pub fn extract_accepting_lasso(a: &BuchiAutomaton) -> Option<SymbolicTrace> {
    extract_accepting_lasso_within(a, &Deadline::none()).expect("no deadline")
}

pub fn extract_accepting_lasso_within(
    a: &BuchiAutomaton,
    deadline: &Deadline,
) -> Result<Option<SymbolicTrace>, Timeout> {
    let Some(lasso) = a.graph().find_lasso(deadline, |l| a.transitions[l as usize].guard.literal_count())? else {
        return Ok(None);
    };
    let guard = |&(_, l, _): &(usize, u32, usize)| a.transitions[l as usize].guard;
    let mut prefix: Vec<Cube> = lasso.prefix.iter().map(guard).collect();
    let mut period: Vec<Cube> = lasso.cycle.iter().map(guard).collect();
    compact_lasso(&mut prefix, &mut period);
    let trace = SymbolicTrace::new(
        prefix.into_iter().map(Cube::to_prop).collect(),
        period.into_iter().map(Cube::to_prop).collect(),
    )
    .expect("cube guards are satisfiable");
    Ok(Some(trace))
}
