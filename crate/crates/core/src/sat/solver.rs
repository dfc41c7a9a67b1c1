//! A small DPLL solver: two-watched-literal unit propagation, chronological
//! backtracking, no clause learning. Assumptions are decided first, one per
//! decision level, which lets an UNSAT answer name the assumptions it used.

use super::{Cnf, Lit};

const NO_REASON: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// A total model, indexed by solver variable.
    Sat(Vec<bool>),
    /// A subset of the assumptions that is already unsatisfiable together
    /// with the clauses. Empty when the clauses alone are unsatisfiable.
    Unsat(Vec<Lit>),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Clone, Copy, Debug)]
enum Decision {
    Assumption,
    Free { flipped: bool },
}

pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    /// Clause indices watching each literal, by [`Lit::index`].
    watches: Vec<Vec<u32>>,
    values: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    decisions: Vec<(Lit, Decision)>,
    qhead: usize,
    root_conflict: bool,
}

impl Solver {
    pub fn new(cnf: &Cnf) -> Solver {
        Solver::from_clauses(cnf.num_vars, &cnf.clauses)
    }

    pub fn from_clauses(num_vars: u32, clauses: &[Vec<Lit>]) -> Solver {
        let n = num_vars as usize;
        let mut s = Solver {
            clauses: Vec::with_capacity(clauses.len()),
            watches: vec![Vec::new(); 2 * n],
            values: vec![None; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            decisions: Vec::new(),
            qhead: 0,
            root_conflict: false,
        };
        let mut units = Vec::new();
        for c in clauses {
            let mut c = c.clone();
            c.sort();
            c.dedup();
            if c.windows(2).any(|w| w[0].var() == w[1].var()) {
                continue; // tautology
            }
            match c.len() {
                0 => s.root_conflict = true,
                1 => units.push(c[0]),
                _ => {
                    let idx = s.clauses.len() as u32;
                    s.watches[c[0].index()].push(idx);
                    s.watches[c[1].index()].push(idx);
                    s.clauses.push(c);
                }
            }
        }
        for u in units {
            match s.value(u) {
                Some(true) => {}
                Some(false) => s.root_conflict = true,
                None => s.enqueue(u, NO_REASON),
            }
        }
        if !s.root_conflict && s.propagate().is_some() {
            s.root_conflict = true;
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    fn value(&self, l: Lit) -> Option<bool> {
        self.values[l.var() as usize].map(|v| v == l.is_positive())
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.values[v] = Some(l.is_positive());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn new_level(&mut self, lit: Lit, kind: Decision) {
        self.trail_lim.push(self.trail.len());
        self.decisions.push((lit, kind));
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for l in self.trail.drain(keep..) {
            let v = l.var() as usize;
            self.values[v] = None;
            self.reason[v] = NO_REASON;
        }
        self.trail_lim.truncate(level);
        self.decisions.truncate(level);
        self.qhead = self.trail.len();
    }

    /// Returns the index of a falsified clause on conflict.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let falsified = !p;
            let ws = std::mem::take(&mut self.watches[falsified.index()]);
            let mut keep = Vec::with_capacity(ws.len());
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let c = &mut self.clauses[ci as usize];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.values[first.var() as usize].map(|v| v == first.is_positive()) == Some(true) {
                    keep.push(ci);
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    if self.values[l.var() as usize].map(|v| v == l.is_positive()) != Some(false) {
                        c.swap(1, k);
                        self.watches[l.index()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(ci);
                match self.value(first) {
                    Some(false) => {
                        conflict = Some(ci);
                        keep.extend_from_slice(&ws[i..]);
                        break;
                    }
                    _ => self.enqueue(first, ci),
                }
            }
            self.watches[falsified.index()] = keep;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// Assumption literals that, by propagation, force the variables in
    /// `seeds` to their current (conflicting) values.
    fn analyze_final(&self, seeds: impl IntoIterator<Item = Lit>) -> Vec<Lit> {
        let mut seen = vec![false; self.values.len()];
        for l in seeds {
            let v = l.var() as usize;
            if self.level[v] > 0 && self.values[v].is_some() {
                seen[v] = true;
            }
        }
        let mut core = Vec::new();
        let start = self.trail_lim.first().copied().unwrap_or(self.trail.len());
        for &l in self.trail[start..].iter().rev() {
            let v = l.var() as usize;
            if !seen[v] {
                continue;
            }
            if self.reason[v] == NO_REASON {
                core.push(l);
            } else {
                for &q in &self.clauses[self.reason[v] as usize] {
                    let qv = q.var() as usize;
                    if qv != v && self.level[qv] > 0 {
                        seen[qv] = true;
                    }
                }
            }
        }
        core.reverse();
        core
    }

    fn assumptions_on_trail(&self) -> Vec<Lit> {
        self.decisions.iter().filter(|(_, k)| matches!(k, Decision::Assumption)).map(|(l, _)| *l).collect()
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.cancel_until(0);
        if self.root_conflict {
            return SolveResult::Unsat(Vec::new());
        }
        let mut assumed = 0;
        let mut next_var = 0;
        loop {
            if let Some(confl) = self.propagate() {
                if self.decision_level() == 0 {
                    self.root_conflict = true;
                    return SolveResult::Unsat(Vec::new());
                }
                if matches!(self.decisions.last(), Some((_, Decision::Assumption))) {
                    let seeds = self.clauses[confl as usize].clone();
                    let core = self.analyze_final(seeds);
                    self.cancel_until(0);
                    return SolveResult::Unsat(core);
                }
                // chronological backtracking over free decisions
                loop {
                    let lvl = self.decision_level();
                    if lvl == 0 {
                        self.root_conflict = true;
                        return SolveResult::Unsat(Vec::new());
                    }
                    let (lit, kind) = self.decisions[lvl - 1];
                    match kind {
                        Decision::Assumption => {
                            let core = self.assumptions_on_trail();
                            self.cancel_until(0);
                            return SolveResult::Unsat(core);
                        }
                        Decision::Free { flipped: true } => self.cancel_until(lvl - 1),
                        Decision::Free { flipped: false } => {
                            self.cancel_until(lvl - 1);
                            self.new_level(!lit, Decision::Free { flipped: true });
                            self.enqueue(!lit, NO_REASON);
                            next_var = 0;
                            break;
                        }
                    }
                }
                continue;
            }

            if assumed < assumptions.len() {
                let a = assumptions[assumed];
                assumed += 1;
                match self.value(a) {
                    Some(false) => {
                        let mut core = self.analyze_final([a]);
                        core.push(a);
                        self.cancel_until(0);
                        return SolveResult::Unsat(core);
                    }
                    Some(true) => self.new_level(a, Decision::Assumption),
                    None => {
                        self.new_level(a, Decision::Assumption);
                        self.enqueue(a, NO_REASON);
                    }
                }
                continue;
            }

            while next_var < self.values.len() && self.values[next_var].is_some() {
                next_var += 1;
            }
            if next_var == self.values.len() {
                let model = self.values.iter().map(|v| v.unwrap_or(false)).collect();
                self.cancel_until(0);
                return SolveResult::Sat(model);
            }
            let lit = Lit::new(next_var as u32, false);
            self.new_level(lit, Decision::Free { flipped: false });
            self.enqueue(lit, NO_REASON);
        }
    }
}
