//! Accepting-lasso search on explicit graphs.

use std::collections::VecDeque;

use super::{Deadline, Timeout};

/// A finite graph with state-based Büchi acceptance. `succ[s]` lists
/// `(target, label)` pairs; labels are opaque to the search.
#[derive(Debug, Default, Clone)]
pub struct Graph {
    pub initial: Vec<usize>,
    pub succ: Vec<Vec<(usize, u32)>>,
    pub accepting: Vec<bool>,
}

/// A run `s0 -> ... -> s` followed by a cycle `s -> ... -> s`, as edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<(usize, u32, usize)>,
    pub cycle: Vec<(usize, u32, usize)>,
}

impl Graph {
    pub fn num_states(&self) -> usize {
        self.succ.len()
    }

    /// Strongly connected component id of every state (iterative Tarjan).
    pub fn sccs(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let n = self.num_states();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSEEN; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut k)) = call.last_mut() {
                if let Some(&(w, _)) = self.succ[v].get(*k) {
                    *k += 1;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
        comp
    }

    /// States lying on some cycle.
    fn cyclic(&self, comp: &[usize]) -> Vec<bool> {
        let mut size = vec![0usize; comp.iter().max().map_or(0, |m| m + 1)];
        for &c in comp {
            size[c] += 1;
        }
        (0..self.num_states()).map(|s| size[comp[s]] > 1 || self.succ[s].iter().any(|&(t, _)| t == s)).collect()
    }

    /// Whether some reachable accepting state lies on a cycle. Assumes every
    /// state is reachable from `initial`.
    pub fn has_accepting_cycle(&self) -> bool {
        let comp = self.sccs();
        let cyclic = self.cyclic(&comp);
        (0..self.num_states()).any(|s| self.accepting[s] && cyclic[s])
    }

    /// Breadth-first distances and parents from `sources`, restricted to
    /// states for which `allowed` holds.
    fn bfs(&self, sources: &[usize], allowed: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<Option<(usize, u32)>>) {
        let n = self.num_states();
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(w, l) in &self.succ[v] {
                if dist[w] == usize::MAX && allowed(w) {
                    dist[w] = dist[v] + 1;
                    parent[w] = Some((v, l));
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// The accepting lasso minimizing (prefix + cycle length, cycle length,
    /// accepting state id). `cost` picks among parallel edges: the cheapest
    /// label, then the lowest, wins.
    pub fn find_lasso(&self, deadline: &Deadline, cost: impl Fn(u32) -> u32) -> Result<Option<Lasso>, Timeout> {
        let comp = self.sccs();
        let cyclic = self.cyclic(&comp);
        let (dist, parent) = self.bfs(&self.initial, |_| true);
        let mut candidates: Vec<usize> =
            (0..self.num_states()).filter(|&s| self.accepting[s] && cyclic[s] && dist[s] != usize::MAX).collect();
        candidates.sort_by_key(|&s| (dist[s], s));

        let mut best: Option<(usize, usize, usize, Vec<usize>)> = None;
        for s in candidates {
            deadline.check()?;
            if let Some((total, _, _, _)) = &best {
                if dist[s] + 1 > *total {
                    break;
                }
            }
            let cycle = self.shortest_cycle(s, &comp);
            let key = (dist[s] + cycle.len() - 1, cycle.len() - 1, s);
            if best.as_ref().map_or(true, |b| key < (b.0, b.1, b.2)) {
                best = Some((key.0, key.1, key.2, cycle));
            }
        }
        let Some((_, _, s, cycle_states)) = best else { return Ok(None) };

        let mut path = vec![s];
        while let Some((p, _)) = parent[*path.last().expect("non-empty")] {
            path.push(p);
        }
        path.reverse();
        let edge = |a: usize, b: usize| -> (usize, u32, usize) {
            let label = self.succ[a]
                .iter()
                .filter(|&&(t, _)| t == b)
                .map(|&(_, l)| l)
                .min_by_key(|&l| (cost(l), l))
                .expect("consecutive states are adjacent");
            (a, label, b)
        };
        Ok(Some(Lasso {
            prefix: path.windows(2).map(|w| edge(w[0], w[1])).collect(),
            cycle: cycle_states.windows(2).map(|w| edge(w[0], w[1])).collect(),
        }))
    }

    /// States of a shortest cycle through `s` inside its component, starting
    /// and ending with `s`.
    fn shortest_cycle(&self, s: usize, comp: &[usize]) -> Vec<usize> {
        if self.succ[s].iter().any(|&(t, _)| t == s) {
            return vec![s, s];
        }
        let starts: Vec<usize> = self.succ[s].iter().map(|&(t, _)| t).filter(|&t| comp[t] == comp[s]).collect();
        let (dist, parent) = self.bfs(&starts, |w| comp[w] == comp[s] && w != s);
        let last = (0..self.num_states())
            .filter(|&v| dist[v] != usize::MAX && self.succ[v].iter().any(|&(t, _)| t == s))
            .min_by_key(|&v| (dist[v], v))
            .expect("s lies on a cycle");
        let mut rev = vec![s, last];
        let mut v = last;
        while let Some((p, _)) = parent[v] {
            rev.push(p);
            v = p;
        }
        rev.push(s);
        rev.reverse();
        rev
    }
}
