//! Deterministic parallel drivers shared by the generators.
//!
//! Every unit of work (a size bucket or a numbered slot) owns a ChaCha
//! stream derived from the run seed, so the output does not depend on the
//! number of worker threads.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{Sampler, Tree};

pub(crate) fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Result of one generation attempt.
pub(crate) enum Outcome<I> {
    Record(I),
    Unsatisfiable,
    Timeout,
    TooLong,
    Rejected,
}

/// A bucket (or the whole generator, `bucket: None`) that could not be
/// filled within the retry budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Starvation {
    pub bucket: Option<usize>,
    pub produced: usize,
    pub wanted: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenStats {
    pub requested: usize,
    pub emitted: usize,
    pub drawn: usize,
    pub duplicates: usize,
    pub unsatisfiable: usize,
    pub timeouts: usize,
    /// Solved but dropped for an answer over the token cap.
    pub too_long: usize,
    /// Dropped for another generator-specific reason, such as a size cap.
    pub rejected: usize,
    pub starved: Vec<Starvation>,
}

impl GenStats {
    fn count<I>(&mut self, o: &Outcome<I>) {
        match o {
            Outcome::Record(_) => {}
            Outcome::Unsatisfiable => self.unsatisfiable += 1,
            Outcome::Timeout => self.timeouts += 1,
            Outcome::TooLong => self.too_long += 1,
            Outcome::Rejected => self.rejected += 1,
        }
    }

    fn merge(&mut self, o: &GenStats) {
        self.drawn += o.drawn;
        self.duplicates += o.duplicates;
        self.unsatisfiable += o.unsatisfiable;
        self.timeouts += o.timeouts;
        self.too_long += o.too_long;
        self.rejected += o.rejected;
    }

    /// Fraction of solved candidates dropped by the answer-length cap.
    pub fn too_long_rate(&self) -> f64 {
        let solved = self.emitted + self.too_long;
        if solved == 0 {
            0.0
        } else {
            self.too_long as f64 / solved as f64
        }
    }

    pub(crate) fn log_starvation(&self, what: &str) {
        for s in &self.starved {
            match s.bucket {
                Some(b) => log::warn!("{what}: size bucket {b} starved at {}/{} records", s.produced, s.wanted),
                None => log::warn!("{what}: retry budget exhausted at {}/{} records", s.produced, s.wanted),
            }
        }
    }
}

struct Bucket {
    size: usize,
    quota: usize,
    wanted: usize,
    rng: ChaCha8Rng,
    seen: HashSet<String>,
    out: Vec<(String, String)>,
    misses: usize,
    starved: bool,
    stats: GenStats,
}

impl Bucket {
    fn run<T, F>(&mut self, sampler: &Sampler, solve: &F, budget: usize)
    where
        T: Tree,
        F: Fn(&T) -> Outcome<String>,
    {
        while self.out.len() < self.wanted && !self.starved {
            self.stats.drawn += 1;
            let Some(f) = sampler.sample::<T>(&mut self.rng, self.size) else {
                self.starved = true;
                break;
            };
            let text = f.to_wire();
            let outcome = if self.seen.insert(text.clone()) {
                solve(&f)
            } else {
                self.stats.duplicates += 1;
                Outcome::Rejected
            };
            match outcome {
                Outcome::Record(answer) => {
                    self.out.push((text, answer));
                    self.misses = 0;
                }
                o => {
                    if !matches!(o, Outcome::Rejected) {
                        self.stats.count(&o);
                    }
                    self.misses += 1;
                    self.starved = self.misses >= budget;
                }
            }
        }
    }
}

/// Fills one bucket per size in `min..=max` with `count` records in total,
/// split evenly. The shortfall of starved buckets is handed to the others.
/// Output pairs are `(formula, answer)` sorted by formula text.
pub(crate) fn fill_buckets<T, F>(
    sampler: &Sampler,
    min: usize,
    max: usize,
    count: usize,
    seed: u64,
    budget: usize,
    solve: F,
) -> (Vec<(String, String)>, GenStats)
where
    T: Tree,
    F: Fn(&T) -> Outcome<String> + Sync,
{
    let sizes: Vec<usize> = (min..=max).collect();
    let n = sizes.len();
    let mut buckets: Vec<Bucket> = sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            // the remainder goes to the largest sizes, which rarely starve
            let quota = count / n + usize::from(i >= n - count % n);
            Bucket {
                size,
                quota,
                wanted: quota,
                rng: stream(seed, size as u64),
                seen: HashSet::new(),
                out: Vec::new(),
                misses: 0,
                starved: false,
                stats: GenStats::default(),
            }
        })
        .collect();

    loop {
        buckets.par_iter_mut().for_each(|b| b.run(sampler, &solve, budget));
        let mut shortfall = 0;
        for b in buckets.iter_mut().filter(|b| b.starved) {
            shortfall += b.wanted - b.out.len();
            b.wanted = b.out.len();
        }
        let open: Vec<usize> = (0..n).filter(|&i| !buckets[i].starved).collect();
        if shortfall == 0 || open.is_empty() {
            break;
        }
        for (k, &i) in open.iter().enumerate() {
            buckets[i].wanted += shortfall / open.len() + usize::from(k >= open.len() - shortfall % open.len());
        }
    }

    let mut stats = GenStats { requested: count, ..GenStats::default() };
    let mut out = Vec::with_capacity(count);
    for b in buckets {
        stats.merge(&b.stats);
        if b.starved {
            stats.starved.push(Starvation { bucket: Some(b.size), produced: b.out.len(), wanted: b.quota });
        }
        out.extend(b.out);
    }
    out.sort_unstable();
    stats.emitted = out.len();
    (out, stats)
}

/// Runs numbered attempts in parallel batches and keeps the first `count`
/// records with distinct keys, in slot order. Gives up after `budget`
/// consecutive attempts without a new record.
pub(crate) fn fill_slots<I, K, A>(count: usize, seed: u64, budget: usize, key: K, attempt: A) -> (Vec<I>, GenStats)
where
    I: Send,
    K: Fn(&I) -> String,
    A: Fn(&mut ChaCha8Rng) -> Outcome<I> + Sync,
{
    let mut stats = GenStats { requested: count, ..GenStats::default() };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut next = 0u64;
    let mut misses = 0;
    'outer: while out.len() < count && misses < budget {
        // the kept records depend only on slot order, not on the batch size
        let batch = (count - out.len()).max(rayon::current_num_threads()).min(4096) as u64;
        let results: Vec<Outcome<I>> =
            (next..next + batch).into_par_iter().map(|id| attempt(&mut stream(seed, id))).collect();
        next += batch;
        for r in results {
            if out.len() >= count || misses >= budget {
                break 'outer;
            }
            stats.drawn += 1;
            match r {
                Outcome::Record(item) => {
                    if seen.insert(key(&item)) {
                        out.push(item);
                        misses = 0;
                    } else {
                        stats.duplicates += 1;
                        misses += 1;
                    }
                }
                o => {
                    stats.count(&o);
                    misses += 1;
                }
            }
        }
    }
    if out.len() < count {
        stats.starved.push(Starvation { bucket: None, produced: out.len(), wanted: count });
    }
    stats.emitted = out.len();
    (out, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::NodeWeights;
    use crate::formula::{Ltl, Supply};
    use rand::Rng;

    #[test]
    fn starved_quota_moves_to_open_buckets() {
        let s = Sampler::new::<Ltl>(&NodeWeights::ltl(), Supply::first(2).unwrap()).unwrap();
        let (out, stats) = fill_buckets::<Ltl, _>(&s, 1, 3, 30, 0, 200, |_| Outcome::Record(String::new()));
        assert_eq!(out.len(), 30);
        // size 1 holds a, b, 1, 0 and size 2 their images under ! and X
        assert_eq!(
            stats.starved,
            vec![
                Starvation { bucket: Some(1), produced: 4, wanted: 10 },
                Starvation { bucket: Some(2), produced: 8, wanted: 10 }
            ]
        );
        assert_eq!(out.iter().filter(|(f, _)| Ltl::parse(f).unwrap().size() == 3).count(), 18);
        assert_eq!(stats.emitted, 30);
    }

    #[test]
    fn slots_are_thread_count_independent() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                fill_slots(500, 9, 100, |x: &u32| x.to_string(), |rng| Outcome::Record(rng.gen_range(0..2000u32)))
            })
        };
        let (a, sa) = run(1);
        let (b, sb) = run(3);
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert_eq!(a.len(), 500);
    }

    #[test]
    fn slots_report_exhaustion() {
        let (out, stats) = fill_slots(10, 0, 50, |x: &u32| x.to_string(), |_| Outcome::<u32>::Timeout);
        assert!(out.is_empty());
        assert_eq!(stats.timeouts, 50);
        assert_eq!(stats.starved.len(), 1);
    }
}
