use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::solve;
use crate::formula::{Ltl, ParseError, Supply, Var};
use crate::trace::SymbolicTrace;

use super::engine::{fill_slots, GenStats, Outcome};
use super::{ConfigError, DatasetRecord, GenConfig, RecordMeta, Task, Termination};

const DAC: &str = include_str!("../../data/patterns/dac.ltl");
const EH: &str = include_str!("../../data/patterns/eh.ltl");

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("cannot read pattern file: {0}")]
    Io(#[from] std::io::Error),
    #[error("pattern line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("pattern line {line} uses {used} propositions but the supply has {available}")]
    TooManyPlaceholders { line: usize, used: usize, available: usize },
    #[error("the pattern file contains no patterns")]
    Empty,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Specification patterns whose propositions are placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCatalog {
    patterns: Vec<Ltl>,
}

impl PatternCatalog {
    /// One pattern per line in the formula wire format. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<PatternCatalog, PatternError> {
        let mut patterns = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            patterns.push(Ltl::parse(line).map_err(|source| PatternError::Parse { line: i + 1, source })?);
        }
        if patterns.is_empty() {
            return Err(PatternError::Empty);
        }
        Ok(PatternCatalog { patterns })
    }

    pub fn load(path: &Path) -> Result<PatternCatalog, PatternError> {
        PatternCatalog::parse(&std::fs::read_to_string(path)?)
    }

    /// A catalog shipped with the crate: `dac` (55 patterns over up to six
    /// placeholders) or `eh` (11 patterns).
    pub fn builtin(name: &str) -> Option<PatternCatalog> {
        let text = match name {
            "dac" => DAC,
            "eh" => EH,
            _ => return None,
        };
        Some(PatternCatalog::parse(text).expect("bundled catalog parses"))
    }

    pub fn patterns(&self) -> &[Ltl] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    fn check_supply(&self, supply: Supply) -> Result<(), PatternError> {
        for (i, p) in self.patterns.iter().enumerate() {
            if p.vars().len() > supply.len() {
                return Err(PatternError::TooManyPlaceholders {
                    line: i + 1,
                    used: p.vars().len(),
                    available: supply.len(),
                });
            }
        }
        Ok(())
    }

    /// A random pattern with its placeholders mapped to distinct random
    /// propositions of `supply`.
    pub fn instantiate(&self, rng: &mut impl Rng, supply: Supply) -> Ltl {
        let p = &self.patterns[rng.gen_range(0..self.patterns.len())];
        let targets: Vec<Var> = supply.vars().collect();
        let holes: Vec<Var> = p.vars().vars().collect();
        let picked = sample(rng, targets.len(), holes.len());
        let map: BTreeMap<Var, Var> = holes.into_iter().zip(picked.iter().map(|i| targets[i])).collect();
        p.rename(&|v| map[&v])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternParams {
    pub max_conjuncts: usize,
}

impl Default for PatternParams {
    fn default() -> PatternParams {
        PatternParams { max_conjuncts: 8 }
    }
}

/// How many emitted conjunctions stopped for each reason.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationStats {
    pub size_cap: usize,
    pub conjunct_cap: usize,
    pub timeout: usize,
    pub unsatisfiable: usize,
}

impl TerminationStats {
    fn add(&mut self, t: Termination) {
        match t {
            Termination::SizeCap => self.size_cap += 1,
            Termination::ConjunctCap => self.conjunct_cap += 1,
            Termination::Timeout => self.timeout += 1,
            Termination::Unsatisfiable => self.unsatisfiable += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.size_cap + self.conjunct_cap + self.timeout + self.unsatisfiable
    }

    /// Percentages in the order size cap, conjunct cap, timeout,
    /// unsatisfiable.
    pub fn percentages(&self) -> [f64; 4] {
        let t = self.total().max(1) as f64;
        [self.size_cap, self.conjunct_cap, self.timeout, self.unsatisfiable].map(|c| 100.0 * c as f64 / t)
    }
}

fn conjoin(acc: Option<&Ltl>, p: Ltl) -> Ltl {
    match acc {
        Some(a) => Ltl::and(a.clone(), p),
        None => p,
    }
}

/// Grows one conjunction. Before each conjunct is accepted the stop
/// conditions are tested in order: size cap, conjunct cap, solver timeout,
/// unsatisfiability.
fn grow(
    catalog: &PatternCatalog,
    cfg: &GenConfig,
    params: PatternParams,
    rng: &mut ChaCha8Rng,
) -> Option<(Ltl, SymbolicTrace, Termination)> {
    let mut acc: Option<(Ltl, SymbolicTrace)> = None;
    let mut k = 0;
    let stop = loop {
        let candidate = conjoin(acc.as_ref().map(|a| &a.0), catalog.instantiate(rng, cfg.supply));
        if candidate.size() > cfg.max_size {
            break Termination::SizeCap;
        }
        if k + 1 > params.max_conjuncts {
            break Termination::ConjunctCap;
        }
        match solve(&candidate, &cfg.deadline()) {
            Err(_) => break Termination::Timeout,
            Ok(None) => break Termination::Unsatisfiable,
            Ok(Some(t)) => {
                acc = Some((candidate, t));
                k += 1;
            }
        }
    };
    acc.map(|(f, t)| (f, t, stop))
}

/// Conjunctions of randomly instantiated patterns with the trace of the
/// largest satisfiable prefix, tagged with the reason growth stopped.
pub fn gen_pattern_conjunctions(
    catalog: &PatternCatalog,
    cfg: &GenConfig,
    params: PatternParams,
) -> Result<(Vec<DatasetRecord>, GenStats, TerminationStats), PatternError> {
    cfg.validate()?;
    catalog.check_supply(cfg.supply)?;
    if params.max_conjuncts == 0 {
        return Err(ConfigError::new("max_conjuncts must be at least 1").into());
    }
    let (found, stats) = fill_slots(
        cfg.count,
        cfg.seed,
        cfg.retry_budget,
        |r: &(Ltl, SymbolicTrace, Termination)| r.0.to_polish(),
        |rng| match grow(catalog, cfg, params, rng) {
            None => Outcome::Rejected,
            Some(r) if r.1.token_len() > cfg.max_trace_tokens => Outcome::TooLong,
            Some(r) => Outcome::Record(r),
        },
    );
    stats.log_starvation("gen-pattern");
    let mut terminations = TerminationStats::default();
    let records = found
        .into_iter()
        .map(|(f, t, stop)| {
            terminations.add(stop);
            DatasetRecord {
                task: Task::LtlTrace,
                meta: RecordMeta { size: f.size(), seed: Some(cfg.seed), termination: Some(stop) },
                formula: f.to_polish(),
                answer: Some(t.to_string()),
            }
        })
        .collect();
    let [s, c, t, u] = terminations.percentages();
    log::info!("gen-pattern terminations: size {s:.1}%, conjuncts {c:.1}%, timeout {t:.1}%, unsat {u:.1}%");
    Ok((records, stats, terminations))
}

/// Grows a conjunction until the solver misses the deadline on it and
/// returns that conjunction. Gives up at the size cap or on an
/// unsatisfiable extension.
fn grow_unsolved(catalog: &PatternCatalog, cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Option<Ltl> {
    let mut acc: Option<Ltl> = None;
    loop {
        let candidate = conjoin(acc.as_ref(), catalog.instantiate(rng, cfg.supply));
        if candidate.size() > cfg.max_size {
            return None;
        }
        match solve(&candidate, &cfg.deadline()) {
            Err(_) => return Some(candidate),
            Ok(None) => return None,
            Ok(Some(_)) => acc = Some(candidate),
        }
    }
}

/// Pattern conjunctions on which the solver exceeds the deadline. Records
/// carry no answer.
pub fn gen_unsolved_patterns(
    catalog: &PatternCatalog,
    cfg: &GenConfig,
) -> Result<(Vec<DatasetRecord>, GenStats), PatternError> {
    cfg.validate()?;
    catalog.check_supply(cfg.supply)?;
    let (found, stats) = fill_slots(
        cfg.count,
        cfg.seed,
        cfg.retry_budget,
        |f: &Ltl| f.to_polish(),
        |rng| match grow_unsolved(catalog, cfg, rng) {
            Some(f) => Outcome::Record(f),
            None => Outcome::Rejected,
        },
    );
    let records = found
        .into_iter()
        .map(|f| DatasetRecord {
            task: Task::LtlTrace,
            meta: RecordMeta { size: f.size(), seed: Some(cfg.seed), termination: Some(Termination::Timeout) },
            formula: f.to_polish(),
            answer: None,
        })
        .collect();
    Ok((records, stats))
}
