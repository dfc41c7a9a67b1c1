use crate::automaton::solve;
use crate::formula::{Ltl, Prop};
use crate::sat::derive_partial_assignment;

use super::engine::{fill_buckets, GenStats, Outcome};
use super::sampler::Sampler;
use super::{ConfigError, DatasetRecord, GenConfig, RecordMeta, Task};

fn records(
    task: Task,
    cfg: &GenConfig,
    pairs: Vec<(String, String)>,
    size: impl Fn(&str) -> usize,
) -> Vec<DatasetRecord> {
    pairs
        .into_iter()
        .map(|(formula, answer)| DatasetRecord {
            task,
            meta: RecordMeta { size: size(&formula), seed: Some(cfg.seed), termination: None },
            formula,
            answer: Some(answer),
        })
        .collect()
}

/// Unique random LTL formulas, evenly spread over the configured sizes,
/// each paired with a trace from its automaton.
pub fn gen_random_ltl(cfg: &GenConfig) -> Result<(Vec<DatasetRecord>, GenStats), ConfigError> {
    cfg.validate()?;
    let sampler = Sampler::new::<Ltl>(&cfg.weights, cfg.supply)?;
    let (pairs, stats) =
        fill_buckets::<Ltl, _>(&sampler, cfg.min_size, cfg.max_size, cfg.count, cfg.seed, cfg.retry_budget, |f| {
            match solve(f, &cfg.deadline()) {
                Err(_) => Outcome::Timeout,
                Ok(None) => Outcome::Unsatisfiable,
                Ok(Some(t)) if t.token_len() > cfg.max_trace_tokens => Outcome::TooLong,
                Ok(Some(t)) => Outcome::Record(t.to_string()),
            }
        });
    stats.log_starvation("gen-random-ltl");
    let size = |f: &str| Ltl::parse(f).expect("generated formula").size();
    Ok((records(Task::LtlTrace, cfg, pairs, size), stats))
}

/// Unique random propositional formulas, evenly spread over the configured
/// sizes, each paired with a minimal satisfying partial assignment.
pub fn gen_random_prop(cfg: &GenConfig) -> Result<(Vec<DatasetRecord>, GenStats), ConfigError> {
    cfg.validate()?;
    let sampler = Sampler::new::<Prop>(&cfg.weights, cfg.supply)?;
    let (pairs, stats) =
        fill_buckets::<Prop, _>(&sampler, cfg.min_size, cfg.max_size, cfg.count, cfg.seed, cfg.retry_budget, |f| {
            match derive_partial_assignment(f) {
                Ok(a) => Outcome::Record(a.to_string()),
                Err(_) => Outcome::Unsatisfiable,
            }
        });
    stats.log_starvation("gen-prop");
    let size = |f: &str| Prop::parse(f).expect("generated formula").size();
    Ok((records(Task::PropAssignment, cfg, pairs, size), stats))
}
