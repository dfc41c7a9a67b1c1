use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::formula::{Prop, Var};
use crate::sat::{derive_partial_assignment, Lit, Solver};

use super::engine::{fill_slots, GenStats, Outcome};
use super::{ConfigError, DatasetRecord, GenConfig, RecordMeta, Task};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnfParams {
    pub p_geo: f64,
    pub p_k2: f64,
    pub min_vars: usize,
    pub max_vars: usize,
}

impl Default for CnfParams {
    fn default() -> CnfParams {
        CnfParams { p_geo: 0.9, p_k2: 0.75, min_vars: 1, max_vars: 15 }
    }
}

impl CnfParams {
    fn validate(&self, cfg: &GenConfig) -> Result<(), ConfigError> {
        if !(self.p_geo > 0.0 && self.p_geo <= 1.0) || !(0.0..=1.0).contains(&self.p_k2) {
            return Err(ConfigError::new("p_geo must be in (0, 1] and p_k2 in [0, 1]"));
        }
        if self.min_vars == 0 || self.min_vars > self.max_vars {
            return Err(ConfigError::new(format!(
                "variable bounds {}..={} are empty or start at zero",
                self.min_vars, self.max_vars
            )));
        }
        if self.max_vars > cfg.supply.len() {
            return Err(ConfigError::new(format!(
                "max_vars {} exceeds the supply of {} propositions",
                self.max_vars,
                cfg.supply.len()
            )));
        }
        Ok(())
    }

    /// Clause length: 1, plus one with probability `1 - p_k2`, plus a
    /// geometric number of trials (at least one) with success `p_geo`.
    pub fn clause_len(&self, rng: &mut impl Rng) -> usize {
        let base = if rng.gen_bool(self.p_k2) { 1 } else { 2 };
        let mut g = 1;
        while !rng.gen_bool(self.p_geo) {
            g += 1;
        }
        base + g
    }

    /// Probability that [`CnfParams::clause_len`] returns `k`.
    pub fn clause_len_probability(&self, k: usize) -> f64 {
        let geo = |g: usize| if g == 0 { 0.0 } else { (1.0 - self.p_geo).powi(g as i32 - 1) * self.p_geo };
        self.p_k2 * geo(k.saturating_sub(1)) + (1.0 - self.p_k2) * geo(k.saturating_sub(2))
    }
}

/// A clause over solver variables `0..n`: `min(n, k)` distinct variables,
/// each with a random sign.
fn random_clause(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Lit> {
    sample(rng, n, k.min(n)).iter().map(|v| Lit::new(v as u32, rng.gen_bool(0.5))).collect()
}

/// Conjunction of disjunctions, both nested to the left.
fn clauses_to_prop(clauses: &[Vec<Lit>], vars: &[Var]) -> Prop {
    Prop::conjunction(
        clauses
            .iter()
            .map(|c| Prop::disjunction(c.iter().map(|l| Prop::literal(vars[l.var() as usize], l.is_positive())))),
    )
}

fn random_cnf(rng: &mut impl Rng, params: &CnfParams, vars: &[Var]) -> Prop {
    let n = rng.gen_range(params.min_vars..=params.max_vars);
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    loop {
        let k = params.clause_len(rng);
        let c = random_clause(rng, n, k);
        clauses.push(c);
        if !Solver::from_clauses(n as u32, &clauses).solve(&[]).is_sat() {
            clauses.pop();
            break;
        }
    }
    clauses_to_prop(&clauses, vars)
}

/// Random CNF formulas grown clause by clause until the next clause would
/// make them unsatisfiable, paired with a minimal partial assignment.
/// Formulas over the size cap are dropped.
pub fn gen_cnf_dataset(cfg: &GenConfig, params: CnfParams) -> Result<(Vec<DatasetRecord>, GenStats), ConfigError> {
    cfg.validate()?;
    params.validate(cfg)?;
    let vars: Vec<Var> = cfg.supply.vars().collect();
    let (found, stats) = fill_slots(
        cfg.count,
        cfg.seed,
        cfg.retry_budget,
        |r: &(String, String, usize)| r.0.clone(),
        |rng| {
            let f = random_cnf(rng, &params, &vars);
            if f.size() > cfg.max_size {
                return Outcome::Rejected;
            }
            let a = derive_partial_assignment(&f).expect("clauses were kept satisfiable");
            Outcome::Record((f.to_polish(), a.to_string(), f.size()))
        },
    );
    stats.log_starvation("gen-cnf");
    let records = found
        .into_iter()
        .map(|(formula, answer, size)| DatasetRecord {
            task: Task::PropAssignment,
            formula,
            answer: Some(answer),
            meta: RecordMeta { size, seed: Some(cfg.seed), termination: None },
        })
        .collect();
    Ok((records, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Supply;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn length_law_sums_to_one() {
        let p = CnfParams::default();
        let total: f64 = (0..200).map(|k| p.clause_len_probability(k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(p.clause_len_probability(1), 0.0);
        assert!((p.clause_len_probability(2) - 0.75 * 0.9).abs() < 1e-12);
    }

    #[test]
    fn single_variable_cnfs() {
        let cfg = GenConfig { count: 5, retry_budget: 500, ..GenConfig::cnf() };
        let params = CnfParams { min_vars: 1, max_vars: 1, ..CnfParams::default() };
        let (recs, _) = gen_cnf_dataset(&cfg, params).unwrap();
        assert_eq!(recs.len(), 5);
        // only the unit clauses `a` and `!a` exist, so every formula repeats one of them
        for r in &recs {
            let f = Prop::parse(&r.formula).unwrap();
            assert_eq!(f.vars().to_string(), "a");
            let want = if r.formula.ends_with("!a") { "a0" } else { "a1" };
            assert_eq!(r.answer.as_deref(), Some(want), "{}", r.formula);
        }
    }

    #[test]
    fn clause_variables_are_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let c = random_clause(&mut rng, 5, 4);
            let mut vs: Vec<u32> = c.iter().map(|l| l.var()).collect();
            vs.sort();
            vs.dedup();
            assert_eq!(vs.len(), 4);
        }
        assert_eq!(random_clause(&mut rng, 2, 7).len(), 2);
    }

    #[test]
    fn rejects_supply_smaller_than_max_vars() {
        let cfg = GenConfig { supply: Supply::first(3).unwrap(), ..GenConfig::cnf() };
        assert!(gen_cnf_dataset(&cfg, CnfParams::default()).is_err());
    }
}
