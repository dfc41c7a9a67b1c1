use super::{Lit, SatError, SolveResult, Solver};

/// Deletion-based shrinking of an assumption set that `solver` reports
/// unsatisfiable. Each removal that keeps the set unsatisfiable also drops
/// everything outside the returned failed-assumption subset.
///
/// The result is unsatisfiable and removing any one literal makes it
/// satisfiable. Relative order of `set` is kept.
pub fn shrink_assumptions(solver: &mut Solver, mut set: Vec<Lit>) -> Vec<Lit> {
    let mut i = 0;
    while i < set.len() {
        let trial: Vec<Lit> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &l)| l).collect();
        match solver.solve(&trial) {
            SolveResult::Unsat(core) => {
                // literals before `i` were needed by a superset, so they survive
                set = trial.into_iter().filter(|l| core.contains(l)).collect();
            }
            SolveResult::Sat(_) => i += 1,
        }
    }
    set
}

/// Indices of a deletion-minimal unsatisfiable subset of `clauses`.
pub fn minimal_unsat_core_indices(clauses: &[Vec<Lit>]) -> Result<Vec<usize>, SatError> {
    let num_vars = clauses.iter().flatten().map(|l| l.var() + 1).max().unwrap_or(0);
    let selectors: Vec<Lit> = (0..clauses.len() as u32).map(|i| Lit::new(num_vars + i, true)).collect();
    let guarded: Vec<Vec<Lit>> =
        clauses.iter().zip(&selectors).map(|(c, &s)| c.iter().copied().chain([!s]).collect()).collect();
    let mut solver = Solver::from_clauses(num_vars + clauses.len() as u32, &guarded);
    let core = match solver.solve(&selectors) {
        SolveResult::Sat(_) => return Err(SatError::Satisfiable),
        SolveResult::Unsat(core) => core,
    };
    let initial: Vec<Lit> = selectors.iter().copied().filter(|s| core.contains(s)).collect();
    let minimal = shrink_assumptions(&mut solver, initial);
    Ok(minimal.into_iter().map(|s| (s.var() - num_vars) as usize).collect())
}

/// A deletion-minimal unsatisfiable subset of `clauses`, in input order.
pub fn minimal_unsat_core(clauses: &[Vec<Lit>]) -> Result<Vec<Vec<Lit>>, SatError> {
    Ok(minimal_unsat_core_indices(clauses)?.into_iter().map(|i| clauses[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lit(x: i32) -> Lit {
        Lit::new(x.unsigned_abs() - 1, x > 0)
    }

    fn clauses(cs: &[&[i32]]) -> Vec<Vec<Lit>> {
        cs.iter().map(|c| c.iter().map(|&x| lit(x)).collect()).collect()
    }

    fn sat_by_enumeration(cs: &[Vec<Lit>]) -> bool {
        let n = cs.iter().flatten().map(|l| l.var() + 1).max().unwrap_or(0);
        (0u32..1 << n).any(|bits| cs.iter().all(|c| c.iter().any(|l| (bits >> l.var() & 1 == 1) == l.is_positive())))
    }

    #[test]
    fn unique_core() {
        let cs = clauses(&[&[1], &[-1], &[2]]);
        assert_eq!(minimal_unsat_core(&cs).unwrap(), clauses(&[&[1], &[-1]]));
    }

    #[test]
    fn core_found_by_subset_enumeration() {
        let cs = clauses(&[&[1, 2], &[-1], &[-2], &[3]]);
        // enumerate all subsets: the only minimal unsatisfiable one is {0,1,2}
        let mut minimal = Vec::new();
        for mask in 1u32..16 {
            let sub: Vec<Vec<Lit>> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| cs[i].clone()).collect();
            if !sat_by_enumeration(&sub) {
                let all_proper_sat = (0..sub.len()).all(|k| {
                    let mut s = sub.clone();
                    s.remove(k);
                    sat_by_enumeration(&s)
                });
                if all_proper_sat {
                    minimal.push(sub);
                }
            }
        }
        assert_eq!(minimal, vec![clauses(&[&[1, 2], &[-1], &[-2]])]);
        assert_eq!(minimal_unsat_core(&cs).unwrap(), minimal[0]);
    }

    #[test]
    fn satisfiable_input_is_an_error() {
        assert_eq!(minimal_unsat_core(&clauses(&[&[1, 2]])), Err(SatError::Satisfiable));
    }

    #[test]
    fn random_cores_are_deletion_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 150 {
            let n = rng.gen_range(1..=10u32);
            let m = rng.gen_range(1..=(6 * n as usize));
            let cs: Vec<Vec<Lit>> = (0..m)
                .map(|_| {
                    let k = rng.gen_range(1..=3);
                    (0..k).map(|_| Lit::new(rng.gen_range(0..n), rng.gen_bool(0.5))).collect()
                })
                .collect();
            if sat_by_enumeration(&cs) {
                continue;
            }
            checked += 1;
            let core = minimal_unsat_core(&cs).unwrap();
            assert!(!sat_by_enumeration(&core));
            for k in 0..core.len() {
                let mut fewer = core.clone();
                fewer.remove(k);
                assert!(sat_by_enumeration(&fewer), "clause {k} of core is redundant");
            }
        }
    }
}
