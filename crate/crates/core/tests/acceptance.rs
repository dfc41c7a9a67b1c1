//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ltltrace::automaton::{check_containment, ContainmentChecker};
use ltltrace::datagen::{
    gen_cnf_dataset, gen_pattern_conjunctions, gen_random_ltl, gen_random_prop, gen_unsolved_patterns, write_dataset,
    CnfParams, DatasetRecord, GenConfig, PatternCatalog, PatternParams, Task,
};
use ltltrace::eval::eval_concrete;
use ltltrace::formula::{Ltl, Prop, Supply};
use ltltrace::harness::{audit_references, evaluate, read_predictions, BeamMode, Counts};
use ltltrace::sat::{check_partial_assignment, Lit, PartialAssignment, SolveResult, Solver};
use ltltrace::trace::{parse_trace, SymbolicTrace};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bytes(records: &[DatasetRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    write_dataset(&mut out, records).unwrap();
    out
}

fn ltl_generator_soundness() -> Outcome {
    let cfg = GenConfig { count: 10_000, seed: 11, ..GenConfig::random_ltl() };
    let (records, _) = gen_random_ltl(&cfg).map_err(|e| e.to_string())?;
    ensure(records.len() == 10_000, || format!("generated {} records", records.len()))?;
    let failures: Vec<String> = records
        .par_iter()
        .filter_map(|r| {
            let phi = Ltl::parse(&r.formula).ok()?;
            let holds = r
                .answer
                .as_deref()
                .and_then(|a| SymbolicTrace::parse(a).ok())
                .is_some_and(|t| ContainmentChecker::new(&phi).check(&t).holds());
            (!holds).then(|| r.to_line())
        })
        .collect();
    ensure(failures.is_empty(), || format!("{} traces fail, first: {}", failures.len(), failures[0]))?;
    Ok("10000/10000 reference traces hold".into())
}

/// Holds iff every concretization satisfies `phi`, with the period unrolled
/// into the prefix up to twice and the loop made of one or two period copies.
fn concretization_oracle(phi: &Ltl, t: &SymbolicTrace, supply: Supply, rng: &mut ChaCha8Rng) -> bool {
    for unroll in 1..=3 {
        for copies in 1..=2 {
            for w in concretizations(t, supply, unroll, copies, 4096, rng) {
                if !eval_concrete(phi, &w).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

fn oracle_equivalence() -> Outcome {
    let mut formulas: Vec<Ltl> = (1..=7).flat_map(|s| enumerate_formulas(s, 2, Ops::Core)).collect();
    formulas.extend((1..=5).flat_map(|s| enumerate_formulas(s, 2, Ops::Full)));
    let supply = Supply::first(2).unwrap();
    let verdicts: Vec<(bool, bool, String)> = formulas
        .par_iter()
        .enumerate()
        .map(|(i, phi)| {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let t = random_symbolic(&mut rng, 2, 2, 2);
            let checker = check_containment(&t, phi).holds();
            let oracle = concretization_oracle(phi, &t, supply, &mut rng);
            (checker, oracle, format!("{} on {t}", phi.to_polish()))
        })
        .collect();
    ensure(verdicts.len() >= 50_000, || format!("only {} pairs", verdicts.len()))?;
    let disagreements: Vec<&(bool, bool, String)> = verdicts.iter().filter(|(c, o, _)| c != o).collect();
    ensure(disagreements.is_empty(), || {
        let (c, o, pair) = disagreements[0];
        format!("{} disagreements, first: {pair} (checker {c}, oracle {o})", disagreements.len())
    })?;
    let holds = verdicts.iter().filter(|(c, _, _)| *c).count();
    Ok(format!("{} pairs agree ({holds} hold, {} violated)", verdicts.len(), verdicts.len() - holds))
}

fn fixtures() -> Outcome {
    let start = Instant::now();
    let ltl = [
        ("XXGa", "1;1;{a}", true),
        ("&&G>aFdW!fWfW!fWfG!f>FcU!c&cW!bWbW!bWbG!b", "{|&&!a!c!f&&!cd!f}", true),
        (
            "&&&&&&&G>&&b!aFaUcaG>aGc>FbU!b&bW!fWfW!fWfG!f>FaU>&cXU!aeXU!a&eFfaFcG>&aFeU!&&!efXU!e&!ed|ec|G!aF&aW!fdG>eG!c",
            "&&&&!ab!c!ef;&&&!a!c!e!f;&&&!a!c!ef;&&&!ac!e!f;{&&!a!e!f}",
            true,
        ),
        ("&UabUa!b", "&a!b;b;{1}", true),
        ("&&&Ua&bcUa&!bcUa&b!cUa&!b!c", "&&abc;&&a!b!c;&bc;{1}", false),
        ("&UbaUa!a", "&!ab;a;{1}", true),
        ("&UbaUa!a", "a;!a;{1}", true),
        ("&XUUdcXXdX&b!U!dc", "1;&&b!c!d;&!cd;d;{1}", true),
        ("!XU&&XeU1bXcc", "1;&!b!c;{!b}", true),
        ("X!U&!cdXd", "1;|c!d;!d;{1}", true),
    ];
    for (f, t, expected) in ltl {
        let phi = Ltl::parse(f).map_err(|e| format!("{f}: {e}"))?;
        let trace = parse_trace(t).map_err(|e| format!("{t}: {e}"))?;
        let got = check_containment(&trace, &phi).holds();
        ensure(got == expected, || format!("{f} vs {t}: expected holds={expected}"))?;
    }
    let prop = [
        ("<->&&d!e|!a!e|xor!b<->!b!exorxore&bd!|!c<->!ae", "a0b0c1d1e0"),
        ("||ce<->!a!b", "c1"),
        ("!xor|be||!a<->!d!e!|!b&&&!ab!b!d", "d1e1"),
        ("|b!&ad", "a0"),
        ("|b!&ad", "d0"),
    ];
    for (f, a) in prop {
        let phi = Prop::parse(f).map_err(|e| format!("{f}: {e}"))?;
        let assignment: PartialAssignment = a.parse().map_err(|e| format!("{a}: {e}"))?;
        ensure(check_partial_assignment(&phi, &assignment) == Ok(true), || format!("{f} vs {a} fails"))?;
    }
    let ms = start.elapsed().as_millis();
    ensure(ms < 1000, || format!("took {ms} ms"))?;
    Ok(format!("{} LTL and {} propositional fixtures in {ms} ms", ltl.len(), prop.len()))
}

fn sound_and_minimal(f: &Prop, a: &PartialAssignment) -> bool {
    check_partial_assignment(f, a) == Ok(true)
        && a.iter().all(|(v, _)| {
            let mut smaller = a.clone();
            smaller.remove(v);
            check_partial_assignment(f, &smaller) == Ok(false)
        })
}

fn brute_force_sat(n: u32, clauses: &[Vec<Lit>]) -> bool {
    (0u32..1 << n).any(|m| clauses.iter().all(|c| c.iter().any(|l| (m >> l.var() & 1 == 1) == l.is_positive())))
}

fn sat_pipeline() -> Outcome {
    let cfg = GenConfig { count: 10_000, seed: 12, ..GenConfig::random_prop() };
    let (records, _) = gen_random_prop(&cfg).map_err(|e| e.to_string())?;
    ensure(records.len() == 10_000, || format!("generated {} records", records.len()))?;
    let bad: Vec<String> = records
        .par_iter()
        .filter_map(|r| {
            let f = Prop::parse(&r.formula).ok()?;
            let a = r.answer.as_deref()?.parse::<PartialAssignment>().ok()?;
            (!sound_and_minimal(&f, &a)).then(|| r.to_line())
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} assignments not sound and minimal, first: {}", bad.len(), bad[0]))?;

    let outcomes: Vec<(bool, bool)> = (0..5000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let n = rng.gen_range(1..=12u32);
            let m = rng.gen_range(1..=(5 * n as usize));
            let clauses: Vec<Vec<Lit>> = (0..m)
                .map(|_| (0..rng.gen_range(1..=3)).map(|_| Lit::new(rng.gen_range(0..n), rng.gen_bool(0.5))).collect())
                .collect();
            let expected = brute_force_sat(n, &clauses);
            let agrees = match Solver::from_clauses(n, &clauses).solve(&[]) {
                SolveResult::Sat(model) => {
                    expected && clauses.iter().all(|c| c.iter().any(|l| model[l.var() as usize] == l.is_positive()))
                }
                SolveResult::Unsat(_) => !expected,
            };
            (expected, agrees)
        })
        .collect();
    let mismatches = outcomes.iter().filter(|(_, ok)| !ok).count();
    ensure(mismatches == 0, || format!("{mismatches} of 5000 CNFs disagree with enumeration"))?;
    let sat = outcomes.iter().filter(|(e, _)| *e).count();
    Ok(format!("10000 assignments sound and minimal; 5000 CNFs match enumeration ({sat} sat, {} unsat)", 5000 - sat))
}

fn distribution_shaping() -> Outcome {
    let cfg = GenConfig { count: 100_000, seed: 13, ..GenConfig::random_ltl() };
    let (records, stats) = gen_random_ltl(&cfg).map_err(|e| e.to_string())?;
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &records {
        *sizes.entry(r.meta.size).or_default() += 1;
    }
    let band: Vec<usize> = (10..=35).map(|s| sizes.get(&s).copied().unwrap_or(0)).collect();
    let mean = band.iter().sum::<usize>() as f64 / band.len() as f64;
    let (lo, hi) = (*band.iter().min().unwrap(), *band.iter().max().unwrap());
    ensure(lo as f64 >= 0.8 * mean && hi as f64 <= 1.2 * mean, || {
        format!("sizes 10-35 span {lo}..{hi} around {mean:.0}")
    })?;
    let rate = stats.too_long_rate();
    ensure(rate < 0.01, || format!("trace-length filter dropped {:.3}%", 100.0 * rate))?;
    Ok(format!("sizes 10-35 span {lo}..{hi} around {mean:.0}; length filter dropped {:.3}%", 100.0 * rate))
}

fn determinism() -> Outcome {
    let mut checked = Vec::new();
    let mut same = |name: &str, run: &dyn Fn() -> Vec<u8>| -> Result<(), String> {
        let (a, b) = (run(), run());
        ensure(!a.is_empty() || name == "eval", || format!("{name} produced nothing"))?;
        ensure(a == b, || format!("{name} differs between runs"))?;
        checked.push(name.to_string());
        Ok(())
    };
    same("gen-random-ltl", &|| {
        bytes(&gen_random_ltl(&GenConfig { count: 2000, seed: 7, ..GenConfig::random_ltl() }).unwrap().0)
    })?;
    same("gen-prop", &|| {
        bytes(&gen_random_prop(&GenConfig { count: 2000, seed: 7, ..GenConfig::random_prop() }).unwrap().0)
    })?;
    same("gen-cnf", &|| {
        bytes(&gen_cnf_dataset(&GenConfig { count: 300, seed: 7, ..GenConfig::cnf() }, CnfParams::default()).unwrap().0)
    })?;
    let dac = PatternCatalog::builtin("dac").unwrap();
    same("gen-pattern", &|| {
        let cfg = GenConfig { count: 40, seed: 7, timeout_ms: 0, step_budget: 20_000, ..GenConfig::patterns() };
        bytes(&gen_pattern_conjunctions(&dac, &cfg, PatternParams { max_conjuncts: 4 }).unwrap().0)
    })?;
    same("gen-unsolved", &|| {
        let cfg = GenConfig { count: 10, seed: 7, timeout_ms: 0, step_budget: 300, ..GenConfig::unsolved() };
        bytes(&gen_unsolved_patterns(&dac, &cfg).unwrap().0)
    })?;
    let records = gen_random_ltl(&GenConfig { count: 500, seed: 8, ..GenConfig::random_ltl() }).unwrap().0;
    let predictions: String = records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let answer = r.answer.clone().unwrap_or_default();
            let prediction = if i % 3 == 0 { "{1}".to_string() } else { answer.clone() };
            format!("{}\t{prediction}\t{answer}\n", r.formula)
        })
        .collect();
    same("eval", &|| {
        let file = read_predictions(predictions.as_bytes(), Task::LtlTrace).unwrap();
        evaluate(&file, 5, BeamMode::Rank1).to_json().into_bytes()
    })?;
    Ok(format!("byte-identical reruns: {}", checked.join(", ")))
}

fn evaluation_protocol() -> Outcome {
    let file = "&UabUa!b\t&a!b;b;{1}\t&a!b;b;{1}\n\
                &UbaUa!a\ta;!a;{1}\t&!ab;a;{1}\n\
                &&&Ua&bcUa&!bcUa&b!cUa&!b!c\t&&abc;&&a!b!c;&bc;{1}\n\
                Fa\t;;{\t{a}\n";
    let preds = read_predictions(file.as_bytes(), Task::LtlTrace).unwrap();
    let report = evaluate(&preds, 1, BeamMode::Rank1);
    let expected = Counts { syntactic: 1, semantic_only: 1, incorrect: 1, invalid: 1 };
    ensure(report.totals == expected, || format!("counts {:?}", report.totals))?;
    let first_three = file.lines().take(3).collect::<Vec<_>>().join("\n");
    let three = evaluate(&read_predictions(first_three.as_bytes(), Task::LtlTrace).unwrap(), 1, BeamMode::Rank1);
    ensure(three.totals == Counts { invalid: 0, ..expected }, || format!("fixture counts {:?}", three.totals))?;

    let records = gen_random_ltl(&GenConfig { count: 10_000, seed: 14, ..GenConfig::random_ltl() }).unwrap().0;
    let failing = audit_references(&records);
    ensure(failing.is_empty(), || format!("{} references fail their checker, first: {}", failing.len(), failing[0]))?;
    Ok("fixture counts (1,1,1,0) plus one invalid; audit clean on 10000 records".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("generator soundness (LTL)", ltl_generator_soundness),
        ("oracle equivalence", oracle_equivalence),
        ("fixtures", fixtures),
        ("SAT pipeline soundness", sat_pipeline),
        ("distribution shaping", distribution_shaping),
        ("determinism", determinism),
        ("evaluation protocol", evaluation_protocol),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} ({secs:.1} s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
