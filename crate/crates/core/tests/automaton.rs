mod common;

use common::*;
use ltltrace::automaton::{check_containment, is_satisfiable, ltl_to_nba, solve, Deadline, Verdict};
use ltltrace::eval::eval_concrete;
use ltltrace::formula::Ltl;
use ltltrace::trace::parse_trace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn nba_membership_matches_evaluation_exhaustively() {
    let lassos = all_lassos(2, 2, 2);
    for size in 1..=4 {
        for phi in enumerate_formulas(size, 2, Ops::Full) {
            let nba = ltl_to_nba(&phi);
            for t in &lassos {
                let expected = eval_concrete(&phi, t).unwrap();
                assert_eq!(nba.accepts(t), expected, "{} on {t}", phi.to_polish());
            }
        }
    }
}

#[test]
fn nba_membership_matches_naive_semantics_on_random_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lassos = all_lassos(2, 2, 2);
    for _ in 0..300 {
        let size = rand::Rng::gen_range(&mut rng, 5..=7);
        let phi = random_ltl(&mut rng, size, 2, Ops::Full);
        let nba = ltl_to_nba(&phi);
        for t in &lassos {
            assert_eq!(nba.accepts(t), naive_eval(&phi, t), "{} on {t}", phi.to_polish());
        }
    }
}

#[test]
fn containment_of_concrete_traces_is_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let lassos = all_lassos(1, 2, 2);
    for _ in 0..150 {
        let size = rand::Rng::gen_range(&mut rng, 1..=7);
        let phi = random_ltl(&mut rng, size, 2, Ops::Full);
        for t in &lassos {
            let verdict = check_containment(&t.to_symbolic(), &phi);
            assert_eq!(verdict.holds(), eval_concrete(&phi, t).unwrap(), "{} on {t}", phi.to_polish());
        }
    }
}

#[test]
fn satisfiability_matches_small_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lassos = all_lassos(3, 3, 2);
    for _ in 0..1000 {
        let size = rand::Rng::gen_range(&mut rng, 1..=7);
        let phi = random_ltl(&mut rng, size, 2, Ops::Full);
        let small_model = lassos.iter().any(|t| eval_concrete(&phi, t).unwrap());
        assert_eq!(is_satisfiable(&phi), small_model, "{}", phi.to_polish());
    }
}

#[test]
fn solved_traces_hold_and_witnesses_are_genuine() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let size = rand::Rng::gen_range(&mut rng, 1..=20);
        let phi = random_ltl(&mut rng, size, 5, Ops::Full);
        let Some(t) = solve(&phi, &Deadline::none()).unwrap() else {
            assert!(!is_satisfiable(&phi));
            continue;
        };
        assert_eq!(check_containment(&t, &phi), Verdict::Holds, "{} -> {t}", phi.to_polish());
        let neg = Ltl::not(phi.clone());
        match check_containment(&t, &neg) {
            Verdict::Holds => panic!("trace {t} satisfies both {phi} and its negation"),
            Verdict::Violated(w) => {
                assert!(eval_concrete(&phi, &w).unwrap());
                assert!(word_in_trace(&w, &t));
            }
        }
    }
}

#[test]
fn violation_witnesses_fail_the_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    for _ in 0..600 {
        let size = rand::Rng::gen_range(&mut rng, 1..=7);
        let phi = random_ltl(&mut rng, size, 2, Ops::Full);
        let t = random_symbolic(&mut rng, 2, 2, 2);
        if let Verdict::Violated(w) = check_containment(&t, &phi) {
            violations += 1;
            assert!(!eval_concrete(&phi, &w).unwrap(), "{} {t} {w}", phi.to_polish());
            assert!(word_in_trace(&w, &t), "{w} not in {t}");
        }
    }
    assert!(violations > 100);
}

#[test]
fn fixture_traces() {
    let holds = [
        ("XXGa", "1;1;{a}"),
        ("&UabUa!b", "&a!b;b;{1}"),
        ("&UbaUa!a", "&!ab;a;{1}"),
        ("&UbaUa!a", "a;!a;{1}"),
        ("&XUUdcXXdX&b!U!dc", "1;&&b!c!d;&!cd;d;{1}"),
        ("!XU&&XeU1bXcc", "1;&!b!c;{!b}"),
        ("X!U&!cdXd", "1;|c!d;!d;{1}"),
        ("&&G>aFdW!fWfW!fWfG!f>FcU!c&cW!bWbW!bWbG!b", "{|&&!a!c!f&&!cd!f}"),
        (
            "&&&&&&&G>&&b!aFaUcaG>aGc>FbU!b&bW!fWfW!fWfG!f>FaU>&cXU!aeXU!a&eFfaFcG>&aFeU!&&!efXU!e&!ed|ec|G!aF&aW!fdG>eG!c",
            "&&&&!ab!c!ef;&&&!a!c!e!f;&&&!a!c!ef;&&&!ac!e!f;{&&!a!e!f}",
        ),
    ];
    for (f, t) in holds {
        let phi = Ltl::parse(f).unwrap();
        assert!(check_containment(&parse_trace(t).unwrap(), &phi).holds(), "{f} {t}");
    }
    let phi = Ltl::parse("&&&Ua&bcUa&!bcUa&b!cUa&!b!c").unwrap();
    assert!(!check_containment(&parse_trace("&&abc;&&a!b!c;&bc;{1}").unwrap(), &phi).holds());
}
