//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use ltltrace::formula::{Ltl, Prop, Supply, Var};
use ltltrace::trace::{ConcreteTrace, SymbolicTrace};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn var(c: char) -> Var {
    Var::from_char(c).unwrap()
}

pub fn vars(n: usize) -> Vec<Var> {
    (0..n).map(|i| Var::from_index(i).unwrap()).collect()
}

/// Every lasso over the first `props` propositions with `m <= max_m` and
/// `1 <= n <= max_n`.
pub fn all_lassos(max_m: usize, max_n: usize, props: usize) -> Vec<ConcreteTrace> {
    let supply = Supply::first(props).unwrap();
    let letters = 1u32 << props;
    let mut out = Vec::new();
    for m in 0..=max_m {
        for n in 1..=max_n {
            let total = (letters as usize).pow((m + n) as u32);
            for mut code in 0..total {
                let mut word = Vec::with_capacity(m + n);
                for _ in 0..m + n {
                    word.push(code as u32 % letters);
                    code /= letters as usize;
                }
                out.push(ConcreteTrace::new(supply, word[..m].to_vec(), word[m..].to_vec()).unwrap());
            }
        }
    }
    out
}

/// Canonical position of the unrolled word: suffixes at congruent period
/// positions are equal.
fn canon(t: &ConcreteTrace, i: usize) -> usize {
    let m = t.prefix().len();
    if i < m {
        i
    } else {
        m + (i - m) % t.period().len()
    }
}

/// Direct recursive semantics on the infinite word. Until and its relatives
/// look ahead `m + n` positions, enough to visit every distinct suffix.
pub fn naive_eval(phi: &Ltl, t: &ConcreteTrace) -> bool {
    fn sat(phi: &Ltl, t: &ConcreteTrace, i: usize) -> bool {
        let i = canon(t, i);
        let horizon = t.len() + 1;
        match phi {
            Ltl::Prop(v) => t.letter_at(i) & v.bit() != 0,
            Ltl::True => true,
            Ltl::False => false,
            Ltl::Not(a) => !sat(a, t, i),
            Ltl::And(a, b) => sat(a, t, i) && sat(b, t, i),
            Ltl::Or(a, b) => sat(a, t, i) || sat(b, t, i),
            Ltl::Implies(a, b) => !sat(a, t, i) || sat(b, t, i),
            Ltl::Next(a) => sat(a, t, i + 1),
            Ltl::Until(a, b) => {
                for j in i..i + horizon {
                    if sat(b, t, j) {
                        return true;
                    }
                    if !sat(a, t, j) {
                        return false;
                    }
                }
                false
            }
            Ltl::WeakUntil(a, b) => {
                for j in i..i + horizon {
                    if sat(b, t, j) {
                        return true;
                    }
                    if !sat(a, t, j) {
                        return false;
                    }
                }
                true
            }
            Ltl::Eventually(a) => (i..i + horizon).any(|j| sat(a, t, j)),
            Ltl::Globally(a) => (i..i + horizon).all(|j| sat(a, t, j)),
        }
    }
    sat(phi, t, 0)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ops {
    /// `! & X U`
    Core,
    /// every LTL operator
    Full,
}

const UNARY_FULL: [&str; 4] = ["!", "X", "F", "G"];
const BINARY_FULL: [&str; 5] = ["&", "|", ">", "U", "W"];
const UNARY_CORE: [&str; 2] = ["!", "X"];
const BINARY_CORE: [&str; 2] = ["&", "U"];

fn unary(op: &str, a: Ltl) -> Ltl {
    match op {
        "!" => Ltl::not(a),
        "X" => Ltl::next(a),
        "F" => Ltl::eventually(a),
        _ => Ltl::globally(a),
    }
}

fn binary(op: &str, a: Ltl, b: Ltl) -> Ltl {
    match op {
        "&" => Ltl::and(a, b),
        "|" => Ltl::or(a, b),
        ">" => Ltl::implies(a, b),
        "U" => Ltl::until(a, b),
        _ => Ltl::weak_until(a, b),
    }
}

fn op_sets(ops: Ops) -> (&'static [&'static str], &'static [&'static str]) {
    match ops {
        Ops::Core => (&UNARY_CORE, &BINARY_CORE),
        Ops::Full => (&UNARY_FULL, &BINARY_FULL),
    }
}

/// All formulas of exactly `size` nodes over `props` propositions, with
/// `1` and `0` as additional leaves.
pub fn enumerate_formulas(size: usize, props: usize, ops: Ops) -> Vec<Ltl> {
    let (un, bin) = op_sets(ops);
    let mut by_size: Vec<Vec<Ltl>> = vec![Vec::new()];
    let mut leaves: Vec<Ltl> = vars(props).into_iter().map(Ltl::Prop).collect();
    leaves.push(Ltl::True);
    leaves.push(Ltl::False);
    by_size.push(leaves);
    for s in 2..=size {
        let mut here = Vec::new();
        for op in un {
            for a in &by_size[s - 1] {
                here.push(unary(op, a.clone()));
            }
        }
        for l in 1..s - 1 {
            for op in bin {
                for a in &by_size[l] {
                    for b in &by_size[s - 1 - l] {
                        here.push(binary(op, a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(here);
    }
    by_size.swap_remove(size)
}

pub fn random_ltl(rng: &mut impl Rng, size: usize, props: usize, ops: Ops) -> Ltl {
    let (un, bin) = op_sets(ops);
    match size {
        0 | 1 => match rng.gen_range(0..props + 1) {
            k if k < props => Ltl::Prop(Var::from_index(k).unwrap()),
            _ => Ltl::True,
        },
        2 => unary(un.choose(rng).unwrap(), random_ltl(rng, 1, props, ops)),
        _ => {
            if rng.gen_bool(0.3) {
                unary(un.choose(rng).unwrap(), random_ltl(rng, size - 1, props, ops))
            } else {
                let l = rng.gen_range(1..=size - 2);
                let a = random_ltl(rng, l, props, ops);
                let b = random_ltl(rng, size - 1 - l, props, ops);
                binary(bin.choose(rng).unwrap(), a, b)
            }
        }
    }
}

/// Letters over `supply` satisfying `c`, by enumeration.
pub fn satisfying_letters(c: &Prop, supply: Supply) -> Vec<u32> {
    let vs: Vec<Var> = supply.vars().collect();
    (0u32..1 << vs.len())
        .map(|bits| vs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).fold(0, |a, (_, v)| a | v.bit()))
        .filter(|&l| c.eval(l))
        .collect()
}

/// Concrete lassos described by `t`: the prefix plus `unroll - 1` period
/// copies, then `copies` period copies as the loop, every position ranging
/// over its satisfying letters. Exhaustive up to `cap` words, otherwise
/// `cap` uniform samples.
pub fn concretizations(
    t: &SymbolicTrace,
    supply: Supply,
    unroll: usize,
    copies: usize,
    cap: usize,
    rng: &mut impl Rng,
) -> Vec<ConcreteTrace> {
    let mut positions: Vec<&Prop> = t.prefix().iter().collect();
    for _ in 1..unroll {
        positions.extend(t.period());
    }
    let m = positions.len();
    for _ in 0..copies {
        positions.extend(t.period());
    }
    let choices: Vec<Vec<u32>> = positions.iter().map(|c| satisfying_letters(c, supply)).collect();
    let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()).filter(|&x| x <= cap));
    let build = |word: Vec<u32>| ConcreteTrace::new(supply, word[..m].to_vec(), word[m..].to_vec()).unwrap();
    match total {
        Some(total) => (0..total)
            .map(|mut code| {
                let word = choices
                    .iter()
                    .map(|c| {
                        let l = c[code % c.len()];
                        code /= c.len();
                        l
                    })
                    .collect();
                build(word)
            })
            .collect(),
        None => (0..cap).map(|_| build(choices.iter().map(|c| *c.choose(rng).unwrap()).collect())).collect(),
    }
}

/// Whether `w` is a word of `t`: position `j` of the word satisfies the
/// constraint at the corresponding lasso position of `t`.
pub fn word_in_trace(w: &ConcreteTrace, t: &SymbolicTrace) -> bool {
    let horizon = w.len().max(1) * t.len().max(1) + w.prefix().len() + t.prefix().len();
    (0..horizon + w.len() * t.len()).all(|j| {
        let k = if j < t.prefix().len() { j } else { t.prefix().len() + (j - t.prefix().len()) % t.period().len() };
        t.position(k).eval(w.letter_at(j))
    })
}

/// A random constraint: `1`, a literal, or a conjunction of two literals.
pub fn random_constraint(rng: &mut impl Rng, props: usize) -> Prop {
    let lit = |rng: &mut dyn rand::RngCore| {
        let v = Var::from_index(rng.gen_range(0..props)).unwrap();
        Prop::literal(v, rng.gen_bool(0.5))
    };
    match rng.gen_range(0..3) {
        0 => Prop::True,
        1 => lit(rng),
        _ => loop {
            let (a, b) = (lit(rng), lit(rng));
            let c = Prop::and(a, b);
            if !satisfying_letters(&c, Supply::first(props).unwrap()).is_empty() {
                break c;
            }
        },
    }
}

pub fn random_symbolic(rng: &mut impl Rng, max_m: usize, max_n: usize, props: usize) -> SymbolicTrace {
    let m = rng.gen_range(0..=max_m);
    let n = rng.gen_range(1..=max_n);
    let prefix = (0..m).map(|_| random_constraint(rng, props)).collect();
    let period = (0..n).map(|_| random_constraint(rng, props)).collect();
    SymbolicTrace::new(prefix, period).unwrap()
}
