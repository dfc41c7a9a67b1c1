//! Ultimately periodic traces `u v^ω`, symbolic and concrete.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{tokenize, Cursor, ParseError, Prop, Supply, Token, Var};
use crate::sat::{self, to_cnf, Lit, SolveResult, Solver};

/// Reference traces longer than this many tokens are filtered from datasets.
pub const MAX_TRACE_TOKENS: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("trace has no period")]
    MissingPeriod,
    #[error("trace period is empty")]
    EmptyPeriod,
    #[error("constraint at position {position} is unsatisfiable")]
    Unsatisfiable { position: usize },
    #[error("position {position} is not a conjunction of literals")]
    NotALetter { position: usize },
    #[error("letter at position {position} is outside the supply")]
    LetterOutsideSupply { position: usize },
}

/// A lasso whose positions are propositional constraints. Each position
/// stands for every letter satisfying it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SymbolicTrace {
    prefix: Vec<Prop>,
    period: Vec<Prop>,
}

impl SymbolicTrace {
    pub fn new(prefix: Vec<Prop>, period: Vec<Prop>) -> Result<SymbolicTrace, TraceError> {
        if period.is_empty() {
            return Err(TraceError::EmptyPeriod);
        }
        if let Some(position) = prefix.iter().chain(&period).position(|c| !sat::is_satisfiable(c)) {
            return Err(TraceError::Unsatisfiable { position });
        }
        Ok(SymbolicTrace { prefix, period })
    }

    pub fn parse(text: &str) -> Result<SymbolicTrace, TraceError> {
        let tokens = tokenize(text)?;
        let mut cur = Cursor::new(&tokens, text.len());
        let mut prefix = Vec::new();
        loop {
            match cur.peek() {
                None => return Err(TraceError::MissingPeriod),
                Some(t) if t.token == Token::LBrace => {
                    cur.next()?;
                    break;
                }
                Some(_) => {
                    prefix.push(Prop::parse_from(&mut cur)?);
                    match expect(&mut cur, Token::Semi) {
                        Err(ParseError::Truncated { .. }) => return Err(TraceError::MissingPeriod),
                        r => r?,
                    }
                }
            }
        }
        let mut period = Vec::new();
        if let Some(t) = cur.peek() {
            if t.token == Token::RBrace {
                return Err(TraceError::EmptyPeriod);
            }
        }
        loop {
            period.push(Prop::parse_from(&mut cur)?);
            let t = cur.next()?;
            match t.token {
                Token::Semi => {}
                Token::RBrace => break,
                token => return Err(ParseError::Unexpected { pos: t.pos, token }.into()),
            }
        }
        cur.finish()?;
        SymbolicTrace::new(prefix, period)
    }

    pub fn prefix(&self) -> &[Prop] {
        &self.prefix
    }

    pub fn period(&self) -> &[Prop] {
        &self.period
    }

    /// Total number of positions, m + n.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Constraint at lasso position `i < len()`.
    pub fn position(&self, i: usize) -> &Prop {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[i - self.prefix.len()]
        }
    }

    /// Successor of lasso position `i`, wrapping the period.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 == self.len() {
            self.prefix.len()
        } else {
            i + 1
        }
    }

    pub fn vars(&self) -> Supply {
        self.prefix.iter().chain(&self.period).fold(Supply::empty(), |s, c| s.union(c.vars()))
    }

    /// Token count of the printed form.
    pub fn token_len(&self) -> usize {
        let body: usize = self.prefix.iter().chain(&self.period).map(Prop::size).sum();
        body + self.prefix.len() + self.period.len() - 1 + 2
    }
}

fn expect(cur: &mut Cursor<'_>, want: Token) -> Result<(), ParseError> {
    let t = cur.next()?;
    if t.token == want {
        Ok(())
    } else {
        Err(ParseError::Unexpected { pos: t.pos, token: t.token })
    }
}

impl fmt::Display for SymbolicTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for c in &self.prefix {
            c.write_polish(&mut out);
            out.push(';');
        }
        out.push('{');
        for (i, c) in self.period.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            c.write_polish(&mut out);
        }
        out.push('}');
        f.write_str(&out)
    }
}

impl FromStr for SymbolicTrace {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SymbolicTrace::parse(s)
    }
}

impl From<SymbolicTrace> for String {
    fn from(t: SymbolicTrace) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for SymbolicTrace {
    type Error = TraceError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub fn parse_trace(text: &str) -> Result<SymbolicTrace, TraceError> {
    SymbolicTrace::parse(text)
}

pub fn print_trace(t: &SymbolicTrace) -> String {
    t.to_string()
}

/// A lasso of letters. A letter is the bit set of true propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConcreteTrace {
    supply: Supply,
    prefix: Vec<u32>,
    period: Vec<u32>,
}

impl ConcreteTrace {
    pub fn new(supply: Supply, prefix: Vec<u32>, period: Vec<u32>) -> Result<ConcreteTrace, TraceError> {
        if period.is_empty() {
            return Err(TraceError::EmptyPeriod);
        }
        if let Some(position) = prefix.iter().chain(&period).position(|&l| l & !supply.bits() != 0) {
            return Err(TraceError::LetterOutsideSupply { position });
        }
        Ok(ConcreteTrace { supply, prefix, period })
    }

    /// Reads a trace whose positions are conjunctions of literals; any
    /// proposition of `supply` not mentioned is false.
    pub fn parse(text: &str, supply: Supply) -> Result<ConcreteTrace, TraceError> {
        let sym = SymbolicTrace::parse(text)?;
        let letters = sym
            .prefix
            .iter()
            .chain(&sym.period)
            .enumerate()
            .map(|(position, c)| positive_literals(c).ok_or(TraceError::NotALetter { position }))
            .collect::<Result<Vec<u32>, _>>()?;
        let (prefix, period) = letters.split_at(sym.prefix.len());
        ConcreteTrace::new(supply, prefix.to_vec(), period.to_vec())
    }

    pub fn supply(&self) -> Supply {
        self.supply
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, i: usize) -> u32 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[i - self.prefix.len()]
        }
    }

    pub fn succ(&self, i: usize) -> usize {
        if i + 1 == self.len() {
            self.prefix.len()
        } else {
            i + 1
        }
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> u32 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The symbolic trace whose positions fix every supply proposition.
    pub fn to_symbolic(&self) -> SymbolicTrace {
        let full = |l: &u32| Prop::conjunction(self.supply.vars().map(|v| Prop::literal(v, l & v.bit() != 0)));
        SymbolicTrace { prefix: self.prefix.iter().map(full).collect(), period: self.period.iter().map(full).collect() }
    }
}

/// Bits of `c` if it is a conjunction of literals, `1` or a single literal.
fn positive_literals(c: &Prop) -> Option<u32> {
    match c {
        Prop::True => Some(0),
        Prop::Var(v) => Some(v.bit()),
        Prop::Not(a) if matches!(**a, Prop::Var(_)) => Some(0),
        Prop::And(a, b) => Some(positive_literals(a)? | positive_literals(b)?),
        _ => None,
    }
}

impl fmt::Display for ConcreteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_symbolic().fmt(f)
    }
}

/// Draws a satisfying letter over `supply` for `c`. Propositions are visited
/// in random order with a random preferred value, backed off to the other
/// value when the preference would make `c` unsatisfiable.
fn sample_letter(c: &Prop, supply: Supply, rng: &mut ChaCha8Rng) -> u32 {
    let cnf = to_cnf(c);
    let mut solver = Solver::new(&cnf);
    let mut vars: Vec<Var> = supply.union(c.vars()).vars().collect();
    vars.shuffle(rng);
    let mut assumed: Vec<Lit> = Vec::new();
    let mut letter = 0;
    for v in vars {
        let want = rng.gen_bool(0.5);
        let value = match cnf.lit(v, want) {
            None => want,
            Some(l) => {
                assumed.push(l);
                if let SolveResult::Unsat(_) = solver.solve(&assumed) {
                    assumed.pop();
                    assumed.push(!l);
                    !want
                } else {
                    want
                }
            }
        };
        if value {
            letter |= v.bit();
        }
    }
    letter
}

/// A concrete lasso drawn from the symbolic one. The prefix holds the
/// symbolic prefix followed by `unroll - 1` copies of the period, each letter
/// chosen independently; the period fixes one letter per period position.
pub fn sample_concretization(t: &SymbolicTrace, supply: Supply, unroll: usize, seed: u64) -> ConcreteTrace {
    let supply = supply.union(t.vars());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prefix: Vec<u32> = t.prefix.iter().map(|c| sample_letter(c, supply, &mut rng)).collect();
    for _ in 1..unroll.max(1) {
        prefix.extend(t.period.iter().map(|c| sample_letter(c, supply, &mut rng)));
    }
    let period = t.period.iter().map(|c| sample_letter(c, supply, &mut rng)).collect();
    ConcreteTrace { supply, prefix, period }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: char) -> u32 {
        Var::from_char(c).unwrap().bit()
    }

    #[test]
    fn parses_and_prints() {
        for text in ["a;a;a;{b}", "{1}", "1;&&b!c!d;&!cd;d;{1}", "&a!b;b;{1}", "{a;!a}"] {
            let t = parse_trace(text).unwrap();
            assert_eq!(print_trace(&t), text);
        }
        let t = parse_trace("a;a;a;{b}").unwrap();
        assert_eq!(t.prefix().len(), 3);
        assert_eq!(t.period(), &[Prop::Var(Var::from_char('b').unwrap())]);
        assert_eq!(parse_trace("1;&&b!c!d;&!cd;d;{1}").unwrap().prefix().len(), 4);
        assert_eq!(parse_trace(" a ; { b } ").unwrap().to_string(), "a;{b}");
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_trace("a;b"), Err(TraceError::MissingPeriod));
        assert_eq!(parse_trace("a;{}"), Err(TraceError::EmptyPeriod));
        assert_eq!(parse_trace("{&a!a}"), Err(TraceError::Unsatisfiable { position: 0 }));
        assert_eq!(parse_trace("1;0;{1}"), Err(TraceError::Unsatisfiable { position: 1 }));
        assert_eq!(parse_trace("a{b}"), Err(ParseError::Unexpected { pos: 1, token: Token::LBrace }.into()));
        assert_eq!(parse_trace("{a}b"), Err(ParseError::Trailing { pos: 3 }.into()));
        assert_eq!(parse_trace("{a"), Err(ParseError::Truncated { pos: 2 }.into()));
        assert_eq!(parse_trace("{Xa}"), Err(ParseError::Unexpected { pos: 1, token: Token::Next }.into()));
    }

    #[test]
    fn token_length() {
        let t = parse_trace("{1}").unwrap();
        assert_eq!(t.token_len(), 3);
        for text in ["a;{b}", "1;&&b!c!d;&!cd;d;{1}", "{a;!a;&bc}", "<->ab;{xorab}"] {
            let t = parse_trace(text).unwrap();
            assert_eq!(t.token_len(), tokenize(text).unwrap().len(), "{text}");
        }
    }

    #[test]
    fn concretization_respects_constraints() {
        let t = parse_trace("a;{b}").unwrap();
        let s = Supply::first(3).unwrap();
        for seed in 0..20 {
            let c = sample_concretization(&t, s, 3, seed);
            assert_eq!(c.prefix().len(), 3);
            assert_eq!(c.period().len(), 1);
            assert_ne!(c.prefix()[0] & v('a'), 0);
            assert!(c.prefix()[1..].iter().all(|l| l & v('b') != 0));
            assert_ne!(c.period()[0] & v('b'), 0);
        }
        let t = parse_trace("{1}").unwrap();
        let letters: std::collections::BTreeSet<u32> =
            (0..64).map(|seed| sample_concretization(&t, s, 1, seed).period()[0]).collect();
        assert_eq!(letters.len(), 8, "every letter is reachable");
    }

    #[test]
    fn concrete_round_trip() {
        let s = Supply::first(2).unwrap();
        let c = ConcreteTrace::new(s, vec![v('a')], vec![0, v('a') | v('b')]).unwrap();
        assert_eq!(c.to_string(), "&a!b;{&!a!b;&ab}");
        assert_eq!(ConcreteTrace::parse(&c.to_string(), s).unwrap(), c);
        assert_eq!(ConcreteTrace::parse("a;{1}", s).unwrap().letter_at(5), 0);
        assert_eq!(c.letter_at(4), v('a') | v('b'));
        assert_eq!(ConcreteTrace::parse("|ab;{1}", s), Err(TraceError::NotALetter { position: 0 }));
        assert_eq!(ConcreteTrace::new(s, vec![], vec![v('c')]), Err(TraceError::LetterOutsideSupply { position: 0 }));
    }

    #[test]
    fn serde_uses_wire_form() {
        let t = parse_trace("&a!b;b;{1}").unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, "\"&a!b;b;{1}\"");
        assert_eq!(serde_json::from_str::<SymbolicTrace>(&json).unwrap(), t);
    }
}
