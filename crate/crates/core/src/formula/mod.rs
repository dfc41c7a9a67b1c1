//! Syntax trees for LTL and propositional formulas and their Polish-notation
//! wire format.

mod ltl;
mod prop;
pub mod token;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ltl::Ltl;
pub use prop::Prop;
pub use token::{tokenize, Spanned, Token, TokenVocabulary};

const LETTERS: &str = "abcdefghijklmnopqrstuvwyz";

/// An atomic proposition, written as a single lowercase letter.
///
/// `x` is not a proposition: it would make `xor` ambiguous.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub const MAX_VARS: usize = 25;

    pub fn from_index(index: usize) -> Option<Var> {
        (index < Self::MAX_VARS).then_some(Var(index as u8))
    }

    pub fn from_char(c: char) -> Option<Var> {
        if c == 'x' {
            return None;
        }
        LETTERS.find(c).map(|i| Var(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bit(self) -> u32 {
        1 << self.0
    }

    pub fn symbol(self) -> &'static str {
        let i = self.index();
        &LETTERS[i..i + 1]
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A finite set of propositions a dataset draws from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Supply(u32);

impl Supply {
    pub fn empty() -> Supply {
        Supply(0)
    }

    /// The first `n` propositions: `a`, `b`, ...
    pub fn first(n: usize) -> Result<Supply, SupplyError> {
        if n == 0 || n > Var::MAX_VARS {
            return Err(SupplyError::Count(n));
        }
        Ok(Supply(((1u64 << n) - 1) as u32))
    }

    /// Parses a string of distinct proposition letters such as `"abcde"`.
    pub fn from_letters(letters: &str) -> Result<Supply, SupplyError> {
        let mut bits = 0u32;
        for c in letters.chars() {
            let v = Var::from_char(c).ok_or(SupplyError::Letter(c))?;
            if bits & v.bit() != 0 {
                return Err(SupplyError::Duplicate(c));
            }
            bits |= v.bit();
        }
        if bits == 0 {
            return Err(SupplyError::Count(0));
        }
        Ok(Supply(bits))
    }

    pub fn from_bits(bits: u32) -> Supply {
        Supply(bits & ((1 << Var::MAX_VARS) - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & v.bit() != 0
    }

    pub fn is_superset(self, other: Supply) -> bool {
        other.0 & !self.0 == 0
    }

    pub fn union(self, other: Supply) -> Supply {
        Supply(self.0 | other.0)
    }

    pub fn with(self, v: Var) -> Supply {
        Supply(self.0 | v.bit())
    }

    /// Propositions in alphabetical order.
    pub fn vars(self) -> impl Iterator<Item = Var> {
        (0..Var::MAX_VARS).filter(move |i| self.0 & (1 << i) != 0).map(|i| Var(i as u8))
    }
}

impl fmt::Debug for Supply {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Supply({self})")
    }
}

impl fmt::Display for Supply {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.vars() {
            f.write_str(v.symbol())?;
        }
        Ok(())
    }
}

impl TryFrom<String> for Supply {
    type Error = SupplyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Supply::from_letters(&s)
    }
}

impl From<Supply> for String {
    fn from(s: Supply) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupplyError {
    #[error("`{0}` is not a proposition letter")]
    Letter(char),
    #[error("proposition `{0}` listed twice")]
    Duplicate(char),
    #[error("a supply needs between 1 and {} propositions, got {0}", Var::MAX_VARS)]
    Count(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token `{found}` at position {pos}")]
    UnknownToken { pos: usize, found: char },
    #[error("input ends at position {pos} but an operand is missing")]
    Truncated { pos: usize },
    #[error("trailing input at position {pos}")]
    Trailing { pos: usize },
    #[error("unexpected `{token}` at position {pos}")]
    Unexpected { pos: usize, token: Token },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proposition `{0}` is not in the declared supply")]
pub struct UnknownProposition(pub Var);

/// Reads operators and operands from a token slice, Polish style.
pub(crate) struct Cursor<'a> {
    tokens: &'a [Spanned],
    at: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(tokens: &'a [Spanned], end: usize) -> Self {
        Cursor { tokens, at: 0, end }
    }

    pub(crate) fn next(&mut self) -> Result<Spanned, ParseError> {
        let t = self.tokens.get(self.at).copied().ok_or(ParseError::Truncated { pos: self.end })?;
        self.at += 1;
        Ok(t)
    }

    pub(crate) fn peek(&self) -> Option<Spanned> {
        self.tokens.get(self.at).copied()
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) => Err(ParseError::Trailing { pos: t.pos }),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_skip_x() {
        assert_eq!(Var::from_char('x'), None);
        assert_eq!(Var::from_char('y').unwrap().index(), 23);
        assert_eq!(Var::from_index(24).unwrap().symbol(), "z");
        assert_eq!(Var::from_index(25), None);
    }

    #[test]
    fn supply_parsing() {
        assert_eq!(Supply::first(5).unwrap().to_string(), "abcde");
        assert_eq!(Supply::from_letters("ca").unwrap().to_string(), "ac");
        assert_eq!(Supply::from_letters("aa"), Err(SupplyError::Duplicate('a')));
        assert_eq!(Supply::from_letters("ax"), Err(SupplyError::Letter('x')));
        assert!(Supply::first(0).is_err());
        assert_eq!(Supply::first(25).unwrap().len(), 25);
    }
}
