use std::fmt;
use std::str::FromStr;

use super::{tokenize, Cursor, ParseError, Supply, Token, UnknownProposition, Var};

/// A propositional formula. Also used for the position constraints of
/// symbolic traces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Var(Var),
    True,
    False,
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
    Xor(Box<Prop>, Box<Prop>),
}

impl Prop {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Prop) -> Prop {
        Prop::Not(Box::new(a))
    }

    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Prop, b: Prop) -> Prop {
        Prop::Iff(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Prop, b: Prop) -> Prop {
        Prop::Xor(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Box::new(a), Box::new(b))
    }

    pub fn literal(v: Var, positive: bool) -> Prop {
        if positive {
            Prop::Var(v)
        } else {
            Prop::not(Prop::Var(v))
        }
    }

    /// Left-nested conjunction of `items`; `1` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Prop>) -> Prop {
        items.into_iter().reduce(Prop::and).unwrap_or(Prop::True)
    }

    /// Left-nested disjunction of `items`; `0` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Prop>) -> Prop {
        items.into_iter().reduce(Prop::or).unwrap_or(Prop::False)
    }

    pub fn parse(text: &str) -> Result<Prop, ParseError> {
        let tokens = tokenize(text)?;
        let mut cur = Cursor::new(&tokens, text.len());
        let f = Self::parse_from(&mut cur)?;
        cur.finish()?;
        Ok(f)
    }

    pub(crate) fn parse_from(cur: &mut Cursor<'_>) -> Result<Prop, ParseError> {
        let t = cur.next()?;
        Ok(match t.token {
            Token::Prop(v) => Prop::Var(v),
            Token::True => Prop::True,
            Token::False => Prop::False,
            Token::Not => Prop::not(Self::parse_from(cur)?),
            Token::And | Token::Or | Token::Implies | Token::Iff | Token::Xor => {
                let l = Box::new(Self::parse_from(cur)?);
                let r = Box::new(Self::parse_from(cur)?);
                match t.token {
                    Token::And => Prop::And(l, r),
                    Token::Or => Prop::Or(l, r),
                    Token::Implies => Prop::Implies(l, r),
                    Token::Iff => Prop::Iff(l, r),
                    _ => Prop::Xor(l, r),
                }
            }
            token => return Err(ParseError::Unexpected { pos: t.pos, token }),
        })
    }

    pub fn to_polish(&self) -> String {
        let mut out = String::new();
        self.write_polish(&mut out);
        out
    }

    pub(crate) fn write_polish(&self, out: &mut String) {
        out.push_str(self.token().symbol());
        for c in self.children() {
            c.write_polish(out);
        }
    }

    pub fn token(&self) -> Token {
        match self {
            Prop::Var(v) => Token::Prop(*v),
            Prop::True => Token::True,
            Prop::False => Token::False,
            Prop::Not(_) => Token::Not,
            Prop::And(..) => Token::And,
            Prop::Or(..) => Token::Or,
            Prop::Implies(..) => Token::Implies,
            Prop::Iff(..) => Token::Iff,
            Prop::Xor(..) => Token::Xor,
        }
    }

    pub fn children(&self) -> Vec<&Prop> {
        match self {
            Prop::Var(_) | Prop::True | Prop::False => vec![],
            Prop::Not(a) => vec![a],
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) | Prop::Iff(a, b) | Prop::Xor(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Prop::size).sum::<usize>()
    }

    pub fn vars(&self) -> Supply {
        let mut s = Supply::empty();
        self.collect_vars(&mut s);
        s
    }

    fn collect_vars(&self, s: &mut Supply) {
        if let Prop::Var(v) = self {
            *s = s.with(*v);
        }
        for c in self.children() {
            c.collect_vars(s);
        }
    }

    pub fn check_supply(&self, supply: Supply) -> Result<(), UnknownProposition> {
        match self.vars().vars().find(|v| !supply.contains(*v)) {
            Some(v) => Err(UnknownProposition(v)),
            None => Ok(()),
        }
    }

    /// Evaluates under the assignment whose true propositions are the set
    /// bits of `letter`.
    pub fn eval(&self, letter: u32) -> bool {
        match self {
            Prop::Var(v) => letter & v.bit() != 0,
            Prop::True => true,
            Prop::False => false,
            Prop::Not(a) => !a.eval(letter),
            Prop::And(a, b) => a.eval(letter) && b.eval(letter),
            Prop::Or(a, b) => a.eval(letter) || b.eval(letter),
            Prop::Implies(a, b) => !a.eval(letter) || b.eval(letter),
            Prop::Iff(a, b) => a.eval(letter) == b.eval(letter),
            Prop::Xor(a, b) => a.eval(letter) != b.eval(letter),
        }
    }
}

impl FromStr for Prop {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Prop::parse(s)
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Var(v) => write!(f, "{v}"),
            Prop::True => f.write_str("true"),
            Prop::False => f.write_str("false"),
            Prop::Not(a) => write!(f, "!{a}"),
            Prop::And(a, b) => write!(f, "({a} & {b})"),
            Prop::Or(a, b) => write!(f, "({a} | {b})"),
            Prop::Implies(a, b) => write!(f, "({a} -> {b})"),
            Prop::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Prop::Xor(a, b) => write!(f, "({a} xor {b})"),
        }
    }
}
