use std::fmt;
use std::str::FromStr;

use super::{tokenize, Cursor, ParseError, Supply, Token, UnknownProposition, Var};

/// An LTL formula over single-letter propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    Prop(Var),
    True,
    False,
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    WeakUntil(Box<Ltl>, Box<Ltl>),
    Eventually(Box<Ltl>),
    Globally(Box<Ltl>),
}

impl Ltl {
    pub fn prop(v: Var) -> Ltl {
        Ltl::Prop(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Ltl) -> Ltl {
        Ltl::Not(Box::new(a))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn eventually(a: Ltl) -> Ltl {
        Ltl::Eventually(Box::new(a))
    }

    pub fn globally(a: Ltl) -> Ltl {
        Ltl::Globally(Box::new(a))
    }

    /// Parses a Polish-notation token string such as `&UabUa!b`.
    pub fn parse(text: &str) -> Result<Ltl, ParseError> {
        let tokens = tokenize(text)?;
        let mut cur = Cursor::new(&tokens, text.len());
        let f = Self::parse_from(&mut cur)?;
        cur.finish()?;
        Ok(f)
    }

    pub(crate) fn parse_from(cur: &mut Cursor<'_>) -> Result<Ltl, ParseError> {
        let t = cur.next()?;
        Ok(match t.token {
            Token::Prop(v) => Ltl::Prop(v),
            Token::True => Ltl::True,
            Token::False => Ltl::False,
            Token::Not => Ltl::not(Self::parse_from(cur)?),
            Token::Next => Ltl::next(Self::parse_from(cur)?),
            Token::Eventually => Ltl::eventually(Self::parse_from(cur)?),
            Token::Globally => Ltl::globally(Self::parse_from(cur)?),
            Token::And | Token::Or | Token::Implies | Token::Until | Token::WeakUntil => {
                let l = Box::new(Self::parse_from(cur)?);
                let r = Box::new(Self::parse_from(cur)?);
                match t.token {
                    Token::And => Ltl::And(l, r),
                    Token::Or => Ltl::Or(l, r),
                    Token::Implies => Ltl::Implies(l, r),
                    Token::Until => Ltl::Until(l, r),
                    _ => Ltl::WeakUntil(l, r),
                }
            }
            token => return Err(ParseError::Unexpected { pos: t.pos, token }),
        })
    }

    /// The Polish-notation wire string.
    pub fn to_polish(&self) -> String {
        let mut out = String::with_capacity(self.size() + 8);
        self.write_polish(&mut out);
        out
    }

    fn write_polish(&self, out: &mut String) {
        out.push_str(self.token().symbol());
        match self {
            Ltl::Prop(_) | Ltl::True | Ltl::False => {}
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Eventually(a) | Ltl::Globally(a) => a.write_polish(out),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Until(a, b) | Ltl::WeakUntil(a, b) => {
                a.write_polish(out);
                b.write_polish(out);
            }
        }
    }

    pub fn token(&self) -> Token {
        match self {
            Ltl::Prop(v) => Token::Prop(*v),
            Ltl::True => Token::True,
            Ltl::False => Token::False,
            Ltl::Not(_) => Token::Not,
            Ltl::And(..) => Token::And,
            Ltl::Or(..) => Token::Or,
            Ltl::Implies(..) => Token::Implies,
            Ltl::Next(_) => Token::Next,
            Ltl::Until(..) => Token::Until,
            Ltl::WeakUntil(..) => Token::WeakUntil,
            Ltl::Eventually(_) => Token::Eventually,
            Ltl::Globally(_) => Token::Globally,
        }
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::Prop(_) | Ltl::True | Ltl::False => vec![],
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Eventually(a) | Ltl::Globally(a) => vec![a],
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Until(a, b) | Ltl::WeakUntil(a, b) => vec![a, b],
        }
    }

    /// Number of syntax-tree nodes, leaves and constants included.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Ltl::size).sum::<usize>()
    }

    /// Propositions occurring in the formula.
    pub fn vars(&self) -> Supply {
        let mut s = Supply::empty();
        self.collect_vars(&mut s);
        s
    }

    fn collect_vars(&self, s: &mut Supply) {
        if let Ltl::Prop(v) = self {
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

    /// Rewrites every derived operator into `!`, `&`, `X` and `U`.
    ///
    /// `a | b = !(!a & !b)`, `a > b = !(a & !b)`, `F a = 1 U a`,
    /// `G a = !(1 U !a)` and `a W b = (a U b) | G a`.
    pub fn expand_derived(&self) -> Ltl {
        match self {
            Ltl::Prop(_) | Ltl::True | Ltl::False => self.clone(),
            Ltl::Not(a) => Ltl::not(a.expand_derived()),
            Ltl::Next(a) => Ltl::next(a.expand_derived()),
            Ltl::And(a, b) => Ltl::and(a.expand_derived(), b.expand_derived()),
            Ltl::Until(a, b) => Ltl::until(a.expand_derived(), b.expand_derived()),
            Ltl::Or(a, b) => core_or(a.expand_derived(), b.expand_derived()),
            Ltl::Implies(a, b) => Ltl::not(Ltl::and(a.expand_derived(), Ltl::not(b.expand_derived()))),
            Ltl::Eventually(a) => Ltl::until(Ltl::True, a.expand_derived()),
            Ltl::Globally(a) => core_globally(a.expand_derived()),
            Ltl::WeakUntil(a, b) => {
                let a = a.expand_derived();
                let b = b.expand_derived();
                core_or(Ltl::until(a.clone(), b), core_globally(a))
            }
        }
    }

    /// True if the formula only uses `!`, `&`, `X`, `U`, constants and propositions.
    pub fn is_core(&self) -> bool {
        matches!(
            self,
            Ltl::Prop(_) | Ltl::True | Ltl::False | Ltl::Not(_) | Ltl::And(..) | Ltl::Next(_) | Ltl::Until(..)
        ) && self.children().into_iter().all(Ltl::is_core)
    }

    /// Replaces every proposition `v` with `map(v)`.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Ltl {
        match self {
            Ltl::Prop(v) => Ltl::Prop(map(*v)),
            Ltl::True => Ltl::True,
            Ltl::False => Ltl::False,
            Ltl::Not(a) => Ltl::not(a.rename(map)),
            Ltl::Next(a) => Ltl::next(a.rename(map)),
            Ltl::Eventually(a) => Ltl::eventually(a.rename(map)),
            Ltl::Globally(a) => Ltl::globally(a.rename(map)),
            Ltl::And(a, b) => Ltl::and(a.rename(map), b.rename(map)),
            Ltl::Or(a, b) => Ltl::or(a.rename(map), b.rename(map)),
            Ltl::Implies(a, b) => Ltl::implies(a.rename(map), b.rename(map)),
            Ltl::Until(a, b) => Ltl::until(a.rename(map), b.rename(map)),
            Ltl::WeakUntil(a, b) => Ltl::weak_until(a.rename(map), b.rename(map)),
        }
    }
}

fn core_or(a: Ltl, b: Ltl) -> Ltl {
    Ltl::not(Ltl::and(Ltl::not(a), Ltl::not(b)))
}

fn core_globally(a: Ltl) -> Ltl {
    Ltl::not(Ltl::until(Ltl::True, Ltl::not(a)))
}

impl FromStr for Ltl {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ltl::parse(s)
    }
}

/// Fully parenthesized infix rendering, for logs and error messages.
impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::Prop(v) => write!(f, "{v}"),
            Ltl::True => f.write_str("true"),
            Ltl::False => f.write_str("false"),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Eventually(a) => write!(f, "F {a}"),
            Ltl::Globally(a) => write!(f, "G {a}"),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Implies(a, b) => write!(f, "({a} -> {b})"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::WeakUntil(a, b) => write!(f, "({a} W {b})"),
        }
    }
}
