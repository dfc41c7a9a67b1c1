//! The shared token vocabulary of formulas, traces and assignments.
//!
//! Every wire string in the toolkit is a dense sequence of these tokens with
//! no separators. Whitespace between tokens is tolerated on input and never
//! produced on output.

use std::fmt;

use super::{ParseError, Var};

/// One lexical unit of the wire format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Xor,
    Next,
    Until,
    WeakUntil,
    Eventually,
    Globally,
    False,
    True,
    Semi,
    LBrace,
    RBrace,
    Prop(Var),
}

/// Operator and punctuation tokens in id order. Propositions follow.
const FIXED: [Token; 16] = [
    Token::Not,
    Token::And,
    Token::Or,
    Token::Implies,
    Token::Iff,
    Token::Xor,
    Token::Next,
    Token::Until,
    Token::WeakUntil,
    Token::Eventually,
    Token::Globally,
    Token::False,
    Token::True,
    Token::Semi,
    Token::LBrace,
    Token::RBrace,
];

impl Token {
    pub fn symbol(self) -> &'static str {
        match self {
            Token::Not => "!",
            Token::And => "&",
            Token::Or => "|",
            Token::Implies => ">",
            Token::Iff => "<->",
            Token::Xor => "xor",
            Token::Next => "X",
            Token::Until => "U",
            Token::WeakUntil => "W",
            Token::Eventually => "F",
            Token::Globally => "G",
            Token::False => "0",
            Token::True => "1",
            Token::Semi => ";",
            Token::LBrace => "{",
            Token::RBrace => "}",
            Token::Prop(v) => v.symbol(),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Bidirectional mapping between tokens and dense integer ids.
///
/// Ids `0..16` are the operators and punctuation in a fixed order; ids from
/// 16 on are the propositions `a, b, c, ...` in alphabetical order (`x` is
/// skipped because it starts the `xor` token).
pub struct TokenVocabulary;

impl TokenVocabulary {
    pub const SIZE: usize = FIXED.len() + Var::MAX_VARS;

    pub fn id(token: Token) -> u32 {
        match token {
            Token::Prop(v) => (FIXED.len() + v.index()) as u32,
            t => FIXED.iter().position(|&f| f == t).expect("fixed token") as u32,
        }
    }

    pub fn token(id: u32) -> Option<Token> {
        let id = id as usize;
        if id < FIXED.len() {
            Some(FIXED[id])
        } else {
            Var::from_index(id - FIXED.len()).map(Token::Prop)
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Token> {
        if let Some(t) = FIXED.iter().find(|t| t.symbol() == symbol) {
            return Some(*t);
        }
        let mut chars = symbol.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Var::from_char(c).map(Token::Prop),
            _ => None,
        }
    }
}

/// A token together with the byte offset where it starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub token: Token,
    pub pos: usize,
}

/// Splits `text` into tokens. Multi-character tokens are matched greedily.
pub fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let pos = i;
        let token = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'>' => Token::Implies,
            b'X' => Token::Next,
            b'U' => Token::Until,
            b'W' => Token::WeakUntil,
            b'F' => Token::Eventually,
            b'G' => Token::Globally,
            b'0' => Token::False,
            b'1' => Token::True,
            b';' => Token::Semi,
            b'{' => Token::LBrace,
            b'}' => Token::RBrace,
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 3;
                out.push(Spanned { token: Token::Iff, pos });
                continue;
            }
            b'x' if bytes[i..].starts_with(b"xor") => {
                i += 3;
                out.push(Spanned { token: Token::Xor, pos });
                continue;
            }
            _ => match Var::from_char(b as char) {
                Some(v) => Token::Prop(v),
                None => {
                    let found = text[i..].chars().next().unwrap_or('?');
                    return Err(ParseError::UnknownToken { pos, found });
                }
            },
        };
        out.push(Spanned { token, pos });
        i += 1;
    }
    Ok(out)
}
