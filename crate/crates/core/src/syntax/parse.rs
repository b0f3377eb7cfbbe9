//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*              left-associative
//! imp     := or ("->" imp)?                right-associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "E" var "." formula | "A" var "." formula | atom
//! atom    := NAME "(" var ("," var)* ")" | var "=" var | "true" | "false" | "(" formula ")"
//! var     := "v" DIGITS
//! ```
//!
//! A quantifier body extends as far to the right as possible. `E` and `A` are
//! only quantifiers when followed by a variable, so they remain usable as
//! relation names (`E(v0, v1)`).

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::vocab::is_variable_name;
use super::{Formula, Var, Vocabulary};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Var(Var),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Equals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(name) => format!("`{name}`"),
            Tok::Var(v) => format!("`v{v}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'=' => Tok::Equals,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                if is_variable_name(word) {
                    let index = word[1..].parse::<Var>().map_err(|_| syntax(start, "variable index too large"))?;
                    Tok::Var(index)
                } else {
                    Tok::Name(word.to_string())
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    /// `None` when symbols are inferred from their first use.
    vocab: Option<&'a Vocabulary>,
    n: usize,
    inferred: BTreeMap<String, usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Var(v) => {
                if v >= self.n {
                    return Err(Error::VariableOutOfRange { index: v, n: self.n });
                }
                self.bump();
                Ok(v)
            }
            other => Err(syntax(self.pos(), format!("expected a variable, found {}", other.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            lhs = lhs.iff(self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(lhs.implies(self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Name(word) if (word == "E" || word == "A") && matches!(self.peek2(), Tok::Var(_)) => {
                let universal = word == "A";
                self.bump();
                let v = self.var()?;
                self.expect(Tok::Dot)?;
                let body = Box::new(self.formula()?);
                Ok(if universal { Formula::Forall(v, body) } else { Formula::Exists(v, body) })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.bump() {
            Tok::LParen => {
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Var(i) => {
                if i >= self.n {
                    return Err(Error::VariableOutOfRange { index: i, n: self.n });
                }
                self.expect(Tok::Equals)?;
                let j = self.var()?;
                Ok(Formula::Eq(i, j))
            }
            Tok::Name(word) if word == "true" => Ok(Formula::True),
            Tok::Name(word) if word == "false" => Ok(Formula::False),
            Tok::Name(name) => {
                let declared = match self.vocab {
                    Some(vocab) => Some(vocab.arity(&name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?),
                    None => self.inferred.get(&name).copied(),
                };
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                args.push(self.var()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.var()?);
                }
                self.expect(Tok::RParen)?;
                let arity = declared.unwrap_or(args.len());
                if self.vocab.is_none() {
                    self.inferred.insert(name.clone(), arity);
                }
                if args.len() != arity {
                    return Err(Error::ArityMismatch { symbol: name, expected: arity, found: args.len() });
                }
                Ok(Formula::Atom(name, args))
            }
            other => Err(syntax(pos, format!("expected a formula, found {}", other.describe()))),
        }
    }
}

fn run(mut parser: Parser<'_>) -> Result<(Formula, BTreeMap<String, usize>)> {
    let f = parser.formula()?;
    if *parser.peek() != Tok::End {
        return Err(syntax(parser.pos(), format!("unexpected {}", parser.peek().describe())));
    }
    Ok((f, parser.inferred))
}

/// Parses `text` as a formula over `vocab` (variables `v0 .. v(n-1)`).
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let parser = Parser { toks: lex(text)?, at: 0, vocab: Some(vocab), n: vocab.n(), inferred: BTreeMap::new() };
    Ok(run(parser)?.0)
}

/// Parses `text` with `n` variables, reading each symbol's arity off its first
/// occurrence. Returns the formula and the symbols it uses.
pub fn parse_formula_inferring(text: &str, n: usize) -> Result<(Formula, Vocabulary)> {
    let parser = Parser { toks: lex(text)?, at: 0, vocab: None, n, inferred: BTreeMap::new() };
    let (f, symbols) = run(parser)?;
    Ok((f, Vocabulary::with_symbols(n, symbols)?))
}

#[cfg(feature = "serde")]
impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::render_formula(self))
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let text = <alloc::borrow::Cow<'de, str>>::deserialize(deserializer)?;
        let parser = Parser {
            toks: lex(&text).map_err(serde::de::Error::custom)?,
            at: 0,
            vocab: None,
            n: usize::MAX,
            inferred: BTreeMap::new(),
        };
        run(parser).map(|(f, _)| f).map_err(serde::de::Error::custom)
    }
}
