//! Recursive-descent parser for the formula grammar.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use super::formula::{Atom, AtomKind, Formula};
use super::term::Term;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown identifier `{name}` at {line}:{column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
}

const RESERVED: [&str; 8] = ["E", "A", "true", "false", "U", "I", "e_in", "e_out"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Lt,
    Le,
    Eq,
    Ne,
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::Tilde => "~",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    Tok::Arrow => "->",
                    Tok::Lt => "<",
                    Tok::Le => "<=",
                    Tok::Eq => "=",
                    Tok::Ne => "!=",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Star => "*",
                    Tok::Slash => "/",
                    _ => ".",
                };
                format!("`{s}`")
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: start_line, column: start_col });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('!', Some('=')) => (Tok::Ne, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('&', _) => (Tok::Amp, 1),
            ('|', _) => (Tok::Bar, 1),
            ('<', _) => (Tok::Lt, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('.', _) => (Tok::Dot, 1),
            (d, _) if d.is_ascii_digit() => {
                let end = (i..chars.len()).find(|&j| !chars[j].is_ascii_digit()).unwrap_or(chars.len());
                let digits: String = chars[i..end].iter().collect();
                (Tok::Int(BigInt::from_str(&digits).expect("digits")), end - i)
            }
            (a, _) if a.is_ascii_alphabetic() || a == '_' => {
                let end = (i..chars.len())
                    .find(|&j| !(chars[j].is_ascii_alphanumeric() || chars[j] == '_'))
                    .unwrap_or(chars.len());
                (Tok::Ident(chars[i..end].iter().collect()), end - i)
            }
            (other, _) => {
                return Err(ParseError::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        push(&mut out, tok);
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError::Syntax { line: s.line, column: s.column, message: message.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = alloc::vec![self.conjunction()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = alloc::vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(q) if (q == "E" || q == "A") => {
                self.bump();
                let var = match self.bump() {
                    Spanned { tok: Tok::Ident(v), line, column } => {
                        if RESERVED.contains(&v.as_str()) {
                            return Err(ParseError::Syntax {
                                line,
                                column,
                                message: format!("reserved word `{v}` cannot be bound"),
                            });
                        }
                        v
                    }
                    _ => {
                        self.pos -= 1;
                        return self.unexpected("a variable after the quantifier");
                    }
                };
                self.expect(Tok::Dot, "`.` after the bound variable")?;
                let body = Box::new(self.formula()?);
                Ok(if q == "E" { Formula::Exists(var, body) } else { Formula::Forall(var, body) })
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                // Either a parenthesized formula or an atom whose left term
                // starts with a parenthesized term, as in `(x + y) < z`.
                let start = self.pos;
                self.bump();
                let inner = self.formula().and_then(|f| {
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(f)
                });
                match inner {
                    Ok(f) if !self.continues_term() => Ok(f),
                    Ok(_) => {
                        self.pos = start;
                        self.atom()
                    }
                    Err(e) => {
                        self.pos = start;
                        self.atom().map_err(|_| e)
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        for (name, kind) in [("U", AtomKind::InU), ("I", AtomKind::InI)] {
            if self.is_ident(name) && *self.peek_at(1) == Tok::LParen {
                self.bump();
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)` closing the membership atom")?;
                return Ok(Formula::Atom(Atom::new(kind, t)));
            }
        }
        let lhs = self.term()?;
        let kind = match self.peek() {
            Tok::Lt => AtomKind::Lt,
            Tok::Le => AtomKind::Le,
            Tok::Eq => AtomKind::Eq,
            Tok::Ne => AtomKind::Ne,
            _ => return self.unexpected("a relation (`<`, `<=`, `=`, `!=`)"),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Formula::Atom(Atom::new(kind, lhs - rhs)))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.product()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(-self.product()?)
            }
            Tok::Int(n) => {
                self.bump();
                let q = if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump().tok {
                        Tok::Int(d) if d != BigInt::from(0) => Rational::new(n, d),
                        _ => {
                            self.pos -= 1;
                            return self.unexpected("a nonzero denominator");
                        }
                    }
                } else {
                    Rational::from_integer(n)
                };
                if *self.peek() == Tok::Star {
                    self.bump();
                    Ok(self.product()?.scale(&q))
                } else {
                    Ok(Term::constant(q))
                }
            }
            Tok::Ident(name) => {
                let here = &self.toks[self.pos];
                let (line, column) = (here.line, here.column);
                match name.as_str() {
                    "e_in" => {
                        self.bump();
                        Ok(Term::e_in())
                    }
                    "e_out" => {
                        self.bump();
                        Ok(Term::e_out())
                    }
                    _ if *self.peek_at(1) == Tok::LParen || RESERVED.contains(&name.as_str()) => {
                        Err(ParseError::UnknownIdentifier { name, line, column })
                    }
                    _ => {
                        self.bump();
                        Ok(Term::var(&name))
                    }
                }
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)` closing the term")?;
                if *self.peek() == Tok::Star {
                    let Some(q) = t.as_rational().cloned() else {
                        return self.error("only a rational constant may multiply a term");
                    };
                    self.bump();
                    return Ok(self.product()?.scale(&q));
                }
                Ok(t)
            }
            _ => self.unexpected("a term"),
        }
    }

    /// Whether the next token can only continue a term or an atom.
    fn continues_term(&self) -> bool {
        matches!(self.peek(), Tok::Plus | Tok::Minus | Tok::Star | Tok::Lt | Tok::Le | Tok::Eq | Tok::Ne)
    }
}

/// Parses a formula and renames clashing bound variables apart.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(rename_bound_apart(&f))
}

/// Parses a standalone term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(t)
}

/// Renames bound variables so that no two binders share a name and none
/// shadows a free variable. Binders that already satisfy this are kept, so
/// the operation is idempotent.
pub fn rename_bound_apart(f: &Formula) -> Formula {
    let mut used: BTreeSet<String> = f.free_vars();
    let all = f.all_vars();
    go(f, &mut used, &all)
}

pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit()).trim_end_matches('_');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..).map(|k| format!("{stem}_{k}")).find(|n| !taken(n) && !RESERVED.contains(&n.as_str())).unwrap()
}

fn go(f: &Formula, used: &mut BTreeSet<String>, all: &BTreeSet<String>) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::Not(Box::new(go(g, used, all))),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, used, all)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, used, all)).collect()),
        Formula::Implies(a, b) => {
            let a = go(a, used, all);
            Formula::Implies(Box::new(a), Box::new(go(b, used, all)))
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let (name, body) = if used.contains(v) {
                let fresh = fresh_name(v, |n| used.contains(n) || all.contains(n));
                let renamed = super::normal::substitute(body, v, &Term::var(&fresh));
                (fresh, renamed)
            } else {
                (v.clone(), (**body).clone())
            };
            used.insert(name.clone());
            let body = Box::new(go(&body, used, all));
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(name, body)
            } else {
                Formula::Forall(name, body)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
