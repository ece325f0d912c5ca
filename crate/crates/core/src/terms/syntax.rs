//! Concrete syntax: lexer and recursive-descent parsers for both calculi.

use std::fmt;

use thiserror::Error;

use super::natural::NaturalTerm;
use super::position::Calculus;
use super::vanilla::VanillaTerm;
use super::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Lambda,
    Dot,
    Let,
    In,
    Eq,
    At,
    LParen,
    RParen,
    Arrow,
    Colon,
    Comma,
    Question,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Let => f.write_str("`let`"),
            Tok::In => f.write_str("`in`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::At => f.write_str("`@`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Question => f.write_str("`?`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '\\' | 'λ' => push(Tok::Lambda, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '@' => push(Tok::At, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '?' => push(Tok::Question, 1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut col),
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match word.as_str() {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    _ => Tok::Ident(word),
                };
                out.push(Spanned {
                    tok,
                    line: l0,
                    col: c0,
                });
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            msg: msg.into(),
        }
    }

    pub(crate) fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.peek())))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {other}"))),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(self.error(format!("unexpected {other}"))),
        }
    }

    fn natural(&mut self) -> Result<NaturalTerm, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                Ok(NaturalTerm::lam(Var::parse(&x), self.natural()?))
            }
            Tok::Let => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Eq)?;
                if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::At {
                    self.bump();
                    return Err(self.error("subtraction `@` is not part of the natural calculus"));
                }
                let s = self.natural()?;
                self.expect(Tok::In)?;
                let t = self.natural()?;
                Ok(NaturalTerm::esub(s, Var::parse(&x), t))
            }
            _ => {
                let mut acc = self.natural_atom()?;
                while matches!(self.peek(), Tok::Ident(_) | Tok::LParen) {
                    let a = self.natural_atom()?;
                    acc = NaturalTerm::app(acc, a);
                }
                Ok(acc)
            }
        }
    }

    fn natural_atom(&mut self) -> Result<NaturalTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(NaturalTerm::var(Var::parse(&x)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.natural()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.error(format!("expected a term, found {other}"))),
        }
    }

    fn vanilla(&mut self) -> Result<VanillaTerm, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                Ok(VanillaTerm::lam(Var::parse(&x), self.vanilla()?))
            }
            Tok::Let => {
                self.bump();
                let x = Var::parse(&self.ident()?);
                self.expect(Tok::Eq)?;
                if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::At {
                    let y = Var::parse(&self.ident()?);
                    self.bump();
                    let s = self.vanilla()?;
                    self.expect(Tok::In)?;
                    let t = self.vanilla()?;
                    return Ok(VanillaTerm::subtr(y, s, x, t));
                }
                let s = self.vanilla()?;
                self.expect(Tok::In)?;
                let t = self.vanilla()?;
                Ok(VanillaTerm::cut(s, x, t))
            }
            _ => {
                let t = self.vanilla_atom()?;
                if matches!(self.peek(), Tok::Ident(_) | Tok::LParen) {
                    return Err(self.error("application is not part of the vanilla calculus"));
                }
                Ok(t)
            }
        }
    }

    fn vanilla_atom(&mut self) -> Result<VanillaTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(VanillaTerm::var(Var::parse(&x)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.vanilla()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.error(format!("expected a term, found {other}"))),
        }
    }
}

pub fn parse_natural(src: &str) -> Result<NaturalTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.natural()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_vanilla(src: &str) -> Result<VanillaTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.vanilla()?;
    p.finish()?;
    Ok(t)
}

/// A parsed term of either calculus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyTerm {
    Natural(NaturalTerm),
    Vanilla(VanillaTerm),
}

impl AnyTerm {
    pub fn calculus(&self) -> Calculus {
        match self {
            AnyTerm::Natural(_) => Calculus::Natural,
            AnyTerm::Vanilla(_) => Calculus::Vanilla,
        }
    }
}

impl fmt::Display for AnyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyTerm::Natural(t) => t.fmt(f),
            AnyTerm::Vanilla(t) => t.fmt(f),
        }
    }
}

pub fn parse_term(calculus: Calculus, src: &str) -> Result<AnyTerm, ParseError> {
    match calculus {
        Calculus::Natural => parse_natural(src).map(AnyTerm::Natural),
        Calculus::Vanilla => parse_vanilla(src).map(AnyTerm::Vanilla),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn application_is_left_associative() {
        let t = parse_natural("a b c").unwrap();
        assert_eq!(
            t,
            NaturalTerm::app(
                NaturalTerm::app(NaturalTerm::var("a"), NaturalTerm::var("b")),
                NaturalTerm::var("c")
            )
        );
    }

    #[test]
    fn lambda_extends_right() {
        let t = parse_natural(r"\x. x y").unwrap();
        assert_eq!(
            t,
            NaturalTerm::lam(
                "x",
                NaturalTerm::app(NaturalTerm::var("x"), NaturalTerm::var("y"))
            )
        );
        assert_eq!(
            parse_natural("λx. x").unwrap(),
            parse_natural(r"\x. x").unwrap()
        );
    }

    #[test]
    fn subtraction_needs_at() {
        let t = parse_vanilla("let x = y @ z in x").unwrap();
        assert_eq!(
            t,
            VanillaTerm::subtr("y", VanillaTerm::var("z"), "x", VanillaTerm::var("x"))
        );
        let t = parse_vanilla("let x = y in x").unwrap();
        assert_eq!(
            t,
            VanillaTerm::cut(VanillaTerm::var("y"), "x", VanillaTerm::var("x"))
        );
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_natural("\\x.\n  x )").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        let e = parse_vanilla("x y").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        let e = parse_natural("let x = y @ z in x").unwrap_err();
        assert!(e.msg.contains("natural"));
        assert!(parse_natural("x $").is_err());
    }
}
