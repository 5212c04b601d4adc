//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula  := imp
//! imp      := disj [ "->" imp ]            (right-associative)
//! disj     := conj { "|" conj }            (left-associative)
//! conj     := unary { "&" unary }          (left-associative)
//! unary    := "~" unary | modal unary | atomexpr
//! modal    := "W" | "box" | "dia" | "bbox" | "bullet" | "N" | "circ"
//! atomexpr := ident | "false" | "(" formula ")"
//! ident    := [a-z][a-z0-9_]*
//! ```
//!
//! `~f` desugars to `f -> false` and `circ f` to `~ bullet f` during
//! parsing; neither has an AST node of its own. A single uppercase letter
//! other than `W`/`N` is a metavariable and is only legal when parsing a
//! scheme (see [`crate::scheme`]).

use crate::formula::{Formula, ModalOp};
use std::fmt;

/// Syntax error with a 1-based character position into the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Amp,
    Pipe,
    Arrow,
    Tilde,
    False,
    Op(ModalOp),
    Circ,
    Ident(String),
    Meta(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Amp => write!(f, "'&'"),
            Tok::Pipe => write!(f, "'|'"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::Tilde => write!(f, "'~'"),
            Tok::False => write!(f, "'false'"),
            Tok::Op(op) => write!(f, "'{}'", op.keyword()),
            Tok::Circ => write!(f, "'circ'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Meta(c) => write!(f, "metavariable '{c}'"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((col, Tok::RParen));
                i += 1;
            }
            '&' => {
                toks.push((col, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((col, Tok::Pipe));
                i += 1;
            }
            '~' => {
                toks.push((col, Tok::Tilde));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((col, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError::new(col, "expected '->'".to_string()));
                }
            }
            'a'..='z' => {
                let start = i;
                while i < chars.len() && matches!(chars[i], 'a'..='z' | '0'..='9' | '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "false" => Tok::False,
                    "box" => Tok::Op(ModalOp::Box),
                    "dia" => Tok::Op(ModalOp::Dia),
                    "bbox" => Tok::Op(ModalOp::BlackBox),
                    "bullet" => Tok::Op(ModalOp::Bullet),
                    "circ" => Tok::Circ,
                    _ => Tok::Ident(word),
                };
                toks.push((col, tok));
            }
            'W' => {
                toks.push((col, Tok::Op(ModalOp::W)));
                i += 1;
            }
            'N' => {
                toks.push((col, Tok::Op(ModalOp::Nop)));
                i += 1;
            }
            'A'..='Z' => {
                toks.push((col, Tok::Meta(c)));
                i += 1;
            }
            _ => {
                return Err(ParseError::new(col, format!("unexpected character '{c}'")));
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_column: usize,
    allow_metavariables: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.end_column)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.disj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.next();
            acc = Formula::or(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.next();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Op(op)) => {
                let op = *op;
                self.next();
                Ok(Formula::modal(op, self.unary()?))
            }
            Some(Tok::Circ) => {
                self.next();
                Ok(Formula::circ(self.unary()?))
            }
            _ => self.atomexpr(),
        }
    }

    fn atomexpr(&mut self) -> Result<Formula, ParseError> {
        let col = self.column();
        match self.next() {
            Some(Tok::Ident(name)) => Ok(Formula::Atom(name)),
            Some(Tok::False) => Ok(Formula::Bottom),
            Some(Tok::LParen) => {
                let inner = self.imp()?;
                let col = self.column();
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => Err(ParseError::new(col, format!("expected ')', found {t}"))),
                    None => Err(ParseError::new(col, "expected ')', found end of input")),
                }
            }
            Some(Tok::Meta(c)) if self.allow_metavariables => Ok(Formula::Atom(c.to_string())),
            Some(Tok::Meta(c)) => Err(ParseError::new(
                col,
                format!("metavariable '{c}' is only allowed in schemes"),
            )),
            Some(t) => Err(ParseError::new(col, format!("expected a formula, found {t}"))),
            None => Err(ParseError::new(col, "expected a formula, found end of input")),
        }
    }
}

fn parse_with(text: &str, allow_metavariables: bool) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let end_column = text.chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        end_column,
        allow_metavariables,
    };
    let f = p.imp()?;
    match p.peek() {
        None => Ok(f),
        Some(t) => Err(ParseError::new(
            p.column(),
            format!("unexpected trailing {t}"),
        )),
    }
}

/// Parse a formula. Metavariables are rejected; use
/// [`crate::scheme::Scheme::parse`] for schemes.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, false)
}

pub(crate) fn parse_allowing_metavariables(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, true)
}
