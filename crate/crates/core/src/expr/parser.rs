//! Recursive-descent parser for the scalar expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' integer)?
//! base   := number | 'i' | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Function idents: `exp`, `sin`, `cos`, `sinh`, `cosh`.  `i` is the
//! imaginary unit.  Error positions are byte offsets into the input.

use num_complex::Complex64;

use super::ast::{self, Node};
use crate::chart::Chart;
use crate::error::{Error, Result};

const FUNCTIONS: [&str; 5] = ["exp", "sin", "cos", "sinh", "cosh"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        loop {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos >= self.src.len() {
                out.push((Tok::Eof, self.pos));
                return Ok(out);
            }
            let start = self.pos;
            let c = self.src[self.pos];
            let tok = match c {
                b'+' => {
                    self.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    self.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    self.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    self.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    self.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' | b'.' => self.number(start)?,
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
                }
                other => {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // `e` belongs to an identifier, not this literal
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Tok::Number)
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("bad number literal `{}`", text),
            })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    chart: &'a Chart,
}

pub fn parse(text: &str, chart: &Chart) -> Result<Node> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, at: 0, chart };
    let node = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(node),
        _ => Err(p.err("unexpected token after expression")),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ast::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ast::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = ast::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = ast::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            return Ok(ast::neg(self.factor()?));
        }
        let base = self.base()?;
        if matches!(self.peek(), Tok::Caret) {
            self.bump();
            let negative = if matches!(self.peek(), Tok::Minus) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Tok::Number(x) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => {
                    let e = x as i32;
                    return Ok(ast::pow(base, if negative { -e } else { e }));
                }
                _ => return Err(self.err("expected integer exponent after `^`")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Node> {
        match self.peek().clone() {
            Tok::Number(x) => {
                self.bump();
                Ok(ast::real(x))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                if name == "i" {
                    return Ok(ast::constant(Complex64::new(0.0, 1.0)));
                }
                if matches!(self.peek(), Tok::LParen) {
                    if !FUNCTIONS.contains(&name.as_str()) {
                        return Err(Error::Syntax {
                            pos,
                            msg: format!("unknown function `{}`", name),
                        });
                    }
                    self.bump();
                    let arg = self.expr()?;
                    match self.bump() {
                        Tok::RParen => Ok(ast::apply_fn(&name, arg).expect("known function")),
                        _ => Err(self.err("expected `)` after function argument")),
                    }
                } else {
                    match self.chart.coord_index(&name) {
                        Some(i) => Ok(ast::var(i)),
                        None => Err(Error::UnknownVariable { name, pos }),
                    }
                }
            }
            _ => Err(self.err("expected expression")),
        }
    }
}
