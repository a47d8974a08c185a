//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula   := or
//! or        := and ('||' and)*
//! and       := until ('&&' until)*
//! until     := unary ('U' interval? until)?          (right-associative)
//! unary     := '!' unary
//!            | ('G'|'A') interval? '(' formula ')'   (always)
//!            | ('F'|'E') interval? '(' formula ')'   (eventually)
//!            | '(' formula ')'
//!            | predicate
//! predicate := expr op number
//! expr      := ['-'|'+'] term (('+'|'-') term)*
//! term      := number '*' ident | ident | number
//! interval  := '[' number ',' number ']'             (decimal seconds)
//! op        := '<' | '<=' | '>' | '>='
//! ```
//!
//! `G A F E U` are reserved operator letters, not signal names.
//! Whitespace is insignificant.

use std::fmt;

use thiserror::Error;

use crate::ast::{Comparator, Formula, Interval, SignalExpr, Term};

#[derive(Debug, Error, PartialEq)]
#[error("{}", self.render())]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

impl ParseError {
    fn render(&self) -> String {
        let mut s = format!("syntax error at {}:{}: {}", self.line, self.col, self.message);
        if !self.expected.is_empty() {
            s.push_str(&format!(" (expected {})", self.expected.join(", ")));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    AndAnd,
    OrOr,
    Bang,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::AndAnd => write!(f, "`&&`"),
            Tok::OrOr => write!(f, "`||`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Le => write!(f, "`<=`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::Ge => write!(f, "`>=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn error(&self, message: String, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message,
            expected,
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump(c);
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line,
                    col,
                });
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.bump(c);
                    Tok::LParen
                }
                ')' => {
                    self.bump(c);
                    Tok::RParen
                }
                '[' => {
                    self.bump(c);
                    Tok::LBracket
                }
                ']' => {
                    self.bump(c);
                    Tok::RBracket
                }
                ',' => {
                    self.bump(c);
                    Tok::Comma
                }
                '+' => {
                    self.bump(c);
                    Tok::Plus
                }
                '-' => {
                    self.bump(c);
                    Tok::Minus
                }
                '*' => {
                    self.bump(c);
                    Tok::Star
                }
                '&' => {
                    self.bump(c);
                    if self.peek() == Some('&') {
                        self.bump('&');
                        Tok::AndAnd
                    } else {
                        return Err(self.error("stray `&`".into(), vec!["&&"]));
                    }
                }
                '|' => {
                    self.bump(c);
                    if self.peek() == Some('|') {
                        self.bump('|');
                        Tok::OrOr
                    } else {
                        return Err(self.error("stray `|`".into(), vec!["||"]));
                    }
                }
                '!' => {
                    self.bump(c);
                    if self.peek() == Some('=') {
                        return Err(ParseError {
                            line,
                            col,
                            message: "unknown comparator `!=`".into(),
                            expected: vec!["<", "<=", ">", ">="],
                        });
                    }
                    Tok::Bang
                }
                '=' => {
                    self.bump(c);
                    if self.peek() == Some('=') {
                        self.bump('=');
                    }
                    return Err(ParseError {
                        line,
                        col,
                        message: "unknown comparator `=`".into(),
                        expected: vec!["<", "<=", ">", ">="],
                    });
                }
                '<' => {
                    self.bump(c);
                    if self.peek() == Some('=') {
                        self.bump('=');
                        Tok::Le
                    } else {
                        Tok::Lt
                    }
                }
                '>' => {
                    self.bump(c);
                    if self.peek() == Some('=') {
                        self.bump('=');
                        Tok::Ge
                    } else {
                        Tok::Gt
                    }
                }
                _ if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.peek().is_some_and(|d| d.is_ascii_digit()) {
                        self.bump('0');
                    }
                    if self.peek() == Some('.') {
                        self.bump('.');
                        if !self.peek().is_some_and(|d| d.is_ascii_digit()) {
                            return Err(self.error("malformed number".into(), vec!["digit"]));
                        }
                        while self.peek().is_some_and(|d| d.is_ascii_digit()) {
                            self.bump('0');
                        }
                    }
                    let text = &self.src[start..self.pos];
                    let value: f64 = text.parse().map_err(|_| ParseError {
                        line,
                        col,
                        message: format!("malformed number `{text}`"),
                        expected: vec![],
                    })?;
                    Tok::Number(value)
                }
                _ if c.is_ascii_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while self
                        .peek()
                        .is_some_and(|d| d.is_ascii_alphanumeric() || d == '_')
                    {
                        self.bump('a');
                    }
                    Tok::Ident(self.src[start..self.pos].to_string())
                }
                other => {
                    return Err(self.error(format!("unexpected character `{other}`"), vec![]));
                }
            };
            out.push(Spanned { tok, line, col });
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn advance(&mut self) -> Spanned {
        let s = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        s
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        let s = self.peek();
        let what = if s.tok == Tok::Eof {
            "unexpected end of input".to_string()
        } else {
            format!("unexpected {}", s.tok)
        };
        ParseError {
            line: s.line,
            col: s.col,
            message: what,
            expected,
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(vec![name]))
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek().tok == Tok::OrOr {
            self.advance();
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_until()?;
        while self.peek().tok == Tok::AndAnd {
            self.advance();
            let rhs = self.parse_until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_unary()?;
        if let Tok::Ident(name) = &self.peek().tok {
            if name == "U" {
                self.advance();
                let interval = self.parse_optional_interval()?;
                let rhs = self.parse_until()?;
                return Ok(Formula::until(interval, lhs, rhs));
            }
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        match &self.peek().tok {
            Tok::Bang => {
                self.advance();
                Ok(Formula::not(self.parse_unary()?))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.parse_or()?;
                self.expect(Tok::RParen, ")")?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "G" || name == "A" => {
                self.advance();
                let interval = self.parse_optional_interval()?;
                self.expect(Tok::LParen, "(")?;
                let inner = self.parse_or()?;
                self.expect(Tok::RParen, ")")?;
                Ok(Formula::always(interval, inner))
            }
            Tok::Ident(name) if name == "F" || name == "E" => {
                self.advance();
                let interval = self.parse_optional_interval()?;
                self.expect(Tok::LParen, "(")?;
                let inner = self.parse_or()?;
                self.expect(Tok::RParen, ")")?;
                Ok(Formula::eventually(interval, inner))
            }
            Tok::Ident(name) if name == "U" => Err(self.unexpected(vec!["formula"])),
            Tok::Ident(_) | Tok::Number(_) | Tok::Minus | Tok::Plus => self.parse_predicate(),
            _ => Err(self.unexpected(vec!["formula"])),
        }
    }

    fn parse_optional_interval(&mut self) -> Result<Interval, ParseError> {
        if self.peek().tok != Tok::LBracket {
            return Ok(Interval::Unbounded);
        }
        let open = self.advance();
        let lo = self.parse_signed_number()?;
        self.expect(Tok::Comma, ",")?;
        let hi = self.parse_signed_number()?;
        self.expect(Tok::RBracket, "]")?;
        Interval::bounded(lo, hi).map_err(|_| {
            let message = if lo < 0.0 || hi < 0.0 {
                format!("negative interval bound in [{lo},{hi}]")
            } else {
                format!("reversed interval bounds [{lo},{hi}]")
            };
            ParseError {
                line: open.line,
                col: open.col,
                message,
                expected: vec![],
            }
        })
    }

    fn parse_signed_number(&mut self) -> Result<f64, ParseError> {
        let mut sign = 1.0;
        loop {
            match self.peek().tok {
                Tok::Minus => {
                    sign = -sign;
                    self.advance();
                }
                Tok::Plus => {
                    self.advance();
                }
                _ => break,
            }
        }
        match self.peek().tok {
            Tok::Number(n) => {
                self.advance();
                Ok(sign * n)
            }
            _ => Err(self.unexpected(vec!["number"])),
        }
    }

    /// `expr op const`; every constant on the left moves into the offset,
    /// and the right-hand constant is subtracted from it.
    fn parse_predicate(&mut self) -> Result<Formula, ParseError> {
        let mut terms = Vec::new();
        let mut offset = 0.0;
        let mut sign = match self.peek().tok {
            Tok::Minus => {
                self.advance();
                -1.0
            }
            Tok::Plus => {
                self.advance();
                1.0
            }
            _ => 1.0,
        };
        loop {
            match self.peek().tok.clone() {
                Tok::Number(n) => {
                    self.advance();
                    if self.peek().tok == Tok::Star {
                        self.advance();
                        match self.peek().tok.clone() {
                            Tok::Ident(name) => {
                                self.advance();
                                terms.push(Term::new(sign * n, name));
                            }
                            _ => return Err(self.unexpected(vec!["identifier"])),
                        }
                    } else {
                        offset += sign * n;
                    }
                }
                Tok::Ident(name) => {
                    self.advance();
                    terms.push(Term::new(sign, name));
                }
                _ => return Err(self.unexpected(vec!["number", "identifier"])),
            }
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    sign = 1.0;
                }
                Tok::Minus => {
                    self.advance();
                    sign = -1.0;
                }
                _ => break,
            }
        }
        let cmp = match self.peek().tok {
            Tok::Lt => Comparator::Lt,
            Tok::Le => Comparator::Le,
            Tok::Gt => Comparator::Gt,
            Tok::Ge => Comparator::Ge,
            _ => return Err(self.unexpected(vec!["<", "<=", ">", ">="])),
        };
        self.advance();
        let rhs = self.parse_signed_number()?;
        Ok(Formula::pred(
            SignalExpr::new(terms, offset - rhs),
            cmp,
        ))
    }
}

/// Parses a formula; pretty-printing the result and re-parsing yields a
/// structurally identical tree.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let mut parser = Parser { toks, at: 0 };
    let f = parser.parse_or()?;
    if parser.peek().tok != Tok::Eof {
        return Err(parser.unexpected(vec!["end of input"]));
    }
    Ok(f)
}
