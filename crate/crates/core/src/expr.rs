//! Small arithmetic expression language for profiles of one variable `x`.
//!
//! Grammar: numeric literals, the variable `x`, `+ - * / ^`, unary minus,
//! parentheses and the functions `exp(·)` and `sech(·)`. `^` binds tighter
//! than unary minus and is right-associative, so `-x^2` is `-(x^2)`.
//!
//! Expressions are evaluated on second-order jets, giving exact first and
//! second derivatives without finite differences.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Value with its first and second derivative with respect to `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn constant(value: f64) -> Self {
        Self {
            value,
            d1: 0.0,
            d2: 0.0,
        }
    }

    pub const fn variable(x: f64) -> Self {
        Self {
            value: x,
            d1: 1.0,
            d2: 0.0,
        }
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            value: f,
            d1: df * self.d1,
            d2: df * self.d2 + d2f * self.d1 * self.d1,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let v = self.value;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn sech(self) -> Self {
        let s = 1.0 / self.value.cosh();
        let t = self.value.tanh();
        self.chain(s, -s * t, s * (t * t - s * s))
    }

    pub fn powf(self, c: f64) -> Self {
        let v = self.value;
        if c == 0.0 {
            return Jet::constant(1.0);
        }
        if c.fract() == 0.0 && c.abs() < i32::MAX as f64 {
            let n = c as i32;
            let (f, df, d2f) = match n {
                1 => (v, 1.0, 0.0),
                2 => (v * v, 2.0 * v, 2.0),
                _ => (v.powi(n), c * v.powi(n - 1), c * (c - 1.0) * v.powi(n - 2)),
            };
            return self.chain(f, df, d2f);
        }
        self.chain(v.powf(c), c * v.powf(c - 1.0), c * (c - 1.0) * v.powf(c - 2.0))
    }

    pub fn pow(self, exponent: Jet) -> Self {
        if exponent.d1 == 0.0 && exponent.d2 == 0.0 {
            self.powf(exponent.value)
        } else {
            (exponent * self.ln()).exp()
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            value: self.value - o.value,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let q = self.value / o.value;
        let q1 = (self.d1 - q * o.d1) / o.value;
        let q2 = (self.d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.value;
        Jet {
            value: q,
            d1: q1,
            d2: q2,
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            value: -self.value,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            src_len: src.len(),
        };
        let expr = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(Error::Expression {
                position: tok.at,
                message: format!("unexpected `{}`", tok.kind),
            });
        }
        Ok(expr)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Call(Func::Exp, e) => e.eval(x).exp(),
            Expr::Call(Func::Sech, e) => 1.0 / e.eval(x).cosh(),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => pow_scalar(a, b),
                }
            }
        }
    }

    pub fn jet(&self, x: f64) -> Jet {
        match self {
            Expr::Num(v) => Jet::constant(*v),
            Expr::X => Jet::variable(x),
            Expr::Neg(e) => -e.jet(x),
            Expr::Call(Func::Exp, e) => e.jet(x).exp(),
            Expr::Call(Func::Sech, e) => e.jet(x).sech(),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.jet(x), b.jet(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.pow(b),
                }
            }
        }
    }

    /// True if the expression does not reference `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::X => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }
}

fn pow_scalar(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() < i32::MAX as f64 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Call(Func::Exp, e) => write!(f, "exp({e})"),
            Expr::Call(Func::Sech, e) => write!(f, "sech({e})"),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Num(v) => write!(f, "{v}"),
            TokenKind::Ident(s) => write!(f, "{s}"),
            TokenKind::Op(c) => write!(f, "{c}"),
            TokenKind::LParen => write!(f, "("),
            TokenKind::RParen => write!(f, ")"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokenKind,
    at: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent part, only when followed by digits.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value = text.parse::<f64>().map_err(|_| Error::Expression {
                position: start,
                message: format!("malformed number `{text}`"),
            })?;
            tokens.push(Token {
                kind: TokenKind::Num(value),
                at: start,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident(src[start..i].to_string()),
                at: start,
            });
        } else if "+-*/^".contains(c) {
            tokens.push(Token {
                kind: TokenKind::Op(c),
                at: i,
            });
            i += 1;
        } else if c == '(' {
            tokens.push(Token {
                kind: TokenKind::LParen,
                at: i,
            });
            i += 1;
        } else if c == ')' {
            tokens.push(Token {
                kind: TokenKind::RParen,
                at: i,
            });
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(Error::Expression {
                position: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c), ..
            }) => Some(*c),
            _ => None,
        }
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        let position = self.peek().map_or(self.src_len, |t| t.at);
        Error::Expression {
            position,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek() else {
            return Err(self.err_here("unexpected end of expression"));
        };
        match &tok.kind {
            TokenKind::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(*v))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                let func = match name.as_str() {
                    "x" => return Ok(Expr::X),
                    "exp" => Func::Exp,
                    "sech" => Func::Sech,
                    other => {
                        return Err(Error::Expression {
                            position: tok.at,
                            message: format!("unknown identifier `{other}` (known: x, exp, sech)"),
                        })
                    }
                };
                match self.peek() {
                    Some(Token {
                        kind: TokenKind::LParen,
                        ..
                    }) => self.pos += 1,
                    _ => return Err(self.err_here(format!("expected `(` after `{name}`"))),
                }
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            other => Err(Error::Expression {
                position: tok.at,
                message: format!("unexpected `{other}`"),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here("expected `)`")),
        }
    }
}
