//! Recursive-descent parser and printer for the expression DSL.
//!
//! Grammar (ASCII, whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := integer | name | '(' expr ')' | '-' base
//! ```
//!
//! Note one consequence of `base := '-' base`: the exponent of a factor
//! applies to the (possibly negated) base, so `-k^2` is `(-k)^2`. The
//! printer never emits that shape; data files spell such terms `-1*k^2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Ratio, SymError, VarId};

/// Abstract syntax tree of a DSL expression.
///
/// Names are kept as strings: lowering resolves them through an
/// environment, so the same grammar serves both the bare variable universe
/// and proof scripts that reference earlier results by name.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprAst {
    Int(BigInt),
    Name(String),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T, SymError> {
        Err(SymError::Parse {
            offset: at,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }


    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, SymError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.error(start, "expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ascii");
        Ok(text.parse().expect("digits parse as BigInt"))
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii")
    }

    fn base(&mut self) -> Result<ExprAst, SymError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(ExprAst::Neg(Box::new(self.base()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return self.error(self.pos, "expected `)`");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(ExprAst::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => Ok(ExprAst::Name(self.name())),
            Some(c) => self.error(self.pos, format!("unexpected byte `{}`", c as char)),
            None => self.error(self.pos, "unexpected end of input"),
        }
    }

    fn factor(&mut self) -> Result<ExprAst, SymError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let negative = self.eat(b'-');
            let n = self.integer()?;
            let n = n.to_i32().map_or_else(
                || self.error(at, "exponent out of range"),
                |n| Ok(if negative { -n } else { n }),
            )?;
            return Ok(ExprAst::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn term(&mut self) -> Result<ExprAst, SymError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = ExprAst::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = ExprAst::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr(&mut self) -> Result<ExprAst, SymError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = ExprAst::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = ExprAst::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Parse DSL text into an AST. Names are not resolved here.
pub fn parse_expr(text: &str) -> Result<ExprAst, SymError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(SymError::Parse {
            offset: 0,
            message: "empty input".into(),
        });
    }
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(SymError::Parse {
            offset: p.pos,
            message: "trailing input".into(),
        });
    }
    Ok(ast)
}

/// Lower an AST to a rational function, resolving names through `env`.
pub fn lower(
    ast: &ExprAst,
    env: &dyn Fn(&str) -> Option<Ratio>,
) -> Result<Ratio, SymError> {
    match ast {
        ExprAst::Int(n) => Ok(Ratio::constant(num_rational::BigRational::from_integer(
            n.clone(),
        ))),
        ExprAst::Name(name) => env(name).ok_or_else(|| SymError::UnknownName(name.clone())),
        ExprAst::Neg(x) => Ok(lower(x, env)?.neg()),
        ExprAst::Add(x, y) => lower(x, env)?.add(&lower(y, env)?),
        ExprAst::Sub(x, y) => lower(x, env)?.sub(&lower(y, env)?),
        ExprAst::Mul(x, y) => lower(x, env)?.mul(&lower(y, env)?),
        ExprAst::Div(x, y) => lower(x, env)?.div(&lower(y, env)?),
        ExprAst::Pow(x, n) => lower(x, env)?.pow(*n),
    }
}

/// Parse and lower over the bare variable universe.
pub fn parse_ratio(text: &str) -> Result<Ratio, SymError> {
    lower(&parse_expr(text)?, &|name| {
        VarId::from_name(name).map(Ratio::var)
    })
}

impl ExprAst {
    fn precedence(&self) -> u8 {
        match self {
            ExprAst::Add(..) | ExprAst::Sub(..) => 1,
            ExprAst::Mul(..) | ExprAst::Div(..) => 2,
            ExprAst::Neg(..) => 3,
            ExprAst::Pow(..) => 4,
            ExprAst::Int(..) | ExprAst::Name(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            f.write_str("(")?;
        }
        match self {
            ExprAst::Int(n) => write!(f, "{n}")?,
            ExprAst::Name(s) => f.write_str(s)?,
            ExprAst::Neg(x) => {
                f.write_str("-")?;
                x.fmt_prec(f, 3)?;
            }
            ExprAst::Add(x, y) => {
                x.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                y.fmt_prec(f, 2)?;
            }
            ExprAst::Sub(x, y) => {
                x.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                y.fmt_prec(f, 2)?;
            }
            ExprAst::Mul(x, y) => {
                x.fmt_prec(f, 2)?;
                f.write_str("*")?;
                y.fmt_prec(f, 3)?;
            }
            ExprAst::Div(x, y) => {
                x.fmt_prec(f, 2)?;
                f.write_str("/")?;
                y.fmt_prec(f, 3)?;
            }
            ExprAst::Pow(x, n) => {
                // `^` binds to a full base, so anything composite (and any
                // negation, see the module note) gets parenthesized.
                let needs = !matches!(**x, ExprAst::Int(_) | ExprAst::Name(_));
                if needs {
                    f.write_str("(")?;
                }
                x.fmt_prec(f, 0)?;
                if needs {
                    f.write_str(")")?;
                }
                if *n < 0 {
                    write!(f, "^-{}", n.unsigned_abs())?;
                } else {
                    write!(f, "^{n}")?;
                }
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
