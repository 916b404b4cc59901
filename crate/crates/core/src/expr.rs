//! Arithmetic expressions over the toroidal variable `x` and the frequency `k`.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := atom ('^' unary)?            right associative, binds tighter than unary minus
//! atom    := number | 'x' | 'k' | 'i' | 'pi'
//!          | func '(' expr ')'
//!          | '(' expr ')'
//!          | '<' expr '>'                 Japanese bracket (1 + |e|^2)^{1/2}
//! func    := 'exp' | 'sin' | 'cos' | 'abs' | 'sqrt'
//! number  := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! `a ^ b` with a real integral exponent is evaluated by repeated squaring, so
//! `(-1)^k` is exact; other exponents use the principal branch.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
    Sqrt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    X,
    K,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Bracket(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::X => true,
            Expr::Const(_) | Expr::K => false,
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Bracket(a) => a.depends_on_x(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_x() || b.depends_on_x()
            }
        }
    }

    pub fn eval(&self, x: f64, k: i64) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::X => Complex64::new(x, 0.0),
            Expr::K => Complex64::new(k as f64, 0.0),
            Expr::Neg(a) => -a.eval(x, k),
            Expr::Add(a, b) => a.eval(x, k) + b.eval(x, k),
            Expr::Sub(a, b) => a.eval(x, k) - b.eval(x, k),
            Expr::Mul(a, b) => a.eval(x, k) * b.eval(x, k),
            Expr::Div(a, b) => a.eval(x, k) / b.eval(x, k),
            Expr::Pow(a, b) => pow(a.eval(x, k), b.eval(x, k)),
            Expr::Call(f, a) => {
                let v = a.eval(x, k);
                match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Abs => Complex64::new(v.norm(), 0.0),
                    Func::Sqrt => v.sqrt(),
                }
            }
            Expr::Bracket(a) => {
                let v = a.eval(x, k);
                Complex64::new((1.0 + v.norm_sqr()).sqrt(), 0.0)
            }
        }
    }
}

fn pow(base: Complex64, exp: Complex64) -> Complex64 {
    if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= i32::MAX as f64 {
        let n = exp.re as i64;
        let mut acc = Complex64::new(1.0, 0.0);
        let mut b = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= b;
            }
            b *= b;
            e >>= 1;
        }
        return if n < 0 { acc.inv() } else { acc };
    }
    if base.im == 0.0 && base.re > 0.0 && exp.im == 0.0 {
        return Complex64::new(base.re.powf(exp.re), 0.0);
    }
    if base == Complex64::new(0.0, 0.0) {
        return base;
    }
    base.powc(exp)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'<') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b'>')?;
                Ok(Expr::Bracket(Box::new(e)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                let func = match ident {
                    "x" => return Ok(Expr::X),
                    "k" => return Ok(Expr::K),
                    "i" => return Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                    "pi" => return Ok(Expr::Const(Complex64::new(core::f64::consts::PI, 0.0))),
                    "exp" => Func::Exp,
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "abs" => Func::Abs,
                    "sqrt" => Func::Sqrt,
                    _ => {
                        self.pos = start;
                        return Err(self.error(&format!("unknown identifier '{ident}'")));
                    }
                };
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(self.error("malformed number"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            position: start,
            message: String::from("malformed number"),
        })?;
        Ok(Expr::Const(Complex64::new(value, 0.0)))
    }
}
