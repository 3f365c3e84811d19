use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Closed-form expression in the coordinates `x1, x2, x3`.
///
/// Grammar: numbers, `x1`..`x3` (also `x`, `y`, `z`, and `t` for `x1`),
/// `pi`, `+ - * / ^`, parentheses and the functions `sin`, `cos`, `exp`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse()
                .map_err(|_| Error::Expression(format!("bad number {text:?} at {start}")))?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Expression(format!("unexpected character {c:?} at {i}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Expression(format!("expected {op:?} at {}", self.at())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.at();
        let tok = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        match tok {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x1" | "x" | "t" => Ok(Expr::Var(0)),
                "x2" | "y" => Ok(Expr::Var(1)),
                "x3" | "z" => Ok(Expr::Var(2)),
                "pi" => Ok(Expr::Num(PI)),
                "sin" | "cos" | "exp" => {
                    self.expect('(')?;
                    let arg = Box::new(self.expr()?);
                    self.expect(')')?;
                    Ok(match name.as_str() {
                        "sin" => Expr::Sin(arg),
                        "cos" => Expr::Cos(arg),
                        _ => Expr::Exp(arg),
                    })
                }
                _ => Err(Error::Expression(format!("unknown identifier {name:?} at {at}"))),
            },
            Some(Tok::Op(c)) => Err(Error::Expression(format!("unexpected {c:?} at {at}"))),
            None => Err(Error::Expression("unexpected end of input".into())),
        }
    }
}

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => num(x + y),
        (Expr::Num(z), e) | (e, Expr::Num(z)) if z == 0.0 => e,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(e) => *e,
        e => Expr::Neg(Box::new(e)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    add(a, neg(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => num(x * y),
        (Expr::Num(z), _) | (_, Expr::Num(z)) if z == 0.0 => num(0.0),
        (Expr::Num(o), e) | (e, Expr::Num(o)) if o == 1.0 => e,
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(0.0), _) => num(0.0),
        (e, Expr::Num(1.0)) => e,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::Expression("empty expression".into()));
        }
        let mut p = Parser {
            toks,
            pos: 0,
            len: s.len(),
        };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return Err(Error::Expression(format!("trailing input at {}", p.at())));
        }
        Ok(e)
    }

    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(a) => x[*a],
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => match **b {
                Expr::Num(p) if p.fract() == 0.0 && p.abs() < 64.0 => a.eval(x).powi(p as i32),
                _ => a.eval(x).powf(b.eval(x)),
            },
            Expr::Sin(e) => e.eval(x).sin(),
            Expr::Cos(e) => e.eval(x).cos(),
            Expr::Exp(e) => e.eval(x).exp(),
        }
    }

    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Num(_) | Expr::Var(_) => vec![],
            Expr::Neg(e) | Expr::Sin(e) | Expr::Cos(e) | Expr::Exp(e) => vec![e],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => vec![a, b],
        }
    }

    /// One past the highest coordinate index used (0 for constants).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Var(a) => a + 1,
            e => e.children().iter().map(|c| c.arity()).max().unwrap_or(0),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.arity() == 0
    }

    /// Symbolic partial derivative in `x_{axis+1}`.
    pub fn derivative(&self, axis: usize) -> Result<Expr> {
        let d = |e: &Expr| e.derivative(axis);
        Ok(match self {
            Expr::Num(_) => num(0.0),
            Expr::Var(a) => num(if *a == axis { 1.0 } else { 0.0 }),
            Expr::Neg(e) => neg(d(e)?),
            Expr::Add(a, b) => add(d(a)?, d(b)?),
            Expr::Sub(a, b) => sub(d(a)?, d(b)?),
            Expr::Mul(a, b) => add(mul(d(a)?, (**b).clone()), mul((**a).clone(), d(b)?)),
            Expr::Div(a, b) => div(
                sub(mul(d(a)?, (**b).clone()), mul((**a).clone(), d(b)?)),
                mul((**b).clone(), (**b).clone()),
            ),
            Expr::Pow(a, b) if b.is_constant() => {
                let p = b.eval(&[0.0; 3]);
                mul(mul(num(p), Expr::Pow(a.clone(), Box::new(num(p - 1.0)))), d(a)?)
            }
            Expr::Pow(..) => {
                return Err(Error::Expression("cannot differentiate a non-constant exponent".into()));
            }
            Expr::Sin(e) => mul(Expr::Cos(e.clone()), d(e)?),
            Expr::Cos(e) => neg(mul(Expr::Sin(e.clone()), d(e)?)),
            Expr::Exp(e) => mul(Expr::Exp(e.clone()), d(e)?),
        })
    }

    /// `(coefficients, offset)` when the expression is affine in the coordinates.
    fn affine(&self) -> Option<([f64; 3], f64)> {
        if self.is_constant() {
            return Some(([0.0; 3], self.eval(&[0.0; 3])));
        }
        let scale = |(c, o): ([f64; 3], f64), s: f64| (c.map(|v| v * s), o * s);
        match self {
            Expr::Var(a) => {
                let mut c = [0.0; 3];
                c[*a] = 1.0;
                Some((c, 0.0))
            }
            Expr::Neg(e) => Some(scale(e.affine()?, -1.0)),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (ca, oa) = a.affine()?;
                let (cb, ob) = b.affine()?;
                let s = if matches!(self, Expr::Sub(..)) { -1.0 } else { 1.0 };
                Some((std::array::from_fn(|i| ca[i] + s * cb[i]), oa + s * ob))
            }
            Expr::Mul(a, b) if a.is_constant() => Some(scale(b.affine()?, a.eval(&[0.0; 3]))),
            Expr::Mul(a, b) if b.is_constant() => Some(scale(a.affine()?, b.eval(&[0.0; 3]))),
            Expr::Div(a, b) if b.is_constant() => Some(scale(a.affine()?, 1.0 / b.eval(&[0.0; 3]))),
            _ => None,
        }
    }

    /// Per-axis highest Fourier mode when the expression is a trigonometric
    /// polynomial with `2π`-periodic integer frequencies, `None` otherwise.
    pub fn trig_bandwidth(&self) -> Option<[u32; 3]> {
        if self.is_constant() {
            return Some([0; 3]);
        }
        let max = |a: [u32; 3], b: [u32; 3]| std::array::from_fn(|i| a[i].max(b[i]));
        match self {
            Expr::Neg(e) => e.trig_bandwidth(),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(max(a.trig_bandwidth()?, b.trig_bandwidth()?)),
            Expr::Mul(a, b) => {
                let (x, y) = (a.trig_bandwidth()?, b.trig_bandwidth()?);
                Some(std::array::from_fn(|i| x[i] + y[i]))
            }
            Expr::Div(a, b) if b.is_constant() => a.trig_bandwidth(),
            Expr::Pow(a, b) if b.is_constant() => {
                let p = b.eval(&[0.0; 3]);
                if p < 0.0 || p.fract() != 0.0 || p > 64.0 {
                    return None;
                }
                Some(a.trig_bandwidth()?.map(|m| m * p as u32))
            }
            Expr::Sin(e) | Expr::Cos(e) => {
                let (c, _) = e.affine()?;
                if c.iter().any(|v| v.fract() != 0.0) {
                    return None;
                }
                Some(c.map(|v| v.abs() as u32))
            }
            _ => None,
        }
    }
}
