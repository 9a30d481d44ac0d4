//! Expression tree over complex constants and chart coordinates.
//!
//! Nodes are reference-counted and immutable; the smart constructors fold
//! constants and the 0/1 identities but make no attempt at canonical forms.
//! Correctness of everything downstream rests on evaluation, not on
//! simplification.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Node = Arc<Expr>;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    /// Index into the owning chart's coordinate list.
    Var(usize),
    Add(Node, Node),
    Sub(Node, Node),
    Mul(Node, Node),
    Div(Node, Node),
    /// Integer power of a subexpression.
    Pow(Node, i32),
    Neg(Node),
    Exp(Node),
    Sin(Node),
    Cos(Node),
    Sinh(Node),
    Cosh(Node),
}

pub fn constant(c: Complex64) -> Node {
    Arc::new(Expr::Const(c))
}

pub fn real(x: f64) -> Node {
    constant(Complex64::new(x, 0.0))
}

pub fn var(i: usize) -> Node {
    Arc::new(Expr::Var(i))
}

fn as_const(n: &Node) -> Option<Complex64> {
    match **n {
        Expr::Const(c) => Some(c),
        _ => None,
    }
}

pub fn is_zero(n: &Node) -> bool {
    matches!(**n, Expr::Const(c) if c == Complex64::ZERO)
}

fn is_one(n: &Node) -> bool {
    matches!(**n, Expr::Const(c) if c == Complex64::ONE)
}

fn is_minus_one(n: &Node) -> bool {
    matches!(**n, Expr::Const(c) if c == -Complex64::ONE)
}

pub fn add(a: Node, b: Node) -> Node {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    if let (Some(x), Some(y)) = (as_const(&a), as_const(&b)) {
        return constant(x + y);
    }
    // x + (-x) folds to zero
    if let Expr::Neg(inner) = &*b {
        if **inner == *a {
            return real(0.0);
        }
    }
    if let Expr::Neg(inner) = &*a {
        if **inner == *b {
            return real(0.0);
        }
    }
    Arc::new(Expr::Add(a, b))
}

pub fn sub(a: Node, b: Node) -> Node {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return neg(b);
    }
    if *a == *b {
        return real(0.0);
    }
    if let (Some(x), Some(y)) = (as_const(&a), as_const(&b)) {
        return constant(x - y);
    }
    Arc::new(Expr::Sub(a, b))
}

pub fn mul(a: Node, b: Node) -> Node {
    if is_zero(&a) || is_zero(&b) {
        return real(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    if is_minus_one(&a) {
        return neg(b);
    }
    if is_minus_one(&b) {
        return neg(a);
    }
    if let (Some(x), Some(y)) = (as_const(&a), as_const(&b)) {
        return constant(x * y);
    }
    Arc::new(Expr::Mul(a, b))
}

pub fn div(a: Node, b: Node) -> Node {
    if is_zero(&a) {
        return real(0.0);
    }
    if is_one(&b) {
        return a;
    }
    if let (Some(x), Some(y)) = (as_const(&a), as_const(&b)) {
        if y != Complex64::ZERO {
            return constant(x / y);
        }
    }
    Arc::new(Expr::Div(a, b))
}

pub fn pow(base: Node, e: i32) -> Node {
    match e {
        0 => real(1.0),
        1 => base,
        _ => {
            if let Some(c) = as_const(&base) {
                return constant(c.powi(e));
            }
            Arc::new(Expr::Pow(base, e))
        }
    }
}

pub fn neg(a: Node) -> Node {
    if let Some(c) = as_const(&a) {
        return constant(-c);
    }
    if let Expr::Neg(inner) = &*a {
        return inner.clone();
    }
    Arc::new(Expr::Neg(a))
}

pub fn apply_fn(name: &str, arg: Node) -> Option<Node> {
    let make = |f: fn(Node) -> Expr, c: fn(Complex64) -> Complex64, arg: Node| {
        if let Some(x) = as_const(&arg) {
            constant(c(x))
        } else {
            Arc::new(f(arg))
        }
    };
    Some(match name {
        "exp" => make(Expr::Exp, |z| z.exp(), arg),
        "sin" => make(Expr::Sin, |z| z.sin(), arg),
        "cos" => make(Expr::Cos, |z| z.cos(), arg),
        "sinh" => make(Expr::Sinh, |z| z.sinh(), arg),
        "cosh" => make(Expr::Cosh, |z| z.cosh(), arg),
        _ => return None,
    })
}

/// Exact partial derivative with respect to coordinate `v`.
pub fn diff(n: &Node, v: usize) -> Node {
    match &**n {
        Expr::Const(_) => real(0.0),
        Expr::Var(i) => real(if *i == v { 1.0 } else { 0.0 }),
        Expr::Add(a, b) => add(diff(a, v), diff(b, v)),
        Expr::Sub(a, b) => sub(diff(a, v), diff(b, v)),
        Expr::Mul(a, b) => add(mul(diff(a, v), b.clone()), mul(a.clone(), diff(b, v))),
        Expr::Div(a, b) => {
            // (a/b)' = a'/b - a b'/b^2
            let da = diff(a, v);
            let db = diff(b, v);
            sub(
                div(da, b.clone()),
                div(mul(a.clone(), db), pow(b.clone(), 2)),
            )
        }
        Expr::Pow(a, e) => mul(
            mul(real(f64::from(*e)), pow(a.clone(), e - 1)),
            diff(a, v),
        ),
        Expr::Neg(a) => neg(diff(a, v)),
        Expr::Exp(a) => mul(Arc::new(Expr::Exp(a.clone())), diff(a, v)),
        Expr::Sin(a) => mul(Arc::new(Expr::Cos(a.clone())), diff(a, v)),
        Expr::Cos(a) => neg(mul(Arc::new(Expr::Sin(a.clone())), diff(a, v))),
        Expr::Sinh(a) => mul(Arc::new(Expr::Cosh(a.clone())), diff(a, v)),
        Expr::Cosh(a) => mul(Arc::new(Expr::Sinh(a.clone())), diff(a, v)),
    }
}

/// Evaluate at a real point, in double-precision complex arithmetic.
pub fn eval(n: &Expr, p: &[f64]) -> Result<Complex64> {
    let value = match n {
        Expr::Const(c) => *c,
        Expr::Var(i) => Complex64::new(p[*i], 0.0),
        Expr::Add(a, b) => eval(a, p)? + eval(b, p)?,
        Expr::Sub(a, b) => eval(a, p)? - eval(b, p)?,
        Expr::Mul(a, b) => eval(a, p)? * eval(b, p)?,
        Expr::Div(a, b) => {
            let den = eval(b, p)?;
            if den == Complex64::ZERO {
                return Err(Error::DivisionByZero { point: p.to_vec() });
            }
            eval(a, p)? / den
        }
        Expr::Pow(a, e) => eval(a, p)?.powi(*e),
        Expr::Neg(a) => -eval(a, p)?,
        Expr::Exp(a) => eval(a, p)?.exp(),
        Expr::Sin(a) => eval(a, p)?.sin(),
        Expr::Cos(a) => eval(a, p)?.cos(),
        Expr::Sinh(a) => eval(a, p)?.sinh(),
        Expr::Cosh(a) => eval(a, p)?.cosh(),
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite { point: p.to_vec() });
    }
    Ok(value)
}

/// Substitute coordinate indices: `Var(i)` becomes `Var(map[i])`.
pub fn reindex(n: &Node, map: &[usize]) -> Node {
    match &**n {
        Expr::Const(_) => n.clone(),
        Expr::Var(i) => var(map[*i]),
        Expr::Add(a, b) => add(reindex(a, map), reindex(b, map)),
        Expr::Sub(a, b) => sub(reindex(a, map), reindex(b, map)),
        Expr::Mul(a, b) => mul(reindex(a, map), reindex(b, map)),
        Expr::Div(a, b) => div(reindex(a, map), reindex(b, map)),
        Expr::Pow(a, e) => pow(reindex(a, map), *e),
        Expr::Neg(a) => neg(reindex(a, map)),
        Expr::Exp(a) => Arc::new(Expr::Exp(reindex(a, map))),
        Expr::Sin(a) => Arc::new(Expr::Sin(reindex(a, map))),
        Expr::Cos(a) => Arc::new(Expr::Cos(reindex(a, map))),
        Expr::Sinh(a) => Arc::new(Expr::Sinh(reindex(a, map))),
        Expr::Cosh(a) => Arc::new(Expr::Cosh(reindex(a, map))),
    }
}

// Printing follows the input grammar, so parse(print(e)) is a fixed point.
// Precedence: sum = 1, product = 2, unary minus = 3, power = 4, atom = 5.

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Const(c) => {
            if c.im == 0.0 && c.re >= 0.0 {
                5
            } else if c.re == 0.0 && c.im == 1.0 {
                5
            } else {
                // printed as a compound expression
                1
            }
        }
        _ => 5,
    }
}

fn write_prec(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8, coords: &[String]) -> fmt::Result {
    let p = prec(e);
    if p < min {
        write!(f, "(")?;
    }
    match e {
        Expr::Const(c) => write_const(f, *c)?,
        Expr::Var(i) => write!(f, "{}", coords[*i])?,
        Expr::Add(a, b) => {
            write_prec(f, a, 1, coords)?;
            write!(f, " + ")?;
            write_prec(f, b, 2, coords)?;
        }
        Expr::Sub(a, b) => {
            write_prec(f, a, 1, coords)?;
            write!(f, " - ")?;
            write_prec(f, b, 2, coords)?;
        }
        Expr::Mul(a, b) => {
            write_prec(f, a, 2, coords)?;
            write!(f, "*")?;
            write_prec(f, b, 3, coords)?;
        }
        Expr::Div(a, b) => {
            write_prec(f, a, 2, coords)?;
            write!(f, "/")?;
            write_prec(f, b, 3, coords)?;
        }
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_prec(f, a, 3, coords)?;
        }
        Expr::Pow(a, n) => {
            write_prec(f, a, 5, coords)?;
            write!(f, "^{}", n)?;
        }
        Expr::Exp(a) => write_fn(f, "exp", a, coords)?,
        Expr::Sin(a) => write_fn(f, "sin", a, coords)?,
        Expr::Cos(a) => write_fn(f, "cos", a, coords)?,
        Expr::Sinh(a) => write_fn(f, "sinh", a, coords)?,
        Expr::Cosh(a) => write_fn(f, "cosh", a, coords)?,
    }
    if p < min {
        write!(f, ")")?;
    }
    Ok(())
}

fn write_fn(f: &mut fmt::Formatter<'_>, name: &str, a: &Expr, coords: &[String]) -> fmt::Result {
    write!(f, "{}(", name)?;
    write_prec(f, a, 1, coords)?;
    write!(f, ")")
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    match (c.re, c.im) {
        (re, 0.0) if re >= 0.0 => write!(f, "{}", re),
        (re, 0.0) => write!(f, "-{}", -re),
        (0.0, 1.0) => write!(f, "i"),
        (0.0, -1.0) => write!(f, "-i"),
        (0.0, im) if im >= 0.0 => write!(f, "{}*i", im),
        (0.0, im) => write!(f, "-{}*i", -im),
        (re, im) if im > 0.0 => {
            write_const(f, Complex64::new(re, 0.0))?;
            write!(f, " + ")?;
            write_const(f, Complex64::new(0.0, im))
        }
        (re, im) => {
            write_const(f, Complex64::new(re, 0.0))?;
            write!(f, " - ")?;
            write_const(f, Complex64::new(0.0, -im))
        }
    }
}

/// Adapter that renders a node with its chart's coordinate names.
pub struct DisplayExpr<'a> {
    pub node: &'a Node,
    pub coords: &'a [String],
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(f, self.node, 0, self.coords)
    }
}
