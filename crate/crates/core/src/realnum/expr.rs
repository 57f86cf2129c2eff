//! Expression trees over exact constants.
//!
//! An [`Expr`] is an immutable DAG (shared subtrees via `Arc`), so the
//! same tree can be re-evaluated at any precision.  `as_rational` walks
//! the tree once to detect exactly-rational values, which lets predicates
//! like distance-to-nearest-integer bypass interval arithmetic entirely.

use super::interval::Enclosure;
use rug::{Integer, Rational};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Debug)]
enum Node {
    Int(Integer),
    Rat(Rational),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Sqrt(Expr),
    Log(Expr),
    Exp(Expr),
    PowInt(Expr, i64),
}

#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

/// Internal evaluation status.  `Inconclusive` asks the caller to retry at
/// a higher precision; `Domain` is final.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EvalError {
    Inconclusive(&'static str),
    Domain(&'static str),
}

impl Expr {
    fn new(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn int<T: Into<Integer>>(v: T) -> Self {
        Expr::new(Node::Int(v.into()))
    }

    pub fn rational<T: Into<Rational>>(v: T) -> Self {
        Expr::new(Node::Rat(v.into()))
    }

    pub fn ratio<A: Into<Integer>, B: Into<Integer>>(num: A, den: B) -> Self {
        Expr::new(Node::Rat(Rational::from((num.into(), den.into()))))
    }

    pub fn sqrt(&self) -> Self {
        Expr::new(Node::Sqrt(self.clone()))
    }

    pub fn log(&self) -> Self {
        Expr::new(Node::Log(self.clone()))
    }

    pub fn exp(&self) -> Self {
        Expr::new(Node::Exp(self.clone()))
    }

    pub fn pow_int(&self, k: i64) -> Self {
        Expr::new(Node::PowInt(self.clone(), k))
    }

    /// Exact rational value of the tree, when it has one.  `sqrt`, `log`
    /// and `exp` nodes are treated as irrational and return `None`.
    pub fn as_rational(&self) -> Option<Rational> {
        match &*self.0 {
            Node::Int(i) => Some(Rational::from(i)),
            Node::Rat(r) => Some(r.clone()),
            Node::Add(a, b) => Some(a.as_rational()? + b.as_rational()?),
            Node::Sub(a, b) => Some(a.as_rational()? - b.as_rational()?),
            Node::Mul(a, b) => Some(a.as_rational()? * b.as_rational()?),
            Node::Div(a, b) => {
                let d = b.as_rational()?;
                if d == 0 {
                    return None;
                }
                Some(a.as_rational()? / d)
            }
            Node::Neg(a) => Some(-a.as_rational()?),
            Node::PowInt(a, k) => {
                let r = a.as_rational()?;
                let k32 = i32::try_from(*k).ok()?;
                if r == 0 && k32 < 0 {
                    return None;
                }
                Some(rug::ops::Pow::pow(r, k32))
            }
            Node::Sqrt(_) | Node::Log(_) | Node::Exp(_) => None,
        }
    }

    pub(crate) fn eval_enclosure(&self, bits: u32) -> Result<Enclosure, EvalError> {
        match &*self.0 {
            Node::Int(i) => Ok(Enclosure::from_integer(i, bits)),
            Node::Rat(r) => Ok(Enclosure::from_rational(r, bits)),
            Node::Add(a, b) => Ok(a.eval_enclosure(bits)?.add(&b.eval_enclosure(bits)?, bits)),
            Node::Sub(a, b) => Ok(a.eval_enclosure(bits)?.sub(&b.eval_enclosure(bits)?, bits)),
            Node::Mul(a, b) => Ok(a.eval_enclosure(bits)?.mul(&b.eval_enclosure(bits)?, bits)),
            Node::Div(a, b) => {
                let den = b.eval_enclosure(bits)?;
                if den.lo.is_zero() && den.hi.is_zero() {
                    return Err(EvalError::Domain("division by zero"));
                }
                a.eval_enclosure(bits)?
                    .div(&den, bits)
                    .ok_or(EvalError::Inconclusive("divisor sign undecided"))
            }
            Node::Neg(a) => Ok(a.eval_enclosure(bits)?.neg(bits)),
            Node::Sqrt(a) => {
                let e = a.eval_enclosure(bits)?;
                if e.is_strictly_negative() {
                    return Err(EvalError::Domain("sqrt of a negative number"));
                }
                e.sqrt(bits)
                    .ok_or(EvalError::Inconclusive("sqrt argument sign undecided"))
            }
            Node::Log(a) => {
                let e = a.eval_enclosure(bits)?;
                if e.hi.is_sign_negative() || e.hi.is_zero() {
                    return Err(EvalError::Domain("log of a non-positive number"));
                }
                e.log(bits)
                    .ok_or(EvalError::Inconclusive("log argument sign undecided"))
            }
            Node::Exp(a) => Ok(a.eval_enclosure(bits)?.exp(bits)),
            Node::PowInt(a, k) => {
                let e = a.eval_enclosure(bits)?;
                if *k < 0 && e.lo.is_zero() && e.hi.is_zero() {
                    return Err(EvalError::Domain("zero to a negative power"));
                }
                e.pow_int(*k, bits)
                    .ok_or(EvalError::Inconclusive("base sign undecided for power"))
            }
        }
    }

    /// Evaluates at a single working precision.
    pub fn eval(&self, bits: u32) -> Result<super::CReal, super::RealError> {
        self.enclose(super::Precision::new(bits, bits))
    }

    /// Evaluates along the precision ladder until the tree evaluates
    /// cleanly (domain conditions certified), returning the first clean
    /// enclosure.
    pub fn enclose(&self, pol: super::Precision) -> Result<super::CReal, super::RealError> {
        let mut last = pol.start;
        let mut last_reason = "evaluation inconclusive";
        for bits in pol.ladder() {
            last = bits;
            match self.eval_enclosure(bits) {
                Ok(e) => return Ok(super::CReal::from_enclosure(e, bits)),
                Err(EvalError::Domain(d)) => {
                    return Err(super::RealError::OutOfDomain { what: d.into() })
                }
                Err(EvalError::Inconclusive(r)) => last_reason = r,
            }
        }
        Err(super::RealError::UndecidableSign {
            what: format!("{last_reason} in {self}"),
            precision_bits: last,
        })
    }
}

fn prec_of(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => 0,
        Node::Mul(..) | Node::Div(..) => 1,
        Node::Neg(..) => 2,
        _ => 3,
    }
}

fn fmt_child(e: &Expr, parent: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let negative_literal = matches!(&*e.0, Node::Int(i) if *i < 0)
        || matches!(&*e.0, Node::Rat(r) if *r < 0);
    if prec_of(&e.0) < parent || negative_literal {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Int(i) => write!(f, "{i}"),
            Node::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Node::Add(a, b) => {
                fmt_child(a, 0, f)?;
                write!(f, " + ")?;
                fmt_child(b, 1, f)
            }
            Node::Sub(a, b) => {
                fmt_child(a, 0, f)?;
                write!(f, " - ")?;
                fmt_child(b, 1, f)
            }
            Node::Mul(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " * ")?;
                fmt_child(b, 2, f)
            }
            Node::Div(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " / ")?;
                fmt_child(b, 2, f)
            }
            Node::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, 2, f)
            }
            Node::Sqrt(a) => write!(f, "sqrt({a})"),
            Node::Log(a) => write!(f, "log({a})"),
            Node::Exp(a) => write!(f, "exp({a})"),
            Node::PowInt(a, k) => {
                fmt_child(a, 3, f)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $node:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::new(Node::$node(self, rhs))
            }
        }
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::new(Node::$node(self.clone(), rhs.clone()))
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::new(Node::$node(self.clone(), rhs))
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::new(Node::$node(self, rhs.clone()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::new(Node::Neg(self))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::new(Node::Neg(self.clone()))
    }
}
