//! A small single-variable expression language.
//!
//! Curve components and marching-scale functions are supplied as strings
//! such as `"2*exp(0.5*t)*cos(t)"`. They are parsed into an [`Expr`] tree,
//! differentiated symbolically (so the fourth derivative of a curve is as
//! exact as its value) and evaluated in double precision.
//!
//! ```
//! use pencil4::expr::{parse, Expr};
//!
//! let e = parse("t^3 - t", "t").unwrap();
//! assert_eq!(e.eval(1.0).unwrap(), 0.0);
//! let d2: Expr = e.derivative(2);
//! assert_eq!(d2.eval(2.0).unwrap(), 12.0);
//! ```

mod diff;
mod display;
mod eval;
mod parse;

use std::ops::{Add, Div, Mul, Neg, Sub};

pub use diff::differentiate;
pub use display::Display;
pub use eval::evaluate;
pub use parse::parse;

/// Denominators (and cosines under `sec`/`tan`) smaller than this in
/// magnitude are treated as zero during evaluation.
pub const SINGULAR_EPS: f64 = 1e-14;

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sec,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sec,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sec => "sec",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree over one free variable.
///
/// The tree does not remember the variable's name; it is supplied again
/// when printing (see [`Expr::display`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Why evaluation failed at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    DivisionByZero,
    LogNonPositive,
    SqrtNegative,
    /// `sec` or `tan` at a zero of cosine.
    CosineZero,
    /// Negative base with a non-integer exponent, or zero to a negative power.
    InvalidPower,
    /// The result overflowed to a non-finite value.
    NonFinite,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::LogNonPositive => "ln of a non-positive value",
            DomainKind::SqrtNegative => "sqrt of a negative value",
            DomainKind::CosineZero => "cosine vanishes",
            DomainKind::InvalidPower => "invalid power",
            DomainKind::NonFinite => "non-finite result",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{0}` cannot be used as the variable name")]
    InvalidVariable(String),
    /// The offending subtree is rendered with `x` as the variable.
    #[error("{kind} in `{subtree}` at x = {at}")]
    EvalDomain {
        kind: DomainKind,
        subtree: String,
        at: f64,
    },
}

impl ExprError {
    /// Byte offset into the source text, for parse errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Syntax { offset, .. } | ExprError::UnknownIdentifier { offset, .. } => {
                Some(*offset)
            }
            _ => None,
        }
    }
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        match arg {
            Expr::Const(c) => {
                let folded = Expr::Call(f, Box::new(Expr::Const(c)));
                match folded.eval(0.0) {
                    Ok(v) => Expr::Const(v),
                    Err(_) => folded,
                }
            }
            arg => Expr::Call(f, Box::new(arg)),
        }
    }

    pub fn sin(self) -> Expr {
        Expr::call(Func::Sin, self)
    }
    pub fn cos(self) -> Expr {
        Expr::call(Func::Cos, self)
    }
    pub fn tan(self) -> Expr {
        Expr::call(Func::Tan, self)
    }
    pub fn sec(self) -> Expr {
        Expr::call(Func::Sec, self)
    }
    pub fn exp(self) -> Expr {
        Expr::call(Func::Exp, self)
    }
    pub fn ln(self) -> Expr {
        Expr::call(Func::Ln, self)
    }
    pub fn sqrt(self) -> Expr {
        Expr::call(Func::Sqrt, self)
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        match (&self, &exponent) {
            (_, Expr::Const(e)) if *e == 1.0 => self,
            (_, Expr::Const(e)) if *e == 0.0 => Expr::Const(1.0),
            (Expr::Const(_), Expr::Const(_)) => {
                let folded = Expr::Pow(Box::new(self), Box::new(exponent));
                match folded.eval(0.0) {
                    Ok(v) => Expr::Const(v),
                    Err(_) => folded,
                }
            }
            _ => Expr::Pow(Box::new(self), Box::new(exponent)),
        }
    }

    pub fn powi(self, n: i32) -> Expr {
        self.pow(Expr::Const(n as f64))
    }

    /// True when the tree does not reference the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Replaces every occurrence of the variable with `inner`.
    pub fn compose(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => inner.clone(),
            Expr::Neg(a) => -a.compose(inner),
            Expr::Add(a, b) => a.compose(inner) + b.compose(inner),
            Expr::Sub(a, b) => a.compose(inner) - b.compose(inner),
            Expr::Mul(a, b) => a.compose(inner) * b.compose(inner),
            Expr::Div(a, b) => a.compose(inner) / b.compose(inner),
            Expr::Pow(a, b) => a.compose(inner).pow(b.compose(inner)),
            Expr::Call(f, a) => Expr::call(*f, a.compose(inner)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Default for Expr {
    fn default() -> Expr {
        Expr::Const(0.0)
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Expr {
        Expr::Const(c)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(a) => *a,
            e => Expr::Neg(Box::new(e)),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (Expr::Const(0.0), e) | (e, Expr::Const(0.0)) => e,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a - b),
            (e, Expr::Const(0.0)) => e,
            (Expr::Const(0.0), e) => -e,
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            (Expr::Const(0.0), _) | (_, Expr::Const(0.0)) => Expr::Const(0.0),
            (Expr::Const(1.0), e) | (e, Expr::Const(1.0)) => e,
            (Expr::Const(-1.0), e) | (e, Expr::Const(-1.0)) => -e,
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) if b.abs() >= SINGULAR_EPS => Expr::Const(a / b),
            (e, Expr::Const(1.0)) => e,
            (Expr::Const(0.0), _) => Expr::Const(0.0),
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: f64) -> Expr {
                $tr::$m(self, Expr::Const(rhs))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $tr::$m(Expr::Const(self), rhs)
            }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_fold_constants() {
        let e = Expr::constant(2.0) * Expr::constant(3.0) + Expr::constant(1.0);
        assert_eq!(e, Expr::Const(7.0));
        assert_eq!(Expr::var() * 0.0, Expr::Const(0.0));
        assert_eq!(Expr::var() * 1.0, Expr::Var);
        assert_eq!(Expr::constant(0.0).cos(), Expr::Const(1.0));
        assert_eq!(-(-Expr::var()), Expr::Var);
    }

    #[test]
    fn division_by_constant_zero_is_not_folded() {
        let e = Expr::constant(1.0) / Expr::constant(0.0);
        assert!(matches!(e, Expr::Div(..)));
        assert!(e.eval(0.0).is_err());
    }

    #[test]
    fn compose_substitutes_variable() {
        let outer = parse("t^2 + 1", "t").unwrap();
        let inner = parse("sin(t)", "t").unwrap();
        let e = outer.compose(&inner);
        let x = 0.7_f64;
        assert!((e.eval(x).unwrap() - (x.sin().powi(2) + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn func_names_round_trip() {
        for f in Func::ALL {
            assert_eq!(Func::from_name(f.name()), Some(f));
        }
        assert_eq!(Func::from_name("cosh"), None);
    }
}
