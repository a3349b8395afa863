use std::fmt;

use super::Expr;

/// Printable view of an [`Expr`] with a named variable.
///
/// The output parses back (with the same variable name) to an expression
/// that evaluates identically; tree shape is not guaranteed to match.
pub struct Display<'a> {
    expr: &'a Expr,
    var: &'a str,
}

impl Expr {
    pub fn display<'a>(&'a self, var: &'a str) -> Display<'a> {
        Display { expr: self, var }
    }
}

// Binding strength used to decide where parentheses are needed.
fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Const(c) if c.is_sign_negative() => 3,
        Expr::Pow(..) => 4,
        Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
    }
}

impl Display<'_> {
    fn child(&self, f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
        let d = Display {
            expr: e,
            var: self.var,
        };
        if paren {
            write!(f, "({d})")
        } else {
            write!(f, "{d}")
        }
    }

    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        op: &str,
        lhs: &Expr,
        rhs: &Expr,
        level: u8,
    ) -> fmt::Result {
        self.child(f, lhs, precedence(lhs) < level)?;
        f.write_str(op)?;
        self.child(f, rhs, precedence(rhs) <= level)
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => f.write_str(self.var),
            Expr::Neg(a) => {
                f.write_str("-")?;
                self.child(f, a, precedence(a) < 3)
            }
            Expr::Add(a, b) => self.binary(f, " + ", a, b, 1),
            Expr::Sub(a, b) => self.binary(f, " - ", a, b, 1),
            Expr::Mul(a, b) => self.binary(f, "*", a, b, 2),
            Expr::Div(a, b) => self.binary(f, "/", a, b, 2),
            Expr::Pow(a, b) => {
                self.child(f, a, precedence(a) < 5)?;
                f.write_str("^")?;
                self.child(f, b, precedence(b) < 5)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.child(f, a, false)?;
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;

    fn show(src: &str) -> String {
        parse(src, "t").unwrap().display("t").to_string()
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        assert_eq!(show("1 + 2*t"), "1.0 + 2.0*t");
        assert_eq!(show("(1 + 2)*t"), "(1.0 + 2.0)*t");
        assert_eq!(show("t - (t - 1)"), "t - (t - 1.0)");
        assert_eq!(show("-t^2"), "-t^2.0");
        assert_eq!(show("(-t)^2"), "(-t)^2.0");
        assert_eq!(show("2^3^2"), "2.0^(3.0^2.0)");
        assert_eq!(show("sin(t)/cos(t)"), "sin(t)/cos(t)");
    }
}
