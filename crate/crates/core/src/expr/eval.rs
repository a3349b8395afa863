use super::{DomainKind, Expr, ExprError, Func, SINGULAR_EPS};

fn domain_error(kind: DomainKind, node: &Expr, at: f64) -> ExprError {
    ExprError::EvalDomain {
        kind,
        subtree: node.display("x").to_string(),
        at,
    }
}

impl Expr {
    /// Evaluates the expression with the variable bound to `x`.
    pub fn eval(&self, x: f64) -> Result<f64, ExprError> {
        let v = self.eval_node(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain_error(DomainKind::NonFinite, self, x))
        }
    }

    fn eval_node(&self, x: f64) -> Result<f64, ExprError> {
        let fail = |kind| Err(domain_error(kind, self, x));
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval_node(x)?,
            Expr::Add(a, b) => a.eval_node(x)? + b.eval_node(x)?,
            Expr::Sub(a, b) => a.eval_node(x)? - b.eval_node(x)?,
            Expr::Mul(a, b) => a.eval_node(x)? * b.eval_node(x)?,
            Expr::Div(a, b) => {
                let num = a.eval_node(x)?;
                let den = b.eval_node(x)?;
                if den.abs() < SINGULAR_EPS {
                    return fail(DomainKind::DivisionByZero);
                }
                num / den
            }
            Expr::Pow(a, b) => {
                let base = a.eval_node(x)?;
                let exponent = b.eval_node(x)?;
                if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
                    if base.abs() < SINGULAR_EPS && exponent < 0.0 {
                        return fail(DomainKind::DivisionByZero);
                    }
                    base.powi(exponent as i32)
                } else {
                    if base < 0.0 || (base == 0.0 && exponent < 0.0) {
                        return fail(DomainKind::InvalidPower);
                    }
                    base.powf(exponent)
                }
            }
            Expr::Call(f, a) => {
                let u = a.eval_node(x)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Tan | Func::Sec => {
                        let c = u.cos();
                        if c.abs() < SINGULAR_EPS {
                            return fail(DomainKind::CosineZero);
                        }
                        if *f == Func::Tan {
                            u.sin() / c
                        } else {
                            1.0 / c
                        }
                    }
                    Func::Exp => u.exp(),
                    Func::Ln => {
                        if u <= 0.0 {
                            return fail(DomainKind::LogNonPositive);
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u < 0.0 {
                            return fail(DomainKind::SqrtNegative);
                        }
                        u.sqrt()
                    }
                }
            }
        })
    }
}

/// Evaluates `e` at `x`; free-function spelling of [`Expr::eval`].
pub fn evaluate(e: &Expr, x: f64) -> Result<f64, ExprError> {
    e.eval(x)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cubic_minus_linear_vanishes_at_one() {
        assert_eq!(parse("t^3 - t", "t").unwrap().eval(1.0).unwrap(), 0.0);
    }

    #[test]
    fn secant_at_quarter_turn_is_a_domain_error() {
        let err = parse("sec(t)", "t").unwrap().eval(PI / 2.0).unwrap_err();
        match err {
            ExprError::EvalDomain { kind, subtree, .. } => {
                assert_eq!(kind, DomainKind::CosineZero);
                assert_eq!(subtree, "sec(x)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exp_of_ln_is_identity() {
        let v = parse("exp(ln(t))", "t").unwrap().eval(2.5).unwrap();
        assert!((v - 2.5).abs() <= 1e-12);
    }

    #[test]
    fn domain_errors_name_the_offending_subtree() {
        let e = parse("1 + ln(t - 2)", "t").unwrap();
        match e.eval(1.0).unwrap_err() {
            ExprError::EvalDomain { kind, subtree, at } => {
                assert_eq!(kind, DomainKind::LogNonPositive);
                assert_eq!(subtree, "ln(x - 2.0)");
                assert_eq!(at, 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("sqrt(t)", "t").unwrap().eval(-1.0).is_err());
        assert!(parse("1/(t-1)", "t").unwrap().eval(1.0).is_err());
        assert!(parse("t^0.5", "t").unwrap().eval(-4.0).is_err());
        assert!(parse("t^-1", "t").unwrap().eval(0.0).is_err());
        assert!(parse("exp(t)", "t").unwrap().eval(1e4).is_err());
    }

    #[test]
    fn negative_base_with_integer_exponent() {
        assert_eq!(parse("t^3", "t").unwrap().eval(-2.0).unwrap(), -8.0);
        assert_eq!(parse("t^-2", "t").unwrap().eval(-2.0).unwrap(), 0.25);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let e = parse("sin(t)^2 + sqrt(t)*exp(-t)/(1+t^2)", "t").unwrap();
        let a = e.eval(0.37).unwrap();
        let b = e.clone().eval(0.37).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
