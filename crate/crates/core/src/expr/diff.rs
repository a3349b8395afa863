use super::{Expr, Func};

impl Expr {
    /// Exact derivative with respect to the free variable.
    ///
    /// Constant subtrees are folded on the way so repeated differentiation
    /// stays reasonably small, but no algebraic simplification is attempted.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Neg(a) => -a.differentiate(),
            Expr::Add(a, b) => a.differentiate() + b.differentiate(),
            Expr::Sub(a, b) => a.differentiate() - b.differentiate(),
            Expr::Mul(a, b) => {
                a.differentiate() * (**b).clone() + (**a).clone() * b.differentiate()
            }
            Expr::Div(a, b) => {
                let (u, v) = ((**a).clone(), (**b).clone());
                if v.is_constant() {
                    return a.differentiate() / v;
                }
                (a.differentiate() * v.clone() - u * b.differentiate()) / v.powi(2)
            }
            Expr::Pow(a, b) => {
                let (u, v) = ((**a).clone(), (**b).clone());
                if v.is_constant() {
                    // d(u^n) = n u^(n-1) u'
                    let reduced = v.clone() - 1.0;
                    v * u.pow(reduced) * a.differentiate()
                } else if u.is_constant() {
                    // d(c^v) = c^v ln(c) v'
                    self.clone() * u.ln() * b.differentiate()
                } else {
                    // d(u^v) = u^v (v' ln u + v u'/u)
                    self.clone()
                        * (b.differentiate() * u.clone().ln() + v * a.differentiate() / u)
                }
            }
            Expr::Call(f, a) => {
                let u = (**a).clone();
                let outer = match f {
                    Func::Sin => u.cos(),
                    Func::Cos => -u.sin(),
                    Func::Tan => u.sec().powi(2),
                    Func::Sec => u.clone().sec() * u.tan(),
                    Func::Exp => u.exp(),
                    Func::Ln => return a.differentiate() / u,
                    Func::Sqrt => return a.differentiate() / (2.0 * u.sqrt()),
                };
                outer * a.differentiate()
            }
        }
    }

    /// The `order`-th derivative (`order = 0` returns a copy).
    pub fn derivative(&self, order: usize) -> Expr {
        (0..order).fold(self.clone(), |e, _| e.differentiate())
    }
}

/// Free-function spelling of [`Expr::differentiate`].
pub fn differentiate(e: &Expr) -> Expr {
    e.differentiate()
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn d_at(src: &str, order: usize, x: f64) -> f64 {
        parse(src, "t").unwrap().derivative(order).eval(x).unwrap()
    }

    /// Fourth-order central difference refined by one Richardson step.
    fn richardson_second(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        let d2 = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (4.0 * d2(h / 2.0) - d2(h)) / 3.0
    }

    #[test]
    fn power_rule() {
        assert_eq!(d_at("t^2", 1, 3.0), 6.0);
    }

    #[test]
    fn sine_slope_at_origin() {
        assert_eq!(d_at("sin(t)", 1, 0.0), 1.0);
    }

    #[test]
    fn second_derivative_of_reciprocal_against_finite_differences() {
        let src = "1/(sin(t)-0.5*cos(t))";
        let e = parse(src, "t").unwrap();
        let exact = e.derivative(2).eval(1.0).unwrap();
        let fd = richardson_second(|x| e.eval(x).unwrap(), 1.0, 1e-4);
        assert!(
            (exact - fd).abs() <= 1e-6 * exact.abs(),
            "exact {exact} fd {fd}"
        );
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert_eq!(parse("3*pi - sin(2)", "t").unwrap().differentiate(), Expr::Const(0.0));
    }

    #[test]
    fn closed_under_each_function() {
        // derivative values from the textbook formulas
        let x = 0.4_f64;
        let cases: [(&str, f64); 8] = [
            ("tan(t)", 1.0 / x.cos().powi(2)),
            ("sec(t)", x.tan() / x.cos()),
            ("ln(t)", 1.0 / x),
            ("sqrt(t)", 0.5 / x.sqrt()),
            ("exp(2*t)", 2.0 * (2.0 * x).exp()),
            ("2^t", 2f64.powf(x) * 2f64.ln()),
            ("t^t", x.powf(x) * (x.ln() + 1.0)),
            ("cos(t)/t", -x.sin() / x - x.cos() / (x * x)),
        ];
        for (src, want) in cases {
            let got = d_at(src, 1, x);
            assert!((got - want).abs() < 1e-13 * want.abs().max(1.0), "{src}: {got} vs {want}");
        }
    }

    #[test]
    fn fourth_derivative_of_trig() {
        assert!((d_at("3*cos(2*t)", 4, 0.3) - 48.0 * (0.6f64).cos()).abs() < 1e-12);
    }
}
