//! The pencil `X(s, t) = γ(s) + A(t)V₂(s) + B(t)V₄(s)` and its first and
//! second fundamental forms.
//!
//! With `a = 1 − κ₁A` and `b = κ₂A − κ₃B` the tangent plane is spanned by
//! `X_s = aV₁ + bV₃` and `X_t = A′V₂ + B′V₄`, which are always orthogonal
//! (`F = 0`). The normal plane is spanned by
//!
//! ```text
//! N₁ = (−B′V₂ + A′V₄)/√(A′² + B′²)
//! N₂ = (−bV₁ + aV₃)/√(a² + b²)
//! ```
//!
//! and only four second-form coefficients can be nonzero:
//! `c¹₁₁, c¹₂₂, c²₁₁, c²₁₂`.

use crate::curve::{FrenetApparatus, Spine, Vec4};
use crate::expr::{parse, Expr};
use crate::{Error, Regularity, Result};

/// `a² + b²` and `A′² + B′²` must exceed this at evaluation points.
pub const REGULARITY_TOL: f64 = 1e-12;

const MARCHING_SAMPLES: usize = 33;

/// Values of the marching-scale functions and their first two derivatives
/// at one `t`. `a*` fields belong to `A(t)`, `b*` fields to `B(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchingValues {
    pub a: f64,
    pub da: f64,
    pub dda: f64,
    pub b: f64,
    pub db: f64,
    pub ddb: f64,
}

impl MarchingValues {
    /// `A′² + B′²`, the metric coefficient `G`.
    pub fn speed_sq(&self) -> f64 {
        self.da * self.da + self.db * self.db
    }

    /// `A′B″ − B′A″`, the first flatness quantity.
    pub fn turning(&self) -> f64 {
        self.da * self.ddb - self.db * self.dda
    }
}

/// The pair `A(t), B(t)` with exact first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct MarchingScale {
    a: [Expr; 3],
    b: [Expr; 3],
    pub domain: (f64, f64),
}

impl MarchingScale {
    /// Rejects the family if `A′² + B′²` vanishes at any of 33 evenly
    /// spaced samples of `domain` where the functions can be evaluated.
    pub fn new(a: Expr, b: Expr, domain: (f64, f64)) -> Result<MarchingScale> {
        if !(domain.0 <= domain.1) {
            return Err(Error::Domain(format!(
                "empty t-domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        let derive = |e: Expr| {
            let d1 = e.differentiate();
            let d2 = d1.differentiate();
            [e, d1, d2]
        };
        let m = MarchingScale {
            a: derive(a),
            b: derive(b),
            domain,
        };
        let mut first_error = None;
        let mut evaluated = 0;
        for i in 0..MARCHING_SAMPLES {
            let t = domain.0 + (domain.1 - domain.0) * i as f64 / (MARCHING_SAMPLES - 1) as f64;
            match m.at(t) {
                Ok(v) => {
                    evaluated += 1;
                    if v.speed_sq() <= REGULARITY_TOL {
                        return Err(Error::RegularityViolation {
                            condition: Regularity::Marching,
                            s: f64::NAN,
                            t,
                            value: v.speed_sq(),
                        });
                    }
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
        }
        match (evaluated, first_error) {
            (0, Some(e)) => Err(e),
            _ => Ok(m),
        }
    }

    pub fn parse(a: &str, b: &str, domain: (f64, f64)) -> Result<MarchingScale> {
        MarchingScale::new(parse(a, "t")?, parse(b, "t")?, domain)
    }

    /// `A(t)` followed by `A′`, `A″`.
    pub fn a_exprs(&self) -> &[Expr; 3] {
        &self.a
    }

    /// `B(t)` followed by `B′`, `B″`.
    pub fn b_exprs(&self) -> &[Expr; 3] {
        &self.b
    }

    pub fn at(&self, t: f64) -> Result<MarchingValues> {
        Ok(MarchingValues {
            a: self.a[0].eval(t)?,
            da: self.a[1].eval(t)?,
            dda: self.a[2].eval(t)?,
            b: self.b[0].eval(t)?,
            db: self.b[1].eval(t)?,
            ddb: self.b[2].eval(t)?,
        })
    }
}

/// `a = 1 − κ₁A`, `b = κ₂A − κ₃B` and their partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilCoefficients {
    pub a: f64,
    pub b: f64,
    pub a_s: f64,
    pub a_t: f64,
    pub b_s: f64,
    pub b_t: f64,
}

impl PencilCoefficients {
    fn new(frame: &FrenetApparatus, rates: [f64; 3], m: &MarchingValues) -> PencilCoefficients {
        let [k1, k2, k3] = frame.curvatures;
        let [dk1, dk2, dk3] = rates;
        PencilCoefficients {
            a: 1.0 - k1 * m.a,
            b: k2 * m.a - k3 * m.b,
            a_s: -dk1 * m.a,
            a_t: -k1 * m.da,
            b_s: dk2 * m.a - dk3 * m.b,
            b_t: k2 * m.da - k3 * m.db,
        }
    }

    /// `a² + b²`, the metric coefficient `E`.
    pub fn speed_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    /// `a b_t − b a_t`, the second flatness quantity.
    pub fn twist_t(&self) -> f64 {
        self.a * self.b_t - self.b * self.a_t
    }

    /// `a b_s − b a_s`.
    pub fn twist_s(&self) -> f64 {
        self.a * self.b_s - self.b * self.a_s
    }
}

/// First-form coefficients and the four structurally nonzero second-form
/// coefficients of a pencil; `F`, `c¹₁₂` and `c²₂₂` vanish identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG − F²`.
    pub w2: f64,
    pub c1_11: f64,
    pub c1_22: f64,
    pub c2_11: f64,
    pub c2_12: f64,
}

impl FundamentalForms {
    /// All coefficients as `c[k][i][j]` with zero-based indices.
    pub fn second_form(&self) -> [[[f64; 2]; 2]; 2] {
        [
            [[self.c1_11, 0.0], [0.0, self.c1_22]],
            [[self.c2_11, self.c2_12], [self.c2_12, 0.0]],
        ]
    }
}

/// Everything needed to evaluate a pencil's local geometry at `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilPoint {
    pub s: f64,
    pub t: f64,
    pub frame: FrenetApparatus,
    /// `κᵢ′(s)`.
    pub rates: [f64; 3],
    pub marching: MarchingValues,
    pub coefficients: PencilCoefficients,
}

impl PencilPoint {
    fn check(&self) -> Result<()> {
        let e = self.coefficients.speed_sq();
        if e <= REGULARITY_TOL {
            return Err(self.violation(Regularity::Spine, e));
        }
        let g = self.marching.speed_sq();
        if g <= REGULARITY_TOL {
            return Err(self.violation(Regularity::Marching, g));
        }
        Ok(())
    }

    fn violation(&self, condition: Regularity, value: f64) -> Error {
        Error::RegularityViolation {
            condition,
            s: self.s,
            t: self.t,
            value,
        }
    }

    /// `(X_s, X_t)`.
    pub fn tangents(&self) -> (Vec4, Vec4) {
        let [v1, v2, v3, v4] = self.frame.frame;
        let c = &self.coefficients;
        let m = &self.marching;
        (v1 * c.a + v3 * c.b, v2 * m.da + v4 * m.db)
    }

    /// `(N₁, N₂)`.
    pub fn normals(&self) -> (Vec4, Vec4) {
        let [v1, v2, v3, v4] = self.frame.frame;
        let c = &self.coefficients;
        let m = &self.marching;
        let n1 = (v4 * m.da - v2 * m.db) / m.speed_sq().sqrt();
        let n2 = (v3 * c.a - v1 * c.b) / c.speed_sq().sqrt();
        (n1, n2)
    }

    /// Sign of `det[X_s, X_t, N₁, N₂]`. The pencil's normal frame is
    /// negatively oriented wherever the spine frame is positive.
    pub fn orientation(&self) -> f64 {
        let (xs, xt) = self.tangents();
        let (n1, n2) = self.normals();
        nalgebra::Matrix4::from_columns(&[xs, xt, n1, n2]).determinant().signum()
    }

    /// `(X_ss, X_st, X_tt)` assembled from the structure equations.
    pub fn second_derivatives(&self) -> (Vec4, Vec4, Vec4) {
        let [v1, v2, v3, v4] = self.frame.frame;
        let [k1, k2, k3] = self.frame.curvatures;
        let c = &self.coefficients;
        let m = &self.marching;
        let xss = v1 * c.a_s + v2 * (k1 * c.a - k2 * c.b) + v3 * c.b_s + v4 * (k3 * c.b);
        let xst = v1 * c.a_t + v3 * c.b_t;
        let xtt = v2 * m.dda + v4 * m.ddb;
        (xss, xst, xtt)
    }

    /// `A′bκ₃ − B′(κ₁a − κ₂b)`, the numerator of `c¹₁₁`.
    pub fn normal_bend(&self) -> f64 {
        let [k1, k2, k3] = self.frame.curvatures;
        let c = &self.coefficients;
        let m = &self.marching;
        m.da * c.b * k3 - m.db * (k1 * c.a - k2 * c.b)
    }

    pub fn forms(&self) -> FundamentalForms {
        let c = &self.coefficients;
        let m = &self.marching;
        let e = c.speed_sq();
        let g = m.speed_sq();
        let (re, rg) = (e.sqrt(), g.sqrt());
        FundamentalForms {
            e,
            f: 0.0,
            g,
            w2: e * g,
            c1_11: self.normal_bend() / rg,
            c1_22: m.turning() / rg,
            c2_11: c.twist_s() / re,
            c2_12: c.twist_t() / re,
        }
    }
}

/// A surface pencil on a spine.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilSurface {
    pub spine: Spine,
    pub marching: MarchingScale,
}

impl PencilSurface {
    pub fn new(spine: Spine, marching: MarchingScale) -> PencilSurface {
        PencilSurface { spine, marching }
    }

    pub fn s_domain(&self) -> (f64, f64) {
        self.spine.curve.domain()
    }

    pub fn t_domain(&self) -> (f64, f64) {
        self.marching.domain
    }

    /// Local data at `(s, t)` without the regularity check.
    pub fn point_data(&self, s: f64, t: f64) -> Result<PencilPoint> {
        let frame = self.spine.frame(s)?;
        let rates = self.spine.curvature_rates(s)?;
        let marching = self.marching.at(t)?;
        Ok(PencilPoint {
            s,
            t,
            frame,
            rates,
            marching,
            coefficients: PencilCoefficients::new(&frame, rates, &marching),
        })
    }

    /// Local data at a regular point.
    pub fn regular_point(&self, s: f64, t: f64) -> Result<PencilPoint> {
        let p = self.point_data(s, t)?;
        p.check()?;
        Ok(p)
    }

    pub fn coefficients(&self, s: f64, t: f64) -> Result<PencilCoefficients> {
        Ok(self.point_data(s, t)?.coefficients)
    }

    /// `γ(s) + A(t)V₂(s) + B(t)V₄(s)` with no regularity check.
    pub fn position(&self, s: f64, t: f64) -> Result<Vec4> {
        let frame = self.spine.frame(s)?;
        let m = self.marching.at(t)?;
        Ok(self.spine.position(s)? + frame.v(2) * m.a + frame.v(4) * m.b)
    }

    /// The surface point, failing at irregular `(s, t)`.
    pub fn eval_surface(&self, s: f64, t: f64) -> Result<Vec4> {
        let p = self.regular_point(s, t)?;
        let m = &p.marching;
        Ok(self.spine.position(s)? + p.frame.v(2) * m.a + p.frame.v(4) * m.b)
    }

    pub fn tangent_frame(&self, s: f64, t: f64) -> Result<(Vec4, Vec4)> {
        Ok(self.regular_point(s, t)?.tangents())
    }

    pub fn normal_frame(&self, s: f64, t: f64) -> Result<(Vec4, Vec4)> {
        Ok(self.regular_point(s, t)?.normals())
    }

    pub fn fundamental_forms(&self, s: f64, t: f64) -> Result<FundamentalForms> {
        Ok(self.regular_point(s, t)?.forms())
    }
}
