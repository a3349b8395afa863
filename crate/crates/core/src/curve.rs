//! Unit-speed curves in E⁴ and their Frenet apparatus.
//!
//! The Frenet frame `V₁..V₄` of a unit-speed curve satisfies
//!
//! ```text
//! γ′  = V₁
//! V₁′ = κ₁V₂
//! V₂′ = −κ₁V₁ + κ₂V₃
//! V₃′ = −κ₂V₂ + κ₃V₄
//! V₄′ = −κ₃V₃
//! ```
//!
//! [`frenet_apparatus`] recovers it by Gram–Schmidt on `γ′, γ″, γ‴`, with
//! `V₄` fixed by `det[V₁ V₂ V₃ V₄] = +1` and `κ₃` read off `γ⁗`. The
//! curvatures `κ₁, κ₂` are therefore non-negative and `κ₃` carries the sign.
//!
//! Planar curves have no unique `V₃, V₄`. Two completions are provided:
//! [`complete_frame`] rotates the normal plane with the curve (the
//! convention under which a pencil on the circle generator becomes a
//! Vranceanu surface) and [`parallel_frame`] keeps it fixed.

use nalgebra::{Matrix4, Vector4};

use crate::expr::{parse, Expr};
use crate::{Error, Result};

pub type Vec4 = Vector4<f64>;

/// Curvatures below this are treated as zero.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Allowed deviation of `|γ′|` from 1 for analytic curves.
pub const ARC_LENGTH_TOL: f64 = 1e-9;
/// Allowed deviation of `a²c² + b²d²` from 1 for W-curves.
pub const W_UNIT_SPEED_TOL: f64 = 1e-12;
/// Central-difference step for `κᵢ′(s)` on curves without closed-form rates.
pub const RATE_STEP: f64 = 1e-5;

const ARC_LENGTH_SAMPLES: usize = 256;

/// The double-rotation curve `(a cos cs, a sin cs, b cos ds, b sin ds)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WCurve {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub domain: (f64, f64),
}

impl WCurve {
    /// Builds the curve on the default domain `[0, 2π]`, rejecting
    /// parameters that are not unit speed.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<WCurve> {
        let speed_sq = a * a * c * c + b * b * d * d;
        if (speed_sq - 1.0).abs() > W_UNIT_SPEED_TOL {
            return Err(Error::NotUnitSpeed {
                s: 0.0,
                speed: speed_sq.sqrt(),
            });
        }
        Ok(WCurve {
            a,
            b,
            c,
            d,
            domain: (0.0, std::f64::consts::TAU),
        })
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> WCurve {
        self.domain = (lo, hi);
        self
    }

    /// `κ₁ = √(a²c⁴ + b²d⁴)`.
    pub fn first_curvature(&self) -> f64 {
        (self.a * self.a * self.c.powi(4) + self.b * self.b * self.d.powi(4)).sqrt()
    }

    /// True when `c = d`, i.e. the curve is a planar circle.
    pub fn is_circle(&self) -> bool {
        (self.c - self.d).abs() <= 1e-12
    }

    fn derivative(&self, s: f64, k: usize) -> Vec4 {
        // d^k/ds^k (cos ws, sin ws) = w^k (cos(ws + kπ/2), sin(ws + kπ/2))
        let turn = |w: f64, r: f64| {
            let (sn, cs) = (w * s).sin_cos();
            let (x, y) = match k % 4 {
                0 => (cs, sn),
                1 => (-sn, cs),
                2 => (-cs, -sn),
                _ => (sn, -cs),
            };
            let scale = r * w.powi(k as i32);
            (scale * x, scale * y)
        };
        let (x1, x2) = turn(self.c, self.a);
        let (x3, x4) = turn(self.d, self.b);
        Vec4::new(x1, x2, x3, x4)
    }
}

/// A curve given by four expressions in the arc-length parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticCurve {
    components: [Expr; 4],
    // derivatives[k - 1] holds the k-th derivative, k = 1..=4
    derivatives: [[Expr; 4]; 4],
    pub domain: (f64, f64),
}

impl AnalyticCurve {
    /// Builds the curve and checks `| |γ′(s)| − 1 | ≤ 1e−9` on 256 points
    /// of the domain.
    pub fn new(components: [Expr; 4], domain: (f64, f64)) -> Result<AnalyticCurve> {
        if !(domain.0 < domain.1) {
            return Err(Error::InvalidCurve(format!(
                "empty parameter domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        let mut derivatives: [[Expr; 4]; 4] = Default::default();
        let mut prev = components.clone();
        for slot in derivatives.iter_mut() {
            let next: [Expr; 4] = std::array::from_fn(|i| prev[i].differentiate());
            *slot = next.clone();
            prev = next;
        }
        let curve = AnalyticCurve {
            components,
            derivatives,
            domain,
        };
        for i in 0..ARC_LENGTH_SAMPLES {
            let s = domain.0 + (domain.1 - domain.0) * i as f64 / (ARC_LENGTH_SAMPLES - 1) as f64;
            let speed = curve.derivative(s, 1)?.norm();
            if (speed - 1.0).abs() > ARC_LENGTH_TOL {
                return Err(Error::NotUnitSpeed { s, speed });
            }
        }
        Ok(curve)
    }

    /// Parses four component expressions in the variable `var`.
    pub fn parse(components: [&str; 4], var: &str, domain: (f64, f64)) -> Result<AnalyticCurve> {
        let mut parsed: [Expr; 4] = Default::default();
        for (slot, src) in parsed.iter_mut().zip(components) {
            *slot = parse(src, var)?;
        }
        AnalyticCurve::new(parsed, domain)
    }

    pub fn components(&self) -> &[Expr; 4] {
        &self.components
    }

    fn eval4(exprs: &[Expr; 4], s: f64) -> Result<Vec4> {
        Ok(Vec4::new(
            exprs[0].eval(s)?,
            exprs[1].eval(s)?,
            exprs[2].eval(s)?,
            exprs[3].eval(s)?,
        ))
    }

    fn derivative(&self, s: f64, k: usize) -> Result<Vec4> {
        match k {
            0 => Self::eval4(&self.components, s),
            _ => Self::eval4(&self.derivatives[k - 1], s),
        }
    }
}

/// The spine curve of a pencil.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    W(WCurve),
    Analytic(AnalyticCurve),
}

impl CurveSpec {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            CurveSpec::W(w) => w.domain,
            CurveSpec::Analytic(c) => c.domain,
        }
    }

    pub fn position(&self, s: f64) -> Result<Vec4> {
        match self {
            CurveSpec::W(w) => Ok(w.derivative(s, 0)),
            CurveSpec::Analytic(c) => c.derivative(s, 0),
        }
    }

    pub fn as_w_curve(&self) -> Option<&WCurve> {
        match self {
            CurveSpec::W(w) => Some(w),
            CurveSpec::Analytic(_) => None,
        }
    }

    /// `γ′(s), …, γ⁽ᵒʳᵈᵉʳ⁾(s)`; orders above 4 are not available.
    pub fn derivatives(&self, s: f64, order: usize) -> Result<Vec<Vec4>> {
        assert!(order <= 4, "curve derivatives are kept up to order 4");
        (1..=order)
            .map(|k| match self {
                CurveSpec::W(w) => Ok(w.derivative(s, k)),
                CurveSpec::Analytic(c) => c.derivative(s, k),
            })
            .collect()
    }
}

/// Frame `V₁..V₄` and curvatures `κ₁, κ₂, κ₃` at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetApparatus {
    pub frame: [Vec4; 4],
    pub curvatures: [f64; 3],
    /// `degenerate[i]` is set when `|κᵢ₊₁|` fell below [`DEGENERACY_TOL`]
    /// or was fixed to zero by a completion.
    pub degenerate: [bool; 3],
}

impl FrenetApparatus {
    pub fn v(&self, i: usize) -> Vec4 {
        self.frame[i - 1]
    }

    pub fn kappa(&self, i: usize) -> f64 {
        self.curvatures[i - 1]
    }

    /// Number of leading nonvanishing curvatures plus one.
    pub fn rank(&self) -> usize {
        1 + self.degenerate.iter().take_while(|d| !**d).count()
    }

    /// Largest `|⟨Vᵢ, Vⱼ⟩ − δᵢⱼ|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.frame[i].dot(&self.frame[j]) - delta).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        Matrix4::from_columns(&self.frame).determinant()
    }
}

/// Unit vector completing orthonormal `v1, v2, v3` to a positively
/// oriented basis (the 4-D cross product).
pub fn cross3(v1: &Vec4, v2: &Vec4, v3: &Vec4) -> Vec4 {
    let cofactor = |i: usize| {
        let mut e = Vec4::zeros();
        e[i] = 1.0;
        Matrix4::from_columns(&[*v1, *v2, *v3, e]).determinant()
    };
    Vec4::new(cofactor(0), cofactor(1), cofactor(2), cofactor(3))
}

/// Frenet apparatus by Gram–Schmidt on the curve derivatives.
///
/// Fails with [`Error::DegenerateFrame`] when `κ₁` or `κ₂` vanishes. A
/// vanishing `κ₃` is not an error: `V₄` is still fixed by orientation and
/// the flag in [`FrenetApparatus::degenerate`] records it.
pub fn frenet_apparatus(curve: &CurveSpec, s: f64) -> Result<FrenetApparatus> {
    let d = curve.derivatives(s, 4)?;
    let speed = d[0].norm();
    let v1 = d[0] / speed;

    let u2 = d[1] - v1 * d[1].dot(&v1);
    let kappa1 = u2.norm() / (speed * speed);
    if kappa1 < DEGENERACY_TOL {
        return Err(Error::DegenerateFrame { rank: 1, s });
    }
    let v2 = u2.normalize();

    let mut u3 = d[2] - v1 * d[2].dot(&v1);
    u3 -= v2 * u3.dot(&v2);
    let kappa2 = u3.norm() / (u2.norm() * speed);
    if kappa2 < DEGENERACY_TOL {
        return Err(Error::DegenerateFrame { rank: 2, s });
    }
    let v3 = u3.normalize();
    let v4 = cross3(&v1, &v2, &v3).normalize();
    let kappa3 = d[3].dot(&v4) / (kappa1 * kappa2 * speed.powi(4));

    Ok(FrenetApparatus {
        frame: [v1, v2, v3, v4],
        curvatures: [kappa1, kappa2, kappa3],
        degenerate: [false, false, kappa3.abs() < DEGENERACY_TOL],
    })
}

/// Rotating completion for the circle generator `c = d`.
///
/// `V₃ = (−b sin cs, b cos cs, a sin cs, −a cos cs)/ρ` and
/// `V₄ = (b cos cs, b sin cs, −a cos cs, −a sin cs)/ρ` with `ρ = √(a² + b²)`.
/// This pair turns with the curve, so the structure equations hold with
/// `κ₂ = 0` and `κ₃ = −c`.
pub fn complete_frame(curve: &CurveSpec, s: f64) -> Result<FrenetApparatus> {
    let w = match curve {
        CurveSpec::W(w) if w.is_circle() => w,
        CurveSpec::W(_) => {
            return Err(Error::UnsupportedCompletion(
                "rotating completion needs a W-curve with c = d".into(),
            ))
        }
        CurveSpec::Analytic(_) => {
            return Err(Error::UnsupportedCompletion(
                "rotating completion is defined for W-curves only".into(),
            ))
        }
    };
    let (a, b, c) = (w.a, w.b, w.c);
    let rho = a.hypot(b);
    let (sn, cs) = (c * s).sin_cos();
    let v1 = w.derivative(s, 1);
    let kappa1 = w.first_curvature();
    let v2 = w.derivative(s, 2) / kappa1;
    let v3 = Vec4::new(-b * sn, b * cs, a * sn, -a * cs) / rho;
    let v4 = Vec4::new(b * cs, b * sn, -a * cs, -a * sn) / rho;
    Ok(FrenetApparatus {
        frame: [v1, v2, v3, v4],
        curvatures: [kappa1, 0.0, -c],
        degenerate: [false, true, false],
    })
}

/// Parallel completion for a planar curve: `V₃, V₄` span the fixed
/// orthogonal complement of the curve's plane and `κ₂ = κ₃ = 0`.
///
/// The complement basis is Gram–Schmidt of `e₁..e₄` (skipping candidates
/// with small residual), so it does not depend on `s`; `V₄` is oriented so
/// that `det[V₁ V₂ V₃ V₄] = +1`.
pub fn parallel_frame(curve: &CurveSpec, s: f64) -> Result<FrenetApparatus> {
    let d = curve.derivatives(s, 3)?;
    let speed = d[0].norm();
    let v1 = d[0] / speed;
    let u2 = d[1] - v1 * d[1].dot(&v1);
    let kappa1 = u2.norm() / (speed * speed);
    if kappa1 < DEGENERACY_TOL {
        return Err(Error::UnsupportedCompletion(
            "parallel completion needs a curve with nonvanishing first curvature".into(),
        ));
    }
    let v2 = u2.normalize();
    let mut u3 = d[2] - v1 * d[2].dot(&v1);
    u3 -= v2 * u3.dot(&v2);
    if u3.norm() / (u2.norm() * speed) >= DEGENERACY_TOL {
        return Err(Error::UnsupportedCompletion(
            "parallel completion needs a planar curve".into(),
        ));
    }
    let mut basis: Vec<Vec4> = vec![v1, v2];
    for i in 0..4 {
        let mut cand = Vec4::zeros();
        cand[i] = 1.0;
        for b in &basis {
            cand -= b * cand.dot(b);
        }
        if cand.norm() > 0.5 {
            basis.push(cand.normalize());
        }
        if basis.len() == 4 {
            break;
        }
    }
    let (v3, mut v4) = (basis[2], basis[3]);
    if Matrix4::from_columns(&[v1, v2, v3, v4]).determinant() < 0.0 {
        v4 = -v4;
    }
    Ok(FrenetApparatus {
        frame: [v1, v2, v3, v4],
        curvatures: [kappa1, 0.0, 0.0],
        degenerate: [false, true, true],
    })
}

/// True iff at least 16 samples are given and each `κᵢ` varies by at most
/// `1e−8` across them.
pub fn is_w_curve(samples: &[FrenetApparatus]) -> bool {
    if samples.len() < 16 {
        return false;
    }
    (0..3).all(|i| {
        let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
            (lo.min(f.curvatures[i]), hi.max(f.curvatures[i]))
        });
        hi - lo <= 1e-8
    })
}

/// How a pencil obtains `V₁..V₄` along its spine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameConvention {
    /// Gram–Schmidt Frenet frame; the curve must be nondegenerate.
    Frenet,
    /// [`complete_frame`], for W-curves with `c = d`.
    Rotating,
    /// [`parallel_frame`], for planar curves.
    Parallel,
}

/// A curve together with the frame convention used to hang a pencil on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Spine {
    pub curve: CurveSpec,
    pub convention: FrameConvention,
}

impl Spine {
    pub fn new(curve: CurveSpec, convention: FrameConvention) -> Spine {
        Spine { curve, convention }
    }

    pub fn frenet(curve: CurveSpec) -> Spine {
        Spine::new(curve, FrameConvention::Frenet)
    }

    /// Frenet when the frame is nondegenerate at the middle of the domain,
    /// otherwise the rotating completion for circle W-curves and the
    /// parallel completion for other planar curves.
    pub fn auto(curve: CurveSpec) -> Result<Spine> {
        let (lo, hi) = curve.domain();
        let mid = 0.5 * (lo + hi);
        let convention = match frenet_apparatus(&curve, mid) {
            Ok(_) => FrameConvention::Frenet,
            Err(Error::DegenerateFrame { rank: 2, .. }) => match &curve {
                CurveSpec::W(w) if w.is_circle() => FrameConvention::Rotating,
                _ => FrameConvention::Parallel,
            },
            Err(e) => return Err(e),
        };
        Ok(Spine { curve, convention })
    }

    pub fn frame(&self, s: f64) -> Result<FrenetApparatus> {
        match self.convention {
            FrameConvention::Frenet => frenet_apparatus(&self.curve, s),
            FrameConvention::Rotating => complete_frame(&self.curve, s),
            FrameConvention::Parallel => parallel_frame(&self.curve, s),
        }
    }

    pub fn position(&self, s: f64) -> Result<Vec4> {
        self.curve.position(s)
    }

    /// True when `κ₁..κ₃` are constant by construction.
    pub fn has_constant_curvatures(&self) -> bool {
        matches!(self.curve, CurveSpec::W(_))
    }

    /// `κᵢ′(s)`: exactly zero for W-curves, otherwise a central difference
    /// of the frame curvatures with step [`RATE_STEP`].
    pub fn curvature_rates(&self, s: f64) -> Result<[f64; 3]> {
        if self.has_constant_curvatures() {
            return Ok([0.0; 3]);
        }
        let fwd = self.frame(s + RATE_STEP)?.curvatures;
        let back = self.frame(s - RATE_STEP)?.curvatures;
        Ok(std::array::from_fn(|i| (fwd[i] - back[i]) / (2.0 * RATE_STEP)))
    }
}

/// Norms of the four structure-equation residuals, with frame derivatives
/// taken by central differences of step `h`.
pub fn frenet_residuals(spine: &Spine, s: f64, h: f64) -> Result<[f64; 4]> {
    let f = spine.frame(s)?;
    let fwd = spine.frame(s + h)?;
    let back = spine.frame(s - h)?;
    let dv = |i: usize| (fwd.frame[i] - back.frame[i]) / (2.0 * h);
    let [k1, k2, k3] = f.curvatures;
    let [v1, v2, v3, v4] = f.frame;
    Ok([
        (dv(0) - v2 * k1).norm(),
        (dv(1) + v1 * k1 - v3 * k2).norm(),
        (dv(2) + v2 * k2 - v4 * k3).norm(),
        (dv(3) + v3 * k3).norm(),
    ])
}
