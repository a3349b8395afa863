//! Gaussian, normal and mean curvature of pencil surfaces.
//!
//! Two routes are implemented and kept in agreement by the test suite:
//!
//! * the coefficient route ([`curvature_report`]): the general surface
//!   formulas of [`general`] applied to the pencil's fundamental forms;
//! * the closed forms of [`closed_form`], written directly in `a, b, A, B`
//!   and the spine curvatures.
//!
//! With `E = a² + b²`, `G = A′² + B′²`, `R = A′B″ − B′A″`,
//! `Q = A′bκ₃ − B′(κ₁a − κ₂b)` and `P = ab_t − ba_t`:
//!
//! ```text
//! K   = (E R Q − G P²) / (EG)²
//! K_N = P (G Q − E R) / (EG)²
//! H   = (E R + G Q)/(2 E G^{3/2}) N₁ + (ab_s − ba_s)/(2 E^{3/2}) N₂
//! ```

use crate::pencil::{FundamentalForms, PencilPoint, PencilSurface};
use crate::Result;

/// Curvature invariants at one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub gaussian: f64,
    pub normal: f64,
    /// Mean curvature vector component along `N₁`.
    pub h1: f64,
    /// Mean curvature vector component along `N₂`.
    pub h2: f64,
    pub h_norm_sq: f64,
}

/// Curvature of an arbitrary surface patch from `E, F, G` and the
/// second-form coefficients `c[k][i][j] = ⟨X_ij, N_k⟩` (zero-based) with
/// respect to an orthonormal normal frame `N₁, N₂`.
pub mod general {
    pub type SecondForm = [[[f64; 2]; 2]; 2];

    /// `K = Σₖ (cᵏ₁₁cᵏ₂₂ − (cᵏ₁₂)²) / W²`.
    pub fn gaussian(e: f64, f: f64, g: f64, c: &SecondForm) -> f64 {
        let w2 = e * g - f * f;
        c.iter()
            .map(|ck| ck[0][0] * ck[1][1] - ck[0][1] * ck[0][1])
            .sum::<f64>()
            / w2
    }

    /// Normal curvature with respect to the orientation of `(X_u, X_v)` and
    /// `(N₁, N₂)`:
    ///
    /// `K_N = [E(c¹₁₂c²₂₂ − c²₁₂c¹₂₂) − F(c¹₁₁c²₂₂ − c²₁₁c¹₂₂) + G(c¹₁₁c²₁₂ − c²₁₁c¹₁₂)] / W³`.
    pub fn normal_curvature(e: f64, f: f64, g: f64, c: &SecondForm) -> f64 {
        let w = (e * g - f * f).sqrt();
        let [c1, c2] = c;
        (e * (c1[0][1] * c2[1][1] - c2[0][1] * c1[1][1])
            - f * (c1[0][0] * c2[1][1] - c2[0][0] * c1[1][1])
            + g * (c1[0][0] * c2[0][1] - c2[0][0] * c1[0][1]))
            / (w * w * w)
    }

    /// The normal-curvature expression in its commonly printed form, with a
    /// `W²` denominator and `c¹₁₁c¹₂₂ − c²₁₁c¹₂₂` in the `F` term.
    ///
    /// Kept for comparison only: it is not invariant under rescaling the
    /// parameters and disagrees with [`normal_curvature`] unless `W = 1`.
    pub fn normal_curvature_as_printed(e: f64, f: f64, g: f64, c: &SecondForm) -> f64 {
        let w2 = e * g - f * f;
        let [c1, c2] = c;
        (e * (c1[0][1] * c2[1][1] - c2[0][1] * c1[1][1])
            - f * (c1[0][0] * c1[1][1] - c2[0][0] * c1[1][1])
            + g * (c1[0][0] * c2[0][1] - c2[0][0] * c1[0][1]))
            / w2
    }

    /// Components of `H = (1/2W²) Σₖ (cᵏ₁₁G + cᵏ₂₂E − 2cᵏ₁₂F) Nₖ`.
    pub fn mean_vector(e: f64, f: f64, g: f64, c: &SecondForm) -> [f64; 2] {
        let w2 = e * g - f * f;
        c.map(|ck| (ck[0][0] * g + ck[1][1] * e - 2.0 * ck[0][1] * f) / (2.0 * w2))
    }
}

/// Coefficient route for a pencil's fundamental forms.
pub fn report_from_forms(forms: &FundamentalForms) -> CurvatureReport {
    let c = forms.second_form();
    let (e, f, g) = (forms.e, forms.f, forms.g);
    let [h1, h2] = general::mean_vector(e, f, g, &c);
    CurvatureReport {
        gaussian: general::gaussian(e, f, g, &c),
        normal: general::normal_curvature(e, f, g, &c),
        h1,
        h2,
        h_norm_sq: h1 * h1 + h2 * h2,
    }
}

/// All invariants at `(s, t)` by the coefficient route.
pub fn curvature_report(p: &PencilSurface, s: f64, t: f64) -> Result<CurvatureReport> {
    Ok(report_from_forms(&p.fundamental_forms(s, t)?))
}

pub fn gaussian(p: &PencilSurface, s: f64, t: f64) -> Result<f64> {
    Ok(curvature_report(p, s, t)?.gaussian)
}

/// `(H₁, H₂, ‖H‖²)`.
pub fn mean_vector(p: &PencilSurface, s: f64, t: f64) -> Result<(f64, f64, f64)> {
    let r = curvature_report(p, s, t)?;
    Ok((r.h1, r.h2, r.h_norm_sq))
}

pub fn normal_curvature(p: &PencilSurface, s: f64, t: f64) -> Result<f64> {
    Ok(curvature_report(p, s, t)?.normal)
}

/// Closed forms in the pencil's own variables.
pub mod closed_form {
    use super::CurvatureReport;
    use crate::pencil::PencilPoint;

    struct Parts {
        e: f64,
        g: f64,
        turning: f64,
        bend: f64,
        twist_t: f64,
        twist_s: f64,
    }

    fn parts(p: &PencilPoint) -> Parts {
        Parts {
            e: p.coefficients.speed_sq(),
            g: p.marching.speed_sq(),
            turning: p.marching.turning(),
            bend: p.normal_bend(),
            twist_t: p.coefficients.twist_t(),
            twist_s: p.coefficients.twist_s(),
        }
    }

    pub fn gaussian(p: &PencilPoint) -> f64 {
        let q = parts(p);
        (q.e * q.turning * q.bend - q.g * q.twist_t * q.twist_t) / (q.e * q.g).powi(2)
    }

    pub fn normal_curvature(p: &PencilPoint) -> f64 {
        let q = parts(p);
        q.twist_t * (q.g * q.bend - q.e * q.turning) / (q.e * q.e * q.g * q.g)
    }

    /// `(H₁, H₂)`.
    pub fn mean_vector(p: &PencilPoint) -> (f64, f64) {
        let q = parts(p);
        let h1 = (q.e * q.turning + q.g * q.bend) / (2.0 * q.e * q.g.powf(1.5));
        let h2 = q.twist_s / (2.0 * q.e.powf(1.5));
        (h1, h2)
    }

    /// `‖H‖²` in the printed form whose first term has a cube where the
    /// square of `H₂` belongs. Agrees with [`mean_vector`] only where
    /// `ab_s − ba_s` vanishes (e.g. on W-curve spines).
    pub fn mean_norm_sq_as_printed(p: &PencilPoint) -> f64 {
        let q = parts(p);
        let bracket = q.turning / q.g + q.bend / q.e;
        0.25 * (q.twist_s.powi(3) / q.e.powi(3) + bracket * bracket / q.g)
    }

    pub fn report(p: &PencilPoint) -> CurvatureReport {
        let (h1, h2) = mean_vector(p);
        CurvatureReport {
            gaussian: gaussian(p),
            normal: normal_curvature(p),
            h1,
            h2,
            h_norm_sq: h1 * h1 + h2 * h2,
        }
    }
}

/// Both closed-form and coefficient-route values at a regular point.
pub fn both_routes(p: &PencilSurface, s: f64, t: f64) -> Result<(CurvatureReport, CurvatureReport)> {
    let pt: PencilPoint = p.regular_point(s, t)?;
    Ok((closed_form::report(&pt), report_from_forms(&pt.forms())))
}

/// Residuals of the sufficient flatness conditions `A′B″ − B′A″ = 0` and
/// `ab_t − ba_t = 0` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessResiduals {
    pub ts: Vec<f64>,
    pub ss: Vec<f64>,
    /// `A′B″ − B′A″` per `t` (NaN where the marching cannot be evaluated).
    pub turning: Vec<f64>,
    /// `ab_t − ba_t`, t-major: index `it * ss.len() + is`.
    pub twist: Vec<f64>,
}

/// Residuals at or below this count as zero.
pub const FLATNESS_TOL: f64 = 1e-9;

fn max_finite(v: &[f64]) -> f64 {
    v.iter()
        .filter(|x| !x.is_nan())
        .fold(0.0f64, |m, x| m.max(x.abs()))
}

impl FlatnessResiduals {
    pub fn max_turning(&self) -> f64 {
        max_finite(&self.turning)
    }

    pub fn max_twist(&self) -> f64 {
        max_finite(&self.twist)
    }

    pub fn twist_at(&self, it: usize, is: usize) -> f64 {
        self.twist[it * self.ss.len() + is]
    }

    /// Number of grid entries that could not be evaluated.
    pub fn skipped(&self) -> usize {
        self.turning.iter().chain(&self.twist).filter(|x| x.is_nan()).count()
    }

    pub fn is_flat(&self) -> bool {
        self.max_turning() <= FLATNESS_TOL && self.max_twist() <= FLATNESS_TOL
    }
}

pub fn flatness_residuals(p: &PencilSurface, ts: &[f64], ss: &[f64]) -> FlatnessResiduals {
    let turning = ts
        .iter()
        .map(|&t| p.marching.at(t).map_or(f64::NAN, |m| m.turning()))
        .collect();
    let twist = ts
        .iter()
        .flat_map(|&t| ss.iter().map(move |&s| (s, t)))
        .map(|(s, t)| p.coefficients(s, t).map_or(f64::NAN, |c| c.twist_t()))
        .collect();
    FlatnessResiduals {
        ts: ts.to_vec(),
        ss: ss.to_vec(),
        turning,
        twist,
    }
}
