//! Finite-difference differential geometry for any immersion `(u, v) → E⁴`.
//!
//! The oracle never looks at how a surface was built. It samples positions,
//! differentiates them with five-point stencils refined by one Richardson
//! step, chooses a normal frame by Gram–Schmidt of the standard basis, and
//! evaluates curvature in an orthonormal tangent frame. It is the reference
//! against which every closed form in this crate is tested.

use crate::curve::Vec4;
use crate::pencil::PencilSurface;
use crate::{Error, Result};

/// A parametrized surface patch.
pub trait Immersion {
    fn point(&self, u: f64, v: f64) -> Result<Vec4>;

    /// Rectangular parameter domain, `None` when unbounded.
    fn domain(&self) -> Option<[(f64, f64); 2]> {
        None
    }
}

impl Immersion for PencilSurface {
    fn point(&self, u: f64, v: f64) -> Result<Vec4> {
        self.position(u, v)
    }
}

impl<T: Immersion + ?Sized> Immersion for &T {
    fn point(&self, u: f64, v: f64) -> Result<Vec4> {
        (**self).point(u, v)
    }

    fn domain(&self) -> Option<[(f64, f64); 2]> {
        (**self).domain()
    }
}

/// An immersion backed by a closure.
pub struct FnImmersion<F> {
    f: F,
    domain: Option<[(f64, f64); 2]>,
}

impl<F: Fn(f64, f64) -> Vec4> FnImmersion<F> {
    pub fn new(f: F) -> Self {
        FnImmersion { f, domain: None }
    }

    pub fn with_domain(mut self, u: (f64, f64), v: (f64, f64)) -> Self {
        self.domain = Some([u, v]);
        self
    }
}

impl<F: Fn(f64, f64) -> Vec4> Immersion for FnImmersion<F> {
    fn point(&self, u: f64, v: f64) -> Result<Vec4> {
        Ok((self.f)(u, v))
    }

    fn domain(&self) -> Option<[(f64, f64); 2]> {
        self.domain
    }
}

/// Differencing steps.
///
/// First derivatives use `first`, second and mixed derivatives use
/// `second`; both are multiplied by `max(1, |u|, |v|)` when
/// `scale_with_position` is set. With `richardson` the stencil is evaluated
/// at `h` and `h/2` and combined to cancel the leading error term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    pub first: f64,
    pub second: f64,
    pub scale_with_position: bool,
    pub richardson: bool,
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy {
            first: 1e-3,
            second: 5e-3,
            scale_with_position: true,
            richardson: true,
        }
    }
}

impl StepPolicy {
    /// Same step for every derivative.
    pub fn uniform(h: f64) -> Self {
        StepPolicy {
            first: h,
            second: h,
            ..StepPolicy::default()
        }
    }
}

/// Absolute differences between the Richardson-refined values and the plain
/// half-step stencil values; a rough bound on truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TruncationEstimate {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub gaussian: f64,
    pub normal_curvature: f64,
    pub mean_norm_sq: f64,
}

/// Numerical first and second fundamental forms and curvatures at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG − F²`.
    pub w2: f64,
    pub normals: [Vec4; 2],
    /// Sign of `det[X_u X_v N₁ N₂]`.
    pub normal_orientation: f64,
    /// `c[k][i][j] = ⟨X_ij, N_k⟩` with zero-based indices.
    pub c: [[[f64; 2]; 2]; 2],
    pub gaussian: f64,
    /// Normal curvature for the chosen `(N₁, N₂)`; its sign follows
    /// [`OracleReport::normal_orientation`].
    pub normal_curvature: f64,
    /// The printed `W²`-denominator variant (see
    /// [`crate::curvature::general::normal_curvature_as_printed`]).
    pub normal_curvature_as_printed: f64,
    /// Mean curvature vector components along `N₁, N₂`.
    pub mean: [f64; 2],
    pub mean_norm_sq: f64,
    pub truncation: TruncationEstimate,
}

impl OracleReport {
    /// Normal curvature for a positively oriented normal frame.
    pub fn oriented_normal_curvature(&self) -> f64 {
        self.normal_curvature * self.normal_orientation
    }
}

#[derive(Debug, Clone, Copy)]
struct Jet {
    xu: Vec4,
    xv: Vec4,
    xuu: Vec4,
    xuv: Vec4,
    xvv: Vec4,
}

/// Tangent Gram determinants below this are rank deficient.
pub const RANK_TOL: f64 = 1e-12;

const FIRST: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
const SECOND: [(f64, f64); 5] = [
    (-2.0, -1.0),
    (-1.0, 16.0),
    (0.0, -30.0),
    (1.0, 16.0),
    (2.0, -1.0),
];

/// The configured oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oracle {
    pub step: StepPolicy,
    /// Order in which standard basis vectors are offered to Gram–Schmidt
    /// when building the normal frame.
    pub seed_order: [usize; 4],
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            step: StepPolicy::default(),
            seed_order: [0, 1, 2, 3],
        }
    }
}

/// [`Oracle::forms`] with the default configuration.
pub fn numeric_forms<I: Immersion + ?Sized>(im: &I, u: f64, v: f64) -> Result<OracleReport> {
    Oracle::default().forms(im, u, v)
}

impl Oracle {
    pub fn with_step(step: StepPolicy) -> Self {
        Oracle {
            step,
            ..Oracle::default()
        }
    }

    fn steps(&self, u: f64, v: f64) -> (f64, f64) {
        let scale = if self.step.scale_with_position {
            1f64.max(u.abs()).max(v.abs())
        } else {
            1.0
        };
        (self.step.first * scale, self.step.second * scale)
    }

    /// Derivative jets at step `h1`/`h2`, and (when refining) at half step.
    fn jets<I: Immersion + ?Sized>(&self, im: &I, u: f64, v: f64) -> Result<(Jet, Jet)> {
        let (h1, h2) = self.steps(u, v);
        if let Some([du, dv]) = im.domain() {
            let reach = 2.0 * h1.max(h2);
            if u - reach < du.0 || u + reach > du.1 || v - reach < dv.0 || v + reach > dv.1 {
                return Err(Error::StepUnderflow { u, v });
            }
        }
        let at = |du: f64, dv: f64| im.point(u + du, v + dv);
        let centre = at(0.0, 0.0)?;
        let jet = |h1: f64, h2: f64| -> Result<Jet> {
            let mut xu = Vec4::zeros();
            let mut xv = Vec4::zeros();
            for (k, w) in FIRST {
                xu += at(k * h1, 0.0)? * w;
                xv += at(0.0, k * h1)? * w;
            }
            let mut xuu = Vec4::zeros();
            let mut xvv = Vec4::zeros();
            for (k, w) in SECOND {
                if k == 0.0 {
                    xuu += centre * w;
                    xvv += centre * w;
                } else {
                    xuu += at(k * h2, 0.0)? * w;
                    xvv += at(0.0, k * h2)? * w;
                }
            }
            let mut xuv = Vec4::zeros();
            for (i, wi) in FIRST {
                for (j, wj) in FIRST {
                    xuv += at(i * h2, j * h2)? * (wi * wj);
                }
            }
            Ok(Jet {
                xu: xu / (12.0 * h1),
                xv: xv / (12.0 * h1),
                xuu: xuu / (12.0 * h2 * h2),
                xuv: xuv / (144.0 * h2 * h2),
                xvv: xvv / (12.0 * h2 * h2),
            })
        };
        let coarse = jet(h1, h2)?;
        if !self.step.richardson {
            return Ok((coarse, coarse));
        }
        let fine = jet(0.5 * h1, 0.5 * h2)?;
        let r = |c: Vec4, f: Vec4| (f * 16.0 - c) / 15.0;
        let refined = Jet {
            xu: r(coarse.xu, fine.xu),
            xv: r(coarse.xv, fine.xv),
            xuu: r(coarse.xuu, fine.xuu),
            xuv: r(coarse.xuv, fine.xuv),
            xvv: r(coarse.xvv, fine.xvv),
        };
        Ok((refined, fine))
    }

    fn normal_frame(&self, xu: &Vec4, xv: &Vec4) -> [Vec4; 2] {
        let t1 = xu.normalize();
        let t2 = (xv - t1 * xv.dot(&t1)).normalize();
        let mut basis = vec![t1, t2];
        for &i in &self.seed_order {
            let mut cand = Vec4::zeros();
            cand[i] = 1.0;
            // two passes of projection keep the result orthogonal to working precision
            for _ in 0..2 {
                for b in &basis {
                    cand -= b * cand.dot(b);
                }
            }
            if cand.norm() > 0.5 {
                basis.push(cand.normalize());
            }
            if basis.len() == 4 {
                break;
            }
        }
        [basis[2], basis[3]]
    }

    fn evaluate(&self, jet: &Jet, u: f64, v: f64, normals: Option<[Vec4; 2]>) -> Result<OracleReport> {
        let e = jet.xu.dot(&jet.xu);
        let f = jet.xu.dot(&jet.xv);
        let g = jet.xv.dot(&jet.xv);
        let w2 = e * g - f * f;
        if w2 < RANK_TOL {
            return Err(Error::RankDeficiency { u, v, gram: w2 });
        }
        let normals = normals.unwrap_or_else(|| self.normal_frame(&jet.xu, &jet.xv));
        let second = [[jet.xuu, jet.xuv], [jet.xuv, jet.xvv]];
        let c: [[[f64; 2]; 2]; 2] =
            std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| second[i][j].dot(&normals[k]))));

        // orthonormal tangent frame e₁ = X_u/√E, e₂ ∝ X_v − (F/E)X_u,
        // written as e_a = Σ_p basis[a][p] X_p
        let n2 = (jet.xv - jet.xu * (f / e)).norm();
        let basis = [[1.0 / e.sqrt(), 0.0], [-f / (e * n2), 1.0 / n2]];
        let h = |k: usize, a: usize, b: usize| {
            let mut acc = 0.0;
            for p in 0..2 {
                for q in 0..2 {
                    acc += basis[a][p] * c[k][p][q] * basis[b][q];
                }
            }
            acc
        };
        let gaussian = (0..2).map(|k| h(k, 0, 0) * h(k, 1, 1) - h(k, 0, 1).powi(2)).sum();
        let normal_curvature = (0..2)
            .map(|l| h(0, 0, l) * h(1, 1, l) - h(1, 0, l) * h(0, 1, l))
            .sum();
        let mean = [0.5 * (h(0, 0, 0) + h(0, 1, 1)), 0.5 * (h(1, 0, 0) + h(1, 1, 1))];
        let orientation =
            nalgebra::Matrix4::from_columns(&[jet.xu, jet.xv, normals[0], normals[1]]).determinant();

        Ok(OracleReport {
            e,
            f,
            g,
            w2,
            normals,
            normal_orientation: orientation.signum(),
            c,
            gaussian,
            normal_curvature,
            normal_curvature_as_printed: crate::curvature::general::normal_curvature_as_printed(
                e, f, g, &c,
            ),
            mean,
            mean_norm_sq: mean[0] * mean[0] + mean[1] * mean[1],
            truncation: TruncationEstimate::default(),
        })
    }

    /// Fundamental forms and curvatures of `im` at `(u, v)`.
    pub fn forms<I: Immersion + ?Sized>(&self, im: &I, u: f64, v: f64) -> Result<OracleReport> {
        let (refined, plain) = self.jets(im, u, v)?;
        let mut report = self.evaluate(&refined, u, v, None)?;
        let rough = self.evaluate(&plain, u, v, Some(report.normals))?;
        report.truncation = TruncationEstimate {
            e: (report.e - rough.e).abs(),
            f: (report.f - rough.f).abs(),
            g: (report.g - rough.g).abs(),
            gaussian: (report.gaussian - rough.gaussian).abs(),
            normal_curvature: (report.normal_curvature - rough.normal_curvature).abs(),
            mean_norm_sq: (report.mean_norm_sq - rough.mean_norm_sq).abs(),
        };
        Ok(report)
    }
}

/// Default step of [`numeric_curve_curvatures`].
pub const CURVE_STEP: f64 = 0.02;

/// Curvatures of a unit-speed curve from finite differences of positions.
///
/// Derivatives up to order four come from seven-point stencils with one
/// Richardson step; with `Gₖ` the Gram determinant of `γ′..γ⁽ᵏ⁾`,
/// `κᵢ = √(Gᵢ₋₁Gᵢ₊₁)/Gᵢ` and `κ₃` takes the sign of `det[γ′ γ″ γ‴ γ⁗]`.
/// Shares no code with the Gram–Schmidt frame in [`crate::curve`].
pub fn numeric_curve_curvatures<F>(curve: F, s: f64, h: f64) -> Result<[f64; 3]>
where
    F: Fn(f64) -> Result<Vec4>,
{
    let stencils = |h: f64| -> Result<[Vec4; 4]> {
        let p: Vec<Vec4> = (-3..=3).map(|k| curve(s + k as f64 * h)).collect::<Result<_>>()?;
        let at = |k: i32| p[(k + 3) as usize];
        Ok([
            (at(-2) - at(-1) * 8.0 + at(1) * 8.0 - at(2)) / (12.0 * h),
            (-at(-2) + at(-1) * 16.0 - at(0) * 30.0 + at(1) * 16.0 - at(2)) / (12.0 * h * h),
            (at(-3) - at(-2) * 8.0 + at(-1) * 13.0 - at(1) * 13.0 + at(2) * 8.0 - at(3))
                / (8.0 * h.powi(3)),
            (-at(-3) + at(-2) * 12.0 - at(-1) * 39.0 + at(0) * 56.0 - at(1) * 39.0 + at(2) * 12.0
                - at(3))
                / (6.0 * h.powi(4)),
        ])
    };
    let coarse = stencils(h)?;
    let fine = stencils(0.5 * h)?;
    let d: [Vec4; 4] = std::array::from_fn(|i| (fine[i] * 16.0 - coarse[i]) / 15.0);
    let gram = |k: usize| {
        if k == 0 {
            return 1.0;
        }
        nalgebra::DMatrix::from_fn(k, k, |i, j| d[i].dot(&d[j])).determinant()
    };
    let g: Vec<f64> = (0..=4).map(gram).collect();
    let kappa = |i: usize| (g[i - 1] * g[i + 1]).max(0.0).sqrt() / g[i];
    let sign = nalgebra::Matrix4::from_columns(&d).determinant().signum();
    Ok([kappa(1), kappa(2), sign * kappa(3)])
}

/// Pass/fail threshold: a deviation passes when it is at most
/// `max(abs, rel·|reference|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn mixed(tol: f64) -> Tolerance {
        Tolerance { abs: tol, rel: tol }
    }

    pub fn allows(&self, deviation: f64, reference: f64) -> bool {
        deviation <= self.abs.max(self.rel * reference.abs())
    }
}

/// Outcome of comparing a closed-form field with an oracle field.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub quantity: String,
    /// Points compared (NaN entries on either side are skipped).
    pub compared: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Index of the worst point in the input slices.
    pub worst: Option<usize>,
    /// `closed / oracle` at the worst point.
    pub ratio_at_worst: f64,
    /// `+1` or `−1`: the global sign applied to the closed field.
    pub sign: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

/// Compares `closed` against `oracle` pointwise.
///
/// With `up_to_sign` the closed field may be negated as a whole; the sign
/// giving the smaller worst deviation is used.
pub fn compare(
    quantity: &str,
    closed: &[f64],
    oracle: &[f64],
    tolerance: Tolerance,
    up_to_sign: bool,
) -> ComparisonReport {
    assert_eq!(closed.len(), oracle.len(), "fields must share a grid");
    let run = |sign: f64| {
        let mut rep = ComparisonReport {
            quantity: quantity.to_string(),
            compared: 0,
            max_abs: 0.0,
            max_rel: 0.0,
            worst: None,
            ratio_at_worst: f64::NAN,
            sign,
            tolerance,
            pass: true,
        };
        for (i, (&c, &o)) in closed.iter().zip(oracle).enumerate() {
            if c.is_nan() || o.is_nan() {
                continue;
            }
            let c = sign * c;
            let dev = (c - o).abs();
            rep.compared += 1;
            rep.max_rel = rep.max_rel.max(dev / o.abs().max(f64::MIN_POSITIVE));
            if !tolerance.allows(dev, o) {
                rep.pass = false;
            }
            if rep.worst.is_none() || dev > rep.max_abs {
                rep.max_abs = dev;
                rep.worst = Some(i);
                rep.ratio_at_worst = c / o;
            }
        }
        rep
    };
    let plus = run(1.0);
    if !up_to_sign {
        return plus;
    }
    let minus = run(-1.0);
    if minus.max_abs < plus.max_abs {
        minus
    } else {
        plus
    }
}
