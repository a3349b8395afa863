//! Special pencils: double-rotation (Vranceanu, Lawson), ruled and polar.
//!
//! A pencil on the W-curve `(a cos cs, a sin cs, b cos ds, b sin ds)` is a
//! double-rotation surface
//!
//! ```text
//! X(s, t) = (f cos cs, f sin cs, g cos ds, g sin ds)
//! f = a + (bd²B − ac²A)/κ₁
//! g = b − (bd²A + ac²B)/κ₁
//! ```
//!
//! and [`rotation_marching`] inverts this to find `A, B` from `f, g`. The
//! ruled pencil has `A = B = t/√2`; polar pencils have `A = r cos t`,
//! `B = r sin t` and are flat along the four radius families returned by
//! [`flat_polar_solution`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::curvature::{closed_form, flatness_residuals, FLATNESS_TOL};
use crate::curve::{parallel_frame, CurveSpec, FrameConvention, Spine, Vec4, WCurve};
use crate::expr::Expr;
use crate::oracle::Immersion;
use crate::pencil::{MarchingScale, PencilSurface};
use crate::{Error, Result};

/// `κ₁²` below this makes the profile system singular.
pub const PROFILE_SINGULAR_TOL: f64 = 1e-14;
/// Tolerance on the case constraints of [`flat_polar_solution`].
pub const CONSTRAINT_TOL: f64 = 1e-8;
/// Residual target of [`equal_torsion_w_curves`].
pub const ROOT_TOL: f64 = 1e-12;

const CONSTRAINT_SAMPLES: usize = 64;

fn sample(range: (f64, f64), n: usize, i: usize) -> f64 {
    if n == 1 {
        return 0.5 * (range.0 + range.1);
    }
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Profile functions `f(t), g(t)` of a double-rotation surface together
/// with the W-curve generator that carries it as a pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationProfile {
    pub f: Expr,
    pub g: Expr,
    pub generator: WCurve,
    pub t_domain: (f64, f64),
}

impl RotationProfile {
    pub fn new(f: Expr, g: Expr, generator: WCurve, t_domain: (f64, f64)) -> RotationProfile {
        RotationProfile {
            f,
            g,
            generator,
            t_domain,
        }
    }

    /// `κ₁ = √(a²c⁴ + b²d⁴)` of the generator.
    pub fn k1(&self) -> f64 {
        self.generator.first_curvature()
    }

    /// Frenet frame for a generic generator, the rotating completion when
    /// `c = d`.
    pub fn spine(&self) -> Spine {
        let convention = if self.generator.is_circle() {
            FrameConvention::Rotating
        } else {
            FrameConvention::Frenet
        };
        Spine::new(CurveSpec::W(self.generator), convention)
    }

    /// The surface as a pencil on [`RotationProfile::spine`].
    pub fn pencil(&self) -> Result<PencilSurface> {
        Ok(PencilSurface::new(self.spine(), rotation_marching(self)?))
    }

    /// `+1` when the spine's `V₄` equals `(bd² cos cs, bd² sin cs,
    /// −ac² cos ds, −ac² sin ds)/κ₁`, `−1` when it is the negative.
    pub fn frame_sign(&self) -> Result<f64> {
        let w = &self.generator;
        let (p, q) = (w.a * w.c * w.c, w.b * w.d * w.d);
        let s = w.domain.0;
        let frame = self.spine().frame(s)?;
        let (sc, cc) = (w.c * s).sin_cos();
        let (sd, cd) = (w.d * s).sin_cos();
        let reference = Vec4::new(q * cc, q * sc, -p * cd, -p * sd) / self.k1();
        Ok(frame.v(4).dot(&reference).signum())
    }

    /// `f, g` recovered from the marching values `A, B` at one `t`.
    pub fn profile_from_marching(&self, a_val: f64, b_val: f64) -> Result<(f64, f64)> {
        let w = &self.generator;
        let (p, q) = (w.a * w.c * w.c, w.b * w.d * w.d);
        let k1 = self.k1();
        let b_val = b_val * self.frame_sign()?;
        Ok((
            w.a + (q * b_val - p * a_val) / k1,
            w.b - (q * a_val + p * b_val) / k1,
        ))
    }
}

impl Immersion for RotationProfile {
    fn point(&self, s: f64, t: f64) -> Result<Vec4> {
        let (f, g) = (self.f.eval(t)?, self.g.eval(t)?);
        let w = &self.generator;
        let (sc, cc) = (w.c * s).sin_cos();
        let (sd, cd) = (w.d * s).sin_cos();
        Ok(Vec4::new(f * cc, f * sc, g * cd, g * sd))
    }
}

/// Marching functions turning the generator's pencil into the
/// double-rotation surface of `profile`.
///
/// The inversion assumes `V₄ ∝ (bd² cos cs, bd² sin cs, −ac² cos ds,
/// −ac² sin ds)`. The Frenet `V₄` of a W-curve is either this vector or its
/// negative depending on the parameters; `B` absorbs the sign.
pub fn rotation_marching(profile: &RotationProfile) -> Result<MarchingScale> {
    let w = &profile.generator;
    let (p, q) = (w.a * w.c * w.c, w.b * w.d * w.d);
    let k1_sq = p * p + q * q;
    if k1_sq < PROFILE_SINGULAR_TOL {
        return Err(Error::SingularProfileSystem(k1_sq));
    }
    let k1 = k1_sq.sqrt();
    let sigma = profile.frame_sign()?;

    let df = profile.f.clone() - w.a;
    let dg = profile.g.clone() - w.b;
    let a_expr = -(df.clone() * p + dg.clone() * q) / k1;
    let b_expr = (df * q - dg * p) * (sigma / k1);
    MarchingScale::new(a_expr, b_expr, profile.t_domain)
}

/// Vranceanu surface `r(t)(cos t cos s, cos t sin s, sin t cos s, sin t sin s)`
/// as a pencil on the circle `(a cos s, a sin s, b cos s, b sin s)`.
pub fn vranceanu(r: Expr, a: f64, b: f64, t_domain: (f64, f64)) -> Result<PencilSurface> {
    vranceanu_profile(r, a, b, t_domain)?.pencil()
}

/// The profile behind [`vranceanu`], useful as an [`Immersion`].
pub fn vranceanu_profile(r: Expr, a: f64, b: f64, t_domain: (f64, f64)) -> Result<RotationProfile> {
    let generator = WCurve::new(a, b, 1.0, 1.0)?;
    let f = r.clone() * Expr::var().cos();
    let g = r * Expr::var().sin();
    Ok(RotationProfile::new(f, g, generator, t_domain))
}

/// Lawson surface `(cos t cos cs, cos t sin cs, sin t cos s, sin t sin s)`.
///
/// The generator is `a = 1/(c√2)`, `b = 1/√2`, `d = 1`; use
/// [`RotationProfile::pencil`] for the pencil form.
pub fn lawson(c: f64) -> Result<RotationProfile> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("Lawson parameter must be positive, got {c}")));
    }
    let generator = WCurve::new(FRAC_1_SQRT_2 / c, FRAC_1_SQRT_2, c, 1.0)?;
    Ok(RotationProfile::new(
        Expr::var().cos(),
        Expr::var().sin(),
        generator,
        (0.0, 2.0 * PI),
    ))
}

/// Pencil with unit ruling `(V₂ + V₄)/√2`, i.e. `A = B = t/√2`, on
/// `t ∈ [−1, 1]`.
pub fn ruled_pencil(spine: Spine) -> Result<PencilSurface> {
    let (lo, hi) = spine.curve.domain();
    spine.frame(0.5 * (lo + hi))?;
    let m = Expr::var() * FRAC_1_SQRT_2;
    Ok(PencilSurface::new(spine, MarchingScale::new(m.clone(), m, (-1.0, 1.0))?))
}

/// Closed forms for the ruled pencil in the form they are usually quoted:
/// `K = −(κ₂−κ₃)²/D²` and `K_N = (κ₂−κ₃)(t(κ₁²+κ₂²−κ₃²) − κ₁)/(2D²)` with
/// `D = (1−tκ₁)² + t²(κ₂−κ₃)²`.
///
/// Direct computation gives half this `K` at `t = 0`; the function is kept
/// so reports can show the discrepancy. `K_N` agrees at `t = 0`.
pub fn ruled_curvature_as_printed(kappa: [f64; 3], t: f64) -> (f64, f64) {
    let [k1, k2, k3] = kappa;
    let d = (1.0 - t * k1).powi(2) + t * t * (k2 - k3).powi(2);
    let k = -(k2 - k3).powi(2) / (d * d);
    let kn = (k2 - k3) * (t * (k1 * k1 + k2 * k2 - k3 * k3) - k1) / (2.0 * d * d);
    (k, kn)
}

/// W-curves with `κ₂ = κ₃` for fixed `c, d`, found by scanning
/// `b ∈ (0, 1/d)` (with `a` fixed by unit speed) for sign changes of
/// `κ₂ − κ₃` and bisecting each one until `|κ₂ − κ₃| ≤ 1e−12`.
pub fn equal_torsion_w_curves(c: f64, d: f64) -> Result<Vec<WCurve>> {
    if !(c > 0.0 && d > 0.0) || (c - d).abs() < 1e-9 {
        return Err(Error::InvalidCurve(format!(
            "need distinct positive rotation speeds, got c = {c}, d = {d}"
        )));
    }
    let curve_at = |b: f64| -> Result<WCurve> {
        let a = (1.0 - b * b * d * d).max(0.0).sqrt() / c;
        WCurve::new(a, b, c, d)
    };
    let residual = |b: f64| -> Result<f64> {
        let f = crate::curve::frenet_apparatus(&CurveSpec::W(curve_at(b)?), 0.0)?;
        Ok(f.kappa(2) - f.kappa(3))
    };
    const SCAN: usize = 400;
    let hi = 1.0 / d;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..SCAN {
        let b = hi * i as f64 / SCAN as f64;
        let r = match residual(b) {
            Ok(r) => r,
            Err(_) => {
                prev = None;
                continue;
            }
        };
        if let Some((b0, r0)) = prev {
            if r0.signum() != r.signum() {
                let (mut lo_b, mut hi_b, mut lo_r) = (b0, b, r0);
                let mut best = (b0, r0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo_b + hi_b);
                    let rm = residual(mid)?;
                    if rm.abs() < best.1.abs() {
                        best = (mid, rm);
                    }
                    if rm.abs() <= ROOT_TOL || hi_b - lo_b < f64::EPSILON * hi {
                        break;
                    }
                    if rm.signum() == lo_r.signum() {
                        lo_b = mid;
                        lo_r = rm;
                    } else {
                        hi_b = mid;
                    }
                }
                if best.1.abs() <= ROOT_TOL {
                    roots.push(curve_at(best.0)?);
                }
            }
        }
        prev = Some((b, r));
    }
    Ok(roots)
}

/// `A = r cos t`, `B = r sin t`.
pub fn polar_marching(r: Expr, t_domain: (f64, f64)) -> Result<MarchingScale> {
    let a = r.clone() * Expr::var().cos();
    let b = r * Expr::var().sin();
    MarchingScale::new(a, b, t_domain)
}

/// The four flat polar families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatCase {
    /// Planar spine, `r = 1/(c₁ sin t − c₂ cos t)`.
    I,
    /// `κ₃(c₂ + κ₁) = c₁κ₂`, `r = 1/(c₁ sin t − c₂ cos t)`.
    II,
    /// Circle spine, `r = −1/(c₁ sin t − c₂ cos t)`.
    III,
    /// `κ₁ ≡ 1/c₁`, `r = c₁/cos t`.
    IV,
}

impl FlatCase {
    pub fn name(&self) -> &'static str {
        match self {
            FlatCase::I => "i",
            FlatCase::II => "ii",
            FlatCase::III => "iii",
            FlatCase::IV => "iv",
        }
    }

    pub fn from_name(name: &str) -> Option<FlatCase> {
        match name.to_ascii_lowercase().as_str() {
            "i" | "1" => Some(FlatCase::I),
            "ii" | "2" => Some(FlatCase::II),
            "iii" | "3" => Some(FlatCase::III),
            "iv" | "4" => Some(FlatCase::IV),
            _ => None,
        }
    }
}

impl std::fmt::Display for FlatCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A flat polar radius function and the curve condition it comes with.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPolarParams {
    pub case: FlatCase,
    pub c1: f64,
    pub c2: f64,
    pub r: Expr,
    pub constraint: String,
}

impl FlatPolarParams {
    pub fn new(case: FlatCase, c1: f64, c2: f64) -> Result<FlatPolarParams> {
        let t = Expr::var;
        let denom = t().sin() * c1 - t().cos() * c2;
        let (r, constraint) = match case {
            FlatCase::I => (1.0 / denom, "planar spine".to_string()),
            FlatCase::II => (
                1.0 / denom,
                format!("κ₃(κ₁ + {c2}) = {c1}·κ₂"),
            ),
            FlatCase::III => (-1.0 / denom, "circle spine".to_string()),
            FlatCase::IV => (c1 / t().cos(), format!("κ₁ = 1/{c1}")),
        };
        let degenerate = match case {
            FlatCase::IV => c1 == 0.0,
            _ => c1 == 0.0 && c2 == 0.0,
        };
        if degenerate {
            return Err(Error::Domain(format!(
                "case {case} radius is undefined for c1 = {c1}, c2 = {c2}"
            )));
        }
        Ok(FlatPolarParams {
            case,
            c1,
            c2,
            r,
            constraint,
        })
    }

    /// Parameters where the radius has a pole: zeros of `c₁ sin t − c₂ cos t`
    /// (cases i–iii) or of `cos t` (case iv).
    pub fn poles_in(&self, range: (f64, f64)) -> Vec<f64> {
        // the denominator is ρ sin(t − φ)
        let phi = match self.case {
            FlatCase::IV => PI / 2.0,
            _ => self.c2.atan2(self.c1),
        };
        let first = ((range.0 - phi) / PI).ceil() as i64;
        let last = ((range.1 - phi) / PI).floor() as i64;
        (first..=last).map(|k| phi + k as f64 * PI).collect()
    }
}

/// Residuals `ε₁ = 2r′² − rr″ + r²` (one per `t`) and
/// `ε₂ = κ₁κ₃r² + (r′κ₂ − rκ₃)cos t − (r′κ₃ + rκ₂)sin t` (t-major over
/// `ts × ss`) of the polar flatness system.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatOdeResiduals {
    pub eps1: Vec<f64>,
    pub eps2: Vec<f64>,
}

impl FlatOdeResiduals {
    pub fn max_eps1(&self) -> f64 {
        self.eps1.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_eps2(&self) -> f64 {
        self.eps2.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn flat_ode_residuals(r: &Expr, spine: &Spine, ts: &[f64], ss: &[f64]) -> Result<FlatOdeResiduals> {
    let dr = r.differentiate();
    let ddr = dr.differentiate();
    let frames = ss.iter().map(|&s| spine.frame(s)).collect::<Result<Vec<_>>>()?;
    let mut eps1 = Vec::with_capacity(ts.len());
    let mut eps2 = Vec::with_capacity(ts.len() * ss.len());
    for &t in ts {
        let (r0, r1, r2) = (r.eval(t)?, dr.eval(t)?, ddr.eval(t)?);
        eps1.push(2.0 * r1 * r1 - r0 * r2 + r0 * r0);
        let (sn, cs) = t.sin_cos();
        for f in &frames {
            let [k1, k2, k3] = f.curvatures;
            eps2.push(k1 * k3 * r0 * r0 + (r1 * k2 - r0 * k3) * cs - (r1 * k3 + r0 * k2) * sn);
        }
    }
    Ok(FlatOdeResiduals { eps1, eps2 })
}

/// Grid check of a flat polar pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatVerification {
    pub ns: usize,
    pub nt: usize,
    pub max_eps1: f64,
    pub max_eps2: f64,
    /// Maxima of the two flatness quantities `A′B″ − B′A″` and `ab_t − ba_t`.
    pub max_turning: f64,
    pub max_twist: f64,
    /// Largest closed-form `|K|` over regular grid points.
    pub max_abs_gaussian: f64,
    /// Grid points skipped as irregular.
    pub skipped: usize,
}

impl FlatVerification {
    pub fn passes(&self) -> bool {
        self.max_eps1 <= FLATNESS_TOL
            && self.max_eps2 <= FLATNESS_TOL
            && self.max_turning <= FLATNESS_TOL
            && self.max_twist <= FLATNESS_TOL
            && self.max_abs_gaussian <= 1e-8
    }
}

/// Checks ODE residuals, flatness quantities and `K` on an `ns × nt` grid.
pub fn verify_flat_polar(
    params: &FlatPolarParams,
    pencil: &PencilSurface,
    ns: usize,
    nt: usize,
) -> Result<FlatVerification> {
    let ts: Vec<f64> = (0..nt).map(|i| sample(pencil.t_domain(), nt, i)).collect();
    let ss: Vec<f64> = (0..ns).map(|i| sample(pencil.s_domain(), ns, i)).collect();
    let ode = flat_ode_residuals(&params.r, &pencil.spine, &ts, &ss)?;
    let flat = flatness_residuals(pencil, &ts, &ss);
    let mut max_k = 0.0f64;
    let mut skipped = 0;
    for &t in &ts {
        for &s in &ss {
            match pencil.regular_point(s, t) {
                Ok(p) => max_k = max_k.max(closed_form::gaussian(&p).abs()),
                Err(Error::RegularityViolation { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(FlatVerification {
        ns,
        nt,
        max_eps1: ode.max_eps1(),
        max_eps2: ode.max_eps2(),
        max_turning: flat.max_turning(),
        max_twist: flat.max_twist(),
        max_abs_gaussian: max_k,
        skipped,
    })
}

/// A flat polar pencil with its verification record.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPolarSolution {
    pub params: FlatPolarParams,
    pub pencil: PencilSurface,
    pub verification: FlatVerification,
}

fn violation(case: FlatCase, detail: String) -> Error {
    Error::ConstraintViolation {
        case: case.name().to_string(),
        detail,
    }
}

fn curve_samples(curve: &CurveSpec) -> impl Iterator<Item = f64> {
    let domain = curve.domain();
    (0..CONSTRAINT_SAMPLES).map(move |i| sample(domain, CONSTRAINT_SAMPLES, i))
}

/// Builds and verifies the flat polar pencil of `case` on `curve`.
///
/// Planar spines (cases i and iii) use the parallel frame completion, so
/// `κ₂ = κ₃ = 0`. Cases ii and iv pick the frame as [`Spine::auto`] does.
pub fn flat_polar_solution(
    case: FlatCase,
    c1: f64,
    c2: f64,
    curve: CurveSpec,
    t_range: (f64, f64),
) -> Result<FlatPolarSolution> {
    let params = FlatPolarParams::new(case, c1, c2)?;
    let poles = params.poles_in(t_range);
    if let Some(t) = poles.first() {
        return Err(Error::Domain(format!(
            "radius of case {case} has a pole at t = {t} inside [{}, {}]",
            t_range.0, t_range.1
        )));
    }

    let spine = match case {
        FlatCase::I | FlatCase::III => {
            if parallel_frame(&curve, sample(curve.domain(), 2, 0)).is_err() {
                return Err(violation(case, "spine is not a planar curve".into()));
            }
            Spine::new(curve, FrameConvention::Parallel)
        }
        FlatCase::II | FlatCase::IV => Spine::auto(curve)?,
    };

    let mut k1_range = (f64::INFINITY, f64::NEG_INFINITY);
    for s in curve_samples(&spine.curve) {
        let f = spine.frame(s)?;
        let [k1, k2, k3] = f.curvatures;
        k1_range = (k1_range.0.min(k1), k1_range.1.max(k1));
        match case {
            FlatCase::II => {
                let gap = k3 * (c2 + k1) - c1 * k2;
                if gap.abs() > CONSTRAINT_TOL {
                    return Err(violation(
                        case,
                        format!("κ₃(κ₁ + c₂) − c₁κ₂ = {gap:e} at s = {s}"),
                    ));
                }
            }
            FlatCase::IV => {
                let gap = k1 - 1.0 / c1;
                if gap.abs() > CONSTRAINT_TOL {
                    return Err(violation(case, format!("κ₁ − 1/c₁ = {gap:e} at s = {s}")));
                }
            }
            FlatCase::I | FlatCase::III => {}
        }
    }
    if case == FlatCase::III && k1_range.1 - k1_range.0 > CONSTRAINT_TOL {
        return Err(violation(
            case,
            format!("first curvature varies over [{}, {}]", k1_range.0, k1_range.1),
        ));
    }

    let pencil = PencilSurface::new(spine, polar_marching(params.r.clone(), t_range)?);
    let verification = verify_flat_polar(&params, &pencil, 32, 32)?;
    Ok(FlatPolarSolution {
        params,
        pencil,
        verification,
    })
}
