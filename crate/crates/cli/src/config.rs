//! The JSON scene description and its assembly into a pencil.
//!
//! ```json
//! {
//!   "curve": { "w_curve": { "a": "sqrt(3)/2", "b": 0.25, "c": 1, "d": 2 } },
//!   "frame": "auto",
//!   "marching": "ruled",
//!   "domain": { "s": [0, 6.283185307179586], "t": [0, 0.5], "ns": 50, "nt": 50 },
//!   "output": { "format": "obj", "projection": "drop:4" }
//! }
//! ```
//!
//! Numbers may also be given as constant expressions such as `"2/sqrt(7)"`.

use std::f64::consts::TAU;
use std::path::Path;

use pencil4::curve::{AnalyticCurve, CurveSpec, FrameConvention, Spine, WCurve};
use pencil4::expr::parse;
use pencil4::families::{
    flat_polar_solution, polar_marching, vranceanu_profile, FlatCase, FlatPolarSolution, RotationProfile,
};
use pencil4::pencil::{MarchingScale, PencilSurface};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Value(f64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<f64, CliError> {
        match self {
            Number::Value(v) => Ok(*v),
            Number::Text(t) => {
                let e = parse(t, "x")?;
                if !e.is_constant() {
                    return Err(CliError::Config(format!("`{t}` is not a constant")));
                }
                Ok(e.eval(0.0)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveConfig {
    WCurve { a: Number, b: Number, c: Number, d: Number },
    Analytic { components: [String; 4] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameConfig {
    #[default]
    Auto,
    Frenet,
    Rotating,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MarchingConfig {
    Expressions { a: String, b: String },
    Polar { r: String },
    Ruled,
    Vranceanu { r: String, a: Number, b: Number },
    FlatPolar { case: String, c1: Number, c2: Number },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    #[serde(default)]
    pub s: Option<[f64; 2]>,
    pub t: [f64; 2],
    #[serde(default = "default_samples")]
    pub ns: usize,
    #[serde(default = "default_samples")]
    pub nt: usize,
}

fn default_samples() -> usize {
    32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Obj,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub projection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    #[serde(default)]
    pub curve: Option<CurveConfig>,
    #[serde(default)]
    pub frame: FrameConfig,
    pub marching: MarchingConfig,
    pub domain: DomainConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<SceneConfig, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<SceneConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        SceneConfig::from_json(&text)
    }
}

/// Which family a scene's pencil belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum SceneKind {
    Expressions,
    Polar,
    Ruled,
    Vranceanu(RotationProfile),
    FlatPolar(Box<FlatPolarSolution>),
}

/// An assembled pencil with its sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub pencil: PencilSurface,
    pub kind: SceneKind,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub ns: usize,
    pub nt: usize,
}

fn range(name: &str, r: [f64; 2]) -> Result<(f64, f64), CliError> {
    if !(r[0].is_finite() && r[1].is_finite() && r[0] < r[1]) {
        return Err(CliError::Config(format!("{name}-range [{}, {}] is empty", r[0], r[1])));
    }
    Ok((r[0], r[1]))
}

fn build_curve(curve: &CurveConfig, s_range: Option<(f64, f64)>) -> Result<CurveSpec, CliError> {
    Ok(match curve {
        CurveConfig::WCurve { a, b, c, d } => {
            let (lo, hi) = s_range.unwrap_or((0.0, TAU));
            CurveSpec::W(WCurve::new(a.value()?, b.value()?, c.value()?, d.value()?)?.with_domain(lo, hi))
        }
        CurveConfig::Analytic { components } => {
            let s = s_range.ok_or_else(|| CliError::Config("analytic curves need domain.s".into()))?;
            let refs = [&*components[0], &*components[1], &*components[2], &*components[3]];
            CurveSpec::Analytic(AnalyticCurve::parse(refs, "s", s)?)
        }
    })
}

fn build_spine(curve: CurveSpec, frame: FrameConfig) -> Result<Spine, CliError> {
    Ok(match frame {
        FrameConfig::Auto => Spine::auto(curve)?,
        FrameConfig::Frenet => Spine::new(curve, FrameConvention::Frenet),
        FrameConfig::Rotating => Spine::new(curve, FrameConvention::Rotating),
        FrameConfig::Parallel => Spine::new(curve, FrameConvention::Parallel),
    })
}

impl Scene {
    /// Builds the scene; `grid` overrides the configured sample counts.
    pub fn build(cfg: &SceneConfig, grid: Option<(usize, usize)>) -> Result<Scene, CliError> {
        let t_range = range("t", cfg.domain.t)?;
        let s_cfg = cfg.domain.s.map(|s| range("s", s)).transpose()?;
        let (ns, nt) = grid.unwrap_or((cfg.domain.ns, cfg.domain.nt));
        if ns < 2 || nt < 2 {
            return Err(CliError::Config(format!("grid {ns}x{nt} needs at least 2 samples per side")));
        }
        let need_curve = || {
            cfg.curve
                .as_ref()
                .ok_or_else(|| CliError::Config("this marching needs a curve".into()))
                .and_then(|c| build_curve(c, s_cfg))
        };
        let (pencil, kind) = match &cfg.marching {
            MarchingConfig::Expressions { a, b } => {
                let spine = build_spine(need_curve()?, cfg.frame)?;
                let m = MarchingScale::parse(a, b, t_range)?;
                (PencilSurface::new(spine, m), SceneKind::Expressions)
            }
            MarchingConfig::Polar { r } => {
                let spine = build_spine(need_curve()?, cfg.frame)?;
                let m = polar_marching(parse(r, "t")?, t_range)?;
                (PencilSurface::new(spine, m), SceneKind::Polar)
            }
            MarchingConfig::Ruled => {
                let spine = build_spine(need_curve()?, cfg.frame)?;
                let mut p = pencil4::families::ruled_pencil(spine)?;
                p.marching.domain = t_range;
                (p, SceneKind::Ruled)
            }
            MarchingConfig::Vranceanu { r, a, b } => {
                let mut profile = vranceanu_profile(parse(r, "t")?, a.value()?, b.value()?, t_range)?;
                if let Some((lo, hi)) = s_cfg {
                    profile.generator = profile.generator.with_domain(lo, hi);
                }
                (profile.pencil()?, SceneKind::Vranceanu(profile))
            }
            MarchingConfig::FlatPolar { case, c1, c2 } => {
                let case = FlatCase::from_name(case)
                    .ok_or_else(|| CliError::Config(format!("unknown flat case `{case}` (use i, ii, iii or iv)")))?;
                let sol = flat_polar_solution(case, c1.value()?, c2.value()?, need_curve()?, t_range)?;
                (sol.pencil.clone(), SceneKind::FlatPolar(Box::new(sol)))
            }
        };
        let s_range = s_cfg.unwrap_or_else(|| pencil.s_domain());
        Ok(Scene {
            pencil,
            kind,
            s_range,
            t_range,
            ns,
            nt,
        })
    }

    pub fn s_values(&self) -> Vec<f64> {
        linspace(self.s_range, self.ns)
    }

    pub fn t_values(&self) -> Vec<f64> {
        linspace(self.t_range, self.nt)
    }
}

pub fn linspace(r: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                r.1
            } else {
                r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RULED: &str = r#"{
        "curve": {"w_curve": {"a": "sqrt(3)/2", "b": 0.25, "c": 1, "d": 2}},
        "marching": "ruled",
        "domain": {"t": [0, 0.5], "ns": 5, "nt": 4}
    }"#;

    #[test]
    fn ruled_scene() {
        let cfg = SceneConfig::from_json(RULED).unwrap();
        let scene = Scene::build(&cfg, None).unwrap();
        assert_eq!(scene.kind, SceneKind::Ruled);
        assert_eq!((scene.ns, scene.nt), (5, 4));
        assert_eq!(scene.s_range, (0.0, TAU));
        assert_eq!(scene.pencil.t_domain(), (0.0, 0.5));
        assert_eq!(Scene::build(&cfg, Some((7, 3))).unwrap().ns, 7);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(SceneConfig::from_json("{}"), Err(CliError::Config(_))));
        let bad = RULED.replace("\"ruled\"", "\"spiral\"");
        assert!(matches!(SceneConfig::from_json(&bad), Err(CliError::Config(_))));
        let cfg = SceneConfig::from_json(&RULED.replace("[0, 0.5]", "[1, 0]")).unwrap();
        assert!(matches!(Scene::build(&cfg, None), Err(CliError::Config(_))));
        let cfg = SceneConfig::from_json(RULED).unwrap();
        assert!(matches!(Scene::build(&cfg, Some((1, 5))), Err(CliError::Config(_))));
    }

    #[test]
    fn constant_expressions_as_numbers() {
        assert_eq!(Number::Text("2/sqrt(4)".into()).value().unwrap(), 1.0);
        assert!(Number::Text("x".into()).value().is_err());
    }

    #[test]
    fn linspace_hits_both_ends() {
        let v = linspace((0.0, 0.3), 4);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.3);
    }
}
