//! Surface pencils through a curve in Euclidean 4-space.
//!
//! A pencil is the two-parameter patch
//!
//! ```text
//! X(s, t) = γ(s) + A(t) V₂(s) + B(t) V₄(s)
//! ```
//!
//! where `γ` is a unit-speed curve with Frenet frame `V₁..V₄` and `A`, `B`
//! are the marching-scale functions. The crate builds such surfaces
//! ([`pencil`]), evaluates their Gaussian, normal and mean curvature in
//! closed form ([`curvature`]), constructs the special families
//! (rotation, Vranceanu, Lawson, ruled and flat polar pencils;
//! [`families`]) and checks every closed form against an independent
//! finite-difference oracle for arbitrary immersions ([`oracle`]).
//!
//! ```
//! use pencil4::curve::{CurveSpec, Spine, WCurve};
//! use pencil4::families::ruled_pencil;
//!
//! let gamma = WCurve::new(3f64.sqrt() / 2.0, 0.25, 1.0, 2.0).unwrap();
//! let pencil = ruled_pencil(Spine::frenet(CurveSpec::W(gamma))).unwrap();
//! let report = pencil4::curvature::curvature_report(&pencil, 0.0, 0.0).unwrap();
//! assert!((report.gaussian + 0.140385).abs() < 1e-6);
//! ```

pub mod curvature;
pub mod curve;
pub mod expr;
pub mod families;
pub mod oracle;
pub mod pencil;

pub use curve::Vec4;

// The guide's chapters run as doctests so its snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/pencils.md")]
    mod pencils {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

use expr::ExprError;

/// Which regularity condition of a pencil failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    /// `a² + b² > 0`: the s-direction tangent `X_s` vanished.
    Spine,
    /// `A′² + B′² > 0`: the t-direction tangent `X_t` vanished.
    Marching,
}

impl std::fmt::Display for Regularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regularity::Spine => f.write_str("a^2 + b^2 > 0"),
            Regularity::Marching => f.write_str("A'^2 + B'^2 > 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("curve is not unit speed: |γ′({s})| = {speed}")]
    NotUnitSpeed { s: f64, speed: f64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("Frenet frame degenerates at s = {s}: osculating rank {rank}")]
    DegenerateFrame { rank: usize, s: f64 },
    #[error("no frame completion for this curve: {0}")]
    UnsupportedCompletion(String),
    #[error("regularity condition {condition} fails at (s, t) = ({s}, {t}): value {value:e}")]
    RegularityViolation {
        condition: Regularity,
        s: f64,
        t: f64,
        value: f64,
    },
    #[error("profile system is singular (determinant {0:e})")]
    SingularProfileSystem(f64),
    #[error("case {case} precondition fails: {detail}")]
    ConstraintViolation { case: String, detail: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tangent vectors are numerically dependent at ({u}, {v}): Gram determinant {gram:e}")]
    RankDeficiency { u: f64, v: f64, gram: f64 },
    #[error("differencing stencil at ({u}, {v}) leaves the immersion domain")]
    StepUnderflow { u: f64, v: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
