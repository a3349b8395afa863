#![allow(dead_code)]

use pencil4::curve::{AnalyticCurve, CurveSpec, Spine, WCurve};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn seed_curve() -> WCurve {
    WCurve::new(3f64.sqrt() / 2.0, 0.25, 1.0, 2.0).unwrap()
}

pub fn seed_spine() -> Spine {
    Spine::frenet(CurveSpec::W(seed_curve()))
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Unit-speed W-curve with distinct speeds in [0.5, 3] and both radii
/// bounded away from zero.
pub fn random_w_curve(rng: &mut StdRng) -> WCurve {
    loop {
        let c: f64 = rng.gen_range(0.5..3.0);
        let d: f64 = rng.gen_range(0.5..3.0);
        if (c - d).abs() < 0.2 {
            continue;
        }
        let b = rng.gen_range(0.15..0.85) / d;
        let a = (1.0 - b * b * d * d).sqrt() / c;
        return WCurve::new(a, b, c, d).unwrap();
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Catenary in one plane and a circle in the orthogonal one, weighted so
/// the sum stays unit speed; all three curvatures vary with `s`. The
/// second curvature vanishes at `s = 0`, so the domain stays positive.
pub fn catenary_circle() -> AnalyticCurve {
    AnalyticCurve::parse(
        ["0.6*ln(s + sqrt(1 + s^2))", "0.6*sqrt(1 + s^2)", "0.8*cos(s)", "0.8*sin(s)"],
        "s",
        (0.1, 1.5),
    )
    .unwrap()
}
