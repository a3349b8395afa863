mod common;

use common::*;
use pencil4::curve::{frenet_apparatus, frenet_residuals, AnalyticCurve, CurveSpec, Spine};
use pencil4::oracle::{numeric_curve_curvatures, CURVE_STEP};

#[test]
fn random_w_curves_have_orthonormal_frames_solving_the_structure_equations() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let w = random_w_curve(&mut rng);
        let spine = Spine::frenet(CurveSpec::W(w));
        for s in linspace(0.0, std::f64::consts::TAU, 256) {
            let f = spine.frame(s).unwrap();
            assert!(f.orthonormality_defect() <= 1e-10, "{w:?} at {s}");
            assert!((f.determinant() - 1.0).abs() <= 1e-10);
            let r = frenet_residuals(&spine, s, 1e-5).unwrap();
            assert!(r.iter().all(|x| *x <= 1e-6), "{w:?} at {s}: {r:?}");
        }
    }
}

#[test]
fn seed_curvatures_agree_with_difference_oracle() {
    let curve = CurveSpec::W(seed_curve());
    for s in [0.0, 0.9, 3.3] {
        let f = frenet_apparatus(&curve, s).unwrap();
        let k = numeric_curve_curvatures(|x| curve.position(x), s, CURVE_STEP).unwrap();
        for i in 0..3 {
            assert!((k[i] - f.curvatures[i]).abs() <= 1e-6, "κ{} at {s}: {} vs {}", i + 1, k[i], f.curvatures[i]);
        }
    }
    let f = frenet_apparatus(&curve, 0.0).unwrap();
    let want = [1.322876, 0.981981, 1.511858];
    for i in 0..3 {
        assert!((f.curvatures[i] - want[i]).abs() <= 1e-6);
    }
}

#[test]
fn w_curve_curvatures_are_constant() {
    let mut rng = rng(11);
    for _ in 0..5 {
        let curve = CurveSpec::W(random_w_curve(&mut rng));
        let first = frenet_apparatus(&curve, 0.0).unwrap().curvatures;
        for s in linspace(0.0, 6.0, 40) {
            let k = frenet_apparatus(&curve, s).unwrap().curvatures;
            for i in 0..3 {
                assert!((k[i] - first[i]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn symbolic_w_curve_matches_closed_form_frame() {
    let w = seed_curve();
    let text = [
        format!("{}*cos(s)", w.a),
        format!("{}*sin(s)", w.a),
        format!("{}*cos(2*s)", w.b),
        format!("{}*sin(2*s)", w.b),
    ];
    let analytic = AnalyticCurve::parse(
        [&text[0], &text[1], &text[2], &text[3]],
        "s",
        (0.0, 6.0),
    )
    .unwrap();
    let a = Spine::frenet(CurveSpec::Analytic(analytic));
    let b = Spine::frenet(CurveSpec::W(w));
    for s in [0.2, 1.7, 4.4] {
        let (fa, fb) = (a.frame(s).unwrap(), b.frame(s).unwrap());
        for i in 0..4 {
            assert!((fa.frame[i] - fb.frame[i]).norm() < 1e-12);
        }
        let rates = a.curvature_rates(s).unwrap();
        assert!(rates.iter().all(|r| r.abs() < 1e-8), "{rates:?}");
    }
}

#[test]
fn varying_curvature_curve_against_difference_oracle() {
    let curve = CurveSpec::Analytic(catenary_circle());
    let spine = Spine::frenet(curve.clone());
    let mut spread = 0.0f64;
    let k0 = spine.frame(0.3).unwrap().curvatures;
    for s in linspace(0.3, 1.3, 9) {
        let f = spine.frame(s).unwrap();
        let k = numeric_curve_curvatures(|x| curve.position(x), s, CURVE_STEP).unwrap();
        for i in 0..3 {
            assert!((k[i] - f.curvatures[i]).abs() <= 1e-6, "κ{} at {s}", i + 1);
            spread = spread.max((f.curvatures[i] - k0[i]).abs());
        }
        let r = frenet_residuals(&spine, s, 1e-5).unwrap();
        assert!(r.iter().all(|x| *x <= 1e-6), "{r:?}");
        // rates against a five-point difference of the oracle curvatures
        let h = 1e-2;
        let k_at = |x: f64| numeric_curve_curvatures(|y| curve.position(y), x, CURVE_STEP).unwrap();
        let (k2m, k1m, k1p, k2p) = (k_at(s - 2.0 * h), k_at(s - h), k_at(s + h), k_at(s + 2.0 * h));
        let rates = spine.curvature_rates(s).unwrap();
        for i in 0..3 {
            let fd = (k2m[i] - 8.0 * k1m[i] + 8.0 * k1p[i] - k2p[i]) / (12.0 * h);
            assert!((rates[i] - fd).abs() < 1e-4, "κ{}′ at {s}: {} vs {fd}", i + 1, rates[i]);
        }
    }
    assert!(spread > 1e-2, "curvatures should vary, spread {spread}");
}
