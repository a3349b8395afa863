mod common;

use common::*;
use pencil4::curvature::{both_routes, curvature_report};
use pencil4::curve::{CurveSpec, Spine};
use pencil4::families::{lawson, ruled_pencil, vranceanu};
use pencil4::expr::parse;
use pencil4::oracle::{compare, numeric_forms, Oracle, StepPolicy, Tolerance};
use pencil4::pencil::{MarchingScale, PencilSurface};
use rand::Rng;

fn assert_agrees(p: &PencilSurface, points: &[(f64, f64)]) {
    let (mut ck, mut ok, mut ch, mut oh, mut cn, mut on) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    for &(s, t) in points {
        let c = curvature_report(p, s, t).unwrap();
        let o = numeric_forms(p, s, t).unwrap();
        assert!(o.f.abs() <= 1e-9, "F = {} at ({s}, {t})", o.f);
        ck.push(c.gaussian);
        ok.push(o.gaussian);
        ch.push(c.h_norm_sq);
        oh.push(o.mean_norm_sq);
        cn.push(c.normal.abs());
        on.push(o.normal_curvature.abs());
    }
    let tol = Tolerance::mixed(1e-6);
    for r in [
        compare("K", &ck, &ok, tol, false),
        compare("|H|^2", &ch, &oh, tol, false),
        compare("|K_N|", &cn, &on, tol, false),
    ] {
        assert!(r.pass, "{r:?}");
    }
}

fn random_points(p: &PencilSurface, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = rng(seed);
    let (s0, s1) = p.s_domain();
    let (t0, t1) = p.t_domain();
    let mut out = Vec::new();
    while out.len() < n {
        let s = rng.gen_range(s0 + 0.05..s1 - 0.05);
        let t = rng.gen_range(t0 + 0.05..t1 - 0.05);
        if p.regular_point(s, t).is_ok() {
            out.push((s, t));
        }
    }
    out
}

#[test]
fn polynomial_marching_on_random_w_curves() {
    let mut rng = rng(3);
    for k in 0..3 {
        let spine = Spine::frenet(CurveSpec::W(random_w_curve(&mut rng)));
        let m = MarchingScale::parse("0.3*t + 0.2*t^2", "0.1 - 0.4*t + 0.3*t^3", (-0.8, 0.8)).unwrap();
        let p = PencilSurface::new(spine, m);
        assert_agrees(&p, &random_points(&p, 40, k));
    }
}

#[test]
fn pencil_on_varying_curvature_spine() {
    let spine = Spine::frenet(CurveSpec::Analytic(catenary_circle()));
    let m = MarchingScale::parse("0.2*t", "0.3*t^2 + 0.1", (-0.6, 0.6)).unwrap();
    let p = PencilSurface::new(spine, m);
    assert_agrees(&p, &random_points(&p, 30, 9));
}

#[test]
fn ruled_and_vranceanu_pencils() {
    let p = ruled_pencil(seed_spine()).unwrap();
    assert_agrees(&p, &random_points(&p, 30, 1));
    let v = vranceanu(parse("1 + 0.3*sin(2*t)", "t").unwrap(), 0.6, 0.8, (0.1, 2.5)).unwrap();
    assert_agrees(&v, &random_points(&v, 30, 2));
}

#[test]
fn ruled_pencil_seed_values_at_spine() {
    let p = ruled_pencil(seed_spine()).unwrap();
    let c = curvature_report(&p, 0.0, 0.0).unwrap();
    assert!((c.gaussian + 0.1403850221).abs() < 1e-9);
    assert!((c.normal - 0.3504809472).abs() < 1e-9);
    assert!((c.h1 + 0.4677071733).abs() < 1e-9);
    let o = numeric_forms(&p, 0.0, 0.0).unwrap();
    assert!((o.gaussian - c.gaussian).abs() < 1e-8);
    assert!((o.normal_curvature.abs() - c.normal.abs()).abs() < 1e-8);
}

#[test]
fn closed_form_routes_are_identical() {
    let p = PencilSurface::new(
        seed_spine(),
        MarchingScale::parse("sin(t)", "t^2 - 0.5", (-1.0, 1.0)).unwrap(),
    );
    for (s, t) in random_points(&p, 50, 5) {
        let (a, b) = both_routes(&p, s, t).unwrap();
        assert!((a.gaussian - b.gaussian).abs() <= 1e-10);
        assert!((a.normal - b.normal).abs() <= 1e-10);
        assert!((a.h_norm_sq - b.h_norm_sq).abs() <= 1e-10);
    }
}

#[test]
fn halving_the_step_converges_at_fourth_order() {
    let p = ruled_pencil(seed_spine()).unwrap();
    let (s, t) = (0.4, 0.3);
    let exact = curvature_report(&p, s, t).unwrap().gaussian;
    let err = |h: f64| {
        let o = Oracle::with_step(StepPolicy {
            first: h,
            second: h,
            scale_with_position: false,
            richardson: false,
        });
        (o.forms(&p, s, t).unwrap().gaussian - exact).abs()
    };
    let (coarse, fine) = (err(0.08), err(0.04));
    assert!(coarse / fine >= 4.0, "{coarse:e} -> {fine:e}");
}

#[test]
fn lawson_metric_is_diagonal() {
    let l = lawson(1.0).unwrap();
    for s in linspace(0.2, 6.0, 6) {
        for t in linspace(0.2, 1.3, 6) {
            assert!(numeric_forms(&l, s, t).unwrap().f.abs() <= 1e-9);
        }
    }
    // the pencil form of c = 1 carries the same curvature as the surface
    let p = l.pencil().unwrap();
    let c = curvature_report(&p, 0.5, 0.7).unwrap();
    let o = numeric_forms(&l, 0.5, 0.7).unwrap();
    assert!((c.gaussian - o.gaussian).abs() < 1e-7);
    assert!((c.h_norm_sq - o.mean_norm_sq).abs() < 1e-7);
}

#[test]
fn second_form_coefficients_match_oracle() {
    let mut rng = rng(31);
    let surfaces = vec![
        PencilSurface::new(
            Spine::frenet(CurveSpec::W(random_w_curve(&mut rng))),
            MarchingScale::parse("0.3*t + 0.2*t^2", "0.1 - 0.4*t + 0.3*t^3", (-0.8, 0.8)).unwrap(),
        ),
        ruled_pencil(seed_spine()).unwrap(),
        vranceanu(parse("1 + 0.3*sin(2*t)", "t").unwrap(), 0.6, 0.8, (0.1, 2.5)).unwrap(),
        PencilSurface::new(
            Spine::frenet(CurveSpec::Analytic(catenary_circle())),
            MarchingScale::parse("0.2*t", "0.3*t^2 + 0.1", (-0.6, 0.6)).unwrap(),
        ),
    ];
    let tol = Tolerance::mixed(1e-7);
    for (n, p) in surfaces.iter().enumerate() {
        for (s, t) in random_points(p, 100, 40 + n as u64) {
            let pt = p.regular_point(s, t).unwrap();
            let closed = pt.forms().second_form();
            let (n1, n2) = pt.normals();
            let o = numeric_forms(p, s, t).unwrap();
            // express the oracle's coefficients in the pencil's normal frame
            for (k, nk) in [n1, n2].iter().enumerate() {
                let proj = [nk.dot(&o.normals[0]), nk.dot(&o.normals[1])];
                for i in 0..2 {
                    for j in 0..2 {
                        let oracle = proj[0] * o.c[0][i][j] + proj[1] * o.c[1][i][j];
                        let dev = (closed[k][i][j] - oracle).abs();
                        assert!(tol.allows(dev, oracle), "surface {n} c[{k}][{i}][{j}] at ({s}, {t}): {} vs {oracle}", closed[k][i][j]);
                    }
                }
            }
        }
    }
}

#[test]
fn reversing_the_second_normal_flips_only_normal_curvature() {
    use pencil4::curvature::report_from_forms;
    let p = ruled_pencil(seed_spine()).unwrap();
    for (s, t) in random_points(&p, 20, 12) {
        let forms = p.fundamental_forms(s, t).unwrap();
        // V₄ → −V₄ with κ₃ → −κ₃ reverses N₂, which negates every c²ᵢⱼ
        let flipped = pencil4::pencil::FundamentalForms {
            c2_11: -forms.c2_11,
            c2_12: -forms.c2_12,
            ..forms
        };
        let (a, b) = (report_from_forms(&forms), report_from_forms(&flipped));
        assert!((a.gaussian - b.gaussian).abs() <= 1e-14);
        assert!((a.h_norm_sq - b.h_norm_sq).abs() <= 1e-14);
        assert!((a.normal + b.normal).abs() <= 1e-14);
    }
}
