use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use pencil4::curvature::{curvature_report, flatness_residuals};
use pencil4::families::ruled_curvature_as_printed;
use pencil4::oracle::{compare, ComparisonReport, Oracle, OracleReport, StepPolicy, Tolerance};
use pencil4::pencil::PencilSurface;
use pencil4::{Error, Regularity, Vec4};
use rayon::prelude::*;

use crate::config::{OutputFormat, Scene, SceneKind};
use crate::error::{code, CliError};
use crate::projection::ProjectionSpec;

/// Largest `|K|` accepted as flat by `flat-design`.
pub const FLAT_TOL: f64 = 1e-8;

/// Options shared by all commands after the scene is built.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub step: Option<f64>,
    pub projection: Option<ProjectionSpec>,
    pub format: Option<OutputFormat>,
}

impl Options {
    fn oracle(&self) -> Oracle {
        match self.step {
            // keep the default ratio between first and second derivative steps
            Some(h) => Oracle::with_step(StepPolicy {
                first: h,
                second: 5.0 * h,
                ..StepPolicy::default()
            }),
            None => Oracle::default(),
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Marker written in the status column for a point that could not be
/// evaluated.
pub fn status_of(e: &Error) -> &'static str {
    match e {
        Error::RegularityViolation {
            condition: Regularity::Spine,
            ..
        } => "irregular-spine",
        Error::RegularityViolation {
            condition: Regularity::Marching,
            ..
        } => "irregular-marching",
        Error::Expr(_) | Error::Domain(_) => "domain",
        Error::RankDeficiency { .. } | Error::StepUnderflow { .. } => "oracle",
        Error::DegenerateFrame { .. } | Error::UnsupportedCompletion(_) => "frame",
        _ => "error",
    }
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Evaluates `f` on the scene grid, t-major then s, rows in parallel.
fn sweep<T: Send>(scene: &Scene, f: impl Fn(f64, f64) -> T + Sync) -> Vec<(f64, f64, T)> {
    let ss = scene.s_values();
    scene
        .t_values()
        .par_iter()
        .map(|&t| ss.iter().map(|&s| (s, t, f(s, t))).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn describe(scene: &Scene) -> &'static str {
    match scene.kind {
        SceneKind::Expressions => "pencil",
        SceneKind::Polar => "polar pencil",
        SceneKind::Ruled => "ruled pencil",
        SceneKind::Vranceanu(_) => "Vranceanu pencil",
        SceneKind::FlatPolar(_) => "flat polar pencil",
    }
}

pub fn frenet(scene: &Scene, opts: &Options, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spine = &scene.pencil.spine;
    let mut out = String::from("s");
    for i in 1..=4 {
        for j in 1..=4 {
            write!(out, ",v{i}_{j}").unwrap();
        }
    }
    out.push_str(",kappa1,kappa2,kappa3,status\n");
    let rows: Vec<String> = scene
        .s_values()
        .par_iter()
        .map(|&s| {
            let mut row = num(s);
            match spine.frame(s) {
                Ok(f) => {
                    for v in f.frame {
                        for x in v.iter() {
                            write!(row, ",{}", num(*x)).unwrap();
                        }
                    }
                    for k in f.curvatures {
                        write!(row, ",{}", num(k)).unwrap();
                    }
                    row.push_str(",ok");
                }
                Err(e) => {
                    for _ in 0..19 {
                        row.push_str(",NaN");
                    }
                    write!(row, ",{}", status_of(&e)).unwrap();
                }
            }
            row
        })
        .collect();
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    write_output(opts.out.as_deref(), &out, stdout)?;
    Ok(code::OK)
}

pub fn eval(scene: &Scene, opts: &Options, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = &scene.pencil;
    let mut out = String::from("s,t,x1,x2,x3,x4,status\n");
    for (s, t, r) in sweep(scene, |s, t| (p.position(s, t), p.regular_point(s, t).map(|_| ()))) {
        let (x, status) = match r {
            (Ok(x), Ok(())) => (x, "ok"),
            (Ok(x), Err(e)) => (x, status_of(&e)),
            (Err(e), _) => (Vec4::repeat(f64::NAN), status_of(&e)),
        };
        writeln!(out, "{},{},{},{},{},{},{status}", num(s), num(t), num(x[0]), num(x[1]), num(x[2]), num(x[3])).unwrap();
    }
    write_output(opts.out.as_deref(), &out, stdout)?;
    Ok(code::OK)
}

pub fn curvature(scene: &Scene, opts: &Options, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = &scene.pencil;
    let mut out = String::from("s,t,E,G,K,K_N,Hnormsq,status\n");
    let rows = sweep(scene, |s, t| {
        let forms = p.fundamental_forms(s, t)?;
        Ok::<_, Error>((forms, curvature_report(p, s, t)?))
    });
    for (s, t, r) in rows {
        match r {
            Ok((f, c)) => writeln!(
                out,
                "{},{},{},{},{},{},{},ok",
                num(s),
                num(t),
                num(f.e),
                num(f.g),
                num(c.gaussian),
                num(c.normal),
                num(c.h_norm_sq)
            ),
            Err(e) => writeln!(out, "{},{},NaN,NaN,NaN,NaN,NaN,{}", num(s), num(t), status_of(&e)),
        }
        .unwrap();
    }
    write_output(opts.out.as_deref(), &out, stdout)?;
    Ok(code::OK)
}

/// Closed-form and oracle values at one grid point, with the oracle's
/// normal curvature expressed in the pencil's normal frame.
struct Sample {
    k: (f64, f64),
    h: (f64, f64),
    kn: (f64, f64),
}

fn sample(p: &PencilSurface, oracle: &Oracle, s: f64, t: f64) -> Result<Sample, Error> {
    let c = curvature_report(p, s, t)?;
    let o: OracleReport = oracle.forms(p, s, t)?;
    let kn_oracle = o.oriented_normal_curvature() * p.regular_point(s, t)?.orientation();
    Ok(Sample {
        k: (c.gaussian, o.gaussian),
        h: (c.h_norm_sq, o.mean_norm_sq),
        kn: (c.normal, kn_oracle),
    })
}

fn report_line(out: &mut String, r: &ComparisonReport, points: &[(f64, f64)]) {
    let worst = r
        .worst
        .map(|i| format!("({:.6}, {:.6})", points[i].0, points[i].1))
        .unwrap_or_else(|| "-".into());
    writeln!(
        out,
        "{:<8} compared {:>5}  max_abs {:.3e}  max_rel {:.3e}  worst (s, t) = {}  ratio {:.7}  sign {:+}  {}",
        r.quantity,
        r.compared,
        r.max_abs,
        r.max_rel,
        worst,
        r.ratio_at_worst,
        r.sign,
        if r.pass { "PASS" } else { "FAIL" }
    )
    .unwrap();
}

pub fn verify(scene: &Scene, opts: &Options, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = &scene.pencil;
    let oracle = opts.oracle();
    let tol = Tolerance::mixed(opts.tol.unwrap_or(1e-6));
    let rows = sweep(scene, |s, t| sample(p, &oracle, s, t));

    let mut csv = String::from("s,t,K_closed,K_oracle,Hnormsq_closed,Hnormsq_oracle,K_N_closed,K_N_oracle,status\n");
    let mut points = Vec::new();
    let (mut kc, mut ko, mut hc, mut ho, mut nc, mut no) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    let mut excluded = 0;
    for (s, t, r) in &rows {
        match r {
            Ok(x) => {
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},ok",
                    num(*s),
                    num(*t),
                    num(x.k.0),
                    num(x.k.1),
                    num(x.h.0),
                    num(x.h.1),
                    num(x.kn.0),
                    num(x.kn.1)
                )
                .unwrap();
                points.push((*s, *t));
                kc.push(x.k.0);
                ko.push(x.k.1);
                hc.push(x.h.0);
                ho.push(x.h.1);
                nc.push(x.kn.0);
                no.push(x.kn.1);
            }
            Err(e) => {
                excluded += 1;
                writeln!(csv, "{},{},NaN,NaN,NaN,NaN,NaN,NaN,{}", num(*s), num(*t), status_of(e)).unwrap();
            }
        }
    }

    let reports = [
        compare("K", &kc, &ko, tol, false),
        compare("|H|^2", &hc, &ho, tol, false),
        compare("K_N", &nc, &no, tol, true),
    ];
    let pass = !points.is_empty() && reports.iter().all(|r| r.pass);

    let mut text = String::new();
    writeln!(
        text,
        "verify: {}, grid {}x{}, {} points compared, {} excluded",
        describe(scene),
        scene.ns,
        scene.nt,
        points.len(),
        excluded
    )
    .unwrap();
    let step = oracle.step;
    writeln!(
        text,
        "oracle steps: first {:e}, second {:e}, richardson {}; tolerance max({:e}, {:e}|value|)",
        step.first, step.second, step.richardson, tol.abs, tol.rel
    )
    .unwrap();
    for r in &reports {
        report_line(&mut text, r, &points);
    }
    if scene.kind == SceneKind::Ruled {
        as_printed_section(&mut text, scene, &oracle, tol, &points, &ko, &no)?;
    }
    writeln!(text, "result: {}", if pass { "PASS" } else { "FAIL" }).unwrap();

    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    if let Some(path) = &opts.out {
        write_output(Some(path), &csv, stdout)?;
    }
    Ok(if pass { code::OK } else { code::CHECK_FAILED })
}

/// Compares the commonly quoted ruled-pencil closed forms with the oracle.
/// Informational: it never changes the exit status.
fn as_printed_section(
    text: &mut String,
    scene: &Scene,
    oracle: &Oracle,
    tol: Tolerance,
    points: &[(f64, f64)],
    k_oracle: &[f64],
    kn_oracle: &[f64],
) -> Result<(), CliError> {
    let p = &scene.pencil;
    let printed = |s: f64, t: f64| -> Result<(f64, f64), Error> {
        Ok(ruled_curvature_as_printed(p.spine.frame(s)?.curvatures, t))
    };
    let mut pk = Vec::with_capacity(points.len());
    let mut pn = Vec::with_capacity(points.len());
    for &(s, t) in points {
        let (k, kn) = printed(s, t)?;
        pk.push(k);
        pn.push(kn);
    }
    writeln!(text, "as-printed ruled closed forms (informational, not part of the result):").unwrap();
    report_line(text, &compare("K*", &pk, k_oracle, tol, false), points);
    report_line(text, &compare("K_N*", &pn, kn_oracle, tol, false), points);

    // the spine itself, t = 0
    let ss = scene.s_values();
    let mut zk = (Vec::new(), Vec::new());
    let mut zn = (Vec::new(), Vec::new());
    let mut zp = Vec::new();
    for &s in &ss {
        let x = match sample(p, oracle, s, 0.0) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let (k, kn) = printed(s, 0.0)?;
        zk.0.push(k);
        zk.1.push(x.k.1);
        zn.0.push(kn);
        zn.1.push(x.kn.1);
        zp.push((s, 0.0));
    }
    writeln!(text, "at t = 0 over {} spine samples:", zp.len()).unwrap();
    report_line(text, &compare("K*", &zk.0, &zk.1, tol, false), &zp);
    report_line(text, &compare("K_N*", &zn.0, &zn.1, tol, false), &zp);
    Ok(())
}

pub fn flat_design(scene: &Scene, opts: &Options, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = &scene.pencil;
    let [a, _, _] = p.marching.a_exprs();
    let [b, _, _] = p.marching.b_exprs();
    let mut text = String::new();
    writeln!(text, "flat-design: {}, grid {}x{}", describe(scene), scene.ns, scene.nt).unwrap();
    writeln!(text, "A(t) = {}", a.display("t")).unwrap();
    writeln!(text, "B(t) = {}", b.display("t")).unwrap();

    let oracle = opts.oracle();
    let rows = sweep(scene, |s, t| {
        let c = curvature_report(p, s, t)?;
        let o = oracle.forms(p, s, t)?;
        Ok::<_, Error>((c.gaussian, o.gaussian))
    });
    let mut max_closed = 0.0f64;
    let mut max_oracle = 0.0f64;
    let mut excluded = 0;
    for (_, _, r) in &rows {
        match r {
            Ok((c, o)) => {
                max_closed = max_closed.max(c.abs());
                max_oracle = max_oracle.max(o.abs());
            }
            Err(_) => excluded += 1,
        }
    }
    let ts = scene.t_values();
    let ss = scene.s_values();
    let flat = flatness_residuals(p, &ts, &ss);

    let verdict = match &scene.kind {
        SceneKind::FlatPolar(sol) => {
            let v = &sol.verification;
            writeln!(text, "case {}: r(t) = {}", sol.params.case, sol.params.r.display("t")).unwrap();
            writeln!(text, "curve condition: {}", sol.params.constraint).unwrap();
            writeln!(text, "max |2r'^2 - r r'' + r^2|             {:.3e}", v.max_eps1).unwrap();
            writeln!(text, "max |second flatness ODE residual|     {:.3e}", v.max_eps2).unwrap();
            v.passes()
        }
        SceneKind::Vranceanu(profile) => {
            writeln!(
                text,
                "generator: a = {}, b = {}; r(t) from f = {}",
                profile.generator.a,
                profile.generator.b,
                profile.f.display("t")
            )
            .unwrap();
            true
        }
        _ => {
            return Err(CliError::Config(
                "flat-design needs a flat_polar or vranceanu marching".into(),
            ))
        }
    };
    writeln!(text, "max |A'B'' - B'A''|                   {:.3e}", flat.max_turning()).unwrap();
    writeln!(text, "max |a b_t - b a_t|                   {:.3e}", flat.max_twist()).unwrap();
    writeln!(text, "max |K| closed form                   {max_closed:.3e}").unwrap();
    writeln!(text, "max |K| oracle                        {max_oracle:.3e}").unwrap();
    writeln!(text, "excluded points                       {excluded}").unwrap();
    let is_flat = verdict && max_closed <= FLAT_TOL && max_oracle <= FLAT_TOL && excluded < rows.len();
    writeln!(text, "verdict: {}", if is_flat { "FLAT" } else { "NOT FLAT" }).unwrap();
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;

    if let Some(path) = &opts.out {
        let mut csv = String::from("s,t,turning,twist,K_closed,K_oracle,status\n");
        for (i, (s, t, r)) in rows.iter().enumerate() {
            let (it, is) = (i / ss.len(), i % ss.len());
            let turning = flat.turning[it];
            let twist = flat.twist_at(it, is);
            match r {
                Ok((c, o)) => writeln!(csv, "{},{},{},{},{},{},ok", num(*s), num(*t), num(turning), num(twist), num(*c), num(*o)),
                Err(e) => writeln!(csv, "{},{},{},{},NaN,NaN,{}", num(*s), num(*t), num(turning), num(twist), status_of(e)),
            }
            .unwrap();
        }
        write_output(Some(path), &csv, stdout)?;
    }
    Ok(if is_flat { code::OK } else { code::CHECK_FAILED })
}

pub fn export(scene: &Scene, opts: &Options, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = &scene.pencil;
    let format = opts.format.unwrap_or_else(|| match &opts.out {
        Some(path) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => OutputFormat::Csv,
        _ => OutputFormat::Obj,
    });
    let rows = sweep(scene, |s, t| {
        let x = p.position(s, t);
        let k = p.regular_point(s, t).and_then(|_| curvature_report(p, s, t).map(|c| c.gaussian));
        (x, k)
    });

    if format == OutputFormat::Csv {
        let mut csv = String::from("s,t,x1,x2,x3,x4,status\n");
        for (s, t, (x, k)) in &rows {
            let status = match (x, k) {
                (Err(e), _) | (Ok(_), Err(e)) => status_of(e),
                _ => "ok",
            };
            let x = x.as_ref().copied().unwrap_or(Vec4::repeat(f64::NAN));
            writeln!(csv, "{},{},{},{},{},{},{status}", num(*s), num(*t), num(x[0]), num(x[1]), num(x[2]), num(x[3])).unwrap();
        }
        write_output(opts.out.as_deref(), &csv, stdout)?;
        return Ok(code::OK);
    }

    let projection = opts.projection.clone().unwrap_or_default();
    let mut obj = format!("# {} grid {}x{}\n", describe(scene), scene.ns, scene.nt);
    let mut valid = Vec::with_capacity(rows.len());
    for (_, _, (x, _)) in &rows {
        match x {
            Ok(x) => {
                let [a, b, c] = projection.project(x)?;
                writeln!(obj, "v {} {} {}", num(a), num(b), num(c)).unwrap();
                valid.push(true);
            }
            Err(_) => {
                obj.push_str("v 0 0 0\n");
                valid.push(false);
            }
        }
    }
    let ns = scene.ns;
    for it in 0..scene.nt - 1 {
        for is in 0..ns - 1 {
            let quad = [it * ns + is, it * ns + is + 1, (it + 1) * ns + is + 1, (it + 1) * ns + is];
            if quad.iter().all(|&i| valid[i]) {
                writeln!(obj, "f {} {} {} {}", quad[0] + 1, quad[1] + 1, quad[2] + 1, quad[3] + 1).unwrap();
            }
        }
    }
    write_output(opts.out.as_deref(), &obj, stdout)?;

    if let Some(path) = &opts.out {
        let mut csv = String::from("s,t,K,status\n");
        for (s, t, (_, k)) in &rows {
            match k {
                Ok(k) => writeln!(csv, "{},{},{},ok", num(*s), num(*t), num(*k)),
                Err(e) => writeln!(csv, "{},{},NaN,{}", num(*s), num(*t), status_of(e)),
            }
            .unwrap();
        }
        write_output(Some(&curvature_path(path)), &csv, stdout)?;
    }
    Ok(code::OK)
}

/// `mesh.obj` → `mesh.k.csv`.
pub fn curvature_path(obj: &Path) -> PathBuf {
    let stem = obj.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    obj.with_file_name(format!("{stem}.k.csv"))
}
