//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use common::{close, cubic_family, reference_curvatures, richardson, rng, Cubic, CORPUS, MALFORMED};
use isocurv::curveexpr::{eval_curve, parse, print, Curve1D};
use isocurv::families::{
    branch_info, branches, build, closed_form_h, closed_form_k, theorem_family, CurvaturePrediction, DerivBundle,
    FamilyKind, FamilySpec,
};
use isocurv::geometry::{apply_motion, curvature, curvature_with, fundamental_forms, DiffMode, Immersion, Motion};
use isocurv::verify::{constancy_sweep, reconstruct, residual_sweep, separation_ode, Quantity, SweepConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn default_branch(id: &str) -> (FamilySpec, CurvaturePrediction) {
    theorem_family(id, &BTreeMap::new()).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn random_box<R: rand::Rng>(r: &mut R) -> (f64, f64) {
    let lo = r.gen_range(0.1..0.6);
    (lo, lo + r.gen_range(0.5..1.5))
}

/// Random cubics for `kind` whose slopes satisfy the positive-branch
/// condition for `t > 0`.
fn admissible_cubics<R: rand::Rng>(r: &mut R, kind: FamilyKind) -> (Cubic, Cubic, Cubic) {
    let g_sign = if kind == FamilyKind::Type4 { -1.0 } else { 1.0 };
    let h_sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    (Cubic::random(r, 1.0), Cubic::random(r, g_sign), Cubic::random(r, h_sign))
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for kind in [FamilyKind::Type2, FamilyKind::Type3, FamilyKind::Type4] {
        let mut done = 0;
        while done < 200 {
            let (f, g, h) = admissible_cubics(&mut r, kind);
            let (lo, hi) = random_box(&mut r);
            let spec = cubic_family(kind, f, g, h, lo, hi);
            let s = build(&spec).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let x = spec.domain().sample(&mut r);
                let (u, v, w) = (x[0], x[1], x[2]);
                let d = [f.d1(u), f.d2(u), g.d1(v), g.d2(v), h.d1(w), h.d2(w)];
                let (k_ref, h_ref) = reference_curvatures(kind, d);
                let rep = curvature(&s, &x).map_err(|e| format!("{kind} at {x:?}: {e}"))?;
                let bundle = DerivBundle::at(&spec.curves, &x).map_err(|e| e.to_string())?;
                let lib_k = closed_form_k(kind, &bundle).map_err(|e| e.to_string())?;
                let lib_h = closed_form_h(kind, &bundle).map_err(|e| e.to_string())?;
                for (got, want, what) in [
                    (rep.k, k_ref, "K"),
                    (rep.h, h_ref, "H"),
                    (lib_k, k_ref, "closed-form K"),
                    (lib_h, h_ref, "closed-form H"),
                ] {
                    if !close(got, want, 1e-9) {
                        return Err(format!("{kind} {what} at {x:?}: {got} vs {want}"));
                    }
                    worst = worst.max((got - want).abs() / want.abs().max(1.0));
                }
                let det_ref = match kind {
                    FamilyKind::Type2 => Some(d[0] * d[0]),
                    FamilyKind::Type4 => Some(49.0 * (d[0] - d[2]).powi(2)),
                    _ => None,
                };
                if let Some(want) = det_ref {
                    let got = fundamental_forms(&s, &x).map_err(|e| e.to_string())?.det_g;
                    if !close(got, want, 1e-9) {
                        return Err(format!("{kind} det g at {x:?}: {got} vs {want}"));
                    }
                }
                done += 1;
            }
        }
    }
    Ok(format!("600 points, worst relative error {worst:.1e}"))
}

fn branch_constancy() -> Outcome {
    let cfg = SweepConfig::default();
    let mut checked = 0;
    let mut skipped = Vec::new();
    for b in branches() {
        let (spec, pred) = default_branch(b.id);
        if spec.base_kind().is_codim2() {
            skipped.push(b.id);
            continue;
        }
        let s = build(&spec).map_err(|e| e.to_string())?;
        for (q, want) in [(Quantity::K, pred.k), (Quantity::H, pred.h)] {
            let Some(want) = want else { continue };
            let rep = constancy_sweep(&s, q, &cfg).map_err(|e| format!("{} {q}: {e}", b.id))?;
            // A zero prediction has no scale, so its deviation is judged absolutely.
            let (dev, label) = if want.abs() > 1e-6 {
                (rep.max_rel_dev, "relative")
            } else {
                (rep.max_abs_dev, "absolute")
            };
            if dev > 1e-8 {
                return Err(format!("{} {q}: {label} deviation {dev:.2e}", b.id));
            }
            if !close(rep.mean, want, 1e-8) {
                return Err(format!("{} {q}: mean {} vs predicted {want}", b.id, rep.mean));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} predictions constant and matched; {} has no K/H (codimension 2)",
        skipped.join(", ")
    ))
}

fn minimality() -> Outcome {
    let ids = [
        "thm4.2",
        "thm5.2-i",
        "thm5.2-ii",
        "thm5.2-iii",
        "thm5.2-iv",
        "thm6.2-i",
        "thm6.2-ii",
        "scherk-i3-1",
        "scherk-i3-2",
        "scherk-i3-3",
    ];
    let mut worst = 0.0f64;
    for id in ids {
        let (spec, _) = default_branch(id);
        let s = build(&spec).map_err(|e| e.to_string())?;
        let rep = constancy_sweep(&s, Quantity::H, &SweepConfig::default()).map_err(|e| format!("{id}: {e}"))?;
        let m = rep.min.abs().max(rep.max.abs());
        if m > 1e-9 {
            return Err(format!("{id}: max |H| = {m:.2e}"));
        }
        worst = worst.max(m);
    }
    Ok(format!("{} surfaces, max |H| = {worst:.1e}", ids.len()))
}

fn flatness() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    let mut families = 0;
    for kind in [FamilyKind::Type2, FamilyKind::Type3, FamilyKind::Type4] {
        for slot in 0..3 {
            for _ in 0..3 {
                let (mut f, mut g, mut h) = admissible_cubics(&mut r, kind);
                match slot {
                    0 => f = Cubic::affine(f.0[0]),
                    1 => g = Cubic::affine(g.0[0]),
                    _ => h = Cubic::affine(h.0[0]),
                }
                let (lo, hi) = random_box(&mut r);
                let spec = cubic_family(kind, f, g, h, lo, hi);
                let s = build(&spec).map_err(|e| e.to_string())?;
                let rep = constancy_sweep(&s, Quantity::K, &SweepConfig::default())
                    .map_err(|e| format!("{kind} slot {slot}: {e}"))?;
                let m = rep.min.abs().max(rep.max.abs());
                if m > 1e-12 {
                    return Err(format!("{kind} with affine slot {slot}: max |K| = {m:.2e}"));
                }
                worst = worst.max(m);
                families += 1;
            }
        }
    }
    Ok(format!("{families} cylinders, max |K| = {worst:.1e}"))
}

fn ode_residuals() -> Outcome {
    let mut n = 0;
    let mut worst = 0.0f64;
    for b in branches() {
        let (spec, _) = default_branch(b.id);
        for name in b.residuals {
            let rep = residual_sweep(name, &spec, 100, 42).map_err(|e| format!("{} {name}: {e}", b.id))?;
            if rep.max_abs > 1e-10 {
                return Err(format!("{} {name}: {:.2e}", b.id, rep.max_abs));
            }
            worst = worst.max(rep.max_abs);
            n += 1;
        }
    }
    if !branch_info("codim2-type3-minimal").is_some_and(|b| b.residuals.contains(&"7.1")) {
        return Err("codimension-2 branch does not check its minimality equation".into());
    }
    Ok(format!("{n} residual sweeps, max {worst:.1e}"))
}

fn rk4_reconstruction() -> Outcome {
    let mut lines = Vec::new();
    for id in ["thm4.1", "thm5.1", "thm4.2", "thm6.2-i"] {
        let (spec, _) = default_branch(id);
        let params = &spec.branch.as_ref().unwrap().params;
        let info = branch_info(id).unwrap();
        let eqs: Vec<&str> = info
            .residuals
            .iter()
            .copied()
            .filter(|n| separation_ode(n, params).is_ok())
            .collect();
        if eqs.is_empty() {
            return Err(format!("{id}: no separable equations"));
        }
        for name in eqs {
            let run = |steps| reconstruct(&spec, name, steps).map(|r| r.max_abs_err).map_err(|e| e.to_string());
            let fine = run(10_000)?;
            if fine > 1e-6 {
                return Err(format!("{id} {name}: error {fine:.2e} at 1e4 steps"));
            }
            let (a, b) = (run(50)?, run(100)?);
            if a < 1e-12 {
                lines.push(format!("{name} exact"));
                continue;
            }
            let order = (a / b).log2();
            if (order - 4.0).abs() > 0.2 {
                return Err(format!("{id} {name}: observed order {order:.3}"));
            }
            lines.push(format!("{name} {order:.2}"));
        }
    }
    Ok(format!("orders: {}", lines.join(", ")))
}

fn type4_falsification() -> Outcome {
    let mut r = rng(7);
    let mut least = f64::INFINITY;
    for i in 0..50 {
        let (f, g, h) = admissible_cubics(&mut r, FamilyKind::Type4);
        let (lo, hi) = random_box(&mut r);
        let spec = cubic_family(FamilyKind::Type4, f, g, h, lo, hi);
        let s = build(&spec).map_err(|e| e.to_string())?;
        let rep = constancy_sweep(&s, Quantity::K, &SweepConfig::default()).map_err(|e| format!("triple {i}: {e}"))?;
        if rep.max_rel_dev <= 1e-3 {
            return Err(format!("triple {i} ({f:?}, {g:?}, {h:?}): K variation only {:.2e}", rep.max_rel_dev));
        }
        least = least.min(rep.max_rel_dev);
    }
    Ok(format!(
        "50 triples, smallest K variation {least:.2e}; this does not prove nonexistence, it only fails to contradict it"
    ))
}

fn motion_invariance() -> Outcome {
    let mut r = rng(8);
    let mut families: Vec<(String, Immersion)> = Vec::new();
    for id in ["thm4.1", "thm5.3-i", "thm6.3-i"] {
        families.push((id.into(), build(&default_branch(id).0).map_err(|e| e.to_string())?));
    }
    for kind in [FamilyKind::Type1, FamilyKind::Type2, FamilyKind::Type3, FamilyKind::Type4] {
        let (f, g, h) = admissible_cubics(&mut r, kind);
        let spec = cubic_family(kind, f, g, h, 0.3, 1.3);
        families.push((kind.to_string(), build(&spec).map_err(|e| e.to_string())?));
    }
    let mut worst = 0.0f64;
    for i in 0..20 {
        let proper = Motion::random(&mut r, 3, true);
        let improper = Motion::random(&mut r, 3, false);
        for (name, s) in &families {
            let ms = apply_motion(&proper, s).map_err(|e| e.to_string())?;
            let mi = apply_motion(&improper, s).map_err(|e| e.to_string())?;
            let x = s.domain.sample(&mut r);
            let c = curvature(s, &x).map_err(|e| format!("{name}: {e}"))?;
            let p = curvature(&ms, &x).map_err(|e| format!("{name}: {e}"))?;
            let q = curvature(&mi, &x).map_err(|e| format!("{name}: {e}"))?;
            for (got, want, what) in [(p.k, c.k, "K"), (p.h, c.h, "H"), (-q.k, c.k, "-K"), (-q.h, c.h, "-H")] {
                if !close(got, want, 1e-10) {
                    return Err(format!("{name}, motion {i}: {what} {got} vs {want}"));
                }
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
            }
        }
    }
    Ok(format!("20 proper and 20 improper motions on {} families, worst {worst:.1e}", families.len()))
}

fn ad_vs_fd() -> Outcome {
    let mut r = rng(9);
    let mut specs: Vec<FamilySpec> = branches()
        .iter()
        .map(|b| default_branch(b.id).0)
        .filter(|s| !s.base_kind().is_codim2())
        .collect();
    for kind in [FamilyKind::Type1, FamilyKind::Type2, FamilyKind::Type3, FamilyKind::Type4] {
        let (f, g, h) = admissible_cubics(&mut r, kind);
        specs.push(cubic_family(kind, f, g, h, 0.3, 1.3));
    }
    for kind in [FamilyKind::ScherkI3_1, FamilyKind::ScherkI3_2, FamilyKind::ScherkI3_3] {
        specs.push(FamilySpec::scherk(kind, 1.5).map_err(|e| e.to_string())?);
    }
    let mut worst = 0.0f64;
    for spec in &specs {
        let s = build(spec).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let x = s.domain.sample(&mut r);
            let a = curvature(&s, &x).map_err(|e| format!("{}: {e}", spec.name()))?;
            let b = curvature_with(&s, &x, DiffMode::FiniteDifference).map_err(|e| format!("{}: {e}", spec.name()))?;
            for (got, want, what) in [(b.k, a.k, "K"), (b.h, a.h, "H")] {
                if !close(got, want, 1e-5) {
                    return Err(format!("{} {what} at {x:?}: fd {got} vs jets {want}", spec.name()));
                }
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
            }
        }
    }
    Ok(format!("{} families, worst relative gap {worst:.1e}", specs.len()))
}

fn parser_corpus() -> Outcome {
    if CORPUS.len() != 40 {
        return Err(format!("corpus has {} expressions", CORPUS.len()));
    }
    let mut worst = 0.0f64;
    for &(src, t) in CORPUS {
        let ast = parse(src).map_err(|e| format!("{src:?}: {e}"))?;
        let printed = print(&ast);
        let back = parse(&printed).map_err(|e| format!("{src:?} printed as {printed:?}: {e}"))?;
        if back != ast {
            return Err(format!("{src:?} does not round-trip through {printed:?}"));
        }
        let d = eval_curve(&ast, t).map_err(|e| format!("{src:?} at {t}: {e}"))?;
        let curve = Curve1D::parse(src).unwrap();
        let fd = richardson(|s| curve.value(s).unwrap(), t);
        for k in 0..3 {
            if !close(d[k + 1], fd[k], 1e-6) {
                return Err(format!("{src:?} derivative {} at {t}: {} vs fd {}", k + 1, d[k + 1], fd[k]));
            }
            worst = worst.max((d[k + 1] - fd[k]).abs() / fd[k].abs().max(1.0));
        }
    }
    for &(src, pos) in MALFORMED {
        match parse(src) {
            Ok(_) => return Err(format!("{src:?} parsed")),
            Err(e) if e.pos != pos => return Err(format!("{src:?}: error at {} not {pos} ({e})", e.pos)),
            Err(e) if !e.to_string().contains(&format!("position {pos}")) => {
                return Err(format!("{src:?}: message lacks position: {e}"))
            }
            Err(_) => {}
        }
    }
    Ok(format!(
        "40 expressions, worst derivative gap {worst:.1e}; {} malformed inputs located",
        MALFORMED.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("branch constancy", branch_constancy),
        ("minimality", minimality),
        ("flatness of cylinders", flatness),
        ("ODE residuals", ode_residuals),
        ("RK4 reconstruction", rk4_reconstruction),
        ("type-4 falsification sweep", type4_falsification),
        ("motion invariance", motion_invariance),
        ("jets vs finite differences", ad_vs_fd),
        ("parser corpus", parser_corpus),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed());
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
