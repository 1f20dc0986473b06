//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use polyvar_cli::format::read_json;
use polyvar_cli::{cmd_bound, cmd_synthesize, cmd_verify, Model, ModelFile, ProblemFile, Verdict};
use polyvar_core::lpsolve::{self, LpStatus};
use polyvar_core::relaxation::build_full_lp;
use polyvar_core::{
    bernstein_coefficients, facet_objective, grid_min, lower_bound, repair_offsets, sample_facet,
    sensitivity_bound, vertex_min, ConstraintSet, Error, MultiPoly, PolytopeTemplate, Rectangle,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn models_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../models"))
}

fn load<T: serde::de::DeserializeOwned>(name: &str) -> T {
    read_json(&models_dir().join(name)).expect("model file")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn random_poly(rng: &mut StdRng, n: usize, max_deg: u32, max_terms: usize) -> MultiPoly {
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<(Vec<u32>, f64)> = (0..count)
        .map(|_| {
            let e = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
            (e, rng.gen_range(-5.0..5.0))
        })
        .collect();
    MultiPoly::from_terms(n, terms).unwrap()
}

fn random_rect(rng: &mut StdRng, n: usize) -> Rectangle {
    let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let upper = lower.iter().map(|l| l + rng.gen_range(0.5..4.0)).collect();
    Rectangle::new(lower, upper).unwrap()
}

fn random_point(rng: &mut StdRng, r: &Rectangle, lo: f64, hi: f64) -> Vec<f64> {
    (0..r.dim())
        .map(|k| r.lower()[k] + rng.gen_range(lo..=hi) * r.width(k))
        .collect()
}

fn random_normal(rng: &mut StdRng, n: usize) -> Vec<f64> {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        if a.iter().any(|v| v.abs() > 1e-3) {
            return a;
        }
    }
}

/// Halfspaces and at most `max_eq` hyperplanes through or around a common
/// interior point, so the region is never empty.
fn random_constraints(
    rng: &mut StdRng,
    r: &Rectangle,
    max_ineq: usize,
    max_eq: usize,
) -> ConstraintSet {
    let n = r.dim();
    let anchor = random_point(rng, r, 0.2, 0.8);
    let mut cs = ConstraintSet::new();
    for _ in 0..rng.gen_range(0..=max_ineq) {
        let a = random_normal(rng, n);
        let rhs = dot(&a, &anchor) + rng.gen_range(0.0..1.0);
        cs = cs.with_le(a, rhs);
    }
    for _ in 0..rng.gen_range(0..=max_eq) {
        let a = random_normal(rng, n);
        let rhs = dot(&a, &anchor);
        cs = cs.with_eq(a, rhs);
    }
    cs
}

fn coefficient_scale(values: &[f64]) -> f64 {
    values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn benchmark(file: &str, expected: f64) -> Result<(f64, Duration), String> {
    let problem: ProblemFile = load(file);
    let start = Instant::now();
    let report = cmd_bound(&problem, file, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let d = report.bound.expect("bound section").d_star;
    ensure((d - expected).abs() <= 1e-6, || {
        format!("d* = {d}, expected {expected}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok((d, elapsed))
}

fn criterion_1() -> Outcome {
    let (d, t) = benchmark("constrained_cubic.json", -120.0)?;
    Ok(format!("d* = {d} in {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let (d, t) = benchmark("quartic.json", -837.5)?;
    ensure(d <= -7.5, || {
        format!("d* = {d} above the true minimum -7.5")
    })?;
    Ok(format!("d* = {d} <= -7.5 in {t:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = rng.gen_range(1..=2);
        let p = random_poly(&mut rng, n, 3, 8);
        let r = random_rect(&mut rng, n);
        let cs = random_constraints(&mut rng, &r, 3, 1);
        let reduced = lower_bound(&p, &r, &cs)
            .map_err(|e| format!("instance {i}: {e}"))?
            .d_star;
        let full = lpsolve::solve(&build_full_lp(&p, &r, &cs).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(full.status == LpStatus::Optimal, || {
            format!("instance {i}: full LP {:?}", full.status)
        })?;
        let gap = (full.objective - reduced).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-7, || {
            format!("instance {i}: full {} vs reduced {reduced}", full.objective)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max |full - reduced| = {worst:.1e} in {elapsed:.2?}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut checked = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..200 {
        let n = rng.gen_range(1..=3);
        let p = random_poly(&mut rng, n, 3, 8);
        let r = random_rect(&mut rng, n);
        let cs = random_constraints(&mut rng, &r, 3, 1);
        let d = lower_bound(&p, &r, &cs)
            .map_err(|e| format!("instance {i}: {e}"))?
            .d_star;
        let steps = [401, 81, 25][n - 1];
        match grid_min(&p, &r, &cs, steps) {
            Ok((g, _)) => {
                checked += 1;
                min_slack = min_slack.min(g - d);
                ensure(d <= g + 1e-7, || {
                    format!("instance {i}: d* = {d} above grid minimum {g}")
                })?;
            }
            Err(Error::NoFeasibleSample) => {}
            Err(e) => return Err(format!("instance {i}: {e}")),
        }
    }
    Ok(format!("{checked}/200 instances hit by the grid, zero violations, min(grid - d*) = {min_slack:.3e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = rng.gen_range(1..=4);
        let p = random_poly(&mut rng, n, 1, 1 << n);
        let r = random_rect(&mut rng, n);
        let d = lower_bound(&p, &r, &ConstraintSet::new())
            .map_err(|e| e.to_string())?
            .d_star;
        let (v, _) = vertex_min(&p, &r).map_err(|e| e.to_string())?;
        worst = worst.max((d - v).abs());
        ensure((d - v).abs() <= 1e-9, || {
            format!("instance {i}: d* = {d}, vertex minimum {v}")
        })?;
    }
    Ok(format!("max |d* - vertex_min| = {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut worst_rep, mut worst_eval) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = rng.gen_range(1..=3);
        let p = random_poly(&mut rng, n, 4, 10);
        let r = random_rect(&mut rng, n);
        let b = bernstein_coefficients(&p, &r).map_err(|e| e.to_string())?;
        let scale = coefficient_scale(b.values());
        for (class, value) in b.iter() {
            let q = p
                .blossom_eval(&b.representative(&class))
                .map_err(|e| e.to_string())?;
            let rel = (q - value).abs() / scale;
            worst_rep = worst_rep.max(rel);
            ensure(rel <= 1e-9, || {
                format!("instance {i}, class {class:?}: {value} vs blossom {q}")
            })?;
        }
        for _ in 0..100 {
            let x = random_point(&mut rng, &r, 0.0, 1.0);
            let (e, v) = (
                b.eval(&x).map_err(|e| e.to_string())?,
                p.eval(&x).map_err(|e| e.to_string())?,
            );
            let rel = (e - v).abs() / scale;
            worst_eval = worst_eval.max(rel);
            ensure(rel <= 1e-8, || {
                format!("instance {i} at {x:?}: Bernstein {e} vs {v}")
            })?;
        }
    }
    Ok(format!(
        "max relative error {worst_rep:.1e} at representatives, {worst_eval:.1e} on reconstruction"
    ))
}

fn synthesis_criterion(file: &str, budget: Duration, seed: u64) -> Outcome {
    let model: ModelFile = load(file);
    let start = Instant::now();
    let out = cmd_synthesize(&model, file, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let section = out.report.synthesis.as_ref().expect("synthesis section");
    ensure(section.status == "invariant_found", || {
        format!("status {}", section.status)
    })?;
    ensure(section.iterations.len() <= 50, || {
        format!("{} iterations", section.iterations.len())
    })?;
    ensure(elapsed < budget, || format!("took {elapsed:?}"))?;

    let poly = out.polytope.expect("polytope for a found invariant");
    let verified = cmd_verify(&model, file, Some(&poly), None).map_err(|e| e.to_string())?;
    ensure(verified.verdict == Verdict::Invariant, || {
        "verify did not certify the result".into()
    })?;
    let facets = verified.facets.expect("facet section");
    for f in &facets {
        if f.feasible {
            let d = f.d_star.unwrap_or(f64::NEG_INFINITY);
            ensure(f.status == "bounded" && d >= 0.0, || {
                format!("facet {}: {} d* = {d}", f.index, f.status)
            })?;
        }
    }

    let m = Model::from_file(&model, None).map_err(|e| e.to_string())?;
    let tpl = PolytopeTemplate::new(poly.normals.clone(), poly.offsets.clone())
        .map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut sampled = 0;
    for (k, f) in facets.iter().enumerate() {
        if !f.feasible {
            continue;
        }
        let objective =
            facet_objective(m.field.components(), &tpl.normals()[k]).map_err(|e| e.to_string())?;
        let points = sample_facet(&tpl, &m.rect, k, 1000, &mut rng).map_err(|e| e.to_string())?;
        ensure(points.len() == 1000, || {
            format!("facet {k}: only {} samples", points.len())
        })?;
        for x in &points {
            let v = objective.eval(x).map_err(|e| e.to_string())?;
            worst = worst.min(v);
            ensure(v >= -1e-7, || format!("facet {k} at {x:?}: -a.f = {v}"))?;
        }
        sampled += 1;
    }
    Ok(format!(
        "{} iterations in {elapsed:.2?}; verified; {sampled} facets x 1000 samples, min -a.f = {worst:.3e}",
        section.iterations.len()
    ))
}

fn criterion_7() -> Outcome {
    synthesis_criterion("fitzhugh_nagumo.json", Duration::from_secs(10), 7)
}

fn criterion_8() -> Outcome {
    let model: ModelFile = load("phytoplankton.json");
    let facets = model.template.normals.as_ref().map_or(0, Vec::len);
    ensure(facets == 18, || format!("template has {facets} facets"))?;
    synthesis_criterion("phytoplankton.json", Duration::from_secs(30), 8)
}

fn criterion_9() -> Outcome {
    let problem: ProblemFile = load("constrained_cubic.json");
    let (p, r, cs) = problem.build().map_err(|e| e.to_string())?;
    let res = lower_bound(&p, &r, &cs).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(9);
    let mut feasible = 0;
    for i in 0..100 {
        let alpha: Vec<f64> = (0..cs.num_inequalities())
            .map(|_| rng.gen_range(-1.0..=1.0))
            .collect();
        let mut moved = ConstraintSet::new();
        for (c, a) in cs.inequalities.iter().zip(&alpha) {
            moved = moved.with_le(c.normal.clone(), c.rhs + a);
        }
        match lower_bound(&p, &r, &moved) {
            Ok(after) => {
                feasible += 1;
                let predicted = sensitivity_bound(&res, &alpha, &[]);
                ensure(predicted <= after.d_star + 1e-7, || {
                    format!(
                        "perturbation {i} {alpha:?}: predicted {predicted} above {}",
                        after.d_star
                    )
                })?;
            }
            Err(Error::InfeasiblePolytope) => {}
            Err(e) => return Err(format!("perturbation {i}: {e}")),
        }
    }
    Ok(format!(
        "{feasible}/100 feasible perturbations, zero violations"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let mut changed = 0;
    for i in 0..50 {
        let n = rng.gen_range(2..=3);
        let r = random_rect(&mut rng, n);
        let c = random_point(&mut rng, &r, 0.2, 0.8);
        let m = rng.gen_range(n + 1..=8);
        let normals: Vec<Vec<f64>> = (0..m).map(|_| random_normal(&mut rng, n)).collect();
        let offsets = normals
            .iter()
            .map(|a| dot(a, &c) + rng.gen_range(0.05..4.0))
            .collect();
        let tpl = PolytopeTemplate::new(normals, offsets).map_err(|e| e.to_string())?;

        let b1 = repair_offsets(&tpl, &r).map_err(|e| format!("template {i}: {e}"))?;
        let repaired = tpl.with_offsets(b1.clone()).map_err(|e| e.to_string())?;
        let b2 = repair_offsets(&repaired, &r).map_err(|e| e.to_string())?;
        for (x, y) in b1.iter().zip(&b2) {
            ensure((x - y).abs() <= 1e-9, || {
                format!("template {i}: repair moved {x} to {y}")
            })?;
        }
        if b1.iter().zip(tpl.offsets()).any(|(x, y)| x < &(y - 1e-9)) {
            changed += 1;
        }
        for _ in 0..1000 {
            let x = random_point(&mut rng, &r, 0.0, 1.0);
            let (before, after) = (tpl.contains(&x, 0.0), repaired.contains(&x, 1e-9));
            ensure(before == after, || {
                format!("template {i}: membership of {x:?} changed")
            })?;
        }
    }
    Ok(format!(
        "50 templates ({changed} tightened), idempotent, membership unchanged"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("constrained cubic bound", criterion_1),
        ("quartic bound", criterion_2),
        ("full and reduced relaxations agree", criterion_3),
        ("soundness against grid minimum", criterion_4),
        ("multi-affine exactness", criterion_5),
        ("Bernstein coefficients and blossom", criterion_6),
        ("FitzHugh-Nagumo synthesis", criterion_7),
        ("phytoplankton synthesis", criterion_8),
        ("sensitivity bound validity", criterion_9),
        ("repair idempotence and set preservation", criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
