//! End-to-end acceptance criteria A1–A11.
//!
//! Runs without the libtest harness and prints one `PASS`/`FAIL` line per
//! criterion; the process fails if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use admlab::convergence::{
    detect_blowup, flat_norm_upper, lsc_check, Baseline, LimitMass, LimitSpace, SequenceScenario, ViolationCause,
};
use admlab::families::{
    cored_mass, cylinder_append, flat, flatten_in, flatten_out, hidden_region, perturbed_schwarzschild, rescale,
    schwarzschild, Form, GeneratedManifold,
};
use admlab::geometry::{
    adm_mass_chart, adm_mass_limit, hawking_mass_graph, hawking_mass_profile, minimal_sphere_scan, scalar_curvature,
    to_graph, to_profile, validate_rotsym, Geometry, GraphShape, MassModel, Mode, Profile, ProfileShape, RadialGraph,
};
use admlab::numerics::{derivative, LimitValue};

type Outcome = Result<String, String>;

/// Checks a condition inside a criterion, failing it with a formatted message.
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| lo * ratio.powi(k as i32)).collect()
}

fn adm(gm: &GeneratedManifold) -> Result<f64, String> {
    let e = ok(adm_mass_limit(&gm.geometry), "adm mass")?;
    e.value.finite().ok_or_else(|| "adm mass is infinite".to_string())
}

fn a1() -> Outcome {
    let mut worst_hawking = 0.0f64;
    let mut worst_limit = 0.0f64;
    for m in [0.5, 1.0, 2.0] {
        let gm = ok(schwarzschild(m, 3, Form::Graph), "schwarzschild")?;
        let Geometry::Graph(g) = &gm.geometry else { return Err("expected a graph".into()) };
        for r in geometric(2.0 * m + 0.1, 1e4, 20) {
            let err = (ok(hawking_mass_graph(g, r), "hawking mass")? - m).abs();
            ensure!(err <= 1e-8, "m = {m}: hawking mass off by {err:e} at r = {r}");
            worst_hawking = worst_hawking.max(err);
        }
        let err = (adm(&gm)? - m).abs();
        ensure!(err <= 1e-6, "m = {m}: limit off by {err:e}");
        worst_limit = worst_limit.max(err);
    }
    Ok(format!("max hawking error {worst_hawking:.1e}, max limit error {worst_limit:.1e}"))
}

fn inverse3(g: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (g[a][c] * g[b][d] - g[a][d] * g[b][c]) / det;
        }
    }
    inv
}

/// Scalar curvature of `δ + f′(|x|)² x⊗x/|x|²` by finite differences of the metric and its Christoffel symbols.
fn christoffel_curvature(g: &RadialGraph, x: [f64; 3]) -> Result<f64, String> {
    let metric = |p: [f64; 3]| -> Result<[[f64; 3]; 3], String> {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let fp = ok(g.slope(r), "graph slope")?;
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = f64::from(u8::from(i == j)) + fp * fp * p[i] * p[j] / (r * r);
            }
        }
        Ok(m)
    };
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let shift = |p: [f64; 3], k: usize, t: f64| {
        let mut q = p;
        q[k] += t;
        q
    };
    let christoffel = |p: [f64; 3]| -> Result<[[[f64; 3]; 3]; 3], String> {
        let h = 1e-4 * r;
        let mut dg = [[[0.0; 3]; 3]; 3];
        for (k, dk) in dg.iter_mut().enumerate() {
            let f = [metric(shift(p, k, 2.0 * h))?, metric(shift(p, k, h))?, metric(shift(p, k, -h))?, metric(shift(p, k, -2.0 * h))?];
            for i in 0..3 {
                for j in 0..3 {
                    dk[i][j] = (-f[0][i][j] + 8.0 * f[1][i][j] - 8.0 * f[2][i][j] + f[3][i][j]) / (12.0 * h);
                }
            }
        }
        let inv = inverse3(&metric(p)?);
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    gamma[k][i][j] =
                        (0..3).map(|l| 0.5 * inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])).sum();
                }
            }
        }
        Ok(gamma)
    };
    let h = 1e-3 * r;
    let gamma = christoffel(x)?;
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for (m, dm) in dgamma.iter_mut().enumerate() {
        let f = [christoffel(shift(x, m, 2.0 * h))?, christoffel(shift(x, m, h))?, christoffel(shift(x, m, -h))?, christoffel(shift(x, m, -2.0 * h))?];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    dm[k][i][j] = (-f[0][k][i][j] + 8.0 * f[1][k][i][j] - 8.0 * f[2][k][i][j] + f[3][k][i][j]) / (12.0 * h);
                }
            }
        }
    }
    let inv = inverse3(&metric(x)?);
    let mut scalar = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut ricci = 0.0;
            for k in 0..3 {
                ricci += dgamma[k][k][i][j] - dgamma[j][k][i][k];
                for l in 0..3 {
                    ricci += gamma[k][k][l] * gamma[l][i][j] - gamma[k][j][l] * gamma[l][i][k];
                }
            }
            scalar += inv[i][j] * ricci;
        }
    }
    Ok(scalar)
}

fn a2() -> Outcome {
    let profile = ok(Profile::new(3, 1e4, ProfileShape::Mass(MassModel::Constant { m: 1.0 })), "profile")?;
    let mut worst = 0.0f64;
    for s in geometric(1e-3, 1e4, 50) {
        let r = ok(scalar_curvature(&profile, s), "scalar curvature")?;
        ensure!(r.abs() < 1e-6, "|R| = {r:e} at s = {s}");
        worst = worst.max(r.abs());
    }

    let dir = [1.0 / 3f64.sqrt(); 3];
    let mut worst_fd = 0.0f64;
    let models = [
        (MassModel::Constant { m: 1.0 }, [2.5, 3.0, 5.0, 10.0, 40.0]),
        (MassModel::Perturbed { m: 1.0, delta: 0.5, r1: 3.0, r2: 6.0 }, [3.5, 4.0, 4.5, 5.0, 5.5]),
    ];
    for (model, radii) in models {
        let g = ok(RadialGraph::new(3, 1e4, 0.0, GraphShape::Mass(model)), "graph")?;
        let p = ok(Profile::new(3, 1e4, ProfileShape::Mass(model)), "profile")?;
        for r in radii {
            let fd = christoffel_curvature(&g, dir.map(|c| c * r))?;
            let s = ok(p.arclength_at_radius(r), "arclength")?.ok_or("radius not attained")?;
            let exact = ok(scalar_curvature(&p, s), "scalar curvature")?;
            let err = (fd - exact).abs();
            ensure!(err < 1e-4, "{model:?}: finite differences give {fd:e}, formula {exact:e} at r = {r}");
            worst_fd = worst_fd.max(err);
        }
    }
    Ok(format!("max |R| {worst:.1e}, max finite-difference disagreement {worst_fd:.1e}"))
}

fn random_profile(rng: &mut ChaCha8Rng, n: usize) -> Result<Profile, String> {
    let base = rng.gen_range(1.0..3.0);
    let modes: Vec<Mode> = (0..rng.gen_range(1..=3))
        .map(|_| Mode {
            amplitude: rng.gen_range(-0.2..0.2),
            frequency: rng.gen_range(0.2..2.0),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        })
        .collect();
    let shape = ProfileShape::Harmonic { base, slope: rng.gen_range(0.2..1.2), modes };
    ok(Profile::new(n, 20.0, shape), "random profile")
}

fn a3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = 3 + k % 3;
        let p = random_profile(&mut rng, n)?;
        let s = rng.gen_range(1.0..15.0);
        let numeric = derivative(|x| hawking_mass_profile(&p, x).unwrap_or(f64::NAN), s, 1e-3);
        let j = ok(p.jet(s), "jet")?;
        let curvature = ok(scalar_curvature(&p, s), "scalar curvature")?;
        let identity = j.value.powi(n as i32 - 1) * j.d1 * curvature / (2.0 * (n as f64 - 1.0));
        let scale = numeric.abs().max(identity.abs());
        let rel = (numeric - identity).abs() / scale;
        ensure!(rel <= 1e-6 || (numeric - identity).abs() <= 1e-12, "profile {k} (n = {n}): d/ds {numeric:e} vs {identity:e}");
        worst = worst.max(rel);
    }
    Ok(format!("100 profiles, max relative error {worst:.1e}"))
}

fn graph_of(gm: &GeneratedManifold) -> Result<RadialGraph, String> {
    ok(gm.graph(), "graph")
}

fn a4() -> Outcome {
    let heights = [4.0, 8.0, 16.0, 32.0];
    for width in [1e-1, 1e-2, 1e-3] {
        for height in heights {
            let gm = ok(flatten_out(1.0, height, width, 3), "flatten_out")?;
            let mass = adm(&gm)?;
            ensure!(mass.abs() <= 1e-6, "width {width}, height {height}: adm {mass:e}");
            let min_r = validate_rotsym(&ok(gm.profile(), "profile")?).min_scalar_curvature;
            ensure!(min_r < 0.0, "width {width}, height {height}: min R = {min_r:e}");
        }
    }
    let members = heights.iter().map(|&h| ok(flatten_out(1.0, h, 0.1, 3), "flatten_out")).collect::<Result<Vec<_>, _>>()?;
    let seq = ok(SequenceScenario::with_indices(members, heights.to_vec(), (3.0, 10.0)), "sequence")?;
    let limit = graph_of(&ok(schwarzschild(1.0, 3, Form::Graph), "schwarzschild")?)?;
    let report = lsc_check(&seq, &LimitSpace::Graph(Box::new(limit)));
    ensure!(!report.inequality_holds, "inequality holds: {report:?}");
    ensure!(report.violation_cause == ViolationCause::NegativeScalarCurvature, "cause {:?}", report.violation_cause);
    Ok(format!("adm 0 for 12 smoothings, verdict violated ({:?} vs limit {:?})", report.liminf_estimate, report.limit_mass))
}

fn a5() -> Outcome {
    let heights = [5.0, 10.0, 20.0, 40.0, 80.0];
    let mut members = Vec::new();
    for h in heights {
        let gm = ok(flatten_in(1.0, h, 1.0, 3), "flatten_in")?;
        let mass = adm(&gm)?;
        ensure!((mass - 1.0).abs() <= 1e-5, "height {h}: adm {mass}");
        let min_r = validate_rotsym(&ok(gm.profile(), "profile")?).min_scalar_curvature;
        ensure!(min_r >= -1e-8, "height {h}: min R = {min_r:e}");
        members.push(gm);
    }
    let seq = ok(SequenceScenario::with_indices(members, heights.to_vec(), (3.0, 10.0)), "sequence")?
        .with_baseline(Baseline::ZeroAt(3.0));
    let limit = ok(flat(3), "flat")?;
    let report = lsc_check(&seq, &LimitSpace::Manifold(Box::new(limit)));
    ensure!(report.inequality_holds, "verdict violated: {report:?}");
    ensure!(
        matches!(report.limit_mass, LimitMass::Value(LimitValue::Finite(v)) if v.abs() <= 1e-6),
        "limit mass {:?}",
        report.limit_mass
    );
    let flat_graph = ok(RadialGraph::new(3, 1e4, 0.0, GraphShape::Flat), "flat graph")?;
    let mut norms = Vec::new();
    for g in ok(seq.member_graphs(), "member graphs")? {
        norms.push(ok(flat_norm_upper(&g, &flat_graph, 3.0, 10.0), "flat norm")?.upper_bound);
    }
    ensure!(norms.windows(2).all(|w| w[1] <= w[0]), "flat norms not monotone: {norms:?}");
    let last = norms[norms.len() - 1];
    ensure!(last < 1e-3, "final flat norm {last:e}");
    Ok(format!("verdict holds, flat norms {}", norms.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(" ")))
}

fn a6() -> Outcome {
    let base = ok(schwarzschild(1.0, 3, Form::Profile), "schwarzschild")?;
    let scales = [1.0, 2.0, 4.0, 8.0];
    let mut members = Vec::new();
    for c in scales {
        let gm = ok(rescale(&base, c), "rescale")?;
        let mass = adm(&gm)?;
        ensure!((mass - c).abs() <= 1e-5, "c = {c}: adm {mass}");
        members.push(gm);
    }
    let seq = ok(SequenceScenario::with_indices(members, scales.to_vec(), (20.0, 40.0)), "sequence")?;
    let report = lsc_check(&seq, &LimitSpace::Manifold(Box::new(ok(flat(3), "flat")?)));
    ensure!(report.liminf_estimate == LimitValue::Infinite, "liminf {:?}", report.liminf_estimate);
    ensure!(report.inequality_holds, "verdict violated: {report:?}");
    ensure!(
        matches!(report.limit_mass, LimitMass::Value(LimitValue::Finite(v)) if v.abs() <= 1e-6),
        "limit mass {:?}",
        report.limit_mass
    );
    Ok("masses 1 2 4 8, liminf +inf, verdict holds".into())
}

fn a7() -> Outcome {
    let glue = [3.0, 5.0, 9.0, 17.0];
    let mut members = Vec::new();
    for r in glue {
        let gm = ok(hidden_region(1.0, r, 0.5, 3), "hidden_region")?;
        let mass = adm(&gm)?;
        ensure!((mass - 0.5).abs() <= 1e-5, "r_glue = {r}: adm {mass}");
        let spheres = ok(minimal_sphere_scan(&ok(gm.profile(), "profile")?), "minimal spheres")?;
        ensure!(!spheres.is_empty(), "r_glue = {r}: no interior minimal sphere");
        members.push(gm);
    }
    let seq = ok(SequenceScenario::with_indices(members, glue.to_vec(), (3.0, 10.0)), "sequence")?;
    let limit = ok(schwarzschild(1.0, 3, Form::Profile), "schwarzschild")?;
    let report = lsc_check(&seq, &LimitSpace::Manifold(Box::new(limit)));
    ensure!(!report.inequality_holds, "inequality holds: {report:?}");
    ensure!(report.violation_cause == ViolationCause::InteriorMinimalSurface, "cause {:?}", report.violation_cause);
    Ok("masses 0.5, minimal sphere in every member, verdict violated".into())
}

fn a8() -> Outcome {
    let lengths = [1.0, 10.0, 100.0, 1000.0];
    let members = lengths.iter().map(|&l| ok(cylinder_append(1.0, l, 0.1, 3), "cylinder_append")).collect::<Result<Vec<_>, _>>()?;
    let seq = ok(SequenceScenario::with_indices(members, lengths.to_vec(), (2.0, 10.0)), "sequence")?;
    let report = ok(detect_blowup(&seq), "detect_blowup")?;
    let r_star = report.r_star.ok_or("no blow-up detected")?;
    let bound = report.mass_bound.ok_or("no mass bound")?;
    ensure!((r_star - 2.0).abs() <= 0.05, "r_* = {r_star}");
    ensure!((bound - 1.0).abs() <= 0.05, "mass bound {bound}");
    Ok(format!("r_* = {r_star:.4}, mass bound {bound:.4}"))
}

fn chart_gap(gm: &GeneratedManifold) -> Result<f64, String> {
    let g = graph_of(gm)?;
    let chart = ok(adm_mass_chart(&g, &[1e4]), "chart mass")?[0].1;
    Ok((chart - adm(gm)?).abs())
}

fn a9() -> Outcome {
    let mut worst = chart_gap(&ok(schwarzschild(1.0, 3, Form::Graph), "schwarzschild")?)?;
    ensure!(worst < 1e-3, "schwarzschild: chart and limit differ by {worst:e}");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..10 {
        let gm = if k % 2 == 0 {
            let r1 = rng.gen_range(2.5..6.0);
            let gm = perturbed_schwarzschild(rng.gen_range(0.2..1.0), rng.gen_range(0.0..1.0), r1, r1 + rng.gen_range(0.5..5.0), 3);
            ok(gm, "perturbed_schwarzschild")?
        } else {
            ok(cored_mass(rng.gen_range(0.1..2.0), rng.gen_range(2.0..6.0), 3), "cored_mass")?
        };
        let gap = chart_gap(&gm).map_err(|e| format!("random profile {k} ({:?}): {e}", gm.geometry))?;
        ensure!(gap < 1e-3, "random profile {k}: chart and limit differ by {gap:e}");
        worst = worst.max(gap);
    }
    Ok(format!("11 manifolds, max disagreement {worst:.1e}"))
}

fn a10() -> Outcome {
    let profiles: Vec<(&str, GeneratedManifold)> = vec![
        ("flat", ok(flat(3), "flat")?),
        ("schwarzschild", ok(schwarzschild(1.0, 3, Form::Profile), "schwarzschild")?),
        ("schwarzschild n=4", ok(schwarzschild(1.0, 4, Form::Profile), "schwarzschild")?),
        ("rescale", ok(rescale(&ok(schwarzschild(1.0, 3, Form::Profile), "schwarzschild")?, 3.0), "rescale")?),
        ("perturbed_schwarzschild", ok(perturbed_schwarzschild(1.0, 0.5, 3.0, 6.0, 3), "perturbed")?),
        ("cored_mass", ok(cored_mass(1.0, 4.0, 3), "cored_mass")?),
    ];
    let mut worst = 0.0f64;
    for (name, gm) in &profiles {
        let Geometry::Profile(p) = &gm.geometry else { return Err(format!("{name}: expected a profile")) };
        let back = ok(to_profile(&ok(to_graph(p, 0.0), "to_graph")?), "to_profile")?;
        for k in 0..=400 {
            let s = 100.0 * k as f64 / 400.0;
            let err = (ok(back.h(s), "h")? - ok(p.h(s), "h")?).abs();
            ensure!(err <= 1e-7, "{name}: round trip off by {err:e} at s = {s}");
            worst = worst.max(err);
        }
    }
    let graphs: Vec<(&str, GeneratedManifold)> = vec![
        ("schwarzschild graph", ok(schwarzschild(1.0, 3, Form::Graph), "schwarzschild")?),
        ("flatten_out", ok(flatten_out(1.0, 8.0, 0.1, 3), "flatten_out")?),
        ("flatten_in", ok(flatten_in(1.0, 10.0, 1.0, 3), "flatten_in")?),
    ];
    for (name, gm) in &graphs {
        let Geometry::Graph(g) = &gm.geometry else { return Err(format!("{name}: expected a graph")) };
        let back = ok(to_graph(&ok(to_profile(g), "to_profile")?, ok(g.f(g.a), "f")?), "to_graph")?;
        for k in 0..=400 {
            let r = g.a + 100.0 * k as f64 / 400.0;
            let err = (ok(back.f(r), "f")? - ok(g.f(r), "f")?).abs();
            ensure!(err <= 1e-7, "{name}: round trip off by {err:e} at r = {r}");
            worst = worst.max(err);
        }
    }
    Ok(format!("{} families, max sup error {worst:.1e}", profiles.len() + graphs.len()))
}

fn a11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let indices = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    let count = 60;
    for k in 0..count {
        let m = rng.gen_range(0.2..2.0);
        let delta = rng.gen_range(0.0..1.5);
        let r1 = 2.0 * (m + 2.0 * delta) + rng.gen_range(0.5..5.0);
        let r2 = r1 + rng.gen_range(0.5..6.0);
        let from_above = k % 2 == 0;
        let spread = rng.gen_range(0.0..1.0) * if from_above { 1.0 } else { delta };
        let members = indices
            .iter()
            .map(|&i| {
                let d = if from_above { delta + spread / i } else { delta - spread / i };
                ok(perturbed_schwarzschild(m, d, r1, r2, 3), "perturbed_schwarzschild")
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (i, gm) in members.iter().enumerate() {
            let report = validate_rotsym(&ok(gm.profile(), "profile")?);
            ensure!(report.min_scalar_curvature >= -1e-8, "scenario {k}, member {i}: negative curvature");
            ensure!(report.minimal_sphere_locations.is_empty(), "scenario {k}, member {i}: interior minimal sphere");
        }
        let seq = ok(SequenceScenario::with_indices(members, indices.to_vec(), (r2, r2 + 10.0)), "sequence")?;
        let limit = ok(perturbed_schwarzschild(m, delta, r1, r2, 3), "perturbed_schwarzschild")?;
        let report = lsc_check(&seq, &LimitSpace::Manifold(Box::new(limit)));
        ensure!(
            report.inequality_holds,
            "scenario {k} (m = {m}, delta = {delta}, r1 = {r1}, r2 = {r2}, from above = {from_above}): {report:?}"
        );
    }
    Ok(format!("{count} randomized sequences, all hold"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("A1 schwarzschild invariance", a1, 1),
        ("A2 curvature oracle", a2, 10),
        ("A3 monotonicity identity", a3, 30),
        ("A4 capped horizon", a4, 30),
        ("A5 flattened interior", a5, 60),
        ("A6 rescaled masses", a6, 10),
        ("A7 hidden region", a7, 30),
        ("A8 cylinder blow-up", a8, 30),
        ("A9 chart vs limit", a9, 60),
        ("A10 round trip", a10, 10),
        ("A11 lower semicontinuity property", a11, 120),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => Err(format!("{detail}; over the {budget} s budget")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {name} ({:.2} s): {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
