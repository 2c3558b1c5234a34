//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use flagfloat::asymptotics::{
    b_plus_trend, concentration_check, fit_limit, flag_simplex_limit_check, log_schedule,
    predicted_limit, ratio_curve, shrunken_family, simplex_bound_check,
};
use flagfloat::exact::parse_rational;
use flagfloat::flag_simplex::{barycenter_subdivision, classify_flag_simplex, FlagSimplex};
use flagfloat::floating::{directions, floating_body_with, DirectionSpec, FloatingBodyApprox};
use flagfloat::measure::Weight;
use flagfloat::models::{self, HyperbolicPolytope, SphericalPolytope};
use flagfloat::{conjugate_flag, generators, polar_body, Point, Polytope, Result};

const SEED: u64 = 42;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn spec() -> DirectionSpec {
    DirectionSpec::new(64)
}

fn uniform_schedule() -> Vec<f64> {
    log_schedule(1e-3, 1e-7, 9).expect("valid schedule")
}

fn flag_counts() -> Result<Outcome> {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=6 {
        let got = generators::simplex(n)?.face_lattice().flag_count();
        if got != factorial(n as u64 + 1) {
            bad.push(format!("simplex({n})={got}"));
        }
    }
    for n in 2..=5 {
        let want = factorial(n as u64) << n;
        for (name, p) in [
            ("cube", generators::cube(n)?),
            ("cross", generators::cross_polytope(n)?),
        ] {
            let got = p.face_lattice().flag_count();
            if got != want {
                bad.push(format!("{name}({n})={got}"));
            }
        }
    }
    for (k, want) in [(6, 216), (7, 336)] {
        let got = generators::cyclic(4, k)?.face_lattice().flag_count();
        if got != want {
            bad.push(format!("cyclic(4,{k})={got}"));
        }
    }
    for tree in [
        "sum(seg,product(seg,seg))",
        "product(sum(seg,seg),sum(seg,seg))",
    ] {
        let p = generators::hanner(tree)?;
        let n = p.dim() as u64;
        let got = p.face_lattice().flag_count();
        if got != factorial(n) << n {
            bad.push(format!("{tree}={got}"));
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(10),
        format!("mismatches {bad:?}, {t:.2?}"),
    )
}

fn identities() -> Result<Outcome> {
    let mut bad = Vec::new();
    for m in [3, 5, 8] {
        let l = generators::regular_polygon(m, 1.0)?.face_lattice().clone();
        let (f, flags) = (l.f_vector(), l.flag_count());
        if flags != 2 * f[0] || flags != 2 * f[1] {
            bad.push(format!("{m}-gon"));
        }
    }
    let samples = [
        ("random", generators::random_polytope(3, 20, SEED)?),
        ("icosahedron", generators::icosahedron()?),
        ("dodecahedron", generators::dodecahedron()?),
        ("cube(4)", generators::cube(4)?),
    ];
    for (name, p) in &samples {
        let l = p.face_lattice();
        let f = l.f_vector();
        let flags = l.flag_count();
        let specific = if p.dim() == 3 {
            flags == 4 * f[1]
        } else {
            flags == 4 * l.flag_vector(&[0, 2])
        };
        let per_vertex: u64 = l.flags_per_vertex().iter().sum();
        let all = l.check_flag_identities().iter().all(|c| c.pass);
        if !(specific && per_vertex == flags && all) {
            bad.push(name.to_string());
        }
    }
    outcome(bad.is_empty(), format!("failures {bad:?}"))
}

fn polarity() -> Result<Outcome> {
    let random = generators::random_polytope(3, 20, SEED)?;
    let c = random.vertex_centroid();
    let random = random.translated(&(-c));
    let mut bad = Vec::new();
    for (name, p) in [
        ("cube", generators::centered_cube(3)?),
        ("cross", generators::cross_polytope(3)?),
        ("random", random),
    ] {
        let polar = polar_body(&p)?;
        let (l, lp) = (p.face_lattice(), polar.face_lattice());
        let mut fp = lp.f_vector();
        fp.reverse();
        let flags = l.enumerate_flags();
        let images: BTreeSet<_> = flags
            .iter()
            .map(|f| conjugate_flag(&p, &polar, f))
            .collect();
        let onto = images.len() == flags.len() && images.iter().all(|g| lp.is_flag(g));
        let involutive = flags
            .iter()
            .all(|f| conjugate_flag(&polar, &p, &conjugate_flag(&p, &polar, f)) == *f);
        if !(fp == l.f_vector() && l.flag_count() == lp.flag_count() && onto && involutive) {
            bad.push(name);
        }
    }
    outcome(bad.is_empty(), format!("failures {bad:?}"))
}

fn subdivision() -> Result<Outcome> {
    let cube = generators::cube(3)?;
    let sub = barycenter_subdivision(&cube);
    let each = parse_rational("1/48")?;
    let exact_each = sub.iter().all(|s| s.volume_exact() == each);
    let sum = sub
        .iter()
        .map(|s| s.volume_exact())
        .fold(parse_rational("0")?, |a, b| a + b);
    let classified = sub
        .iter()
        .all(|s| classify_flag_simplex(&cube, &s.vertices).is_ok_and(|c| c.flag == s.flag));
    outcome(
        sub.len() == 48 && exact_each && sum == parse_rational("1")? && classified,
        format!(
            "{} simplices, sum {sum}, each 1/48 {exact_each}, classified {classified}",
            sub.len()
        ),
    )
}

fn fit_c1(phi: &Weight, psi: &Weight, p: &Polytope) -> Result<(f64, Duration)> {
    let start = Instant::now();
    let curve = ratio_curve(phi, psi, p, &uniform_schedule(), &spec(), 1e-3)?;
    Ok((fit_limit(&curve, 2)?.c1, start.elapsed()))
}

fn uniform_limits() -> Result<Outcome> {
    let u = Weight::Uniform;
    let (sq, ts) = fit_c1(&u, &u, &generators::cube(2)?)?;
    let (tri, tt) = fit_c1(&u, &u, &generators::simplex(2)?)?;
    let limit = Duration::from_secs(120);
    outcome(
        rel(sq, 2.0) < 0.05 && rel(tri, 1.5) < 0.05 && ts < limit && tt < limit,
        format!("square c1 {sq:.5} ({ts:.1?}), triangle c1 {tri:.5} ({tt:.1?})"),
    )
}

fn weight_independence() -> Result<Outcome> {
    let sq = generators::cube(2)?;
    let mut c = Vec::new();
    for w in [
        Weight::Uniform,
        Weight::Spherical,
        Weight::one_plus_coordinate(2, 0),
    ] {
        c.push(fit_c1(&w, &w, &sq)?.0);
    }
    let pairwise = (0..3).all(|i| (0..3).all(|j| rel(c[i], c[j]) < 0.07));
    let each = c.iter().all(|&x| rel(x, 2.0) < 0.07);
    outcome(pairwise && each, format!("c1 {c:.5?}"))
}

fn weighted_limit() -> Result<Outcome> {
    let sq = generators::cube(2)?;
    let (phi, psi) = (Weight::Uniform, Weight::one_plus_coordinate(2, 0));
    let predicted = predicted_limit(&sq, &phi, &psi)?;
    let (c1, _) = fit_c1(&phi, &psi, &sq)?;
    outcome(
        rel(predicted, 3.0) < 1e-9 && rel(c1, predicted) < 0.07,
        format!("predicted {predicted:.6}, c1 {c1:.5}"),
    )
}

fn simplex_regions() -> Result<Outcome> {
    let t2 = generators::simplex(2)?;
    let schedule = [1e-2, 1e-3, 1e-4];
    let bounds = simplex_bound_check(&t2, 0, &schedule, 1_000_000, SEED)?;
    let b = b_plus_trend(&t2, 0, 1, &schedule, 1_000_000, SEED)?;
    let a: Vec<String> = bounds
        .entries
        .iter()
        .map(|e| {
            format!(
                "{:.3e} in [{:.3e}, {:.3e}]",
                e.estimate.value, e.lower, e.upper
            )
        })
        .collect();
    let bn: Vec<f64> = b.entries.iter().map(|e| e.normalized).collect();
    outcome(
        bounds.all_within && bounds.entries.len() == 3 && b.decreasing,
        format!("A+ {a:?}; B+ normalized {bn:.4?}"),
    )
}

fn vertex_flag_simplex(p: &Polytope, v: usize) -> FlagSimplex {
    let face = p.face_lattice().vertex_face(v);
    barycenter_subdivision(p)
        .into_iter()
        .find(|s| s.flag.chain[0] == face)
        .expect("every vertex lies in a flag")
}

fn flag_simplex_limit() -> Result<Outcome> {
    let t2 = generators::simplex(2)?;
    let s = vertex_flag_simplex(&t2, 0);
    let r = flag_simplex_limit_check(&t2, &s, 0, &[1e-2, 1e-3, 1e-4, 1e-5], 1_000_000, SEED)?;
    let ratios: Vec<f64> = r.entries.iter().map(|e| e.normalized).collect();
    outcome(
        r.final_relative_gap < 0.10 && r.trending,
        format!("ratios {ratios:.4?} toward {}", r.target),
    )
}

fn concentration() -> Result<Outcome> {
    let sq = generators::cube(2)?;
    let schedule = [1e-2, 1e-3, 1e-4, 1e-5];
    let full = concentration_check(
        &sq,
        &barycenter_subdivision(&sq),
        &schedule,
        &spec(),
        200_000,
        SEED,
    )?;
    let shrunk = concentration_check(
        &sq,
        &shrunken_family(&sq, 0.5)?,
        &schedule,
        &spec(),
        200_000,
        SEED,
    )?;
    let f: Vec<f64> = full.entries.iter().map(|e| e.normalized).collect();
    let s: Vec<f64> = shrunk.entries.iter().map(|e| e.normalized).collect();
    outcome(
        full.decreasing && full.final_value < 0.05,
        format!(
            "full family {f:.4?}; shrunken disjoint family {s:.4?} (decreasing {})",
            shrunk.decreasing
        ),
    )
}

fn vertex_distance(a: &FloatingBodyApprox, b: &FloatingBodyApprox) -> f64 {
    let (va, vb) = (a.vertices(), b.vertices());
    let one_way = |x: &[Point], y: &[Point]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if va.len() != vb.len() {
        return f64::INFINITY;
    }
    one_way(&va, &vb).max(one_way(&vb, &va))
}

fn sandwich() -> Result<Outcome> {
    let sq = generators::cube(2)?;
    let d = 1e-3;
    let dirs = directions(&sq, &spec(), d / 2.0, 1.0);
    let doubled = floating_body_with(&Weight::Uniform.scaled(2.0), &sq, d, &dirs)?;
    let half = floating_body_with(&Weight::Uniform, &sq, d / 2.0, &dirs)?;
    let gap = vertex_distance(&doubled, &half);
    let phi = Weight::one_plus_coordinate(2, 0);
    let (c, cc) = (1.0, 2.0);
    let mut nested = true;
    for d in [1e-2, 1e-3, 1e-4] {
        let dirs = directions(&sq, &spec(), d / cc, 1.0);
        let inner = floating_body_with(&Weight::Uniform, &sq, d / c, &dirs)?;
        let mid = floating_body_with(&phi, &sq, d, &dirs)?;
        let outer = floating_body_with(&Weight::Uniform, &sq, d / cc, &dirs)?;
        nested &= mid.contains_body(&sq, &inner, 1e-12) && outer.contains_body(&sq, &mid, 1e-12);
    }
    outcome(
        gap <= 1e-8 && nested,
        format!("scaled-weight vertex gap {gap:.2e}, nested {nested}"),
    )
}

fn spherical() -> Result<Outcome> {
    let c = models::halfsphere_limit_constant(2);
    let q = models::halfsphere_difference_quotient(2, 1e-6)?;
    let tri = SphericalPolytope::triangle(0.6, 0.7, 0.8)?;
    let fit = models::spherical_floating_constant_check(&tri, &uniform_schedule(), &spec(), 1e-3)?;
    let d = 1.1f64;
    let mc = models::lune_volume_mc(&[0.0, 0.0, 1.0], &[d.sin(), 0.0, d.cos()], 1_000_000, SEED)?;
    let formula = models::lune_volume(2, d);
    let lune_ok = (mc.value - formula).abs() <= 3.0 * mc.std_error;
    outcome(
        (c - PI).abs() < 1e-12 && (c - q).abs() < 1e-3 && rel(fit.fit.c1, 1.5) < 0.10 && lune_ok,
        format!(
            "constant {c:.6} vs quotient {q:.6}; triangle c1 {:.5}; lune {formula:.5} vs {:.5} ± {:.5}",
            fit.fit.c1, mc.value, mc.std_error
        ),
    )
}

fn hyperbolic() -> Result<Outcome> {
    let compact = HyperbolicPolytope::new(generators::regular_polygon(3, 0.8)?)?;
    let fit =
        models::hyperbolic_floating_constant_check(&compact, &uniform_schedule(), &spec(), 1e-3)?;
    let ideal = models::ideal_triangle_ratio(&[1e-2, 1e-3, 1e-4], &spec(), 1e-3)?;
    let ratios_ok = ideal
        .entries
        .iter()
        .all(|e| (3.0..=12.0).contains(&e.ratio) && e.h0 <= 1.5 * e.delta * e.delta);
    let ratios: Vec<f64> = ideal.entries.iter().map(|e| e.ratio).collect();
    let mut areas = Vec::new();
    for m in [3, 5, 8] {
        let a = models::ideal_polygon(m)?.area(1e-6)?;
        areas.push((a - (m as f64 - 2.0) * PI).abs());
    }
    let areas_ok = areas.iter().all(|&e| e < 1e-3);
    outcome(
        rel(fit.fit.c1, 1.5) < 0.10 && ratios_ok && ideal.entries.len() == 3 && areas_ok,
        format!(
            "compact c1 {:.5}; ideal ratios {ratios:.4?}; area errors {:?}",
            fit.fit.c1,
            areas.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>()
        ),
    )
}

fn determinism() -> Result<Outcome> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_flagfloat"))
            .args(["check", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let ok =
        a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    outcome(
        ok,
        format!(
            "{} bytes, identical {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 14] = [
        ("flag counts", flag_counts),
        ("flag identities", identities),
        ("polarity", polarity),
        ("barycentric subdivision of the 3-cube", subdivision),
        ("uniform limit fits", uniform_limits),
        ("weight independence", weight_independence),
        ("weighted limit", weighted_limit),
        ("A+ bounds and B+ trend on the triangle", simplex_regions),
        ("flag-simplex limit", flag_simplex_limit),
        ("concentration on flag simplices", concentration),
        ("sandwich", sandwich),
        ("spherical model", spherical),
        ("hyperbolic model", hyperbolic),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1?}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
