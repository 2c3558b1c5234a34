//! Fast invariant suite behind `flagfloat check`. Every stochastic entry is
//! seeded, so the report depends only on the seed.

use serde::Serialize;
use serde_json::{json, Value};

use flagfloat::asymptotics::simplex_bound_check;
use flagfloat::exact::parse_rational;
use flagfloat::flag_simplex::{barycenter_subdivision, classify_flag_simplex};
use flagfloat::floating::{wet_part_measure, DirectionSpec};
use flagfloat::measure::Weight;
use flagfloat::models;
use flagfloat::{conjugate_flag, generators, polar_body, Result};

#[derive(Serialize)]
pub struct Entry {
    name: String,
    pass: bool,
    detail: Value,
}

#[derive(Serialize)]
pub struct Report {
    seed: u64,
    all_pass: bool,
    checks: Vec<Entry>,
}

fn entry(name: impl Into<String>, pass: bool, detail: Value) -> Entry {
    Entry {
        name: name.into(),
        pass,
        detail,
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn run(seed: u64) -> Result<Report> {
    let mut checks = Vec::new();

    for n in 2..=5 {
        let got = generators::simplex(n)?.face_lattice().flag_count();
        checks.push(entry(
            format!("flags simplex({n})"),
            got == factorial(n as u64 + 1),
            json!(got),
        ));
    }
    for n in 2..=4 {
        let want = factorial(n as u64) << n;
        let c = generators::cube(n)?.face_lattice().flag_count();
        let x = generators::cross_polytope(n)?.face_lattice().flag_count();
        checks.push(entry(
            format!("flags cube({n}) and cross({n})"),
            c == want && x == want,
            json!([c, x]),
        ));
    }
    for (k, want) in [(6, 216), (7, 336)] {
        let got = generators::cyclic(4, k)?.face_lattice().flag_count();
        checks.push(entry(
            format!("flags cyclic(4,{k})"),
            got == want,
            json!(got),
        ));
    }
    for tree in [
        "sum(seg,product(seg,seg))",
        "product(sum(seg,seg),sum(seg,seg))",
    ] {
        let p = generators::hanner(tree)?;
        let n = p.dim() as u64;
        let got = p.face_lattice().flag_count();
        checks.push(entry(
            format!("flags hanner {tree}"),
            got == factorial(n) << n,
            json!(got),
        ));
    }

    let samples = [
        ("icosahedron", generators::icosahedron()?),
        ("dodecahedron", generators::dodecahedron()?),
        ("cube(4)", generators::cube(4)?),
        (
            "random 3-polytope",
            generators::random_polytope(3, 20, seed)?,
        ),
    ];
    for (name, p) in &samples {
        let ids = p.face_lattice().check_flag_identities();
        let pass = ids.iter().all(|c| c.pass);
        checks.push(entry(
            format!("identities {name}"),
            pass,
            serde_json::to_value(&ids).expect("serializable"),
        ));
    }

    let c3 = generators::centered_cube(3)?;
    let polar = polar_body(&c3)?;
    let (l, lp) = (c3.face_lattice(), polar.face_lattice());
    let mut fv = lp.f_vector();
    fv.reverse();
    let flags = l.enumerate_flags();
    let involutive = flags
        .iter()
        .all(|f| conjugate_flag(&polar, &c3, &conjugate_flag(&c3, &polar, f)) == *f);
    checks.push(entry(
        "polarity cube(3)",
        fv == l.f_vector() && l.flag_count() == lp.flag_count() && involutive,
        json!({"f": l.f_vector(), "polar_f": lp.f_vector()}),
    ));

    let cube = generators::cube(3)?;
    let sub = barycenter_subdivision(&cube);
    let classified = sub
        .iter()
        .all(|s| classify_flag_simplex(&cube, &s.vertices).is_ok_and(|c| c.flag == s.flag));
    let exact_sum = sub.iter().map(|s| s.volume_exact()).reduce(|a, b| a + b);
    checks.push(entry(
        "subdivision cube(3)",
        sub.len() == 48 && classified && exact_sum == Some(parse_rational("1")?),
        json!({"count": sub.len(), "volume_sum": exact_sum.map(|v| v.to_string())}),
    ));

    let t2 = generators::simplex(2)?;
    let bounds = simplex_bound_check(&t2, 0, &[1e-2, 1e-3], 100_000, seed)?;
    checks.push(entry(
        "A+ bounds on the triangle",
        bounds.all_within,
        serde_json::to_value(&bounds).expect("serializable"),
    ));

    let d = 1e-3;
    let sq = generators::cube(2)?;
    let wet = wet_part_measure(
        &Weight::Uniform,
        &Weight::Uniform,
        &sq,
        d,
        &DirectionSpec::new(64),
        1e-3,
    )?;
    let exact = 2.0 * d * (1.0 / d).ln() + 2.0 * d * (1.0 - 2f64.ln());
    checks.push(entry(
        "square wet part",
        (wet.value - exact).abs() <= 3e-3 * exact,
        json!({"delta": d, "wet": wet.value, "closed_form": exact}),
    ));

    let c = models::halfsphere_limit_constant(2);
    let q = models::halfsphere_difference_quotient(2, 1e-6)?;
    checks.push(entry(
        "halfsphere constant",
        (c - q).abs() < 1e-3,
        json!({"constant": c, "difference_quotient": q}),
    ));

    let dist = 1.1f64;
    let mc = models::lune_volume_mc(
        &[0.0, 0.0, 1.0],
        &[dist.sin(), 0.0, dist.cos()],
        100_000,
        seed,
    )?;
    let formula = models::lune_volume(2, dist);
    checks.push(entry(
        "lune volume",
        (mc.value - formula).abs() <= 3.0 * mc.std_error,
        json!({"formula": formula, "monte_carlo": mc}),
    ));

    for m in [3, 5, 8] {
        let a = models::ideal_polygon(m)?.area(1e-6)?;
        let want = (m as f64 - 2.0) * std::f64::consts::PI;
        checks.push(entry(
            format!("ideal {m}-gon area"),
            (a - want).abs() < 1e-3,
            json!(a),
        ));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        seed,
        all_pass,
        checks,
    })
}
