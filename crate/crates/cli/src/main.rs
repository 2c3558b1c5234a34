//! `flagfloat` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use flagfloat::asymptotics::{
    self, fit_limit, predicted_limit, ratio_curve, RatioCurve, RatioEntry,
};
use flagfloat::flag_simplex::{barycenter_subdivision, subdivision_entries};
use flagfloat::floating::{envelope_2d, floating_body, DirectionSpec};
use flagfloat::measure::Weight;
use flagfloat::models::{self, HyperbolicPolytope, Model, SphericalPolytope};
use flagfloat::polytope::polygon::ConvexPolygon;
use flagfloat::{generators, Error, Polytope, PolytopeJson};

mod check;

#[derive(Parser)]
#[command(
    name = "flagfloat",
    version,
    about = "Flags of polytopes and weighted floating bodies"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated polytope as JSON.
    Gen(GenArgs),
    /// f-vector, flag counts and identities.
    Flags(PolyArgs),
    /// Barycentric subdivision into flag simplices.
    Subdivide(PolyArgs),
    /// Weighted floating body for one δ.
    Float(FloatArgs),
    /// Envelope of the δ-cut lines of a polygon, as CSV or SVG (by --out extension).
    Envelope(EnvelopeArgs),
    /// Wet-part ratios over a δ-schedule, with the limit fit.
    Ratio(RatioArgs),
    /// Fit c1, c2 to a ratio CSV.
    Fit(FitArgs),
    /// Spherical checks.
    #[command(subcommand)]
    Sphere(SphereCommand),
    /// Hyperbolic checks and figures.
    #[command(subcommand)]
    Hyper(HyperCommand),
    /// Run the invariant suite and print a JSON report.
    Check(CheckArgs),
}

#[derive(Args, Clone)]
struct PolyArgs {
    /// Polytope JSON file.
    #[arg(long, conflicts_with = "gen")]
    polytope: Option<PathBuf>,
    /// Generator name: simplex, cube, centered-cube, cross, cyclic, polygon, random, icosahedron, dodecahedron or a Hanner tree.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    sides: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    poly: PolyArgs,
}

#[derive(Args)]
struct FloatArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// Weight name or JSON file.
    #[arg(long, alias = "weight", default_value = "uniform")]
    phi: String,
    #[arg(long)]
    delta: String,
    /// Uniform directions before clustering.
    #[arg(long, default_value_t = 64)]
    dirs: usize,
}

#[derive(Args)]
struct EnvelopeArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[arg(long, default_value = "uniform")]
    phi: String,
    #[arg(long)]
    delta: String,
    #[arg(long, default_value_t = 720)]
    samples: usize,
}

#[derive(Args)]
struct RatioArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[arg(long, default_value = "uniform")]
    phi: String,
    #[arg(long, default_value = "uniform")]
    psi: String,
    /// A:B:COUNT, log-spaced.
    #[arg(long, default_value = "1e-3:1e-7:9")]
    schedule: String,
    #[arg(long, default_value_t = 64)]
    dirs: usize,
    /// Relative tolerance of direction refinement.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with columns delta,wet[,ratio,predicted].
    curve: PathBuf,
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Subcommand)]
enum SphereCommand {
    /// Limit fit for a spherical triangle given its side lengths.
    Check {
        /// Geodesic side lengths a,b,c in radians.
        #[arg(long, default_value = "0.6,0.7,0.8")]
        triangle: String,
        #[arg(long, default_value = "1e-3:1e-7:9")]
        schedule: String,
        #[arg(long, default_value_t = 64)]
        dirs: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Halfsphere limit constant against the difference quotient.
    Constant {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "1e-6")]
        delta: String,
    },
    /// Lune volume formula against Monte Carlo on S².
    Lune {
        /// Distance between the halfsphere centers.
        #[arg(long, default_value = "1.1")]
        distance: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum HyperCommand {
    /// Limit fit for a compact regular polygon in the projective model.
    Compact {
        #[arg(long, default_value_t = 3)]
        sides: usize,
        #[arg(long, default_value = "0.8")]
        radius: String,
        #[arg(long, default_value = "1e-3:1e-7:9")]
        schedule: String,
        #[arg(long, default_value_t = 64)]
        dirs: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Regular ideal polygon: area, wet-part ratio for triangles, SVG figure.
    Ideal {
        #[arg(long, default_value_t = 3)]
        sides: usize,
        /// Single δ; accepts forms like 1e-3, pi/2, 3pi.
        #[arg(long, conflicts_with = "schedule")]
        delta: Option<String>,
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long, default_value = "projective")]
        model: String,
        #[arg(long, default_value_t = 64)]
        dirs: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        /// SVG output path; without it a JSON report is printed.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Reals as decimals or multiples of π: `0.5`, `pi`, `3pi`, `pi/2`, `3*pi/4`.
fn parse_real(s: &str) -> flagfloat::Result<f64> {
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    if let Some(i) = t.find("pi") {
        let head = t[..i].trim_end_matches('*');
        let tail = &t[i + 2..];
        let k: f64 = if head.is_empty() {
            1.0
        } else {
            head.parse().map_err(|_| bad())?
        };
        let d: f64 = match tail.strip_prefix('/') {
            Some(d) => d.parse().map_err(|_| bad())?,
            None if tail.is_empty() => 1.0,
            None => return Err(bad()),
        };
        return Ok(k * std::f64::consts::PI / d);
    }
    t.parse().map_err(|_| bad())
}

fn load_polytope(a: &PolyArgs) -> flagfloat::Result<Polytope> {
    match (&a.polytope, &a.gen) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let j: PolytopeJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            j.to_polytope()
        }
        (None, Some(name)) => generators::by_name(name, a.dim, a.k, a.sides, a.seed),
        (None, None) => Err(Error::Parse("need --polytope FILE or --gen NAME".into())),
    }
}

fn load_weight(s: &str, n: usize) -> flagfloat::Result<Weight> {
    let path = Path::new(s);
    if path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()));
    }
    Weight::from_name(s, n)
}

fn emit(text: &str, out: Option<&Path>) -> flagfloat::Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
                r => r.map_err(|e| Error::Parse(format!("stdout: {e}"))),
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn curve_csv(c: &RatioCurve, predicted: Option<f64>) -> flagfloat::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["delta", "wet", "ratio", "predicted"])
        .map_err(io)?;
    for e in &c.entries {
        let pred = predicted.map(|p| format!("{p:e}")).unwrap_or_default();
        w.write_record([
            format!("{:e}", e.delta),
            format!("{:e}", e.wet),
            format!("{:e}", e.ratio),
            pred,
        ])
        .map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?)
        .map_err(|e| Error::Parse(e.to_string()))
}

/// The curve and the predicted limit, if the CSV carries one.
fn read_curve(path: &Path, dim: usize) -> flagfloat::Result<(RatioCurve, Option<f64>)> {
    let io = |e: csv::Error| Error::Parse(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(io)?;
    let mut entries = Vec::new();
    let mut predicted = None;
    for rec in r.records() {
        let rec = rec.map_err(io)?;
        let field = |i: usize| -> flagfloat::Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::Parse("short CSV row".into()))?
                .trim()
                .parse()
                .map_err(|_| Error::Parse("bad CSV number".into()))
        };
        let (delta, wet) = (field(0)?, field(1)?);
        if rec.len() > 3 && !rec[3].trim().is_empty() {
            predicted = Some(field(3)?);
        }
        entries.push(RatioEntry {
            delta,
            wet,
            abs_error: 0.0,
            ratio: asymptotics::ratio_of(wet, delta, dim),
        });
    }
    Ok((RatioCurve { dim, entries }, predicted))
}

/// Polygon outline and envelope polyline. Hyperbolic inputs get the unit
/// disk as their viewBox, others the bounding box of the polygon.
fn envelope_svg(p: &Polytope, env: &[[f64; 2]], disk: bool) -> String {
    let (mut lo, mut hi) = ([-1.0f64, -1.0], [1.0f64, 1.0]);
    if !disk {
        lo = [f64::INFINITY; 2];
        hi = [f64::NEG_INFINITY; 2];
        for v in p.vertices() {
            for i in 0..2 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
    }
    let (w, h) = (hi[0] - lo[0], hi[1] - lo[1]);
    let stroke = 0.002 * w.max(h);
    let path = |pts: &mut dyn Iterator<Item = [f64; 2]>| {
        let mut d = String::new();
        for (i, q) in pts.enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{:.6},{:.6} ", q[0], lo[1] + hi[1] - q[1]));
        }
        d.push('Z');
        d
    };
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        lo[0], lo[1], w, h
    );
    if disk {
        s.push_str(&format!("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"gray\" stroke-width=\"{stroke}\"/>\n"));
    }
    let outline = path(&mut ConvexPolygon::from_polytope(p).points().iter().copied());
    s.push_str(&format!(
        "<path d=\"{outline}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke}\"/>\n"
    ));
    let curve = path(&mut env.iter().copied());
    s.push_str(&format!(
        "<path d=\"{curve}\" fill=\"none\" stroke=\"red\" stroke-width=\"{stroke}\"/>\n"
    ));
    s.push_str("</svg>\n");
    s
}

fn parse_triple(s: &str) -> flagfloat::Result<[f64; 3]> {
    let v = s
        .split(',')
        .map(parse_real)
        .collect::<flagfloat::Result<Vec<_>>>()?;
    v.try_into()
        .map_err(|_| Error::Parse(format!("expected three comma-separated values, got {s:?}")))
}

fn run(cli: Cli) -> flagfloat::Result<()> {
    match cli.command {
        Command::Gen(a) => {
            let p = load_polytope(&a.poly)?;
            emit(&to_json(&p.to_json()), a.poly.out.as_deref())
        }
        Command::Flags(a) => {
            let p = load_polytope(&a)?;
            let l = p.face_lattice();
            let report = json!({
                "dim": p.dim(),
                "f_vector": l.f_vector(),
                "flag_total": l.flag_count(),
                "flags_per_vertex": l.flags_per_vertex(),
                "simplicial": l.is_simplicial(),
                "simple": l.is_simple(),
                "identities": l.check_flag_identities(),
            });
            emit(&to_json(&report), a.out.as_deref())
        }
        Command::Subdivide(a) => {
            let p = load_polytope(&a)?;
            let s = barycenter_subdivision(&p);
            let total: f64 = s.iter().map(|x| x.volume()).sum();
            let report = json!({
                "count": s.len(),
                "total_volume": total,
                "polytope_volume": p.volume(),
                "simplices": subdivision_entries(&p, &s),
            });
            emit(&to_json(&report), a.out.as_deref())
        }
        Command::Float(a) => {
            let p = load_polytope(&a.poly)?;
            let w = load_weight(&a.phi, p.dim())?;
            let fb = floating_body(&w, &p, parse_real(&a.delta)?, &DirectionSpec::new(a.dirs))?;
            emit(&to_json(&fb.to_json()), a.poly.out.as_deref())
        }
        Command::Envelope(a) => {
            let p = load_polytope(&a.poly)?;
            let w = load_weight(&a.phi, p.dim())?;
            let env = envelope_2d(&w, &p, parse_real(&a.delta)?, a.samples)?;
            let out = a.poly.out.as_deref();
            if out.is_some_and(|o| o.extension().is_some_and(|e| e == "svg")) {
                return emit(
                    &envelope_svg(&p, &env, w.hyperbolic_factor().is_some()),
                    out,
                );
            }
            let mut s = String::from("x,y\n");
            for q in env {
                s.push_str(&format!("{:e},{:e}\n", q[0], q[1]));
            }
            emit(&s, out)
        }
        Command::Ratio(a) => {
            let p = load_polytope(&a.poly)?;
            let n = p.dim();
            let (phi, psi) = (load_weight(&a.phi, n)?, load_weight(&a.psi, n)?);
            let schedule = asymptotics::parse_schedule(&a.schedule)?;
            let predicted = predicted_limit(&p, &phi, &psi)?;
            let curve = ratio_curve(
                &phi,
                &psi,
                &p,
                &schedule,
                &DirectionSpec::new(a.dirs),
                a.tol,
            )?;
            let csv = curve_csv(&curve, Some(predicted))?;
            let fit = fit_limit(&curve, n);
            let report = json!({
                "predicted": predicted,
                "fit": fit.as_ref().ok(),
                "fit_error": fit.as_ref().err().map(|e| e.to_string()),
                "relative_error": fit.as_ref().ok().map(|f| (f.c1 - predicted).abs() / predicted),
            });
            match &a.poly.out {
                Some(path) => {
                    emit(&csv, Some(path))?;
                    print!("{}", to_json(&report));
                }
                None => {
                    print!("{csv}");
                    eprint!("{}", to_json(&report));
                }
            }
            fit.map(|_| ())
        }
        Command::Fit(a) => {
            let (curve, predicted) = read_curve(&a.curve, a.dim)?;
            let fit = fit_limit(&curve, a.dim)?;
            let report = json!({
                "c1": fit.c1,
                "c2": fit.c2,
                "residual_rms": fit.residual_rms,
                "condition": fit.condition,
                "predicted_limit": predicted,
                "relative_gap": predicted.map(|p| (fit.c1 - p).abs() / p),
            });
            emit(&to_json(&report), None)
        }
        Command::Sphere(c) => sphere(c),
        Command::Hyper(c) => hyper(c),
        Command::Check(a) => {
            let report = check::run(a.seed)?;
            emit(&to_json(&report), a.out.as_deref())
        }
    }
}

fn sphere(c: SphereCommand) -> flagfloat::Result<()> {
    match c {
        SphereCommand::Check {
            triangle,
            schedule,
            dirs,
            tol,
        } => {
            let [a, b, cc] = parse_triple(&triangle)?;
            let s = SphericalPolytope::triangle(a, b, cc)?;
            let sched = asymptotics::parse_schedule(&schedule)?;
            let r = models::spherical_floating_constant_check(
                &s,
                &sched,
                &DirectionSpec::new(dirs),
                tol,
            )?;
            print!("{}", to_json(&r));
        }
        SphereCommand::Constant { dim, delta } => {
            let d = parse_real(&delta)?;
            let report = json!({
                "dim": dim,
                "constant": models::halfsphere_limit_constant(dim),
                "difference_quotient": models::halfsphere_difference_quotient(dim, d)?,
                "radius": models::halfsphere_floating_radius(dim, d)?,
            });
            print!("{}", to_json(&report));
        }
        SphereCommand::Lune {
            distance,
            samples,
            seed,
        } => {
            let d = parse_real(&distance)?;
            let mc =
                models::lune_volume_mc(&[0.0, 0.0, 1.0], &[d.sin(), 0.0, d.cos()], samples, seed)?;
            let formula = models::lune_volume(2, d);
            let report = json!({
                "distance": d,
                "formula": formula,
                "monte_carlo": mc,
                "within_3se": (mc.value - formula).abs() <= 3.0 * mc.std_error,
            });
            print!("{}", to_json(&report));
        }
    }
    Ok(())
}

fn hyper(c: HyperCommand) -> flagfloat::Result<()> {
    match c {
        HyperCommand::Compact {
            sides,
            radius,
            schedule,
            dirs,
            tol,
        } => {
            let h =
                HyperbolicPolytope::new(generators::regular_polygon(sides, parse_real(&radius)?)?)?;
            let sched = asymptotics::parse_schedule(&schedule)?;
            let r = models::hyperbolic_floating_constant_check(
                &h,
                &sched,
                &DirectionSpec::new(dirs),
                tol,
            )?;
            print!("{}", to_json(&r));
        }
        HyperCommand::Ideal {
            sides,
            delta,
            schedule,
            model,
            dirs,
            tol,
            samples,
            out,
        } => {
            let h = models::ideal_polygon(sides)?;
            let model: Model = model.parse()?;
            let deltas = match (&delta, &schedule) {
                (Some(d), _) => vec![parse_real(d)?],
                (None, Some(s)) => asymptotics::parse_schedule(s)?,
                (None, None) => vec![1e-3],
            };
            if let Some(path) = out {
                let svg = models::ideal_envelope_svg(&h, deltas[0], model, samples)?;
                return emit(&svg, Some(&path));
            }
            let area = h.area(1e-6)?;
            let mut report = json!({
                "sides": sides,
                "area": area,
                "expected_area": (sides as f64 - 2.0) * std::f64::consts::PI,
            });
            if sides == 3 {
                let r = models::ideal_triangle_ratio(&deltas, &DirectionSpec::new(dirs), tol)?;
                report["ratio"] = serde_json::to_value(&r).expect("serializable");
            }
            print!("{}", to_json(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("cli: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
