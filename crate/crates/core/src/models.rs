//! Spherical and hyperbolic models: gnomonic projection onto a tangent
//! plane, the projective (Klein) ball model, closed-form constants and
//! ideal polygons.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::asymptotics::{fit_limit, predicted_limit, ratio_curve, LimitFit, RatioCurve};
use crate::error::{Error, Result};
use crate::floating::{
    envelope_2d, floating_body, wet_part_measure, Caps, DirectionSpec, McEstimate,
};
use crate::measure::{simplices_measure, Weight, IDEAL_TOL};
use crate::polytope::polygon::{ConvexPolygon, P2};
use crate::polytope::{convex_hull, generators, Point, Polytope};

fn legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(40).expect("valid order"))
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    legendre().integrate(a, b, f)
}

/// vol(Sⁿ) = 2π^{(n+1)/2}/Γ((n+1)/2).
pub fn sphere_volume(n: usize) -> f64 {
    let h = 0.5 * (n as f64 + 1.0);
    2.0 * PI.powf(h) / gamma(h)
}

/// Orthonormal basis of e^⊥.
fn tangent_basis(e: &DVector<f64>) -> Vec<DVector<f64>> {
    crate::floating::complement(e)
}

/// g(x) = x/(x·e) − e, a vector in the tangent space at e.
pub fn gnomonic_project(x: &[f64], e: &[f64]) -> Result<Point> {
    if x.len() != e.len() {
        return Err(Error::bad("geometry-models", "dimension mismatch"));
    }
    let xe: f64 = x.iter().zip(e).map(|(a, b)| a * b).sum();
    if !(xe > 0.0) {
        return Err(Error::NotInOpenHalfsphere);
    }
    Ok(Point::from_iterator(
        x.len(),
        x.iter().zip(e).map(|(a, b)| a / xe - b),
    ))
}

fn unit(x: &[f64]) -> Result<DVector<f64>> {
    let v = DVector::from_column_slice(x);
    let r = v.norm();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::bad("geometry-models", "zero or non-finite vector"));
    }
    Ok(v / r)
}

/// Spherical polytope in an open halfsphere, stored as its gnomonic image
/// in coordinates of an orthonormal basis of the tangent space at `base`.
#[derive(Clone, Debug)]
pub struct SphericalPolytope {
    pub base: Point,
    pub euclidean_image: Polytope,
}

impl SphericalPolytope {
    pub fn new(vertices: &[Vec<f64>], base: &[f64]) -> Result<Self> {
        let e = unit(base)?;
        let basis = tangent_basis(&e);
        let image = vertices
            .iter()
            .map(|v| {
                let g = gnomonic_project(unit(v)?.as_slice(), e.as_slice())?;
                Ok(Point::from_iterator(
                    basis.len(),
                    basis.iter().map(|b| b.dot(&g)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SphericalPolytope {
            base: e,
            euclidean_image: convex_hull(&image)?,
        })
    }

    /// Spherical triangle with geodesic side lengths a, b, c, based at the
    /// normalized vertex sum.
    pub fn triangle(a: f64, b: f64, c: f64) -> Result<Self> {
        let ok = [a, b, c].iter().all(|&s| s > 0.0 && s < PI)
            && a < b + c
            && b < a + c
            && c < a + b
            && a + b + c < 2.0 * PI;
        if !ok {
            return Err(Error::bad(
                "geometry-models",
                "side lengths do not form a spherical triangle",
            ));
        }
        // A at the pole, B at distance c, C at distance b with the angle at A from the cosine law
        let cos_a = (a.cos() - b.cos() * c.cos()) / (b.sin() * c.sin());
        let angle = cos_a.clamp(-1.0, 1.0).acos();
        let va = vec![0.0, 0.0, 1.0];
        let vb = vec![c.sin(), 0.0, c.cos()];
        let vc = vec![b.sin() * angle.cos(), b.sin() * angle.sin(), b.cos()];
        let e: Vec<f64> = (0..3).map(|i| va[i] + vb[i] + vc[i]).collect();
        Self::new(&[va, vb, vc], &e)
    }

    pub fn dim(&self) -> usize {
        self.euclidean_image.dim()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantCheck {
    pub predicted: f64,
    pub curve: RatioCurve,
    pub fit: LimitFit,
    pub relative_error: f64,
}

fn constant_check(
    w: &Weight,
    p: &Polytope,
    schedule: &[f64],
    spec: &DirectionSpec,
    refine_tol: f64,
) -> Result<ConstantCheck> {
    if p.dim() != 2 {
        return Err(Error::bad("geometry-models", "constant checks are planar"));
    }
    let predicted = predicted_limit(p, w, w)?;
    let curve = ratio_curve(w, w, p, schedule, spec, refine_tol)?;
    let fit = fit_limit(&curve, 2)?;
    Ok(ConstantCheck {
        predicted,
        relative_error: (fit.c1 - predicted).abs() / predicted,
        curve,
        fit,
    })
}

/// Fit of the spherical wet part on the gnomonic image.
pub fn spherical_floating_constant_check(
    s: &SphericalPolytope,
    schedule: &[f64],
    spec: &DirectionSpec,
    refine_tol: f64,
) -> Result<ConstantCheck> {
    constant_check(
        &Weight::Spherical,
        &s.euclidean_image,
        schedule,
        spec,
        refine_tol,
    )
}

/// α = π/2 − 2πδ/vol(Sⁿ), the radius of the floating body of a halfsphere.
pub fn halfsphere_floating_radius(n: usize, delta: f64) -> Result<f64> {
    if n == 0 || !(delta >= 0.0) {
        return Err(Error::bad("geometry-models", "need n >= 1 and delta >= 0"));
    }
    let alpha = 0.5 * PI - 2.0 * PI * delta / sphere_volume(n);
    if !(alpha > 0.0) {
        return Err(Error::DeltaTooLarge(delta));
    }
    Ok(alpha)
}

/// 2√π·Γ((n+1)/2)/Γ(n/2).
pub fn halfsphere_limit_constant(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * PI.sqrt() * gamma(0.5 * (nf + 1.0)) / gamma(0.5 * nf)
}

/// Volume of the geodesic ball of radius r in Sⁿ.
pub fn geodesic_ball_volume(n: usize, r: f64) -> f64 {
    let shell = if n == 1 { 2.0 } else { sphere_volume(n - 1) };
    shell * integrate(|t| t.sin().powi(n as i32 - 1), 0.0, r)
}

/// (vol S⁺ − vol B(α(δ)))/δ, the wet part of a halfsphere over δ.
pub fn halfsphere_difference_quotient(n: usize, delta: f64) -> Result<f64> {
    let alpha = halfsphere_floating_radius(n, delta)?;
    let shell = if n == 1 { 2.0 } else { sphere_volume(n - 1) };
    // integrate the thin shell directly rather than differencing two balls
    Ok(shell * integrate(|t| t.sin().powi(n as i32 - 1), alpha, 0.5 * PI) / delta)
}

/// (vol Sⁿ/2)(1 − d/π) for two halfspheres whose centers are at distance d.
pub fn lune_volume(n: usize, d: f64) -> f64 {
    0.5 * sphere_volume(n) * (1.0 - d / PI)
}

/// Uniform sampling of the intersection of two halfspheres of Sⁿ.
pub fn lune_volume_mc(e: &[f64], v: &[f64], samples: usize, seed: u64) -> Result<McEstimate> {
    if e.len() != v.len() || e.len() < 2 || samples == 0 {
        return Err(Error::bad(
            "geometry-models",
            "lune needs two vectors of equal dimension >= 2",
        ));
    }
    let (e, v) = (unit(e)?, unit(v)?);
    let n1 = e.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples)
        .filter(|_| {
            let x = DVector::from_iterator(n1, (0..n1).map(|_| StandardNormal.sample(&mut rng)));
            x.dot(&e) > 0.0 && x.dot(&v) > 0.0
        })
        .count();
    let q = hits as f64 / samples as f64;
    let vol = sphere_volume(n1 - 1);
    Ok(McEstimate {
        value: q * vol,
        std_error: (q * (1.0 - q) / samples as f64).sqrt() * vol,
        samples,
    })
}

/// Hyperbolic distance in the projective ball model.
pub fn klein_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::bad("geometry-models", "dimension mismatch"));
    }
    let (x, y) = (DVector::from_column_slice(x), DVector::from_column_slice(y));
    if !(x.norm() < 1.0 && y.norm() < 1.0) {
        return Err(Error::OutsideBall);
    }
    let l = (&y - &x).norm();
    if l == 0.0 {
        return Ok(0.0);
    }
    let d = (&y - &x) / l;
    // chord x + s·d meets the sphere at s₋ < 0 < l < s₊
    let b = x.dot(&d);
    let disc = (b * b - x.norm_squared() + 1.0).sqrt();
    let (sm, sp) = (-b - disc, -b + disc);
    Ok(0.5 * ((sp * (l - sm)) / ((sp - l) * (-sm))).ln())
}

#[derive(Clone, Debug)]
pub struct HyperbolicPolytope {
    pub klein_image: Polytope,
    pub ideal: Vec<bool>,
}

impl HyperbolicPolytope {
    pub fn new(p: Polytope) -> Result<Self> {
        let mut ideal = Vec::with_capacity(p.num_vertices());
        for v in p.vertices() {
            let r = v.norm();
            if r > 1.0 + IDEAL_TOL {
                return Err(Error::OutsideBall);
            }
            ideal.push((r - 1.0).abs() <= IDEAL_TOL);
        }
        Ok(HyperbolicPolytope {
            klein_image: p,
            ideal,
        })
    }

    pub fn is_compact(&self) -> bool {
        !self.ideal.iter().any(|&b| b)
    }

    /// Area by graded quadrature over a centroid fan, independent of the
    /// angle-sum closed form used for caps.
    pub fn area(&self, tol: f64) -> Result<f64> {
        let p = &self.klein_image;
        let c = p.vertex_centroid();
        let fan = p
            .fan_simplices(&c)
            .into_iter()
            .map(|s| s.iter().map(|v| v.iter().copied().collect()).collect())
            .collect();
        Ok(simplices_measure(&Weight::Hyperbolic, fan, tol)?.value)
    }
}

/// Regular ideal m-gon with vertices at the m-th roots of unity.
pub fn ideal_polygon(m: usize) -> Result<HyperbolicPolytope> {
    HyperbolicPolytope::new(generators::regular_polygon(m, 1.0)?)
}

/// Fit of the hyperbolic wet part of a compact polygon.
pub fn hyperbolic_floating_constant_check(
    h: &HyperbolicPolytope,
    schedule: &[f64],
    spec: &DirectionSpec,
    refine_tol: f64,
) -> Result<ConstantCheck> {
    if !h.is_compact() {
        return Err(Error::IdealVertexPresent);
    }
    constant_check(
        &Weight::Hyperbolic,
        &h.klein_image,
        schedule,
        spec,
        refine_tol,
    )
}

/// ∫₀^h √2/((2−s)√s√(3−2s)) ds, integrated in w = √s to remove the singularity.
pub fn ideal_cap_integral(h: f64) -> f64 {
    let f = |w: f64| {
        let s = w * w;
        2.0 * 2f64.sqrt() / ((2.0 - s) * (3.0 - 2.0 * s).sqrt())
    };
    integrate(f, 0.0, h.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealEntry {
    pub delta: f64,
    pub wet: f64,
    pub ratio: f64,
    /// Depth 1 − t of the cap of weight δ at a vertex.
    pub h0: f64,
    pub h0_bound: f64,
    pub cap_integral: f64,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealReport {
    pub entries: Vec<IdealEntry>,
    pub all_within: bool,
    /// Successive ratio differences shrink.
    pub settling: bool,
}

/// (π − vol(T_δ))/δ on the ideal triangle with a vertex at (1, 0), with the
/// vertex cap depth h₀(δ) against 3δ²/2.
pub fn ideal_triangle_ratio(
    schedule: &[f64],
    spec: &DirectionSpec,
    refine_tol: f64,
) -> Result<IdealReport> {
    let t = ideal_polygon(3)?;
    let p = &t.klein_image;
    let w = Weight::Hyperbolic;
    let caps = Caps::new(&w, p)?;
    let entries = schedule
        .iter()
        .map(|&d| {
            let wp = wet_part_measure(&w, &w, p, d, spec, refine_tol)?;
            let cut = caps.solve(&[1.0, 0.0], d)?;
            let h0 = 1.0 - cut.offset;
            let ratio = wp.value / d;
            let h0_bound = 1.5 * d * d;
            Ok(IdealEntry {
                delta: d,
                wet: wp.value,
                ratio,
                h0,
                h0_bound,
                cap_integral: ideal_cap_integral(h0),
                within: (3.0..=12.0).contains(&ratio) && h0 <= h0_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_within = entries.iter().all(|e| e.within);
    let diffs: Vec<f64> = entries
        .windows(2)
        .map(|w| (w[1].ratio - w[0].ratio).abs())
        .collect();
    let settling = diffs.windows(2).all(|w| w[1] <= w[0]);
    Ok(IdealReport {
        entries,
        all_within,
        settling,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Projective,
    Poincare,
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Model> {
        match s {
            "projective" | "klein" => Ok(Model::Projective),
            "poincare" => Ok(Model::Poincare),
            _ => Err(Error::bad(
                "geometry-models",
                format!("unknown model {s:?}"),
            )),
        }
    }
}

/// x ↦ x/(1 + √(1 − |x|²)), projective to conformal disk.
pub fn klein_to_poincare(x: P2) -> P2 {
    let r2 = (x[0] * x[0] + x[1] * x[1]).min(1.0);
    let s = 1.0 + (1.0 - r2).sqrt();
    [x[0] / s, x[1] / s]
}

const SVG_SIZE: f64 = 1000.0;
const SVG_RADIUS: f64 = 450.0;

fn svg_path(pts: &[P2], model: Model, closed: bool) -> String {
    let mut s = String::new();
    for (i, &q) in pts.iter().enumerate() {
        let q = match model {
            Model::Projective => q,
            Model::Poincare => klein_to_poincare(q),
        };
        let (x, y) = (
            0.5 * SVG_SIZE + SVG_RADIUS * q[0],
            0.5 * SVG_SIZE - SVG_RADIUS * q[1],
        );
        let _ = write!(s, "{}{:.3},{:.3}", if i == 0 { "M" } else { " L" }, x, y);
    }
    if closed {
        s.push_str(" Z");
    }
    s
}

/// Densify straight segments so they render as arcs after the disk map.
fn densify(poly: &[P2], per_edge: usize) -> Vec<P2> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m * per_edge);
    for i in 0..m {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        for k in 0..per_edge {
            let t = k as f64 / per_edge as f64;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// SVG with the boundary circle, the polygon, its hyperbolic floating body
/// and the envelope of the cut lines, in the chosen model.
pub fn ideal_envelope_svg(
    h: &HyperbolicPolytope,
    delta: f64,
    model: Model,
    samples: usize,
) -> Result<String> {
    let p = &h.klein_image;
    if p.dim() != 2 {
        return Err(Error::bad("geometry-models", "figures are planar"));
    }
    let w = Weight::Hyperbolic;
    let outer = ConvexPolygon::from_polytope(p);
    let env = envelope_2d(&w, p, delta, samples)?;
    let body = floating_body(&w, p, delta, &DirectionSpec::new(samples.max(16)))?;
    let per_edge = match model {
        Model::Projective => 1,
        Model::Poincare => 64,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" width="{SVG_SIZE}" height="{SVG_SIZE}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>"#
    );
    let c = 0.5 * SVG_SIZE;
    let _ = writeln!(
        s,
        r#"<circle cx="{c}" cy="{c}" r="{SVG_RADIUS}" fill="none" stroke="black" stroke-width="2"/>"#
    );
    let _ = writeln!(
        s,
        r##"<path d="{}" fill="#dde8f4" stroke="#1f4e79" stroke-width="2"/>"##,
        svg_path(&densify(outer.points(), per_edge), model, true)
    );
    if let Some(inner) = body.polygon() {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="#ffffff" stroke="#7f7f7f" stroke-width="1.5"/>"##,
            svg_path(&densify(inner.points(), per_edge), model, true)
        );
    }
    let _ = writeln!(
        s,
        r##"<path d="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
        svg_path(&env, model, false)
    );
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::point;

    #[test]
    fn gnomonic_examples() {
        let e = [0.0, 1.0];
        assert_eq!(gnomonic_project(&e, &e).unwrap(), point(&[0.0, 0.0]));
        let x = [0.5f64.sqrt(), 0.5f64.sqrt()];
        assert!((gnomonic_project(&x, &e).unwrap().norm() - 1.0).abs() < 1e-15);
        assert_eq!(
            gnomonic_project(&[0.0, -1.0], &e),
            Err(Error::NotInOpenHalfsphere)
        );
        // three points on one great circle project to collinear points
        let e3 = [0.0, 0.0, 1.0];
        let a = DVector::from_vec(vec![0.6, 0.0, 0.8]);
        let b = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        let pts: Vec<Point> = [-0.5, 0.2, 0.9]
            .iter()
            .map(|&t: &f64| {
                gnomonic_project((&a * t.cos() + &b * t.sin()).as_slice(), &e3).unwrap()
            })
            .collect();
        let (u, v) = (&pts[1] - &pts[0], &pts[2] - &pts[0]);
        assert!(u.cross(&v).norm() < 1e-12);
    }

    #[test]
    fn sphere_volumes_and_constants() {
        assert!((sphere_volume(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-13);
        assert!((halfsphere_limit_constant(2) - PI).abs() < 1e-14);
        assert!((halfsphere_limit_constant(1) - 2.0).abs() < 1e-14);
        assert_eq!(halfsphere_floating_radius(2, 0.0).unwrap(), 0.5 * PI);
        assert!((halfsphere_floating_radius(2, 0.5 * PI).unwrap() - 0.25 * PI).abs() < 1e-14);
        assert_eq!(
            halfsphere_floating_radius(2, 2.0 * PI),
            Err(Error::DeltaTooLarge(2.0 * PI))
        );
        for n in 1..=3 {
            let q = halfsphere_difference_quotient(n, 1e-6).unwrap();
            let c = halfsphere_limit_constant(n);
            assert!((q - c).abs() < 1e-3 * c, "n={n}: {q} vs {c}");
        }
        assert!((geodesic_ball_volume(2, 0.5 * PI) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn lune_matches_formula() {
        let d = 1.1f64;
        let e = [0.0, 0.0, 1.0];
        let v = [d.sin(), 0.0, d.cos()];
        let mc = lune_volume_mc(&e, &v, 200_000, 7).unwrap();
        assert!((mc.value - lune_volume(2, d)).abs() < 3.0 * mc.std_error);
    }

    #[test]
    fn spherical_triangle_has_the_right_sides() {
        let s = SphericalPolytope::triangle(0.6, 0.7, 0.8).unwrap();
        assert_eq!(s.euclidean_image.num_vertices(), 3);
        assert!(SphericalPolytope::triangle(0.1, 0.2, 0.5).is_err());
    }

    #[test]
    fn klein_distance_examples() {
        let r = 0.6;
        let d = klein_distance(&[0.0, 0.0], &[r, 0.0]).unwrap();
        assert!((d - 0.5 * ((1.0 + r) / (1.0 - r)).ln()).abs() < 1e-14);
        assert_eq!(klein_distance(&[0.2, 0.1], &[0.2, 0.1]).unwrap(), 0.0);
        let (x, y) = ([0.3, -0.5], [-0.7, 0.1]);
        assert!((klein_distance(&x, &y).unwrap() - klein_distance(&y, &x).unwrap()).abs() < 1e-12);
        assert_eq!(
            klein_distance(&[1.0, 0.0], &[0.0, 0.0]),
            Err(Error::OutsideBall)
        );
    }

    #[test]
    fn ideal_polygon_areas() {
        for m in [3, 5, 8] {
            let a = ideal_polygon(m).unwrap().area(1e-6).unwrap();
            assert!((a - (m as f64 - 2.0) * PI).abs() < 1e-3, "m={m}: {a}");
        }
        assert!(!ideal_polygon(4).unwrap().is_compact());
        let c = HyperbolicPolytope::new(generators::regular_polygon(3, 0.8).unwrap()).unwrap();
        assert!(c.is_compact());
    }

    #[test]
    fn cap_integral_lower_bound() {
        let h = 0.01;
        assert!(ideal_cap_integral(h) >= (2.0 * h / 3.0).sqrt());
        assert_eq!(ideal_cap_integral(0.0), 0.0);
    }

    #[test]
    fn poincare_map_fixes_boundary_and_center() {
        assert_eq!(klein_to_poincare([0.0, 0.0]), [0.0, 0.0]);
        assert_eq!(klein_to_poincare([1.0, 0.0]), [1.0, 0.0]);
        let q = klein_to_poincare([0.6, 0.0]);
        assert!((q[0] - 1.0 / 3.0).abs() < 1e-15);
    }
}
