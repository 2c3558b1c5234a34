//! Densities and the measures they induce on polytopes.

pub mod quadrature;
mod weight;

use rayon::prelude::*;

pub use weight::{AffineFactor, Monomial, Weight};

use crate::error::{Error, Result};
use crate::polytope::polygon::{ConvexPolygon, P2};
use crate::polytope::{clip_halfspace, Halfspace, Point, Polytope, Side};
use quadrature::{adaptive, finish, graded, simplex_volume, Estimate, SimplexPts};

/// Points this close to the unit sphere are treated as ideal vertices.
pub const IDEAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl MeasureResult {
    fn from_estimate(e: Estimate) -> Self {
        MeasureResult {
            value: e.value,
            abs_error_estimate: e.error,
        }
    }
}

fn is_ideal(v: &[f64]) -> bool {
    let r: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (r - 1.0).abs() <= IDEAL_TOL
}

fn check_domain(w: &Weight, pts: &[Vec<f64>]) -> Result<()> {
    if w.is_hyperbolic() {
        for v in pts {
            let r: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 1.0 + IDEAL_TOL {
                return Err(Error::OutOfDomain(v.clone()));
            }
        }
    }
    Ok(())
}

/// A vertex counts as singular for the hyperbolic density when it is ideal,
/// or when its distance to the sphere is below this fraction of its
/// distance to the nearest other vertex of the simplex.
const NEAR_IDEAL: f64 = 0.05;

fn singular_vertices(s: &SimplexPts) -> Vec<usize> {
    (0..s.len())
        .filter(|&i| {
            if is_ideal(&s[i]) {
                return true;
            }
            let gap = 1.0 - s[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            let nearest = (0..s.len())
                .filter(|&j| j != i)
                .map(|j| {
                    s[i].iter()
                        .zip(&s[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            gap <= NEAR_IDEAL * nearest
        })
        .collect()
}

/// Integrate over one simplex, grading toward vertices on or near the unit
/// sphere when the density is hyperbolic. Simplices with several such
/// vertices are first split at the midpoint of an edge joining two of them.
pub(crate) fn integrate(w: &Weight, s: SimplexPts, tol: f64) -> Estimate {
    if let Some(c) = w.constant_value() {
        return Estimate {
            value: c * simplex_volume(&s),
            error: 0.0,
            converged: true,
        };
    }
    if w.is_hyperbolic() {
        let singular = singular_vertices(&s);
        if singular.len() >= 2 {
            let (a, b) = (singular[0], singular[1]);
            let m: Vec<f64> = s[a].iter().zip(&s[b]).map(|(x, y)| 0.5 * (x + y)).collect();
            let mut s1 = s.clone();
            let mut s2 = s;
            s1[a] = m.clone();
            s2[b] = m;
            let mut e = integrate(w, s1, tol / 2.0);
            let e2 = integrate(w, s2, tol / 2.0);
            e.value += e2.value;
            e.error += e2.error;
            e.converged &= e2.converged;
            return e;
        }
        if let Some(&k) = singular.first() {
            let mut s = s;
            s.swap(0, k);
            let z = s[0].clone();
            let f = move |d: &[f64]| w.eval_near(&z, d);
            return graded(&s, &f, tol);
        }
    }
    adaptive(&s, &|x: &[f64]| w.eval(x), tol)
}

/// ∫_S w over the simplex with vertices `s`.
pub fn simplex_integrate(w: &Weight, s: &[Point], tol: f64) -> Result<MeasureResult> {
    if tol <= 0.0 {
        return Err(Error::bad("weighted-measure", "tolerance must be positive"));
    }
    let n = s.first().map_or(0, |p| p.len());
    if s.len() != n + 1 || n == 0 {
        return Err(Error::bad(
            "weighted-measure",
            "a simplex needs n+1 points in dimension n >= 1",
        ));
    }
    let pts: SimplexPts = s.iter().map(|p| p.iter().copied().collect()).collect();
    check_domain(w, &pts)?;
    if simplex_volume(&pts) == 0.0 {
        return Err(Error::bad("weighted-measure", "degenerate simplex"));
    }
    finish(integrate(w, pts, tol), tol).map(MeasureResult::from_estimate)
}

/// Sum over simplices in their given order, tolerance split evenly.
pub fn simplices_measure(
    w: &Weight,
    simplices: Vec<SimplexPts>,
    tol: f64,
) -> Result<MeasureResult> {
    for s in &simplices {
        check_domain(w, s)?;
    }
    let share = tol / simplices.len().max(1) as f64;
    let parts: Vec<Estimate> = simplices
        .into_par_iter()
        .map(|s| integrate(w, s, share))
        .collect();
    let mut total = Estimate {
        converged: true,
        ..Default::default()
    };
    for p in parts {
        total.value += p.value;
        total.error += p.error;
        total.converged &= p.converged;
    }
    finish(total, tol).map(MeasureResult::from_estimate)
}

/// Φ(P) = ∫_P w, from a fan triangulation about the vertex centroid.
pub fn polytope_measure(w: &Weight, p: &Polytope, tol: f64) -> Result<MeasureResult> {
    if let Some(c) = w.constant_value() {
        return Ok(MeasureResult {
            value: c * p.volume(),
            abs_error_estimate: 0.0,
        });
    }
    if p.dim() == 2 {
        return polygon_measure(w, &ConvexPolygon::from_polytope(p), tol);
    }
    let c = p.vertex_centroid();
    let simplices = p
        .fan_simplices(&c)
        .into_iter()
        .map(|s| s.iter().map(|v| v.iter().copied().collect()).collect())
        .collect();
    simplices_measure(w, simplices, tol)
}

fn disk_gap(p: &P2) -> Result<f64> {
    let r2 = p[0] * p[0] + p[1] * p[1];
    if r2 > 1.0 + IDEAL_TOL {
        return Err(Error::OutOfDomain(p.to_vec()));
    }
    let c = 1.0 - r2;
    Ok(if c <= IDEAL_TOL { 0.0 } else { c })
}

/// Signed hyperbolic area of a triangle in the projective model,
/// tan(A/2) = det / (√(c_x c_y c_z) + Σ (1 − x·y) √c_z) with c = 1 − ‖x‖².
/// Every denominator term is nonnegative, so the error is relative to A.
pub fn hyperbolic_triangle_area(x: &P2, y: &P2, z: &P2) -> Result<f64> {
    let (cx, cy, cz) = (
        disk_gap(x)?.sqrt(),
        disk_gap(y)?.sqrt(),
        disk_gap(z)?.sqrt(),
    );
    let det = (y[0] - x[0]) * (z[1] - x[1]) - (y[1] - x[1]) * (z[0] - x[0]);
    let dot = |a: &P2, b: &P2| 1.0 - a[0] * b[0] - a[1] * b[1];
    let den = cx * cy * cz + dot(x, y) * cz + dot(y, z) * cx + dot(z, x) * cy;
    Ok(2.0 * det.atan2(den))
}

/// Hyperbolic area of a convex polygon in the projective model, summed over
/// a fan from its first vertex.
pub fn hyperbolic_polygon_area(pts: &[P2]) -> Result<f64> {
    let mut a = 0.0;
    for p in pts {
        disk_gap(p)?;
    }
    for i in 1..pts.len().saturating_sub(1) {
        a += hyperbolic_triangle_area(&pts[0], &pts[i], &pts[i + 1])?;
    }
    Ok(a.abs())
}

/// Measure of a convex polygon (fan from its centroid).
pub fn polygon_measure(w: &Weight, poly: &ConvexPolygon, tol: f64) -> Result<MeasureResult> {
    if let Some(c) = w.constant_value() {
        return Ok(MeasureResult {
            value: c * poly.area(),
            abs_error_estimate: 0.0,
        });
    }
    if let Some(f) = w.hyperbolic_factor() {
        return Ok(MeasureResult {
            value: f * hyperbolic_polygon_area(poly.points())?,
            abs_error_estimate: 0.0,
        });
    }
    let c = poly.centroid();
    let pts = poly.points();
    let tris: Vec<[P2; 3]> = (0..pts.len())
        .map(|i| [c, pts[i], pts[(i + 1) % pts.len()]])
        .collect();
    triangles_measure(w, &tris, tol)
}

/// Measure of a union of interior-disjoint triangles.
pub fn triangles_measure(w: &Weight, tris: &[[P2; 3]], tol: f64) -> Result<MeasureResult> {
    if let Some(c) = w.constant_value() {
        let a: f64 = tris
            .iter()
            .map(|t| simplex_volume(&[t[0].to_vec(), t[1].to_vec(), t[2].to_vec()]))
            .sum();
        return Ok(MeasureResult {
            value: c * a,
            abs_error_estimate: 0.0,
        });
    }
    if let Some(f) = w.hyperbolic_factor() {
        let mut a = 0.0;
        for t in tris {
            a += hyperbolic_triangle_area(&t[0], &t[1], &t[2])?.abs();
        }
        return Ok(MeasureResult {
            value: f * a,
            abs_error_estimate: 0.0,
        });
    }
    simplices_measure(
        w,
        tris.iter()
            .map(|t| t.iter().map(|p| p.to_vec()).collect())
            .collect(),
        tol,
    )
}

/// Sequential sum over a polygon fan, for callers that are already parallel.
pub(crate) fn polygon_estimate(w: &Weight, poly: &ConvexPolygon, tol: f64) -> Estimate {
    if let Some(c) = w.constant_value() {
        return Estimate {
            value: c * poly.area(),
            error: 0.0,
            converged: true,
        };
    }
    if let Some(f) = w.hyperbolic_factor() {
        if let Ok(a) = hyperbolic_polygon_area(poly.points()) {
            return Estimate {
                value: f * a,
                error: 0.0,
                converged: true,
            };
        }
    }
    let c = poly.centroid();
    let pts = poly.points();
    let share = tol / pts.len() as f64;
    let mut total = Estimate {
        converged: true,
        ..Default::default()
    };
    for i in 0..pts.len() {
        let e = integrate(
            w,
            vec![
                c.to_vec(),
                pts[i].to_vec(),
                pts[(i + 1) % pts.len()].to_vec(),
            ],
            share,
        );
        total.value += e.value;
        total.error += e.error;
        total.converged &= e.converged;
    }
    total
}

/// Φ(P ∩ H⁺); an empty cap has measure zero.
pub fn cap_measure(w: &Weight, p: &Polytope, h: &Halfspace, tol: f64) -> Result<MeasureResult> {
    match clip_halfspace(p, h, Side::Plus) {
        Some(cap) => polytope_measure(w, &cap, tol),
        None => Ok(MeasureResult::default()),
    }
}
