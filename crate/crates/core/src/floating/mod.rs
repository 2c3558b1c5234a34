//! Weighted floating bodies: caps of prescribed weight, outer
//! approximations of the body from sampled directions, and the wet part.

mod directions;
mod envelope;
mod regions;

use rayon::prelude::*;
use serde::Serialize;

pub(crate) use directions::complement;
pub use directions::{directions, DirectionSpec};
pub use envelope::envelope_2d;
pub(crate) use regions::TriangleSampler;
pub use regions::{
    a_plus_measure_mc, a_plus_membership, a_plus_restricted_mc, b_plus_measure_mc,
    b_plus_membership, McEstimate,
};

use crate::error::{Error, Result};
use crate::measure::{
    polygon_estimate, polytope_measure, triangles_measure, MeasureResult, Weight,
};
use crate::polytope::polygon::{annulus_triangles, ConvexPolygon};
use crate::polytope::{
    clip_halfspace, convex_hull, point, polar_body, Halfspace, Point, Polytope, Side,
};

/// Largest admissible mismatch between a cap's weight and its target.
pub fn cap_tolerance(delta: f64) -> f64 {
    (1e-6 * delta).max(1e-12)
}

/// A halfspace `{x·direction ≥ offset}` whose cap has weight `achieved_weight`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapCut {
    pub direction: Vec<f64>,
    pub offset: f64,
    pub achieved_weight: f64,
}

impl CapCut {
    /// The kept side `{x·direction ≤ offset}`.
    pub fn kept(&self) -> Halfspace {
        Halfspace {
            normal: point(&self.direction),
            offset: self.offset,
        }
    }
}

/// Outer approximation P ∩ ⋂ H⁻ over the sampled cuts; `body` is `None`
/// when nothing with interior survives.
#[derive(Clone, Debug)]
pub struct FloatingBodyApprox {
    pub delta: f64,
    pub cuts: Vec<CapCut>,
    pub body: Option<Polytope>,
    planar: Option<ConvexPolygon>,
}

impl FloatingBodyApprox {
    /// Facets of P followed by the kept sides of all cuts.
    pub fn halfspaces(&self, p: &Polytope) -> Vec<Halfspace> {
        p.facets()
            .iter()
            .cloned()
            .chain(self.cuts.iter().map(CapCut::kept))
            .collect()
    }

    pub fn polygon(&self) -> Option<&ConvexPolygon> {
        self.planar.as_ref()
    }

    pub fn vertices(&self) -> Vec<Point> {
        match (&self.planar, &self.body) {
            (Some(poly), _) => poly.points().iter().map(|q| point(q)).collect(),
            (None, Some(b)) => b.vertices().to_vec(),
            _ => Vec::new(),
        }
    }

    /// Every vertex of `inner` satisfies every inequality of `self`.
    pub fn contains_body(&self, p: &Polytope, inner: &FloatingBodyApprox, tol: f64) -> bool {
        let hs = self.halfspaces(p);
        inner
            .vertices()
            .iter()
            .all(|x| hs.iter().all(|h| h.eval(x) <= tol))
    }

    /// Facet inequalities {x·normal ≤ offset} of the body with redundant cuts dropped.
    pub fn reduced_halfspaces(&self) -> Vec<Halfspace> {
        match &self.body {
            Some(b) => b.facets().to_vec(),
            None => convex_hull(&self.vertices())
                .map(|b| b.facets().to_vec())
                .unwrap_or_default(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let h_rep: Vec<_> = self
            .reduced_halfspaces()
            .iter()
            .map(|h| serde_json::json!({"normal": h.normal.iter().copied().collect::<Vec<f64>>(), "offset": h.offset}))
            .collect();
        serde_json::json!({
            "delta": self.delta,
            "cuts": self.cuts,
            "h_rep": h_rep,
            "body": self.vertices().iter().map(|v| v.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
            "approximation_side": "outer",
        })
    }
}

/// Ψ(P \ body) for one δ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WetPart {
    pub delta: f64,
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Directions used at the accepted refinement level.
    pub directions: usize,
    /// Relative change under the last direction doubling.
    pub refinement_change: f64,
}

impl WetPart {
    pub fn measure(&self) -> MeasureResult {
        MeasureResult {
            value: self.value,
            abs_error_estimate: self.abs_error_estimate,
        }
    }
}

/// Cap weights t ↦ Φ(P ∩ {x·u ≥ t}) for one polytope and density.
pub(crate) struct Caps<'a> {
    w: &'a Weight,
    p: &'a Polytope,
    poly: Option<ConvexPolygon>,
    pub total: f64,
}

impl<'a> Caps<'a> {
    pub fn new(w: &'a Weight, p: &'a Polytope) -> Result<Self> {
        let vol = p.volume();
        let total = polytope_measure(w, p, 1e-9 * vol.max(1e-300))?.value;
        let poly = (p.dim() == 2).then(|| ConvexPolygon::from_polytope(p));
        Ok(Caps { w, p, poly, total })
    }

    pub fn polygon(&self) -> Option<&ConvexPolygon> {
        self.poly.as_ref()
    }

    /// Cap weight to absolute accuracy `qtol`. Far from the root only the
    /// sign of cap − δ matters, so the tolerance is relaxed to 1% of the
    /// distance of a rough estimate from δ.
    fn cap(&self, u: &[f64], t: f64, qtol: f64, delta: f64) -> Result<f64> {
        let relax = |rough: f64| {
            qtol.max(1e-11 * rough.abs())
                .max(1e-2 * (rough - delta).abs())
        };
        if let Some(poly) = &self.poly {
            return Ok(match poly.clip([u[0], u[1]], t, false) {
                None => 0.0,
                Some(c) => {
                    let rough = polygon_estimate(self.w, &c, f64::INFINITY).value;
                    polygon_estimate(self.w, &c, relax(rough)).value
                }
            });
        }
        let h = Halfspace {
            normal: point(u),
            offset: t,
        };
        match clip_halfspace(self.p, &h, Side::Plus) {
            None => Ok(0.0),
            Some(c) => {
                if let Some(k) = self.w.constant_value() {
                    return Ok(k * c.volume());
                }
                let rough = polytope_measure(self.w, &c, f64::INFINITY)?.value;
                Ok(polytope_measure(self.w, &c, relax(rough))?.value)
            }
        }
    }

    /// Offset t with Φ(P ∩ {x·u ≥ t}) = δ by safeguarded regula falsi on
    /// the decreasing cap weight, run to near machine precision.
    pub fn solve(&self, u: &[f64], delta: f64) -> Result<CapCut> {
        if !(delta > 0.0 && delta < self.total) {
            return Err(Error::DeltaOutOfRange {
                delta,
                max: self.total,
            });
        }
        let (lo, hi) = self.p.support_range(&point(u));
        let stop = 1e-9 * delta;
        let qtol = 1e-3 * stop;
        // g(t) = cap(t) − δ is positive at lo and negative at hi
        let (mut a, mut ga) = (lo, self.total - delta);
        let (mut b, mut gb) = (hi, -delta);
        let mut best = if ga.abs() < gb.abs() {
            (a, ga)
        } else {
            (b, gb)
        };
        let mut side = 0i8;
        let mut width = b - a;
        for it in 0..400 {
            let mut t = b - gb * (b - a) / (gb - ga);
            if it % 4 == 3 {
                // force progress when the bracket has not halved
                if b - a > 0.5 * width {
                    t = 0.5 * (a + b);
                }
                width = b - a;
            }
            if !(t > a && t < b) {
                t = 0.5 * (a + b);
                if !(t > a && t < b) {
                    break;
                }
            }
            let g = self.cap(u, t, qtol, delta)? - delta;
            if g.abs() < best.1.abs() {
                best = (t, g);
            }
            if g.abs() <= stop {
                break;
            }
            if g > 0.0 {
                a = t;
                ga = g;
                if side == 1 {
                    gb *= 0.5;
                }
                side = 1;
            } else {
                b = t;
                gb = g;
                if side == -1 {
                    ga *= 0.5;
                }
                side = -1;
            }
        }
        let (t, g) = best;
        if g.abs() > cap_tolerance(delta) {
            return Err(Error::ToleranceNotReached {
                tol: cap_tolerance(delta),
                estimate: g.abs(),
            });
        }
        Ok(CapCut {
            direction: u.to_vec(),
            offset: t,
            achieved_weight: g + delta,
        })
    }
}

/// The cut in direction `u` whose cap has weight δ.
pub fn cap_offset_for_weight(w: &Weight, p: &Polytope, u: &Point, delta: f64) -> Result<CapCut> {
    let len = u.norm();
    if !(len > 0.0) || u.len() != p.dim() {
        return Err(Error::bad(
            "floating-body",
            "direction must be a nonzero vector of the ambient dimension",
        ));
    }
    let u: Vec<f64> = u.iter().map(|x| x / len).collect();
    Caps::new(w, p)?.solve(&u, delta)
}

fn check_delta(delta: f64, total: f64) -> Result<()> {
    // closed at Φ/2 so that the symmetric case δ = Φ/2 can be drawn
    if !(delta > 0.0 && delta <= 0.5 * total) {
        return Err(Error::DeltaOutOfRange {
            delta,
            max: 0.5 * total,
        });
    }
    Ok(())
}

/// Outer approximation of the floating body from the given directions.
pub fn floating_body_with(
    w: &Weight,
    p: &Polytope,
    delta: f64,
    dirs: &[Point],
) -> Result<FloatingBodyApprox> {
    let caps = Caps::new(w, p)?;
    check_delta(delta, caps.total)?;
    body_from_caps(&caps, p, delta, dirs)
}

fn body_from_caps(
    caps: &Caps,
    p: &Polytope,
    delta: f64,
    dirs: &[Point],
) -> Result<FloatingBodyApprox> {
    if dirs.len() < p.dim() + 1 {
        return Err(Error::bad("floating-body", "need at least n+1 directions"));
    }
    let cuts: Vec<CapCut> = dirs
        .par_iter()
        .map(|u| caps.solve(u.as_slice(), delta))
        .collect::<Result<Vec<_>>>()?;
    let (body, planar) = match caps.polygon() {
        Some(poly) => {
            let mut cur = Some(poly.clone());
            for c in &cuts {
                cur = cur.and_then(|q| q.clip([c.direction[0], c.direction[1]], c.offset, true));
            }
            (cur.as_ref().and_then(|q| q.to_polytope()), cur)
        }
        None => (intersect(p, &cuts), None),
    };
    Ok(FloatingBodyApprox {
        delta,
        cuts,
        body,
        planar,
    })
}

/// P ∩ ⋂ kept sides, via the polar of the hull of the dual points when the
/// vertex centroid is interior, otherwise by repeated clipping.
fn intersect(p: &Polytope, cuts: &[CapCut]) -> Option<Polytope> {
    let n = p.dim();
    if n == 1 {
        let (mut lo, mut hi) = p.support_range(&point(&[1.0]));
        for c in cuts {
            if c.direction[0] > 0.0 {
                hi = hi.min(c.offset / c.direction[0]);
            } else {
                lo = lo.max(c.offset / c.direction[0]);
            }
        }
        return (hi > lo)
            .then(|| convex_hull(&[point(&[lo]), point(&[hi])]).ok())
            .flatten();
    }
    let hs: Vec<Halfspace> = p
        .facets()
        .iter()
        .cloned()
        .chain(cuts.iter().map(CapCut::kept))
        .collect();
    let c = p.vertex_centroid();
    let scale = p
        .vertices()
        .iter()
        .map(|v| (v - &c).norm())
        .fold(0.0, f64::max);
    if hs.iter().all(|h| h.eval(&c) < -1e-9 * scale) {
        let duals: Vec<Point> = hs
            .iter()
            .map(|h| &h.normal / (h.offset - h.normal.dot(&c)))
            .collect();
        if let Ok(q) = convex_hull(&duals) {
            if let Ok(b) = polar_body(&q) {
                return Some(b.translated(&c));
            }
        }
    }
    let mut cur = p.clone();
    for c in cuts {
        cur = clip_halfspace(&cur, &c.kept(), Side::Minus)?;
    }
    Some(cur)
}

/// Floating body for the direction family generated from `spec`.
pub fn floating_body(
    w: &Weight,
    p: &Polytope,
    delta: f64,
    spec: &DirectionSpec,
) -> Result<FloatingBodyApprox> {
    let caps = Caps::new(w, p)?;
    check_delta(delta, caps.total)?;
    let dirs = directions(p, spec, delta, caps.total);
    body_from_caps(&caps, p, delta, &dirs)
}

fn wet_of_body(
    psi: &Weight,
    p: &Polytope,
    psi_total: f64,
    fb: &FloatingBodyApprox,
    tol: f64,
) -> Result<MeasureResult> {
    match (&fb.planar, &fb.body) {
        (Some(inner), _) => {
            let outer = ConvexPolygon::from_polytope(p);
            triangles_measure(psi, &annulus_triangles(&outer, inner), tol)
        }
        (None, Some(b)) => {
            let m = polytope_measure(psi, b, tol)?;
            Ok(MeasureResult {
                value: psi_total - m.value,
                abs_error_estimate: m.abs_error_estimate + tol,
            })
        }
        (_, None) => Ok(MeasureResult {
            value: psi_total,
            abs_error_estimate: tol,
        }),
    }
}

/// Maximum number of direction doublings before giving up.
pub const MAX_REFINEMENTS: usize = 6;

/// Ψ(P) − Ψ(P_δ^φ) from the outer approximation, doubling the direction
/// family until the relative change drops below `refine_tol`.
pub fn wet_part_measure(
    phi: &Weight,
    psi: &Weight,
    p: &Polytope,
    delta: f64,
    spec: &DirectionSpec,
    refine_tol: f64,
) -> Result<WetPart> {
    let caps = Caps::new(phi, p)?;
    check_delta(delta, caps.total)?;
    let qtol = 1e-7 * delta;
    let psi_total = if p.dim() == 2 {
        0.0
    } else {
        polytope_measure(psi, p, 1e-4 * qtol)?.value
    };
    let mut spec = spec.clone();
    let mut prev: Option<f64> = None;
    let mut change = f64::INFINITY;
    for _ in 0..=MAX_REFINEMENTS {
        let dirs = directions(p, &spec, delta, caps.total);
        let fb = body_from_caps(&caps, p, delta, &dirs)?;
        let m = wet_of_body(psi, p, psi_total, &fb, qtol)?;
        if let Some(q) = prev {
            change = ((m.value - q) / m.value).abs();
            if change < refine_tol {
                return Ok(WetPart {
                    delta,
                    value: m.value,
                    abs_error_estimate: m.abs_error_estimate,
                    directions: dirs.len(),
                    refinement_change: change,
                });
            }
        }
        prev = Some(m.value);
        spec = spec.doubled();
    }
    Err(Error::DirectionRefinementStalled {
        change,
        tol: refine_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::generators;

    fn square() -> Polytope {
        generators::cube(2).unwrap()
    }

    #[test]
    fn offsets_of_simple_caps() {
        let sq = square();
        let c = cap_offset_for_weight(&Weight::Uniform, &sq, &point(&[1.0, 0.0]), 0.125).unwrap();
        assert!((c.offset - 0.875).abs() < 1e-12);
        let c = cap_offset_for_weight(&Weight::Uniform, &sq, &point(&[1.0, 1.0]), 0.125).unwrap();
        assert!((c.offset - 1.5 / 2f64.sqrt()).abs() < 1e-9);
        let w = Weight::one_plus_coordinate(2, 0);
        let c = cap_offset_for_weight(&w, &sq, &point(&[1.0, 0.0]), 0.875).unwrap();
        assert!((c.offset - 0.5).abs() < 1e-10);
        assert!(matches!(
            cap_offset_for_weight(&Weight::Uniform, &sq, &point(&[1.0, 0.0]), 1.5),
            Err(Error::DeltaOutOfRange { .. })
        ));
    }

    #[test]
    fn cuts_reproduce_their_weight() {
        let p = generators::regular_polygon(5, 1.0).unwrap();
        let w = Weight::Spherical;
        let fb = floating_body(&w, &p, 1e-3, &DirectionSpec::new(32)).unwrap();
        for c in &fb.cuts {
            let h = Halfspace::new(point(&c.direction), c.offset);
            let m = crate::measure::cap_measure(&w, &p, &h, 1e-14)
                .unwrap()
                .value;
            assert!((m - 1e-3).abs() <= cap_tolerance(1e-3));
        }
    }

    #[test]
    fn segment_wet_part_is_two_delta() {
        let seg = generators::cube(1).unwrap();
        for d in [1e-2, 1e-4] {
            let wp = wet_part_measure(
                &Weight::Uniform,
                &Weight::Uniform,
                &seg,
                d,
                &DirectionSpec::new(2),
                1e-6,
            )
            .unwrap();
            assert!((wp.value - 2.0 * d).abs() < 1e-12, "{}", wp.value);
        }
    }

    #[test]
    fn bodies_shrink_with_delta_and_grow_with_directions() {
        let sq = square();
        let dirs = directions(&sq, &DirectionSpec::new(64), 0.05, 1.0);
        let b1 = floating_body_with(&Weight::Uniform, &sq, 0.05, &dirs).unwrap();
        let b2 = floating_body_with(&Weight::Uniform, &sq, 0.1, &dirs).unwrap();
        assert!(b1.contains_body(&sq, &b2, 1e-12));
        let few = floating_body_with(&Weight::Uniform, &sq, 0.05, &dirs[..dirs.len() / 2]).unwrap();
        let sub: Vec<Point> = dirs.iter().step_by(2).cloned().collect();
        let coarse = floating_body_with(&Weight::Uniform, &sq, 0.05, &sub).unwrap();
        assert!(coarse.contains_body(&sq, &b1, 1e-12));
        assert!(few.body.is_some());
    }

    #[test]
    fn square_wet_part_matches_closed_form() {
        // corner caps are triangles xy = 2δ; wet = 2δ ln(1/δ) + 2δ(1 − ln 2) for δ ≤ 1/8
        let sq = square();
        for d in [1e-2, 1e-4] {
            let wp = wet_part_measure(
                &Weight::Uniform,
                &Weight::Uniform,
                &sq,
                d,
                &DirectionSpec::new(64),
                1e-3,
            )
            .unwrap();
            let exact = 2.0 * d * (1.0 / d).ln() + 2.0 * d * (1.0 - 2f64.ln());
            assert!(wp.value <= exact * (1.0 + 1e-9));
            assert!(
                (wp.value - exact).abs() < 3e-3 * exact,
                "{d}: {} vs {exact}",
                wp.value
            );
        }
    }

    #[test]
    fn three_dimensional_body_is_inside_the_cube() {
        let c = generators::cube(3).unwrap();
        let fb = floating_body(&Weight::Uniform, &c, 1e-2, &DirectionSpec::new(48)).unwrap();
        let b = fb.body.as_ref().unwrap();
        // the facet cuts alone leave the cube [0.01, 0.99]³
        assert!(
            b.volume() < 0.98f64.powi(3) && b.volume() > 0.7,
            "{}",
            b.volume()
        );
        for v in b.vertices() {
            assert!(c.contains(v, 1e-9));
        }
    }
}
