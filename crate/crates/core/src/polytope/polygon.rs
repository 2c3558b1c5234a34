//! Planar convex polygons: the fast path for two-dimensional floating bodies.

use super::{point, Halfspace, Point, Polytope};

pub type P2 = [f64; 2];

#[inline]
fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
pub fn dot2(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Convex polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    pts: Vec<P2>,
}

impl ConvexPolygon {
    /// Vertices must already be in counter-clockwise convex position.
    pub fn from_ccw(pts: Vec<P2>) -> Self {
        ConvexPolygon { pts }
    }

    pub fn from_polytope(p: &Polytope) -> Self {
        assert_eq!(p.dim(), 2, "polygon fast path needs a planar polytope");
        let c = p.vertex_centroid();
        let mut pts: Vec<P2> = p.vertices().iter().map(|v| [v[0], v[1]]).collect();
        pts.sort_by(|a, b| {
            let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
            let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
            ta.total_cmp(&tb)
        });
        ConvexPolygon { pts }
    }

    pub fn points(&self) -> &[P2] {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Shoelace area, accumulated relative to the first vertex.
    pub fn area(&self) -> f64 {
        let o = self.pts[0];
        let mut a = 0.0;
        for i in 1..self.pts.len().saturating_sub(1) {
            a += cross(o, self.pts[i], self.pts[i + 1]);
        }
        0.5 * a
    }

    pub fn centroid(&self) -> P2 {
        let o = self.pts[0];
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 1..self.pts.len() - 1 {
            let (p, q) = (self.pts[i], self.pts[i + 1]);
            let w = cross(o, p, q);
            a += w;
            cx += w * (o[0] + p[0] + q[0]) / 3.0;
            cy += w * (o[1] + p[1] + q[1]) / 3.0;
        }
        if a.abs() < f64::MIN_POSITIVE {
            let n = self.pts.len() as f64;
            return [
                self.pts.iter().map(|p| p[0]).sum::<f64>() / n,
                self.pts.iter().map(|p| p[1]).sum::<f64>() / n,
            ];
        }
        [cx / a, cy / a]
    }

    pub fn support(&self, u: P2) -> (f64, f64) {
        self.pts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                let s = dot2(p, u);
                (lo.min(s), hi.max(s))
            })
    }

    /// Keep `x·u ≤ t` (`below`) or `x·u ≥ t`. `None` if nothing of positive
    /// area remains.
    pub fn clip(&self, u: P2, t: f64, below: bool) -> Option<ConvexPolygon> {
        let sgn = if below { 1.0 } else { -1.0 };
        let s: Vec<f64> = self.pts.iter().map(|&p| sgn * (dot2(p, u) - t)).collect();
        if s.iter().all(|&x| x <= 0.0) {
            return Some(self.clone());
        }
        if s.iter().all(|&x| x >= 0.0) {
            return None;
        }
        let n = self.pts.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (self.pts[i], self.pts[j]);
            if s[i] <= 0.0 {
                out.push(a);
            }
            if (s[i] < 0.0 && s[j] > 0.0) || (s[i] > 0.0 && s[j] < 0.0) {
                let r = s[i] / (s[i] - s[j]);
                out.push([a[0] + r * (b[0] - a[0]), a[1] + r * (b[1] - a[1])]);
            }
        }
        let poly = ConvexPolygon { pts: out };
        (poly.pts.len() >= 3 && poly.area() > 0.0).then_some(poly)
    }

    pub fn contains(&self, x: P2, tol: f64) -> bool {
        let n = self.pts.len();
        (0..n).all(|i| {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            cross(a, b, x) >= -tol * len
        })
    }

    /// Outward edge halfspaces `n·x ≤ o`, edge i running from vertex i to i+1.
    pub fn edge_halfspaces(&self) -> Vec<(P2, f64)> {
        let n = self.pts.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let len = (dx * dx + dy * dy).sqrt();
                let nrm = [dy / len, -dx / len];
                (nrm, dot2(nrm, a))
            })
            .collect()
    }

    /// Drop repeated and collinear vertices, then build the polytope.
    pub fn to_polytope(&self) -> Option<Polytope> {
        let scale = self
            .pts
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()))
            .fold(1.0, f64::max);
        let mut pts: Vec<P2> = Vec::with_capacity(self.pts.len());
        for &p in &self.pts {
            if pts
                .last()
                .is_some_and(|q: &P2| (q[0] - p[0]).abs().max((q[1] - p[1]).abs()) <= 1e-15 * scale)
            {
                continue;
            }
            pts.push(p);
        }
        while pts.len() > 1 {
            let (f, l) = (pts[0], pts[pts.len() - 1]);
            if (f[0] - l[0]).abs().max((f[1] - l[1]).abs()) <= 1e-15 * scale {
                pts.pop();
            } else {
                break;
            }
        }
        loop {
            let n = pts.len();
            if n < 3 {
                return None;
            }
            let flat = (0..n).find(|&i| {
                let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
                let la = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                let lc = ((c[0] - b[0]).powi(2) + (c[1] - b[1]).powi(2)).sqrt();
                cross(a, b, c) <= 1e-14 * la * lc
            });
            match flat {
                Some(i) => {
                    pts.remove(i);
                }
                None => break,
            }
        }
        let poly = ConvexPolygon { pts };
        let n = poly.pts.len();
        let vertices: Vec<Point> = poly.pts.iter().map(|p| point(p)).collect();
        let facets = poly
            .edge_halfspaces()
            .into_iter()
            .map(|(nrm, o)| Halfspace::new(point(&nrm), o))
            .collect();
        let facet_vertices = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Some(Polytope::from_parts(2, vertices, facets, facet_vertices))
    }
}

/// Triangles tiling `outer \ inner` for convex polygons with `inner ⊂ outer`.
///
/// Rays from an interior point of `inner` through every vertex of either
/// polygon cut the annulus into quadrilaterals; each contributes two
/// triangles. The region is thin, so measuring it directly avoids the
/// cancellation in `measure(outer) − measure(inner)`.
pub fn annulus_triangles(outer: &ConvexPolygon, inner: &ConvexPolygon) -> Vec<[P2; 3]> {
    let c = inner.centroid();
    let wo = Walker::new(outer, c);
    let wi = Walker::new(inner, c);
    // (angle, point on inner boundary, point on outer boundary)
    let mut rays: Vec<(f64, P2, P2)> = Vec::with_capacity(outer.len() + inner.len());
    for &p in outer.points() {
        let th = angle(c, p);
        rays.push((th, wi.hit(th, p), p));
    }
    for &p in inner.points() {
        let th = angle(c, p);
        rays.push((th, p, wo.hit(th, p)));
    }
    rays.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = rays.len();
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        let (_, ia, oa) = rays[k];
        let (_, ib, ob) = rays[(k + 1) % m];
        if cross(ia, oa, ob).abs() > 0.0 {
            out.push([ia, oa, ob]);
        }
        if cross(ia, ob, ib).abs() > 0.0 {
            out.push([ia, ob, ib]);
        }
    }
    out
}

fn angle(c: P2, p: P2) -> f64 {
    (p[1] - c[1]).atan2(p[0] - c[0])
}

/// Ray–boundary intersection for rays from a fixed interior point.
struct Walker<'a> {
    poly: &'a ConvexPolygon,
    c: P2,
    /// (angle, vertex index) sorted by angle
    order: Vec<(f64, usize)>,
}

impl<'a> Walker<'a> {
    fn new(poly: &'a ConvexPolygon, c: P2) -> Self {
        let mut order: Vec<(f64, usize)> = poly
            .points()
            .iter()
            .enumerate()
            .map(|(i, &p)| (angle(c, p), i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        Walker { poly, c, order }
    }

    /// Boundary point in direction `th` (the direction of `towards` from c).
    fn hit(&self, th: f64, towards: P2) -> P2 {
        let n = self.order.len();
        let k = self.order.partition_point(|&(a, _)| a <= th);
        let i = self.order[(k + n - 1) % n].1;
        let pts = self.poly.points();
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let d = [towards[0] - self.c[0], towards[1] - self.c[1]];
        let e = [b[0] - a[0], b[1] - a[1]];
        let den = d[0] * e[1] - d[1] * e[0];
        if den.abs() < f64::MIN_POSITIVE {
            return a;
        }
        let w = [a[0] - self.c[0], a[1] - self.c[1]];
        let s = (w[0] * e[1] - w[1] * e[0]) / den;
        [self.c[0] + s * d[0], self.c[1] + s * d[1]]
    }
}
