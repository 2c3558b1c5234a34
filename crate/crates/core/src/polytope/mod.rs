//! Convex polytopes in dual V/H representation, with the face lattice,
//! polarity, clipping and exact volume.

mod clip;
pub mod generators;
mod hull;
mod lattice;
mod polar;
pub mod polygon;
mod volume;

use std::sync::OnceLock;

use nalgebra::DVector;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exact;

pub use clip::{clip_halfspace, Side};
pub use lattice::{Face, FaceId, FaceLattice, Flag, FlagVector, IdentityCheck};
pub use polar::{conjugate_face, conjugate_flag, polar_body};
pub use volume::{simplex_kvolume, simplex_volume};

/// A point of ℝⁿ.
pub type Point = DVector<f64>;

pub fn point(c: &[f64]) -> Point {
    DVector::from_column_slice(c)
}

/// `{x : x·normal ≤ offset}` is the minus side, `{x : x·normal ≥ offset}` the plus side.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal` to unit length and scales the offset with it.
    pub fn new(normal: Point, offset: f64) -> Self {
        let len = normal.norm();
        Halfspace {
            normal: normal / len,
            offset: offset / len,
        }
    }

    /// Signed value `x·normal − offset`.
    pub fn eval(&self, x: &Point) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: -&self.normal,
            offset: -self.offset,
        }
    }
}

/// Full-dimensional convex polytope. Vertices are sorted lexicographically,
/// facets by their sorted vertex sets.
#[derive(Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
    facet_vertices: Vec<BitSet>,
    vertex_facets: Vec<BitSet>,
    exact: bool,
    lattice: OnceLock<FaceLattice>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            dim: self.dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            facet_vertices: self.facet_vertices.clone(),
            vertex_facets: self.vertex_facets.clone(),
            exact: self.exact,
            lattice: OnceLock::new(),
        }
    }
}

impl Polytope {
    /// Assemble from floating-point data whose incidence is already known.
    pub(crate) fn from_parts(
        dim: usize,
        vertices: Vec<Point>,
        facets: Vec<Halfspace>,
        facet_vertices: Vec<Vec<usize>>,
    ) -> Polytope {
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(&vertices[a], &vertices[b]));
        let mut rank = vec![0; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let vertices: Vec<Point> = order.iter().map(|&i| vertices[i].clone()).collect();
        let mut fs: Vec<(BitSet, Halfspace)> = facets
            .into_iter()
            .zip(facet_vertices)
            .map(|(h, vs)| {
                (
                    BitSet::from_indices(vertices.len(), vs.into_iter().map(|v| rank[v])),
                    h,
                )
            })
            .collect();
        fs.sort_by(|a, b| a.0.cmp(&b.0));
        let (facet_vertices, facets): (Vec<BitSet>, Vec<Halfspace>) = fs.into_iter().unzip();
        Self::assemble(dim, vertices, facets, facet_vertices, false)
    }

    fn assemble(
        dim: usize,
        vertices: Vec<Point>,
        facets: Vec<Halfspace>,
        facet_vertices: Vec<BitSet>,
        exact: bool,
    ) -> Polytope {
        let mut vertex_facets = vec![BitSet::new(facets.len()); vertices.len()];
        for (f, vs) in facet_vertices.iter().enumerate() {
            for v in vs.iter() {
                vertex_facets[v].insert(f);
            }
        }
        Polytope {
            dim,
            vertices,
            facets,
            facet_vertices,
            vertex_facets,
            exact,
            lattice: OnceLock::new(),
        }
    }

    fn from_exact(dim: usize, hull: hull::ExactHull) -> Polytope {
        let vertices: Vec<Point> = hull
            .vertices
            .iter()
            .map(|p| DVector::from_iterator(dim, p.iter().map(exact::to_f64)))
            .collect();
        let facets: Vec<Halfspace> = hull
            .facets
            .iter()
            .map(|r| {
                let f = exact::scaled_f64(r);
                Halfspace::new(point(&f[..dim]), f[dim])
            })
            .collect();
        let nv = vertices.len();
        let facet_vertices = hull
            .facet_vertices
            .into_iter()
            .map(|vs| BitSet::from_indices(nv, vs))
            .collect();
        Self::assemble(dim, vertices, facets, facet_vertices, true)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Vertices lying on facet `f`.
    pub fn facet_vertices(&self, f: usize) -> &BitSet {
        &self.facet_vertices[f]
    }

    /// Facets through vertex `v`.
    pub fn vertex_facets(&self, v: usize) -> &BitSet {
        &self.vertex_facets[v]
    }

    /// Row per vertex, column per facet.
    pub fn incidence_matrix(&self) -> Vec<Vec<bool>> {
        self.vertex_facets
            .iter()
            .map(|s| (0..self.facets.len()).map(|f| s.contains(f)).collect())
            .collect()
    }

    /// Whether the combinatorics were certified in exact arithmetic.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| {
            FaceLattice::build(self.dim, self.vertices.len(), &self.facet_vertices)
                .expect("incidence of a valid polytope yields a graded lattice")
        })
    }

    pub fn vertex_centroid(&self) -> Point {
        let mut c = Point::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// Largest violation of a facet inequality by a vertex, and of an
    /// incidence equality by a vertex recorded on the facet.
    pub fn consistency_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (f, h) in self.facets.iter().enumerate() {
            for (i, v) in self.vertices.iter().enumerate() {
                let s = h.eval(v);
                let viol = if self.facet_vertices[f].contains(i) {
                    s.abs()
                } else {
                    s.max(0.0)
                };
                worst = worst.max(viol);
            }
        }
        worst
    }

    /// Checks the structural invariants: incidence counts and consistency.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.dim;
        if self.vertices.len() < n + 1 || self.facets.len() < n + 1 {
            return Err(Error::DegenerateInput("too few vertices or facets".into()));
        }
        if self.vertex_facets.iter().any(|s| s.len() < n) {
            return Err(Error::DegenerateInput(
                "a vertex lies on fewer than n facets".into(),
            ));
        }
        if self.facet_vertices.iter().any(|s| s.len() < n) {
            return Err(Error::DegenerateInput(
                "a facet holds fewer than n vertices".into(),
            ));
        }
        let v = self.consistency_violation();
        if v > tol {
            return Err(Error::DegenerateInput(format!("V/H mismatch {v:e}")));
        }
        Ok(())
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.facets.iter().all(|h| h.eval(x) <= tol)
    }

    /// Signed distance from `x` to the boundary (positive inside).
    pub fn depth(&self, x: &Point) -> f64 {
        self.facets
            .iter()
            .map(|h| -h.eval(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Translate by `t`; combinatorics are unchanged.
    pub fn translated(&self, t: &Point) -> Polytope {
        let vertices = self.vertices.iter().map(|v| v + t).collect();
        let facets = self
            .facets
            .iter()
            .map(|h| Halfspace {
                normal: h.normal.clone(),
                offset: h.offset + h.normal.dot(t),
            })
            .collect();
        Self::assemble(
            self.dim,
            vertices,
            facets,
            self.facet_vertices.clone(),
            self.exact,
        )
    }

    /// Support interval `[min x·u, max x·u]` over the vertices.
    pub fn support_range(&self, u: &Point) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                let s = v.dot(u);
                (lo.min(s), hi.max(s))
            })
    }

    pub fn volume(&self) -> f64 {
        volume::volume_exact(self)
    }

    /// Centroid (center of mass) of a face given by its vertex set.
    pub fn face_centroid(&self, face: &[usize]) -> Point {
        volume::face_centroid(self, face)
    }

    /// Simplices (as vertex-index lists) triangulating the face, by pulling
    /// its smallest vertex.
    pub fn face_triangulation(&self, face: FaceId) -> Vec<Vec<usize>> {
        volume::pulling_triangulation(self, face)
    }

    /// Simplices of a fan from `apex` over the boundary triangulation.
    pub fn fan_simplices(&self, apex: &Point) -> Vec<Vec<Point>> {
        volume::fan_simplices(self, apex)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|&x| serde_json::json!(x)).collect())
                .collect(),
        }
    }
}

/// Hull of floating-point points; each coordinate is taken as the exact
/// binary value of the double.
pub fn convex_hull(points: &[Point]) -> Result<Polytope> {
    let exact_pts = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|&x| exact::from_f64(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    convex_hull_exact(exact_pts)
}

/// Hull of exact rational points.
pub fn convex_hull_exact(points: Vec<Vec<BigRational>>) -> Result<Polytope> {
    let dim = points.first().map(|p| p.len()).unwrap_or(0);
    let h = hull::exact_hull(points)?;
    Ok(Polytope::from_exact(dim, h))
}

/// Interchange format: `{"dim": n, "vertices": [[x, …], …]}`. Coordinates may
/// be JSON numbers or strings holding integers, decimals or `p/q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<serde_json::Value>>,
}

impl PolytopeJson {
    pub fn to_polytope(&self) -> Result<Polytope> {
        let pts = self
            .vertices
            .iter()
            .map(|row| {
                if row.len() != self.dim {
                    return Err(Error::Parse(format!(
                        "vertex of length {} in dimension {}",
                        row.len(),
                        self.dim
                    )));
                }
                row.iter().map(json_rational).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        convex_hull_exact(pts)
    }
}

fn json_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => exact::parse_rational(&n.to_string()),
        serde_json::Value::String(s) => exact::parse_rational(s),
        other => Err(Error::Parse(format!("not a coordinate: {other}"))),
    }
}

pub(crate) fn lex_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        point(c)
    }

    #[test]
    fn hull_of_standard_triangle() {
        let t = convex_hull(&[p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])]).unwrap();
        assert_eq!((t.num_vertices(), t.num_facets()), (3, 3));
        assert_eq!(t.consistency_violation(), 0.0);
        t.validate(0.0).unwrap();
    }

    #[test]
    fn cube_with_center_drops_center() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(p(&[
                (i & 1) as f64,
                (i >> 1 & 1) as f64,
                (i >> 2 & 1) as f64,
            ]));
        }
        pts.push(p(&[0.5, 0.5, 0.5]));
        let c = convex_hull(&pts).unwrap();
        assert_eq!((c.num_vertices(), c.num_facets()), (8, 6));
        assert_eq!(c.vertices()[0], p(&[0.0, 0.0, 0.0]));
        assert_eq!(c.vertices()[7], p(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn flat_input_is_rejected() {
        let e = convex_hull(&[
            p(&[0.0, 0.0, 0.0]),
            p(&[1.0, 0.0, 0.0]),
            p(&[0.0, 1.0, 0.0]),
            p(&[1.0, 1.0, 0.0]),
        ]);
        assert!(matches!(e, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn json_accepts_decimal_strings() {
        let j: PolytopeJson =
            serde_json::from_str(r#"{"dim":2,"vertices":[["0","0"],["1/3","0"],[0,"0.1"]]}"#)
                .unwrap();
        let t = j.to_polytope().unwrap();
        assert_eq!(t.num_vertices(), 3);
        assert!((t.volume() - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn halfspace_is_normalized() {
        let h = Halfspace::new(p(&[3.0, 4.0]), 10.0);
        assert!((h.normal.norm() - 1.0).abs() < 1e-15);
        assert!((h.offset - 2.0).abs() < 1e-15);
    }
}
