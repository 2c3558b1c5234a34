//! Flag simplices: n-simplices with one vertex in the relative interior of
//! each face of a complete flag and the last vertex in the interior.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::polytope::{
    clip_halfspace, conjugate_flag, convex_hull, polar_body, simplex_volume, FaceId, Flag,
    Halfspace, Point, Polytope, Side,
};

/// Facet distances within this bound (relative to the polytope's scale)
/// count as incidences; anything farther inside is strictly interior.
const FACE_TOL: f64 = 1e-9;
/// Margin for strict positivity of barycentric coordinates.
const BARY_MARGIN: f64 = 1e-12;

fn scale(p: &Polytope) -> f64 {
    p.vertices().iter().map(|v| v.amax()).fold(1.0, f64::max)
}

/// The unique face whose relative interior contains `x`, or `None` when `x`
/// lies outside P.
pub fn locate_face(p: &Polytope, x: &Point) -> Option<FaceId> {
    let tol = FACE_TOL * scale(p);
    let mut set = crate::BitSet::full(p.num_vertices());
    for (f, h) in p.facets().iter().enumerate() {
        let s = h.eval(x);
        if s > tol {
            return None;
        }
        if s >= -tol {
            set.intersect_with(p.facet_vertices(f));
        }
    }
    let l = p.face_lattice();
    l.find(&set).filter(|&id| l.face(id).dim >= 0)
}

pub fn in_relative_interior(p: &Polytope, face: FaceId, x: &Point) -> bool {
    locate_face(p, x) == Some(face)
}

fn centroid(pts: &[Point]) -> Point {
    let mut c = Point::zeros(pts[0].len());
    for q in pts {
        c += q;
    }
    c / pts.len() as f64
}

/// Affine coordinates of `x` with respect to the points `s` (which may span
/// a lower-dimensional flat), or `None` if `x` is off that flat.
pub fn affine_coordinates(s: &[Point], x: &Point) -> Option<Vec<f64>> {
    let n = x.len();
    let k = s.len() - 1;
    if k == 0 {
        return ((x - &s[0]).amax() <= FACE_TOL * (1.0 + s[0].amax())).then(|| vec![1.0]);
    }
    let e = DMatrix::from_fn(n, k, |r, c| s[c + 1][r] - s[0][r]);
    let b: DVector<f64> = x - &s[0];
    let mu = e.clone().svd(true, true).solve(&b, 1e-14).ok()?;
    let scale = s.iter().map(|q| q.amax()).fold(1.0, f64::max);
    if (&e * &mu - &b).amax() > FACE_TOL * scale {
        return None;
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0 - mu.sum());
    out.extend(mu.iter());
    Some(out)
}

fn in_open_simplex(s: &[Point], x: &Point) -> bool {
    affine_coordinates(s, x).is_some_and(|l| l.iter().all(|&c| c > BARY_MARGIN))
}

/// One point in the relative interior of every nonempty face, P included.
/// The empty face gets no point.
#[derive(Clone, Debug)]
pub struct PointMap {
    points: BTreeMap<FaceId, Point>,
}

impl PointMap {
    /// Validates relative-interior membership for every nonempty face.
    pub fn new(p: &Polytope, points: BTreeMap<FaceId, Point>) -> Result<PointMap> {
        let l = p.face_lattice();
        for (id, f) in l.faces().iter().enumerate() {
            if f.dim < 0 {
                continue;
            }
            let Some(x) = points.get(&id) else {
                return Err(Error::bad(
                    "flag-simplex",
                    format!("no point assigned to face {:?}", f.vertices),
                ));
            };
            if !in_relative_interior(p, id, x) {
                return Err(Error::PointNotInRelativeInterior {
                    face: f.vertices.clone(),
                    point: x.iter().copied().collect(),
                });
            }
        }
        Ok(PointMap { points })
    }

    /// Face centroids.
    pub fn barycentric(p: &Polytope) -> PointMap {
        let l = p.face_lattice();
        let points = l
            .faces()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.dim >= 0)
            .map(|(id, f)| (id, p.face_centroid(&f.vertices)))
            .collect();
        PointMap { points }
    }

    pub fn get(&self, face: FaceId) -> &Point {
        &self.points[&face]
    }

    pub fn points(&self) -> &BTreeMap<FaceId, Point> {
        &self.points
    }
}

/// Vertices in canonical order: `vertices[i]` lies in the relative interior
/// of `flag.chain[i]` for i < n, and `vertices[n]` in the interior of P.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagSimplex {
    pub vertices: Vec<Point>,
    pub flag: Flag,
}

impl FlagSimplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn volume(&self) -> f64 {
        simplex_volume(&self.vertices.iter().collect::<Vec<_>>())
    }

    /// Volume of the simplex spanned by the stored double coordinates, exactly.
    pub fn volume_exact(&self) -> BigRational {
        let pts: Vec<&[f64]> = self.vertices.iter().map(|v| v.as_slice()).collect();
        exact::simplex_volume(&pts).expect("flag simplex coordinates are finite")
    }

    pub fn barycentric(&self, x: &Point) -> Vec<f64> {
        affine_coordinates(&self.vertices, x).expect("a full-dimensional simplex spans the space")
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.barycentric(x).iter().all(|&l| l >= -tol)
    }

    pub fn contains_strictly(&self, x: &Point) -> bool {
        self.barycentric(x).iter().all(|&l| l > BARY_MARGIN)
    }

    /// The n+1 facet halfspaces; the simplex is the intersection of their
    /// minus sides. Facet i is opposite vertex i.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let n = self.dim();
        let v0 = &self.vertices[0];
        let e = DMatrix::from_fn(n, n, |r, c| self.vertices[c + 1][r] - v0[r]);
        let inv = e.try_inverse().expect("flag simplex is nondegenerate");
        // λ_j = row_j(inv)·(x − v₀) for j ≥ 1 and λ₀ = 1 − Σ λ_j
        let mut out = Vec::with_capacity(n + 1);
        let g0: Point = inv.row_sum().transpose();
        out.push(Halfspace::new(g0.clone(), 1.0 + g0.dot(v0)));
        for j in 0..n {
            let g: Point = inv.row(j).transpose();
            out.push(Halfspace::new(-&g, -g.dot(v0)));
        }
        out
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        convex_hull(&self.vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NotFlagSimplex {
    #[error("expected {expected} points, got {got}")]
    WrongVertexCount { expected: usize, got: usize },
    #[error("points are affinely dependent")]
    AffinelyDependent,
    #[error("point {0} lies outside the polytope")]
    VertexOnNoFace(usize),
    #[error("two points lie in relative interiors of faces of dimension {0}")]
    DuplicateFaceDimension(i32),
    #[error("the face of dimension {0} is not contained in the next one")]
    ChainNotNested(usize),
}

/// Decide whether the points span a flag simplex of P; on success the
/// vertices come back in canonical order together with their flag.
pub fn classify_flag_simplex(
    p: &Polytope,
    s: &[Point],
) -> std::result::Result<FlagSimplex, NotFlagSimplex> {
    let n = p.dim();
    if s.len() != n + 1 {
        return Err(NotFlagSimplex::WrongVertexCount {
            expected: n + 1,
            got: s.len(),
        });
    }
    if simplex_volume(&s.iter().collect::<Vec<_>>()) <= 1e-14 * scale(p).powi(n as i32) {
        return Err(NotFlagSimplex::AffinelyDependent);
    }
    let l = p.face_lattice();
    let mut slots: Vec<Option<(FaceId, usize)>> = vec![None; n + 1];
    for (i, x) in s.iter().enumerate() {
        let f = locate_face(p, x).ok_or(NotFlagSimplex::VertexOnNoFace(i))?;
        let d = l.face(f).dim;
        if slots[d as usize].is_some() {
            return Err(NotFlagSimplex::DuplicateFaceDimension(d));
        }
        slots[d as usize] = Some((f, i));
    }
    let slots: Vec<(FaceId, usize)> = slots
        .into_iter()
        .map(|o| o.expect("n+1 distinct dimensions"))
        .collect();
    for d in 0..n {
        if !l
            .face(slots[d].0)
            .set()
            .is_subset(l.face(slots[d + 1].0).set())
        {
            return Err(NotFlagSimplex::ChainNotNested(d));
        }
    }
    Ok(FlagSimplex {
        vertices: slots.iter().map(|&(_, i)| s[i].clone()).collect(),
        flag: Flag {
            chain: slots[..n].iter().map(|&(f, _)| f).collect(),
        },
    })
}

/// One simplex per flag, spanned by the map's points on the flag's faces
/// and on P. Flags come in lattice order.
pub fn point_map_subdivision(p: &Polytope, m: &PointMap) -> Vec<FlagSimplex> {
    let l = p.face_lattice();
    let top = l.top();
    l.enumerate_flags()
        .into_iter()
        .map(|flag| {
            let mut vertices: Vec<Point> = flag.chain.iter().map(|&f| m.get(f).clone()).collect();
            vertices.push(m.get(top).clone());
            FlagSimplex { vertices, flag }
        })
        .collect()
}

pub fn barycenter_subdivision(p: &Polytope) -> Vec<FlagSimplex> {
    point_map_subdivision(p, &PointMap::barycentric(p))
}

/// A flag simplex of the common flag inside both inputs. Vertex i is pulled
/// from the midpoint of the centroids of the two candidate i-simplices
/// toward the centroid of the vertices already fixed, halving until it is
/// interior to both candidates.
pub fn common_refinement(s1: &FlagSimplex, s2: &FlagSimplex) -> Result<FlagSimplex> {
    if s1.flag != s2.flag || s1.vertices.len() != s2.vertices.len() {
        return Err(Error::FlagMismatch);
    }
    let n = s1.dim();
    let mut v = vec![s1.vertices[0].clone()];
    for i in 1..=n {
        let mut c1 = v.clone();
        c1.push(s1.vertices[i].clone());
        let mut c2 = v.clone();
        c2.push(s2.vertices[i].clone());
        let base = centroid(&v);
        let m = (centroid(&c1) + centroid(&c2)) / 2.0;
        let mut eps = 1.0;
        let q = loop {
            let q = &base + (&m - &base) * eps;
            if in_open_simplex(&c1, &q) && in_open_simplex(&c2, &q) {
                break q;
            }
            eps /= 2.0;
            if eps < 1e-30 {
                return Err(Error::bad(
                    "flag-simplex",
                    "candidate simplices do not overlap",
                ));
            }
        };
        v.push(q);
    }
    Ok(FlagSimplex {
        vertices: v,
        flag: s1.flag.clone(),
    })
}

#[derive(Clone, Debug)]
pub struct Enclosing {
    /// S ⊆ inner ⊆ P, and S is a flag simplex of `inner`.
    pub inner: FlagSimplex,
    /// P ⊆ outer, an n-simplex of which S is also a flag simplex.
    pub outer: Polytope,
}

/// Simplices squeezed around S inside P and around P.
pub fn enclosing_flag_simplex(p: &Polytope, s: &FlagSimplex) -> Result<Enclosing> {
    let n = p.dim();
    let l = p.face_lattice();
    let face_set = |k: usize| {
        if k < n {
            l.face(s.flag.chain[k]).set().clone()
        } else {
            l.face(l.top()).set().clone()
        }
    };

    // inner: w_k continues the ray from the centroid of w_0..w_{k−1} through
    // v_k by half of v_k's distance to the relative boundary of F_k
    let mut w = vec![s.vertices[0].clone()];
    for k in 1..=n {
        let fk = face_set(k);
        let vk = &s.vertices[k];
        let eps = 0.5
            * (0..p.num_facets())
                .filter(|&f| !fk.is_subset(p.facet_vertices(f)))
                .map(|f| -p.facets()[f].eval(vk))
                .fold(f64::INFINITY, f64::min);
        let xp = centroid(&w);
        let dir = vk - &xp;
        w.push(vk + dir.clone() * (eps / dir.norm()));
    }
    let inner = FlagSimplex {
        vertices: w,
        flag: s.flag.clone(),
    };

    // outer: polar of a flag simplex of P° for the conjugate flag whose last
    // vertex is placed opposite the others so that it holds the origin
    let c = centroid(&s.vertices);
    let q = p.translated(&-&c);
    let polar = polar_body(&q)?;
    let conj = conjugate_flag(&q, &polar, &s.flag);
    let lp = polar.face_lattice();
    let mut u: Vec<Point> = conj
        .chain
        .iter()
        .map(|&f| polar.face_centroid(&lp.face(f).vertices))
        .collect();
    let qc = centroid(&u);
    let reach = q
        .vertices()
        .iter()
        .map(|x| -x.dot(&qc))
        .fold(f64::NEG_INFINITY, f64::max);
    u.push(-qc * (0.5 / reach));
    let mut corners = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let rows: Vec<&Point> = u
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, r)| r)
            .collect();
        let a = DMatrix::from_fn(n, n, |r, col| rows[r][col]);
        let x = a
            .lu()
            .solve(&DVector::from_element(n, 1.0))
            .ok_or_else(|| Error::DegenerateInput("enclosing simplex is degenerate".into()))?;
        corners.push(x + &c);
    }
    let outer = convex_hull(&corners)?;
    Ok(Enclosing { inner, outer })
}

/// Refine each simplex against the barycentric simplex of its flag; the
/// barycentric family is interior-disjoint, so the result is too. With
/// `vertex` given, every flag must start at that vertex.
pub fn disjoint_family(
    p: &Polytope,
    family: &BTreeMap<Flag, FlagSimplex>,
    vertex: Option<usize>,
) -> Result<BTreeMap<Flag, FlagSimplex>> {
    let l = p.face_lattice();
    let bary: BTreeMap<Flag, FlagSimplex> = barycenter_subdivision(p)
        .into_iter()
        .map(|s| (s.flag.clone(), s))
        .collect();
    let mut out = BTreeMap::new();
    for (flag, s) in family {
        if &s.flag != flag || !l.is_flag(flag) {
            return Err(Error::FlagMismatch);
        }
        if let Some(v) = vertex {
            if flag.chain[0] != l.vertex_face(v) {
                return Err(Error::FlagMismatch);
            }
        }
        out.insert(flag.clone(), common_refinement(s, &bary[flag])?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessReport {
    pub pairs: usize,
    /// "exact" (pairwise intersection volume) or "monte-carlo".
    pub method: &'static str,
    pub max_overlap_volume: f64,
    pub mc_hits: u64,
    pub disjoint: bool,
}

/// Volume of the intersection of two n-simplices.
pub fn intersection_volume(a: &FlagSimplex, b: &FlagSimplex) -> Result<f64> {
    let mut cur = a.to_polytope()?;
    for h in b.halfspaces() {
        match clip_halfspace(&cur, &h, Side::Minus) {
            Some(next) => cur = next,
            None => return Ok(0.0),
        }
    }
    Ok(cur.volume())
}

/// Uniform sample from a simplex via normalized exponentials.
fn sample_simplex(s: &[Point], rng: &mut ChaCha8Rng) -> Point {
    let e: Vec<f64> = (0..s.len()).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = e.iter().sum();
    let mut x = Point::zeros(s[0].len());
    for (w, q) in e.iter().zip(s) {
        x += q * (w / total);
    }
    x
}

/// Pairwise interior-disjointness: exact intersection volumes for n ≤ 3,
/// otherwise `samples` points from each simplex must avoid the interior of
/// every other.
pub fn certify_disjoint(
    family: &[FlagSimplex],
    samples: usize,
    seed: u64,
) -> Result<DisjointnessReport> {
    let n = family.first().map_or(0, |s| s.dim());
    let pairs = family.len() * family.len().saturating_sub(1) / 2;
    if n <= 3 {
        let mut worst: f64 = 0.0;
        let mut total_scale: f64 = 0.0;
        for (i, a) in family.iter().enumerate() {
            total_scale = total_scale.max(a.volume());
            for b in &family[i + 1..] {
                worst = worst.max(intersection_volume(a, b)?);
            }
        }
        return Ok(DisjointnessReport {
            pairs,
            method: "exact",
            max_overlap_volume: worst,
            mc_hits: 0,
            disjoint: worst <= 1e-12 * total_scale,
        });
    }
    let mut hits = 0u64;
    for (i, a) in family.iter().enumerate() {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        for _ in 0..samples {
            let x = sample_simplex(&a.vertices, &mut rng);
            hits += family
                .iter()
                .enumerate()
                .filter(|&(j, b)| j != i && b.contains_strictly(&x))
                .count() as u64;
        }
    }
    Ok(DisjointnessReport {
        pairs,
        method: "monte-carlo",
        max_overlap_volume: 0.0,
        mc_hits: hits,
        disjoint: hits == 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualVolumeReport {
    pub simplices: usize,
    pub mean_volume: f64,
    pub max_relative_deviation: f64,
    /// Exact sum of the simplex volumes, as `p/q`.
    pub volume_sum: String,
    pub equal: bool,
}

/// Barycentric simplices of a Hanner polytope all have the same volume.
pub fn hanner_equal_volume_check(p: &Polytope) -> EqualVolumeReport {
    let simplices = barycenter_subdivision(p);
    let vols: Vec<BigRational> = simplices.iter().map(|s| s.volume_exact()).collect();
    let sum: BigRational = vols.iter().sum();
    let mean = &sum / BigRational::from_integer(vols.len().into());
    let max_dev = vols
        .iter()
        .map(|v| exact::to_f64(&((v - &mean) / &mean)).abs())
        .fold(0.0, f64::max);
    EqualVolumeReport {
        simplices: vols.len(),
        mean_volume: exact::to_f64(&mean),
        max_relative_deviation: max_dev,
        volume_sum: sum.to_string(),
        equal: max_dev <= 1e-12,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubdivisionEntry {
    pub flag: Vec<Vec<usize>>,
    pub vertices: Vec<Vec<f64>>,
    pub volume: f64,
}

pub fn subdivision_entries(p: &Polytope, simplices: &[FlagSimplex]) -> Vec<SubdivisionEntry> {
    let l = p.face_lattice();
    simplices
        .iter()
        .map(|s| SubdivisionEntry {
            flag: l.flag_keys(&s.flag),
            vertices: s
                .vertices
                .iter()
                .map(|v| v.iter().copied().collect())
                .collect(),
            volume: s.volume(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{generators, point};

    fn pentagon() -> Polytope {
        generators::regular_polygon(5, 1.0).unwrap()
    }

    #[test]
    fn square_subdivision() {
        let sq = generators::cube(2).unwrap();
        let subs = barycenter_subdivision(&sq);
        assert_eq!(subs.len(), 8);
        for s in &subs {
            assert_eq!(s.volume_exact(), BigRational::new(1.into(), 8.into()));
            assert_eq!(classify_flag_simplex(&sq, &s.vertices).unwrap(), *s);
        }
        assert_eq!(barycenter_subdivision(&pentagon()).len(), 10);
    }

    #[test]
    fn point_map_validation() {
        let sq = generators::cube(2).unwrap();
        let l = sq.face_lattice();
        let mut pts = PointMap::barycentric(&sq).points().clone();
        pts.insert(l.top(), point(&[0.3, 0.6]));
        let m = PointMap::new(&sq, pts.clone()).unwrap();
        let subs = point_map_subdivision(&sq, &m);
        let total: f64 = subs.iter().map(|s| s.volume()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        let edge = l.faces_of_dim(1)[0];
        let endpoint = sq.vertices()[l.face(edge).vertices[0]].clone();
        pts.insert(edge, endpoint);
        assert!(matches!(
            PointMap::new(&sq, pts),
            Err(Error::PointNotInRelativeInterior { .. })
        ));
    }

    #[test]
    fn classification_of_planar_examples() {
        let p = pentagon();
        let v = p.vertices();
        let mid = (&v[0] + &v[1]) / 2.0;
        let c = p.vertex_centroid();
        // shuffled input comes back in canonical order
        let s = classify_flag_simplex(&p, &[c.clone(), v[0].clone(), mid.clone()]).unwrap();
        assert_eq!(s.vertices, vec![v[0].clone(), mid, c.clone()]);
        assert_eq!(
            classify_flag_simplex(&p, &[v[0].clone(), v[1].clone(), c.clone()]),
            Err(NotFlagSimplex::DuplicateFaceDimension(0))
        );
        let l = p.face_lattice();
        let edge = l
            .faces_of_dim(1)
            .iter()
            .map(|&e| &l.face(e).vertices)
            .find(|e| !e.contains(&0))
            .unwrap();
        let far = &v[edge[0]] * 0.3 + &v[edge[1]] * 0.7;
        assert_eq!(
            classify_flag_simplex(&p, &[v[0].clone(), far, c.clone()]),
            Err(NotFlagSimplex::ChainNotNested(0))
        );
        assert_eq!(
            classify_flag_simplex(&p, &[v[0].clone(), point(&[5.0, 0.0]), c]),
            Err(NotFlagSimplex::VertexOnNoFace(1))
        );
    }

    #[test]
    fn halfspaces_cut_out_the_simplex() {
        let s = &barycenter_subdivision(&generators::cube(3).unwrap())[5];
        let hs = s.halfspaces();
        let c = centroid(&s.vertices);
        assert!(hs.iter().all(|h| h.eval(&c) < 0.0));
        for (i, h) in hs.iter().enumerate() {
            for (j, v) in s.vertices.iter().enumerate() {
                let e = h.eval(v);
                if i == j {
                    assert!(e < -1e-6);
                } else {
                    assert!(e.abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn refinement_lies_in_both() {
        let sq = generators::cube(2).unwrap();
        let b = &barycenter_subdivision(&sq)[0];
        let other = FlagSimplex {
            vertices: vec![
                b.vertices[0].clone(),
                &b.vertices[1] * 0.5 + &b.vertices[0] * 0.5,
                point(&[0.2, 0.45]),
            ],
            flag: b.flag.clone(),
        };
        assert!(classify_flag_simplex(&sq, &other.vertices).is_ok());
        let r = common_refinement(b, &other).unwrap();
        assert_eq!(
            classify_flag_simplex(&sq, &r.vertices).unwrap().flag,
            b.flag
        );
        for v in &r.vertices {
            assert!(b.contains(v, 1e-12) && other.contains(v, 1e-12));
        }
        let r = common_refinement(b, b).unwrap();
        assert!(r.vertices.iter().all(|v| b.contains(v, 1e-12)));
        let b2 = &barycenter_subdivision(&sq)[1];
        assert_eq!(common_refinement(b, b2), Err(Error::FlagMismatch));
    }

    #[test]
    fn enclosing_chain() {
        for p in [
            generators::cube(2).unwrap(),
            pentagon(),
            generators::cube(3).unwrap(),
        ] {
            for s in barycenter_subdivision(&p).iter().step_by(3) {
                let e = enclosing_flag_simplex(&p, s).unwrap();
                for v in &s.vertices {
                    assert!(e.inner.contains(v, 1e-12));
                }
                for w in &e.inner.vertices {
                    assert!(p.contains(w, 1e-12));
                }
                for x in p.vertices() {
                    assert!(e.outer.contains(x, 1e-9));
                }
                assert_eq!(e.outer.num_vertices(), p.dim() + 1);
                let t = e.inner.to_polytope().unwrap();
                assert!(classify_flag_simplex(&t, &s.vertices).is_ok());
                assert!(classify_flag_simplex(&e.outer, &s.vertices).is_ok());
            }
        }
    }

    #[test]
    fn disjoint_family_of_square() {
        let sq = generators::cube(2).unwrap();
        let subs = barycenter_subdivision(&sq);
        // enlarge every simplex toward the far corner so that neighbors overlap
        let fat: BTreeMap<Flag, FlagSimplex> = subs
            .iter()
            .map(|s| {
                let e = enclosing_flag_simplex(&sq, s).unwrap();
                (s.flag.clone(), e.inner)
            })
            .collect();
        let fam: Vec<FlagSimplex> = fat.values().cloned().collect();
        assert!(!certify_disjoint(&fam, 0, 0).unwrap().disjoint);
        let thin = disjoint_family(&sq, &fat, None).unwrap();
        assert_eq!(thin.len(), 8);
        let fam: Vec<FlagSimplex> = thin.values().cloned().collect();
        assert!(certify_disjoint(&fam, 0, 0).unwrap().disjoint);
        let at0 = disjoint_family(&sq, &fat, Some(0));
        assert_eq!(at0.err(), Some(Error::FlagMismatch));
    }

    #[test]
    fn hanner_volumes() {
        let r = hanner_equal_volume_check(&generators::cube(3).unwrap());
        assert_eq!((r.simplices, r.volume_sum.as_str()), (48, "1"));
        assert_eq!(r.max_relative_deviation, 0.0);
        assert!(hanner_equal_volume_check(&generators::cross_polytope(3).unwrap()).equal);
        assert!(
            hanner_equal_volume_check(&generators::hanner("product(sum(seg,seg),seg)").unwrap())
                .equal
        );
    }

    #[test]
    fn four_dimensional_disjointness_by_sampling() {
        let c = generators::cube(4).unwrap();
        let subs: Vec<FlagSimplex> = barycenter_subdivision(&c).into_iter().take(12).collect();
        let r = certify_disjoint(&subs, 200, 1).unwrap();
        assert_eq!(r.method, "monte-carlo");
        assert!(r.disjoint);
    }
}
