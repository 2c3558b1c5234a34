use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exact;

use super::{FaceId, Point, Polytope};

/// Triangulate a face by pulling its smallest vertex, recursively over the
/// subfaces that avoid it.
pub(crate) fn pulling_triangulation(p: &Polytope, face: FaceId) -> Vec<Vec<usize>> {
    let l = p.face_lattice();
    let f = l.face(face);
    if f.dim <= 0 {
        return vec![f.vertices.clone()];
    }
    let apex = f.vertices[0];
    let mut out = Vec::new();
    for &g in l.down_covers(face) {
        if l.face(g).set().contains(apex) {
            continue;
        }
        for s in pulling_triangulation(p, g) {
            let mut t = Vec::with_capacity(s.len() + 1);
            t.push(apex);
            t.extend(s);
            out.push(t);
        }
    }
    out
}

/// |det(v₁−v₀, …, vₙ−v₀)| / n! for n+1 points in ℝⁿ.
pub fn simplex_volume(pts: &[&Point]) -> f64 {
    let n = pts.len() - 1;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    signed_det(pts).abs() / fact
}

pub(crate) fn signed_det(pts: &[&Point]) -> f64 {
    let n = pts.len() - 1;
    let o = pts[0];
    match n {
        1 => pts[1][0] - o[0],
        2 => {
            let (a0, a1) = (pts[1][0] - o[0], pts[1][1] - o[1]);
            let (b0, b1) = (pts[2][0] - o[0], pts[2][1] - o[1]);
            a0 * b1 - a1 * b0
        }
        _ => DMatrix::from_fn(n, n, |r, c| pts[c + 1][r] - o[r]).determinant(),
    }
}

/// k-dimensional volume of a k-simplex embedded in ℝⁿ (Gram determinant).
pub fn simplex_kvolume(pts: &[&Point]) -> f64 {
    let k = pts.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let n = pts[0].len();
    if k == n {
        return simplex_volume(pts);
    }
    let e = DMatrix::from_fn(n, k, |r, c| pts[c + 1][r] - pts[0][r]);
    let g = e.transpose() * e;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    g.determinant().max(0.0).sqrt() / fact
}

pub(crate) fn volume_exact(p: &Polytope) -> f64 {
    let c = p.vertex_centroid();
    fan_simplices(p, &c)
        .iter()
        .map(|s| simplex_volume(&s.iter().collect::<Vec<_>>()))
        .sum()
}

pub(crate) fn fan_simplices(p: &Polytope, apex: &Point) -> Vec<Vec<Point>> {
    let l = p.face_lattice();
    let mut out = Vec::new();
    for &f in l.faces_of_dim(p.dim() as i32 - 1) {
        for s in pulling_triangulation(p, f) {
            let mut simplex = Vec::with_capacity(s.len() + 1);
            simplex.push(apex.clone());
            simplex.extend(s.iter().map(|&i| p.vertices()[i].clone()));
            out.push(simplex);
        }
    }
    out
}

/// Mass centroid of a face. Each simplex of the pulling triangulation is
/// weighted by its volume projected to a fixed coordinate k-plane; the
/// projection scales all of them alike, so the weights are exact rationals.
pub(crate) fn face_centroid(p: &Polytope, face: &[usize]) -> Point {
    if face.len() == 1 {
        return p.vertices()[face[0]].clone();
    }
    let l = p.face_lattice();
    let id = l
        .find_vertices(face)
        .expect("centroid requested for a face");
    let simplices = pulling_triangulation(p, id);
    let n = p.dim();
    let k = l.face(id).dim as usize;
    let coords = projection_coordinates(p, &simplices[0], k);
    let q = |x: f64| exact::from_f64(x).expect("vertices are finite");
    let mut acc = vec![BigRational::zero(); n];
    let mut total = BigRational::zero();
    for s in &simplices {
        let o = &p.vertices()[s[0]];
        let m: Vec<Vec<BigRational>> = s[1..]
            .iter()
            .map(|&i| {
                coords
                    .iter()
                    .map(|&c| q(p.vertices()[i][c]) - q(o[c]))
                    .collect()
            })
            .collect();
        let w = exact::det(m).abs();
        for (j, a) in acc.iter_mut().enumerate() {
            let sum: BigRational = s.iter().map(|&i| q(p.vertices()[i][j])).sum();
            *a += &w * sum;
        }
        total += w;
    }
    total *= BigRational::from_integer((k as i64 + 1).into());
    Point::from_iterator(n, acc.iter().map(|a| exact::to_f64(&(a / &total))))
}

/// The k coordinates on which the given k-simplex has the largest projected volume.
fn projection_coordinates(p: &Polytope, s: &[usize], k: usize) -> Vec<usize> {
    let n = p.dim();
    let o = &p.vertices()[s[0]];
    let e = DMatrix::from_fn(n, k, |r, c| p.vertices()[s[c + 1]][r] - o[r]);
    let mut best = (0.0, (0..k).collect::<Vec<_>>());
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let d = DMatrix::from_fn(k, k, |r, c| e[(subset[r], c)])
            .determinant()
            .abs();
        if d > best.0 {
            best = (d, subset.clone());
        }
        // next k-subset of 0..n in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    best.1
}
