//! Direction families for the outer approximation: a uniform family plus
//! geometric clusters around facet normals, where the cut lines of small
//! caps turn fastest.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::polytope::{point, Point, Polytope};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionSpec {
    /// Size of the uniform family.
    pub uniform: usize,
    /// Cluster directions per decade of angular offset.
    pub per_decade: usize,
}

impl DirectionSpec {
    pub fn new(uniform: usize) -> Self {
        DirectionSpec {
            uniform,
            per_decade: (uniform / 8).max(4),
        }
    }

    pub fn doubled(&self) -> Self {
        DirectionSpec {
            uniform: 2 * self.uniform,
            per_decade: 2 * self.per_decade,
        }
    }
}

/// Angular offsets from `max` down to `min`, geometrically spaced.
fn offsets(max: f64, min: f64, per_decade: usize) -> Vec<f64> {
    let mut out = Vec::new();
    if !(max > 0.0) {
        return out;
    }
    let ratio = 10f64.powf(1.0 / per_decade as f64);
    let mut e = max;
    while e >= min {
        out.push(e);
        e /= ratio;
    }
    out
}

/// Directions for a polytope of total weight `total` at cap weight `delta`.
pub fn directions(p: &Polytope, spec: &DirectionSpec, delta: f64, total: f64) -> Vec<Point> {
    let n = p.dim();
    let eps_min = 0.02 * delta / total;
    match n {
        1 => vec![point(&[1.0]), point(&[-1.0])],
        2 => planar(p, spec, eps_min),
        _ => spatial(p, spec, eps_min),
    }
}

fn planar(p: &Polytope, spec: &DirectionSpec, eps_min: f64) -> Vec<Point> {
    let m = spec.uniform.max(3);
    let mut angles: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
    let mut normals: Vec<f64> = p
        .facets()
        .iter()
        .map(|h| h.normal[1].atan2(h.normal[0]))
        .collect();
    normals.sort_by(f64::total_cmp);
    let k = normals.len();
    for i in 0..k {
        let a = normals[i];
        let next = (normals[(i + 1) % k] - a).rem_euclid(2.0 * PI);
        let prev = (a - normals[(i + k - 1) % k]).rem_euclid(2.0 * PI);
        angles.push(a);
        for e in offsets(0.5 * next, eps_min, spec.per_decade) {
            angles.push(a + e);
        }
        for e in offsets(0.5 * prev, eps_min, spec.per_decade) {
            angles.push(a - e);
        }
    }
    let mut angles: Vec<f64> = angles.into_iter().map(|a| a.rem_euclid(2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    angles
        .into_iter()
        .map(|a| point(&[a.cos(), a.sin()]))
        .collect()
}

/// Orthonormal basis of the complement of the unit vector `u`.
pub(crate) fn complement(u: &Point) -> Vec<Point> {
    let n = u.len();
    let m = DMatrix::from_fn(n, n, |r, c| {
        if c == 0 {
            u[r]
        } else {
            f64::from(u8::from(r == c - 1))
        }
    });
    let q = m.qr().q();
    (1..n).map(|c| q.column(c).into_owned()).collect()
}

/// Fibonacci points on S² or Halton points pushed through the normal
/// quantile function in higher dimensions.
pub(crate) fn sphere_points(n: usize, count: usize) -> Vec<Point> {
    if n == 3 {
        let golden = PI * (3.0 - 5f64.sqrt());
        return (0..count)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / count as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                point(&[r * phi.cos(), r * phi.sin(), z])
            })
            .collect();
    }
    const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (1..=count as u64)
        .map(|i| {
            let g = Point::from_fn(n, |c, _| {
                normal.inverse_cdf(halton(i, PRIMES[c % PRIMES.len()]))
            });
            let len = g.norm();
            g / len
        })
        .collect()
}

fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn rotate(u: &Point, t: &Point, e: f64) -> Point {
    u * e.cos() + t * e.sin()
}

fn spatial(p: &Polytope, spec: &DirectionSpec, eps_min: f64) -> Vec<Point> {
    let n = p.dim();
    let mut out = sphere_points(n, spec.uniform.max(n + 1));
    let normals: Vec<&Point> = p.facets().iter().map(|h| &h.normal).collect();
    for (i, u) in normals.iter().enumerate() {
        let gap = normals
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| u.dot(w).clamp(-1.0, 1.0).acos())
            .fold(PI, f64::min);
        out.push((*u).clone());
        let basis = complement(u);
        let ring: Vec<Point> = if n == 3 {
            (0..6)
                .map(|k| {
                    let a = PI * k as f64 / 3.0;
                    &basis[0] * a.cos() + &basis[1] * a.sin()
                })
                .collect()
        } else {
            basis.iter().flat_map(|b| [b.clone(), -b]).collect()
        };
        for e in offsets(0.5 * gap, eps_min, spec.per_decade) {
            out.extend(ring.iter().map(|t| rotate(u, t, e)));
        }
    }
    // arcs between the normals of facets sharing a ridge
    let l = p.face_lattice();
    for &r in l.faces_of_dim(n as i32 - 2) {
        let up = l.up_covers(r);
        if up.len() != 2 {
            continue;
        }
        let fi = |f: usize| {
            let set = l.face(f).set();
            (0..p.num_facets()).find(|&k| p.facet_vertices(k) == set)
        };
        let (Some(a), Some(b)) = (fi(up[0]), fi(up[1])) else {
            continue;
        };
        let (ua, ub) = (normals[a], normals[b]);
        let ang = ua.dot(ub).clamp(-1.0, 1.0).acos();
        if ang < 1e-12 {
            continue;
        }
        for (s, t) in [(ua, ub), (ub, ua)] {
            let dir = (t - s * s.dot(t)).normalize();
            for e in offsets(0.5 * ang, eps_min, spec.per_decade) {
                out.push(rotate(s, &dir, e));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::generators;

    #[test]
    fn planar_family_contains_normals_and_clusters() {
        let sq = generators::cube(2).unwrap();
        let d = directions(&sq, &DirectionSpec::new(16), 1e-4, 1.0);
        for e in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
            assert!(d
                .iter()
                .any(|u| (u[0] - e[0]).abs() + (u[1] - e[1]).abs() < 1e-12));
        }
        // closest cluster direction sits within 2e-6 rad of e₁
        let close = d
            .iter()
            .map(|u| u[1].atan2(u[0]).abs())
            .filter(|&a| a > 0.0)
            .fold(f64::INFINITY, f64::min);
        assert!(close <= 2e-6 * 10f64.powf(0.25) && close >= 2e-6);
        for u in &d {
            assert!((u.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn spatial_points_are_unit_and_spread() {
        for n in [3, 4, 5] {
            let pts = sphere_points(n, 200);
            assert!(pts.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
            let mean = pts.iter().fold(Point::zeros(n), |a, u| a + u) / 200.0;
            assert!(mean.norm() < 0.15, "n={n}: {}", mean.norm());
        }
        let c = generators::cube(3).unwrap();
        let d = directions(&c, &DirectionSpec::new(64), 1e-3, 1.0);
        assert!(d.len() > 64 + 6);
    }

    #[test]
    fn complement_is_orthonormal() {
        let u = point(&[0.6, 0.0, 0.8, 0.0]);
        let b = complement(&u);
        for (i, x) in b.iter().enumerate() {
            assert!(x.dot(&u).abs() < 1e-14);
            for (j, y) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((x.dot(y) - want).abs() < 1e-14);
            }
        }
    }
}
