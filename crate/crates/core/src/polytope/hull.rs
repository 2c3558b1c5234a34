//! Exact convex hull by the double-description method.
//!
//! A facet `a·x ≤ β` of conv(p₁,…,p_m) is an extreme ray of the cone
//! `{(a, β) : β − a·p_i ≥ 0}`. Rows are homogenised to integers so every
//! sign test is exact, and adjacency of rays is decided combinatorially.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exact::{cmp_points, dot, homogeneous_row, primitive};

pub(crate) struct ExactHull {
    /// Extreme points in lexicographic order.
    pub vertices: Vec<Vec<BigRational>>,
    /// Primitive integer vectors `(a, β)` with `a·x ≤ β` valid on the hull.
    pub facets: Vec<Vec<BigInt>>,
    /// Sorted vertex indices lying on each facet.
    pub facet_vertices: Vec<Vec<usize>>,
}

struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

pub(crate) fn exact_hull(points: Vec<Vec<BigRational>>) -> Result<ExactHull> {
    let n = points.first().map(|p| p.len()).unwrap_or(0);
    if n == 0 {
        return Err(Error::DegenerateInput("no points or zero dimension".into()));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::DegenerateInput("points of mixed dimension".into()));
    }
    let mut pts = points;
    pts.sort_by(|a, b| cmp_points(a, b));
    pts.dedup();
    let m = pts.len();
    let d = n + 1;
    if m < d {
        return Err(Error::DegenerateInput(format!(
            "{m} distinct points cannot span dimension {n}"
        )));
    }
    let rows: Vec<Vec<BigInt>> = pts.iter().map(|p| homogeneous_row(p)).collect();
    let basis = independent_rows(&rows, d)
        .ok_or_else(|| Error::DegenerateInput("points lie in a proper affine subspace".into()))?;

    let mut rays = initial_rays(&rows, &basis, m);
    let in_basis = BitSet::from_indices(m, basis.iter().copied());
    for i in (0..m).filter(|&i| !in_basis.contains(i)) {
        rays = add_row(rays, &rows[i], i, d);
    }
    certify(&rows, &rays)?;

    // A point is extreme iff the facets through it meet only in that point.
    let mut is_vertex = vec![false; m];
    for (i, flag) in is_vertex.iter_mut().enumerate() {
        let mut meet: Option<BitSet> = None;
        for r in rays.iter().filter(|r| r.zeros.contains(i)) {
            match &mut meet {
                None => meet = Some(r.zeros.clone()),
                Some(s) => s.intersect_with(&r.zeros),
            }
        }
        *flag = meet.is_some_and(|s| s.len() == 1);
    }
    let mut new_index = vec![usize::MAX; m];
    let mut vertices = Vec::new();
    for i in 0..m {
        if is_vertex[i] {
            new_index[i] = vertices.len();
            vertices.push(pts[i].clone());
        }
    }
    let mut facets: Vec<(Vec<usize>, Vec<BigInt>)> = rays
        .into_iter()
        .map(|r| {
            let vs: Vec<usize> = r
                .zeros
                .iter()
                .filter(|&i| is_vertex[i])
                .map(|i| new_index[i])
                .collect();
            (vs, r.v)
        })
        .collect();
    facets.sort();
    let (facet_vertices, facets) = facets.into_iter().unzip();
    Ok(ExactHull {
        vertices,
        facets,
        facet_vertices,
    })
}

/// Indices of `d` linearly independent rows, chosen greedily in order.
fn independent_rows(rows: &[Vec<BigInt>], d: usize) -> Option<Vec<usize>> {
    let mut reduced: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v: Vec<BigRational> = row
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        for (pivot, b) in &reduced {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &b[*pivot];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            reduced.push((p, v));
            chosen.push(i);
            if chosen.len() == d {
                return Some(chosen);
            }
        }
    }
    None
}

/// Columns of the inverse of the basis rows: ray j is positive on row j and
/// vanishes on the others.
fn initial_rays(rows: &[Vec<BigInt>], basis: &[usize], m: usize) -> Vec<Ray> {
    let d = basis.len();
    let mut a: Vec<Vec<BigRational>> = basis
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut r: Vec<BigRational> = rows[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            r.extend((0..d).map(|j| BigRational::from_integer(BigInt::from((j == k) as i32))));
            r
        })
        .collect();
    for col in 0..d {
        let p = (col..d)
            .find(|&r| !a[r][col].is_zero())
            .expect("basis rows are independent");
        a.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &piv;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let src = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
    }
    (0..d)
        .map(|j| {
            let col: Vec<BigRational> = (0..d).map(|r| a[r][d + j].clone()).collect();
            let v = integer_direction(&col);
            let zeros = BitSet::from_indices(
                m,
                basis
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &i)| i),
            );
            Ray { v, zeros }
        })
        .collect()
}

fn integer_direction(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut l = BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    primitive(v.iter().map(|x| x.numer() * (&l / x.denom())).collect())
}

fn add_row(rays: Vec<Ray>, row: &[BigInt], i: usize, d: usize) -> Vec<Ray> {
    let vals: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
    let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
    let mut created = Vec::new();
    for &p in &pos {
        for &q in &neg {
            let common = rays[p].zeros.intersect(&rays[q].zeros);
            if common.len() + 2 < d {
                continue;
            }
            let blocked = rays
                .iter()
                .enumerate()
                .any(|(k, r)| k != p && k != q && common.is_subset(&r.zeros));
            if blocked {
                continue;
            }
            let v: Vec<BigInt> = rays[q]
                .v
                .iter()
                .zip(&rays[p].v)
                .map(|(y, x)| &vals[p] * y - &vals[q] * x)
                .collect();
            let mut zeros = common;
            zeros.insert(i);
            created.push(Ray {
                v: primitive(v),
                zeros,
            });
        }
    }
    let mut out = Vec::with_capacity(rays.len() + created.len());
    for (k, mut r) in rays.into_iter().enumerate() {
        if vals[k].is_negative() {
            continue;
        }
        if vals[k].is_zero() {
            r.zeros.insert(i);
        }
        out.push(r);
    }
    out.extend(created);
    out
}

/// Re-evaluate every row against every ray: all values must be nonnegative
/// and the recorded zero sets must be exact.
fn certify(rows: &[Vec<BigInt>], rays: &[Ray]) -> Result<()> {
    for r in rays {
        for (i, row) in rows.iter().enumerate() {
            let s = dot(row, &r.v);
            if s.is_negative() || (s.is_zero() != r.zeros.contains(i)) {
                return Err(Error::DegenerateInput(
                    "incidence certification failed".into(),
                ));
            }
        }
    }
    Ok(())
}
