use super::{Halfspace, Point, Polytope};
use crate::bitset::BitSet;

/// Which closed side of a hyperplane to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `x·normal ≥ offset`
    Plus,
    /// `x·normal ≤ offset`
    Minus,
}

/// P ∩ H^side, or `None` when the intersection has empty interior.
///
/// Combinatorial: the kept vertices are joined by the crossings of edges
/// that straddle the hyperplane. An edge {u, w} is recognised from the
/// incidence alone: the facets through both meet in exactly {u, w}.
pub fn clip_halfspace(p: &Polytope, h: &Halfspace, side: Side) -> Option<Polytope> {
    let keep = match side {
        Side::Minus => h.clone(),
        Side::Plus => h.flipped(),
    };
    let scale = p
        .vertices()
        .iter()
        .map(|v| v.amax())
        .fold(keep.offset.abs(), f64::max)
        .max(1.0);
    let eps = 1e-12 * scale;
    let nv = p.num_vertices();
    let s: Vec<f64> = p.vertices().iter().map(|v| keep.eval(v)).collect();
    let sign: Vec<i8> = s
        .iter()
        .map(|&x| {
            if x > eps {
                1
            } else if x < -eps {
                -1
            } else {
                0
            }
        })
        .collect();
    // sign −1 is strictly kept, +1 strictly removed
    if !sign.contains(&-1) {
        return None;
    }
    if !sign.contains(&1) {
        return Some(p.clone());
    }
    let all = BitSet::full(nv);
    let mut vertices: Vec<Point> = Vec::new();
    let mut on_facets: Vec<BitSet> = Vec::new();
    let mut on_cut: Vec<bool> = Vec::new();
    for v in 0..nv {
        if sign[v] <= 0 {
            vertices.push(p.vertices()[v].clone());
            on_facets.push(p.vertex_facets(v).clone());
            on_cut.push(sign[v] == 0);
        }
    }
    for u in (0..nv).filter(|&u| sign[u] < 0) {
        for w in (0..nv).filter(|&w| sign[w] > 0) {
            let common = p.vertex_facets(u).intersect(p.vertex_facets(w));
            let mut span = all.clone();
            for f in common.iter() {
                span.intersect_with(p.facet_vertices(f));
            }
            if span.len() != 2 {
                continue;
            }
            let t = s[u] / (s[u] - s[w]);
            let x = &p.vertices()[u] + (&p.vertices()[w] - &p.vertices()[u]) * t;
            vertices.push(x);
            on_facets.push(common);
            on_cut.push(true);
        }
    }
    let mut facets = Vec::new();
    let mut facet_vertices = Vec::new();
    for f in 0..p.num_facets() {
        if !p.facet_vertices(f).iter().any(|v| sign[v] < 0) {
            continue;
        }
        let members: Vec<usize> = (0..vertices.len())
            .filter(|&i| on_facets[i].contains(f))
            .collect();
        facets.push(p.facets()[f].clone());
        facet_vertices.push(members);
    }
    facets.push(keep);
    facet_vertices.push((0..vertices.len()).filter(|&i| on_cut[i]).collect());
    Some(Polytope::from_parts(
        p.dim(),
        vertices,
        facets,
        facet_vertices,
    ))
}
