use super::{Flag, Halfspace, Point, Polytope};
use crate::error::{Error, Result};

const INCIDENCE_TOL: f64 = 1e-9;

/// `{y : x·y ≤ 1 for all x ∈ P}`; requires the origin in the interior.
/// Facets of P become vertices and vertices become facets, so the
/// incidence transposes without recomputing a hull.
pub fn polar_body(p: &Polytope) -> Result<Polytope> {
    let scale = p.vertices().iter().map(|v| v.amax()).fold(1.0, f64::max);
    if p.facets().iter().any(|h| h.offset <= 1e-12 * scale) {
        return Err(Error::OriginNotInterior);
    }
    let vertices: Vec<Point> = p.facets().iter().map(|h| &h.normal / h.offset).collect();
    let facets: Vec<Halfspace> = p
        .vertices()
        .iter()
        .map(|v| Halfspace::new(v.clone(), 1.0))
        .collect();
    let facet_vertices = (0..p.num_vertices())
        .map(|v| p.vertex_facets(v).to_vec())
        .collect();
    Ok(Polytope::from_parts(
        p.dim(),
        vertices,
        facets,
        facet_vertices,
    ))
}

/// The face of `polar` dual to the face of `p` with the given vertex set:
/// all vertices y of the polar with x·y = 1 for every x in the face.
pub fn conjugate_face(p: &Polytope, polar: &Polytope, face: &[usize]) -> Vec<usize> {
    polar
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, y)| {
            face.iter()
                .all(|&i| (p.vertices()[i].dot(y) - 1.0).abs() <= INCIDENCE_TOL)
        })
        .map(|(j, _)| j)
        .collect()
}

/// Reversed chain of conjugate faces, a flag of the polar.
pub fn conjugate_flag(p: &Polytope, polar: &Polytope, flag: &Flag) -> Flag {
    let l = p.face_lattice();
    let lp = polar.face_lattice();
    let chain = flag
        .chain
        .iter()
        .rev()
        .map(|&f| {
            let vs = conjugate_face(p, polar, &l.face(f).vertices);
            lp.find_vertices(&vs)
                .expect("conjugate of a face is a face")
        })
        .collect();
    Flag { chain }
}
