//! Flags of convex polytopes and weighted floating bodies.
//!
//! The library enumerates the face lattice and complete flags of a polytope,
//! builds flag simplices, computes weighted floating bodies by cap bisection,
//! and measures how the wet part scales with the flag count as δ → 0 in
//! Euclidean, spherical and hyperbolic settings.

pub mod asymptotics;
mod bitset;
pub mod error;
pub mod exact;
pub mod flag_simplex;
pub mod floating;
pub mod measure;
pub mod models;
pub mod polytope;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use polytope::{
    clip_halfspace, conjugate_face, conjugate_flag, convex_hull, convex_hull_exact, generators,
    point, polar_body, Face, FaceId, FaceLattice, Flag, FlagVector, Halfspace, IdentityCheck,
    Point, Polytope, PolytopeJson, Side,
};
