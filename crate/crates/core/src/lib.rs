//! Acute spherical lune dissections.
//!
//! The crate models subdivisions of a spherical lune into faces with three
//! corners, enumerates them exhaustively up to symmetry, realizes candidates
//! numerically as acute spherical triangulations, and checks tetrahedral
//! tilings through their vertex links.

pub mod combinatorics;
pub mod realizer;
pub mod render;
pub mod sphere;
pub mod tetra;
pub mod vec3;

pub use combinatorics::{
    enumerate_candidates, signature_solutions, CombError, CombinatorialSubdivision, ConstraintSet,
    CountSignature, Face, LuneSide, Vertex, VertexClass,
};
pub use sphere::{SphereError, SpherePoint};
