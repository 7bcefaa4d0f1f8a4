//! Moduli spaces of closed polygons in R^3 with fixed side lengths.
//!
//! The crate has two halves that check each other. The combinatorial half
//! works in exact rational arithmetic: wall and chamber detection for length
//! vectors, enumeration of the admissible index sets of the bending circle
//! action, the signed projective-space count that is the oriented
//! equivariant cobordism class of the moduli space, and (for pentagons) the
//! exact moment polytope of the two-diagonal bending torus. The numerical
//! half is a double-precision simulator for the polygons themselves: bending
//! flows, action-angle coordinates, fixed-point construction and
//! classification, and the metric/symplectic/complex-structure toolkit on
//! tangent vectors.

pub mod admissible;
pub mod cobordism;
mod error;
pub mod lengths;
pub mod polygon;
pub mod polytope;
pub mod rational;

pub use admissible::{
    enumerate_admissible, enumerate_admissible_threaded, is_admissible, AdmissibleFamily, IndexSet,
};
pub use cobordism::{
    cobordism_class, default_pivot, equilateral_class, perturbed_equilateral_check,
    type2_submanifolds, CobordismClass, Pivot,
};
pub use error::{Error, Result};
pub use lengths::{ChamberSignature, LengthVector};
pub use polygon::{ActionAngle, FixedPointKind, Polygon, DEFAULT_CLOSURE_TOL};
pub use rational::Rational;
