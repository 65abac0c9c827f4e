//! Exact computations on regular subdivisions of planar point configurations:
//! lifting, regularity certificates, link signatures and extended stars,
//! face census of the secondary polytope, and Gale duals on the 2-sphere.

pub mod census;
pub mod error;
pub mod gale;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod signature;
pub mod subdivision;

pub use error::{Error, Result};
pub use geometry::{
    angular_order, apply_projective, convex_hull, in_general_position, orientation, AngularOrder, Hull, Point2,
    PointConfiguration, ProjectiveMap,
};
pub use rational::Rational;
pub use subdivision::{
    face_dimension, is_regular, lift_subdivision, refine_with, refines, secondary_cone, secondary_span_dimension,
    validate_subdivision, Cell, HeightVector, RegularityCertificate, SecondaryCone, Subdivision, Verdict, Violation,
};
