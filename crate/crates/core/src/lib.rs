//! Stable matching instances, their rotation posets, exact counting of
//! stable matchings, geometric preference models, and count-preserving
//! constructions from bipartite independent sets.
//!
//! Everything is 1-based at the public surface: men, women, rotations,
//! edges and graph vertices are numbered from 1.

pub mod attribute_models;
pub mod cli;
pub mod counting;
pub mod error;
pub mod gale_shapley;
pub mod instance;
pub mod interval;
pub mod poset;
pub mod reductions;
pub mod rotations;

pub use attribute_models::{
    AttributeSpec, Coord, EuclideanSpec, GeometricSpec, OneAttributeSpec, Scalar,
};
pub use counting::{BipartiteGraph, Count};
pub use error::{Error, Result};
pub use gale_shapley::Side;
pub use instance::{Gender, Instance, Matching, PersonId};
pub use poset::Poset;
pub use reductions::{Model, Permutation, ReductionReport};
pub use rotations::{Rotation, RotationPoset};

/// Exact rationals, the default scalar of the geometric models.
pub type Rational = num_rational::BigRational;
pub type ExactEuclideanSpec = EuclideanSpec<Rational>;
pub type FloatEuclideanSpec = EuclideanSpec<f64>;
pub type ExactOneAttributeSpec = OneAttributeSpec<Rational>;
pub type FloatOneAttributeSpec = OneAttributeSpec<f64>;
