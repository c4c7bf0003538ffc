//! Exact finite models of topological groupoids, twisted groupoid
//! C*-algebras and the Fell condition.
//!
//! Everything is finite: spaces are finite topological spaces given by
//! minimal open sets, twists are `Z_n`-valued 2-cocycles, and algebras are
//! finite-dimensional. The crate can therefore check statements exactly
//! instead of approximating them.

pub mod calgebra;
pub mod corpus;
pub mod finspace;
pub mod graphfell;
pub mod groupoid;
pub mod twist;

pub use finspace::{FinSpace, PointSet, SpaceError, SpaceMap};
pub use groupoid::{FinGroupoid, GroupoidError, RelationGroupoid};
pub use twist::{TwistError, TwoCocycle};
