//! `Z_n`-valued twists: 2-cocycles on finite groupoids, the extension
//! groupoid they define, and alternating Čech cocycles on finite covers.
//!
//! Values are residues mod `n` standing for the roots of unity
//! `exp(2πi·v/n)`, written additively.

pub mod cech;
pub mod cocycle;
pub mod modlin;

use thiserror::Error;

use crate::finspace::SpaceError;
use crate::groupoid::GroupoidError;

pub use cech::{
    cech_is_coboundary, cech_to_groupoid_cocycle, nerve_class_count, verify_cech, CechCoboundary, CechData, CechJson,
    CechReport, DoubledCover, Triple,
};
pub use cocycle::{
    are_cohomologous, coboundary_twist, cocycle_violations, extension_associativity_failures, extension_groupoid, verify_two_cocycle,
    CocycleReport, OneCochain, TwoCocycle, TwoCocycleJson,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("modulus must be at least 1")]
    BadModulus,
    #[error("no value given for the composable pair ({a}, {b})")]
    MissingEntry { a: String, b: String },
    #[error("({a}, {b}) is not a composable pair")]
    NotComposable { a: String, b: String },
    #[error("value given twice for ({a}, {b})")]
    DuplicateEntry { a: String, b: String },
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("cochain is nonzero on the unit `{0}`")]
    NonzeroOnUnit(String),
    #[error("cocycles live on different groupoids or moduli")]
    Mismatch,
    #[error("no lambda value for the triple ({0}, {1}, {2}), whose overlap is nonempty")]
    MissingTriple(u32, u32, u32),
    #[error("unknown cover index {0}")]
    UnknownIndex(u32),
    #[error("cover index {0} is reserved; indices must be at least 1")]
    ReservedIndex(u32),
    #[error("invalid Čech data: {0}")]
    InvalidCech(String),
}
