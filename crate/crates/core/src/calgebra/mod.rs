//! Twisted convolution algebras of finite discrete groupoids, their induced
//! representations, and the finite models built from them.

pub mod appendix;
pub mod blocks;
pub mod element;
pub mod interval;
pub mod matrix;
pub mod rt;

use num_complex::Complex64;
use thiserror::Error;

use crate::finspace::SpaceError;
use crate::groupoid::GroupoidError;
use crate::twist::TwistError;

pub use appendix::{appendix_a_suite, AppendixOptions, AppendixReport};
pub use blocks::{block_decompose, BlockDecomposition, BlockReport};
pub use element::{
    convolve, induced_rep, induced_rep_closed_form, involute, reduced_norm, reduced_norm_all_units, unit_orbits,
    AlgebraElement, AlgebraElementJson, InducedRep,
};
pub use interval::{build_doubled_model, DoubledIntervalModel, DoubledIntervalReport};
pub use matrix::CMatrix;
pub use rt::{build_rt_model, RtElement, RtModel, RtReport};

/// Entrywise tolerance for identities that hold exactly up to roundoff.
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for quantities accumulated over many products.
pub const ACCUMULATED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error("elements belong to different algebras")]
    Mismatch,
    #[error("`{0}` is not a unit")]
    NotAUnit(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("the base space must be discrete")]
    NonDiscrete,
    #[error("σ fails the cocycle identity")]
    InvalidCocycle,
    #[error("the groupoid must be principal")]
    NonPrincipal,
    #[error("{what} is {size}, above the cap of {cap}")]
    SizeCap { what: &'static str, size: usize, cap: usize },
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
}

/// `exp(2πi·k/n)`, exact at multiples of a quarter turn.
pub fn zeta(n: u64, k: i64) -> Complex64 {
    let k = k.rem_euclid(n as i64) as u64;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}
