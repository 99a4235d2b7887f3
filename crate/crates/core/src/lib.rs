//! Local second- and third-order invariants of surfaces in R^4 and R^5,
//! corank-1 surfaces in R^4, and 3-manifolds in R^6, computed from exact
//! polynomial jets.
//!
//! The crate is generic over the scalar: [`scalar::Rat`] gives exact rational
//! arithmetic for every rank and sign decision, `f64` serves germs whose
//! straightening needs irrational rotations. The concrete aliases at the
//! crate root fix the two instantiations the CLI and harness use.

pub mod dirs;
pub mod error;
pub mod height;
pub mod jet;
pub mod linalg;
pub mod locus;
pub mod mfld3;
pub mod poly;
pub mod scalar;
pub mod surf_r4;
pub mod surf_r4_sing;
pub mod surf_r5;
pub mod transforms;
pub mod unipoly;

pub use error::{GeomError, GeomResult};
pub use scalar::{Rat, Scalar};

/// Exact germ: every classification decision is decidable.
pub type ExactGerm = jet::MapGerm<Rat>;
/// Floating germ: for inputs whose tangent frames are irrational.
pub type FloatGerm = jet::MapGerm<f64>;
