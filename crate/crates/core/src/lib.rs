//! Affine Hecke algebras of rank one and two.
//!
//! The crate builds the nine supported (root system, lattice) configurations,
//! multiplies in both the Coxeter and the Bernstein basis, constructs the
//! representations that carry the Plancherel measure, and checks the
//! Plancherel formula numerically against the canonical trace.

pub mod affine_weyl;
pub mod cli;
pub mod error;
pub mod expr;
pub mod hecke;
pub mod laurent;
pub mod lattice;
pub mod params;
pub mod plancherel;
pub mod reps;
pub mod root_data;
pub mod weights;

pub use error::{Error, Result};
pub use hecke::{BernsteinElement, CoxeterElement, HeckeAlgebra};
pub use lattice::Coweight;
pub use params::Params;
pub use root_data::{Config, RootDatum};
pub use weights::Character;
