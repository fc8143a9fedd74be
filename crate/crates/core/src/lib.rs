//! Exact algebra in characteristic 2: Pfaffians, a corank-two singularity
//! classifier, the Gamma model scheme, plane sections of discriminants and
//! the Chern class count for the ramification locus.

pub mod algebra;
pub mod chern;
pub mod discriminant;
pub mod error;
pub mod gamma;
pub mod groebner;
pub mod pfaffian;
pub mod singularity;
pub mod suite;

pub use error::{Error, Result};
