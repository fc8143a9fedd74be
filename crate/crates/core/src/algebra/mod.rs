//! Coefficient domains, sparse polynomials, truncated jets and dense linear
//! algebra.

mod gf2k;
mod jet;
mod matrix;
mod monomial;
mod poly;
mod ring;
pub mod text;

pub use gf2k::{is_irreducible, GfElem, Gf2k, DEFAULT_MODULUS, GF16_MODULUS};
pub use jet::{jet_solve, Jet, JetRing};
pub use matrix::Matrix;
pub use monomial::{Exp, Monomial, Vars};
pub use poly::{MultiPoly, PolyRing};
pub use ring::{Field, Integers, Ring, SquareRoot};

pub type Poly = MultiPoly<Gf2k>;
