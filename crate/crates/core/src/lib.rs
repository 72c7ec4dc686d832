//! Finitely-supported signed measures of bounded support on measurable
//! bornological spaces, the measure monad `(M, δ, κ)` they form, its
//! Eilenberg-Moore algebras and the vector-valued integrals those algebras
//! carry.
//!
//! Every weight and coordinate is an exact [`Rational`]; every law the crate
//! checks is checked by structural equality of canonical forms.
//!
//! Module map:
//!
//! - [`spaces`]: points, spaces, bounded sets and morphisms.
//! - [`signed_measure`]: canonical atom lists, Jordan/Hahn split, total
//!   variation, direct image, restriction, real integrals.
//! - [`monad`]: Dirac unit, multiplication `κ`, lifts, formal linear
//!   combinations and the monad morphism `Δ`, monad-law suites.
//! - [`em_algebra`]: algebras of the monad, integration operators, derived
//!   vector structure, homomorphism and convexity suites.
//! - [`pettis`]: Pettis integrals on `ℚⁿ` and the algebra they induce.
//! - [`cli`]: measure documents, the grid demo and command dispatch.

pub mod cli;
pub mod em_algebra;
mod error;
pub mod gen;
pub mod monad;
pub mod pettis;
pub mod report;
pub mod signed_measure;
pub mod spaces;

pub use error::{Error, Result};
pub use report::{LawFailure, LawReport};
pub use signed_measure::{JordanDecomposition, SignedMeasure};
pub use spaces::{Bound, BoundedSet, Morphism, Point, Space};

/// Exact rational scalar used for every weight and coordinate.
pub type Rational = num::BigRational;

/// Shorthand for the rational `numer / denom`.
///
/// Panics if `denom` is zero.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
