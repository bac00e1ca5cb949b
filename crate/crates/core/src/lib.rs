//! Fundamental monopole operators of quiver gauge theories in GKLO
//! coordinates, their behaviour under slice and zastava embeddings, and
//! monopole-formula Hilbert series.
//!
//! The polynomial kernel in [`poly`] is generic over an exact coefficient
//! field ([`Scalar`]); everything above it works over [`Rational`].

pub mod defect;
pub mod gklo;
pub mod hilbert;
pub mod km;
pub mod poly;
pub mod quiver;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod suite;
pub mod sym;

pub use poly::{Factor, MPoly, Monomial, PolyError, RatFunc, Var};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type Poly = MPoly<Rational>;
pub type Frac = RatFunc<Rational>;
