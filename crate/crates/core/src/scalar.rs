//! Coefficient fields for the polynomial kernel.
//!
//! Everything above the kernel works over [`crate::Rational`]; the kernel
//! itself only needs an exact field with a notion of "integer content" so
//! that rational functions can be put into a canonical form.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact field usable as a polynomial coefficient ring.
pub trait Scalar:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// The positive factor `c` such that `c * x` over all `coeffs` is a list
    /// of integers with gcd 1. Returns one for an empty list.
    fn primitive_factor<'a, I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>;

    /// Parses an unsigned literal such as `3` or `7/2`.
    fn parse_literal(s: &str) -> Option<Self>;

    /// True when the value is an integer (used only for pretty printing).
    fn is_integral(&self) -> bool;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Debug
        + Display
        + Integer
        + Signed
        + Hash
        + FromPrimitive
        + FromStr
        + Send
        + Sync
        + 'static,
{
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range for coefficient type"))
    }

    fn primitive_factor<'a, I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut num_gcd = T::zero();
        let mut den_lcm = T::one();
        for c in coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Ratio::from_integer(T::one());
        }
        Ratio::new(den_lcm, num_gcd)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let n = T::from_str(n.trim()).ok()?;
                let d = T::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(Ratio::new(n, d))
                }
            }
            None => T::from_str(s.trim()).ok().map(Ratio::from_integer),
        }
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn primitive_factor_clears_denominators_and_content() {
        let cs = [q(1, 2), q(3, 4), q(-5, 6)];
        let k = Rational::primitive_factor(cs.iter());
        assert_eq!(k, q(12, 1));
        let cs = [q(6, 1), q(9, 1)];
        assert_eq!(Rational::primitive_factor(cs.iter()), q(1, 3));
    }

    #[test]
    fn literals() {
        assert_eq!(Rational::parse_literal("7/2"), Some(q(7, 2)));
        assert_eq!(Rational::parse_literal("12"), Some(q(12, 1)));
        assert_eq!(Rational::parse_literal("1/0"), None);
        assert_eq!(
            <Ratio<i64> as Scalar>::parse_literal("4/6"),
            Some(Ratio::new(2, 3))
        );
    }
}
