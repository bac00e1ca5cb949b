//! Denominators that are products of linear forms `x - y` and `x`.
//!
//! Every denominator met in the GKLO rings is such a product, so rational
//! functions are normalized by trial division against these factors instead
//! of a general gcd. The result is the same canonical form.

use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{Monomial, Var};
use super::mpoly::MPoly;
use crate::scalar::Scalar;

/// An irreducible linear factor with positive leading coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Factor {
    /// The variable itself.
    Var(Var),
    /// `x - y` with `x < y` in variable order.
    Diff(Var, Var),
}

impl Factor {
    /// `x - y` as a normalized factor and a flag telling whether the
    /// normalized factor is `y - x`, i.e. a sign was absorbed.
    pub fn diff(x: Var, y: Var) -> (Factor, bool) {
        assert!(x != y, "degenerate difference {x} - {x}");
        if x < y {
            (Factor::Diff(x, y), false)
        } else {
            (Factor::Diff(y, x), true)
        }
    }

    pub fn to_poly<S: Scalar>(&self) -> MPoly<S> {
        match *self {
            Factor::Var(x) => MPoly::var(x),
            Factor::Diff(x, y) => MPoly::var(x).sub(&MPoly::var(y)),
        }
    }

    pub fn vars(&self) -> (Var, Option<Var>) {
        match *self {
            Factor::Var(x) => (x, None),
            Factor::Diff(x, y) => (x, Some(y)),
        }
    }

    /// Quotient of `p` by this factor when exact.
    pub fn divide<S: Scalar>(&self, p: &MPoly<S>) -> Option<MPoly<S>> {
        match *self {
            Factor::Var(x) => {
                if p.terms().iter().all(|(m, _)| m.exponent(x) >= 1) {
                    Some(p.div_monomial(&Monomial::var(x)))
                } else {
                    None
                }
            }
            Factor::Diff(x, y) => p.div_by_difference(x, y),
        }
    }

    /// Image under a variable renaming: the new factor, whether a sign was
    /// absorbed, or `None` if the factor collapses to zero.
    pub fn rename<F: Fn(Var) -> Var>(&self, f: F) -> Option<(Factor, bool)> {
        match *self {
            Factor::Var(x) => Some((Factor::Var(f(x)), false)),
            Factor::Diff(x, y) => {
                let (a, b) = (f(x), f(y));
                if a == b {
                    None
                } else {
                    Some(Factor::diff(a, b))
                }
            }
        }
    }

    /// Image after setting the variables in `zero` to zero.
    pub fn kill<F: Fn(Var) -> bool>(&self, zero: F) -> FactorImage {
        match *self {
            Factor::Var(x) => {
                if zero(x) {
                    FactorImage::Zero
                } else {
                    FactorImage::Factor(*self, false)
                }
            }
            Factor::Diff(x, y) => match (zero(x), zero(y)) {
                (true, true) => FactorImage::Zero,
                (false, true) => FactorImage::Factor(Factor::Var(x), false),
                // x - y with x = 0 is -y
                (true, false) => FactorImage::Factor(Factor::Var(y), true),
                (false, false) => FactorImage::Factor(*self, false),
            },
        }
    }
}

pub enum FactorImage {
    Zero,
    Factor(Factor, bool),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Var(x) => write!(f, "{x}"),
            Factor::Diff(x, y) => write!(f, "({x} - {y})"),
        }
    }
}

/// Multiset of factors with signed multiplicities plus an overall sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorPowers {
    pub powers: BTreeMap<Factor, i32>,
    pub negative: bool,
}

impl FactorPowers {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, f: Factor, k: i32) {
        if k == 0 {
            return;
        }
        let e = self.powers.entry(f).or_insert(0);
        *e += k;
        if *e == 0 {
            self.powers.remove(&f);
        }
    }

    /// Multiplies by `(x - y)^k`.
    pub fn push_diff(&mut self, x: Var, y: Var, k: i32) {
        let (f, neg) = Factor::diff(x, y);
        if neg && k % 2 != 0 {
            self.negative = !self.negative;
        }
        self.push(f, k);
    }

    pub fn push_var(&mut self, x: Var, k: i32) {
        self.push(Factor::Var(x), k);
    }

    pub fn flip(&mut self) {
        self.negative = !self.negative;
    }

    pub fn extend(&mut self, other: &FactorPowers) {
        for (&f, &k) in &other.powers {
            self.push(f, k);
        }
        if other.negative {
            self.flip();
        }
    }

    pub fn sign<S: Scalar>(&self) -> S {
        if self.negative {
            -S::one()
        } else {
            S::one()
        }
    }
}

/// Product of `factors[k].0 ^ factors[k].1`.
pub fn expand<S: Scalar>(factors: &[(Factor, u32)]) -> MPoly<S> {
    let mut mono = Monomial::one();
    let mut out = MPoly::one();
    for &(f, k) in factors {
        match f {
            Factor::Var(x) => mono = mono.mul(&Monomial::var_pow(x, k as i32)),
            Factor::Diff(..) => out = out.mul(&f.to_poly::<S>().pow(k)),
        }
    }
    out.mul_monomial(&mono)
}

/// Splits a polynomial into linear factors drawn from its own variables.
/// Returns the scalar left over and the factor list, or `None` when the
/// polynomial is not such a product.
pub fn factor_linear<S: Scalar>(p: &MPoly<S>) -> Option<(S, Vec<(Factor, u32)>)> {
    if p.is_zero() || p.has_negative_exponents() {
        return None;
    }
    let mut out: Vec<(Factor, u32)> = Vec::new();
    let mono = p.monomial_content();
    for (v, e) in mono.iter() {
        if v.is_u() {
            return None;
        }
        out.push((Factor::Var(v), e as u32));
    }
    let mut rest = p.div_monomial(&mono);
    if let Some(c) = rest.as_constant() {
        return Some((c, out));
    }
    let vars: Vec<Var> = rest.vars().into_iter().collect();
    if vars.iter().any(|v| v.is_u()) {
        return None;
    }
    let mut remaining_degree = rest.total_degree();
    if rest.terms().iter().any(|(m, _)| m.degree() != remaining_degree) {
        // products of differences are homogeneous
        return None;
    }
    'outer: for (a, &x) in vars.iter().enumerate() {
        for &y in &vars[a + 1..] {
            let f = Factor::Diff(x, y);
            let mut k = 0u32;
            while let Some(q) = f.divide(&rest) {
                rest = q;
                k += 1;
                remaining_degree -= 1;
            }
            if k > 0 {
                out.push((f, k));
            }
            if remaining_degree == 0 {
                break 'outer;
            }
        }
    }
    rest.as_constant().map(|c| (c, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    #[test]
    fn factor_vandermonde() {
        let x = |r| Var::w(0, r);
        let mut fp = FactorPowers::new();
        fp.push_diff(x(1), x(2), 1);
        fp.push_diff(x(3), x(1), 1);
        fp.push_var(x(2), 2);
        assert!(fp.negative);
        let list: Vec<(Factor, u32)> = fp.powers.iter().map(|(&f, &k)| (f, k as u32)).collect();
        let p: Poly = expand(&list).scale(&crate::Rational::from_integer(6.into()));
        let (c, fs) = factor_linear(&p).unwrap();
        assert_eq!(c, crate::Rational::from_integer(6.into()));
        let mut fs = fs;
        fs.sort();
        assert_eq!(fs, list);
    }

    #[test]
    fn not_a_product() {
        let p = Poly::var(Var::w(0, 1)).add(&Poly::var(Var::w(0, 2)));
        assert!(factor_linear(&p).is_none());
    }
}
