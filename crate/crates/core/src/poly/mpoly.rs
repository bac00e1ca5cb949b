use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Monomial, Var};
use crate::scalar::Scalar;

/// Sparse multivariate Laurent polynomial. Terms are kept sorted by
/// descending monomial (graded lex) with no zero coefficients, so equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPoly<S> {
    terms: Vec<(Monomial, S)>,
}

impl<S: Scalar> Default for MPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> MPoly<S> {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(S::from_i64(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), S::one())
    }

    pub fn term(m: Monomial, c: S) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, combining repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(x) => *x = x.clone() + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, S>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    /// Builds from terms already sorted descending with distinct monomials.
    fn from_sorted(terms: Vec<(Monomial, S)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, S)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.as_slice() {
            [] => Some(S::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Single-term polynomial?
    pub fn as_term(&self) -> Option<(&Monomial, &S)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, S)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> S {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(S::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: Var) -> i32 {
        self.terms.iter().map(|t| t.0.exponent(v)).min().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .iter()
            .flat_map(|t| t.0.iter().map(|(v, _)| v))
            .collect()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.iter().any(|t| t.0.has_negative())
    }

    /// Largest monomial dividing every term (exponent-wise minimum).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.meet(m);
        }
        g
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())).collect(),
        }
    }

    /// `c * mono * self`.
    fn shifted(&self, mono: &Monomial, c: &S) -> Self {
        let one = c.is_one();
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.mul(mono), if one { d.clone() } else { d.clone() * c.clone() }))
                .collect(),
        }
    }

    /// Multiplies every term by a monomial; the order is preserved.
    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        if mono.is_one() {
            return self.clone();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &S| if negate { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0.clone(), sgn(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1.clone() + sgn(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sgn(c))));
        MPoly { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_monomial(m).scale(c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_monomial(m).scale(c);
        }
        // the order is compatible with multiplication, so shifted copies of
        // the longer factor stay sorted and can be merged
        let (long, short) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        if short.len() <= 8 {
            return short
                .terms
                .iter()
                .map(|(m, c)| long.shifted(m, c))
                .reduce(|a, b| a.add(&b))
                .expect("nonzero factor");
        }
        let mut acc: HashMap<Monomial, S> =
            HashMap::with_capacity(self.len().saturating_mul(other.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(x) => *x = x.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Self {
        if let Some((m, c)) = self.as_term() {
            let mut cc = S::one();
            for _ in 0..k {
                cc = cc * c.clone();
            }
            return Self::term(m.pow(k as i32), cc);
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Self>>(it: I) -> Self {
        it.into_iter().fold(Self::one(), |acc, p| acc.mul(p))
    }

    /// Divides by a monomial that is known to divide every term.
    pub fn div_monomial(&self, mono: &Monomial) -> Self {
        if mono.is_one() {
            return self.clone();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.div(mono), c.clone())).collect(),
        }
    }

    /// Renames variables (the map need not be injective).
    pub fn rename<F: Fn(Var) -> Var>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())))
    }

    /// Substitutes scalar values for the variables where `val` returns
    /// `Some`. Panics if zero is substituted into a negative power.
    pub fn eval_partial<F: Fn(Var) -> Option<S>>(&self, val: F) -> Self {
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m.iter() {
                match val(v) {
                    Some(x) => {
                        if x.is_zero() {
                            assert!(e > 0, "zero substituted into negative power of {v}");
                            coef = S::zero();
                            break;
                        }
                        coef = coef * pow_scalar(&x, e);
                    }
                    None => rest.push((v, e)),
                }
            }
            if coef.is_zero() {
                continue;
            }
            let m = Monomial::from_factors(rest);
            match acc.get_mut(&m) {
                Some(x) => *x = x.clone() + coef,
                None => {
                    acc.insert(m, coef);
                }
            }
        }
        Self::from_map(acc)
    }

    /// Full evaluation; every variable must receive a value.
    pub fn eval<F: Fn(Var) -> S>(&self, val: F) -> S {
        let p = self.eval_partial(|v| Some(val(v)));
        p.as_constant().expect("all variables evaluated")
    }

    /// Groups terms by the part of their monomial in the variables selected
    /// by `pick`. Returns `(selected monomial, coefficient)` pairs ordered by
    /// descending selected monomial.
    pub fn collect_by<F: Fn(Var) -> bool>(&self, pick: F) -> Vec<(Monomial, MPoly<S>)> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, S)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let sel = m.restrict(&pick);
            let rest = m.restrict(|v| !pick(v));
            groups.entry(sel).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .rev()
            .map(|(k, ts)| {
                // a subsequence of a grlex-sorted list is not sorted by the
                // remaining part in general, so re-sort
                let mut ts = ts;
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                (k, MPoly::from_sorted(ts))
            })
            .collect()
    }

    /// Coefficients as a polynomial in `x`: entry `k` is the coefficient of
    /// `x^k`. Requires nonnegative exponents in `x`.
    pub fn univariate(&self, x: Var) -> Vec<MPoly<S>> {
        let deg = self.degree_in(x).max(0) as usize;
        let mut parts: Vec<Vec<(Monomial, S)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(x);
            assert!(e >= 0, "negative exponent of {x} in univariate view");
            parts[e as usize].push((m.restrict(|v| v != x), c.clone()));
        }
        parts
            .into_iter()
            .map(|mut ts| {
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MPoly::from_sorted(ts)
            })
            .collect()
    }

    pub fn from_univariate(x: Var, coeffs: &[MPoly<S>]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&c.mul_monomial(&Monomial::var_pow(x, k as i32)));
            }
        }
        out
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    /// Both operands must have nonnegative exponents.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = d.as_term() {
            let inv = S::one() / c.clone();
            if self.terms.iter().all(|t| m.divides(&t.0)) {
                return Some(self.div_monomial(m).scale(&inv));
            }
            return None;
        }
        let (lm, lc) = d.leading().cloned().unwrap();
        let inv = S::one() / lc;
        // remainder kept as an ordered map so the leading term is cheap
        let mut rem: BTreeMap<Monomial, S> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, S)> = Vec::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c * inv.clone();
            for (dm, dc) in &d.terms {
                let key = dm.mul(&qm);
                let delta = dc.clone() * qc.clone();
                let entry = rem.entry(key.clone()).or_insert_with(S::zero);
                *entry = entry.clone() - delta;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(MPoly::from_sorted(quot))
    }

    /// Divides by `x - y` when exact, using synthetic division in `x`.
    pub fn div_by_difference(&self, x: Var, y: Var) -> Option<Self> {
        let coeffs = self.univariate(x);
        let d = coeffs.len() - 1;
        if d == 0 {
            return if self.is_zero() { Some(Self::zero()) } else { None };
        }
        let ym = Monomial::var(y);
        // (x - y) * sum q_k x^k: q_{d-1} = c_d, q_{k-1} = c_k + y q_k, c_0 = -y q_0
        let mut q = vec![Self::zero(); d];
        q[d - 1] = coeffs[d].clone();
        for k in (1..d).rev() {
            q[k - 1] = coeffs[k].add(&q[k].mul_monomial(&ym));
        }
        if !coeffs[0].add(&q[0].mul_monomial(&ym)).is_zero() {
            return None;
        }
        Some(Self::from_univariate(x, &q))
    }

    /// `(c, p)` with `self = p / c`, `p` having coprime integer coefficients.
    pub fn integer_primitive(&self) -> (S, Self) {
        let k = S::primitive_factor(self.terms.iter().map(|t| &t.1));
        (k.clone(), self.scale(&k))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&(S::one() / c.clone())),
        }
    }

    pub fn map_coeffs<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> MPoly<T> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

pub(crate) fn pow_scalar<S: Scalar>(x: &S, e: i32) -> S {
    let mut r = S::one();
    for _ in 0..e.unsigned_abs() {
        r = r * x.clone();
    }
    if e < 0 {
        S::one() / r
    } else {
        r
    }
}

impl<S: Scalar> fmt::Display for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> From<Var> for MPoly<S> {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr<&MPoly<S>> for &MPoly<S> {
            type Output = MPoly<S>;
            fn $m(self, rhs: &MPoly<S>) -> MPoly<S> {
                MPoly::$m(self, rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl<S: Scalar> Neg for &MPoly<S> {
    type Output = MPoly<S>;
    fn neg(self) -> MPoly<S> {
        MPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;
    use num_rational::Ratio;

    fn w(r: usize) -> Poly {
        Poly::var(Var::w(0, r))
    }

    #[test]
    fn ring_axioms_small() {
        let a = &w(1) - &w(2);
        let b = &w(1) + &w(2);
        let p = &a * &b;
        assert_eq!(p, &w(1).pow(2) - &w(2).pow(2));
        assert_eq!(&p - &p, Poly::zero());
        assert_eq!(p.to_string(), "w[0,1]^2 - w[0,2]^2");
    }

    #[test]
    fn exact_division() {
        let a = &w(1) - &w(2);
        let b = &(&w(1) * &w(3)) + &Poly::from_int(7);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.div_by_difference(Var::w(0, 1), Var::w(0, 2)), Some(b.clone()));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(b.div_by_difference(Var::w(0, 1), Var::w(0, 2)), None);
    }

    #[test]
    fn univariate_roundtrip() {
        let z = Poly::var(Var::Z);
        let p = &(&z - &w(1)) * &(&z - &w(2));
        let cs = p.univariate(Var::Z);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[1], (&w(1) + &w(2)).neg());
        assert_eq!(Poly::from_univariate(Var::Z, &cs), p);
    }

    #[test]
    fn small_int_coefficients() {
        type P = MPoly<Ratio<i64>>;
        let x = P::var(Var::w(0, 1));
        let y = P::var(Var::w(0, 2));
        let p = (&x + &y).pow(3);
        assert_eq!(p.len(), 4);
        assert_eq!(p.coeff(&Monomial::from_factors([(Var::w(0, 1), 2), (Var::w(0, 2), 1)])), Ratio::from_integer(3));
    }
}
