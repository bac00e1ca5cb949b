use std::fmt;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::factored::{expand, factor_linear, Factor, FactorImage, FactorPowers};
use super::gcd::gcd;
use super::monomial::{Monomial, Var};
use super::mpoly::MPoly;
use super::PolyError;
use crate::scalar::Scalar;

/// Reduced fraction `num / den`.
///
/// Canonical form: `den` is a polynomial with nonnegative exponents, no
/// monomial factor in the U variables, coprime to `num`, with coprime integer
/// coefficients and positive leading coefficient. Laurent monomials in the U
/// variables live in `num`. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<S> {
    num: MPoly<S>,
    den: MPoly<S>,
}

impl<S: Scalar> Default for RatFunc<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> RatFunc<S> {
    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(S::from_i64(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MPoly::var(v))
    }

    pub fn from_poly(p: MPoly<S>) -> Self {
        if !p.terms().iter().any(|(m, _)| m.iter().any(|(v, e)| e < 0 && !v.is_u())) {
            return RatFunc {
                num: p,
                den: MPoly::one(),
            };
        }
        Self::new(p, MPoly::one()).expect("nonzero denominator")
    }

    pub fn num(&self) -> &MPoly<S> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<S> {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly<S>, MPoly<S>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The numerator if the denominator is one.
    pub fn as_poly(&self) -> Option<&MPoly<S>> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Normalizes an arbitrary fraction.
    pub fn new(num: MPoly<S>, den: MPoly<S>) -> Result<Self, PolyError> {
        Self::normalize(num, den, false)
    }

    /// Normalizes using the general gcd only, bypassing the linear-factor
    /// fast path. Same result as [`RatFunc::new`].
    pub fn new_with_gcd(num: MPoly<S>, den: MPoly<S>) -> Result<Self, PolyError> {
        Self::normalize(num, den, true)
    }

    fn normalize(num: MPoly<S>, den: MPoly<S>, force_gcd: bool) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let cn = num.monomial_content();
        let cd = den.monomial_content();
        let mut num = num.div_monomial(&cn);
        let mut den = den.div_monomial(&cd);
        let q = cn.div(&cd);
        let q_num = Monomial::from_factors(q.iter().filter(|&(v, e)| v.is_u() || e > 0));
        let q_den =
            Monomial::from_factors(q.iter().filter(|&(v, e)| !v.is_u() && e < 0).map(|(v, e)| (v, -e)));

        if !den.is_constant() {
            let factored = if force_gcd { None } else { factor_linear(&den) };
            match factored {
                Some((c, factors)) => {
                    let (n, rem) = trial_divide(num, &factors);
                    num = n.scale(&(S::one() / c));
                    den = expand(&rem);
                }
                None => {
                    let g = gcd(&num, &den);
                    if !g.is_one() {
                        num = num.div_exact(&g).expect("gcd divides numerator");
                        den = den.div_exact(&g).expect("gcd divides denominator");
                    }
                }
            }
        }
        let num = num.mul_monomial(&q_num);
        let den = den.mul_monomial(&q_den);
        Ok(Self::rescale(num, den))
    }

    /// Makes the denominator integer-primitive with positive leading term.
    fn rescale(num: MPoly<S>, den: MPoly<S>) -> Self {
        let (mut k, den) = den.integer_primitive();
        let (den, flip) = if den.leading_coeff().is_negative() {
            (den.neg(), true)
        } else {
            (den, false)
        };
        if flip {
            k = -k;
        }
        RatFunc {
            num: num.scale(&k),
            den,
        }
    }

    /// Builds `num / prod(factors)` and cancels common factors by trial
    /// division. `num` may carry Laurent monomials in the U variables.
    pub fn from_factored(num: MPoly<S>, factors: &[(Factor, u32)]) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, rem) = trial_divide(num, factors);
        let den = expand(&rem);
        // a product of normalized factors is primitive with leading coefficient one
        RatFunc { num, den }
    }

    /// `sum_t poly_t * prod_f f^(k_t,f)` over a common denominator.
    ///
    /// Parts with distinct monomials in the U variables cannot cancel each
    /// other, so each part is reduced separately and the reduced parts are
    /// brought over the least common denominator, which keeps the sum reduced.
    pub fn sum_factored(terms: Vec<(MPoly<S>, FactorPowers)>) -> Self {
        let mut groups: BTreeMap<Monomial, Vec<(MPoly<S>, &FactorPowers)>> = BTreeMap::new();
        for (p, fp) in &terms {
            for (umono, coeff) in p.collect_by(|x| x.is_u()) {
                groups.entry(umono).or_default().push((coeff, fp));
            }
        }
        let mut reduced: Vec<(Monomial, MPoly<S>, Vec<(Factor, u32)>)> = Vec::new();
        for (umono, parts) in groups {
            let (num, rem) = sum_over_common(parts);
            if !num.is_zero() {
                reduced.push((umono, num, rem));
            }
        }
        let mut lcm: BTreeMap<Factor, u32> = BTreeMap::new();
        for (_, _, rem) in &reduced {
            for &(f, k) in rem {
                let e = lcm.entry(f).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let mut num = MPoly::zero();
        for (umono, p, rem) in reduced {
            let own: BTreeMap<Factor, u32> = rem.into_iter().collect();
            let cof: Vec<(Factor, u32)> = lcm
                .iter()
                .map(|(f, &k)| (*f, k - own.get(f).copied().unwrap_or(0)))
                .filter(|&(_, k)| k > 0)
                .collect();
            num = num.add(&p.mul(&expand(&cof)).mul_monomial(&umono));
        }
        let den: Vec<(Factor, u32)> = lcm.into_iter().collect();
        // a product of normalized factors is primitive with leading coefficient one
        RatFunc { num, den: expand(&den) }
    }

    /// Factorization of the denominator into linear factors, if it has one.
    pub fn den_factors(&self) -> Option<Vec<(Factor, u32)>> {
        if self.den.is_one() {
            return Some(Vec::new());
        }
        factor_linear(&self.den).map(|(c, fs)| {
            debug_assert!(c.is_one());
            fs
        })
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MPoly<S>) -> Self {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Self::from_poly(num);
            }
            return Self::new(num, self.den.clone()).expect("nonzero denominator");
        }
        if let (Some(fa), Some(fb)) = (self.den_factors(), other.den_factors()) {
            let mut lcm: std::collections::BTreeMap<Factor, u32> = Default::default();
            for &(f, k) in fa.iter().chain(fb.iter()) {
                let e = lcm.entry(f).or_insert(0);
                *e = (*e).max(k);
            }
            let cofactor = |fs: &[(Factor, u32)]| -> MPoly<S> {
                let mut c = Vec::new();
                for (&f, &k) in &lcm {
                    let have = fs.iter().find(|(g, _)| *g == f).map(|p| p.1).unwrap_or(0);
                    if k > have {
                        c.push((f, k - have));
                    }
                }
                expand(&c)
            };
            let num = self.num.mul(&cofactor(&fa)).add(&other.num.mul(&cofactor(&fb)));
            let den: Vec<(Factor, u32)> = lcm.into_iter().collect();
            return Self::from_factored(num, &den);
        }
        let g = gcd(&self.den, &other.den);
        let da = self.den.div_exact(&g).expect("gcd divides");
        let db = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        Self::new(num, self.den.mul(&db)).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        if let (Some(fa), Some(fb)) = (self.den_factors(), other.den_factors()) {
            let mut all: std::collections::BTreeMap<Factor, u32> = Default::default();
            for &(f, k) in fa.iter().chain(fb.iter()) {
                *all.entry(f).or_insert(0) += k;
            }
            let den: Vec<(Factor, u32)> = all.into_iter().collect();
            return Self::from_factored(self.num.mul(&other.num), &den);
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Self, PolyError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let n = k.unsigned_abs();
        let num = base.num.pow(n);
        let den = base.den.pow(n);
        // powers of a reduced fraction stay reduced
        Ok(Self::rescale(num, den))
    }

    /// Applies a variable renaming to numerator and denominator.
    pub fn rename<F: Fn(Var) -> Var + Copy>(&self, f: F) -> Result<Self, PolyError> {
        let num = self.num.rename(f);
        if let Some(fs) = self.den_factors() {
            let mut fp = FactorPowers::new();
            for (g, k) in fs {
                match g.rename(f) {
                    None => return Err(PolyError::DivisionByZero),
                    Some((h, neg)) => {
                        fp.push(h, k as i32);
                        if neg && k % 2 == 1 {
                            fp.flip();
                        }
                    }
                }
            }
            let den: Vec<(Factor, u32)> = fp.powers.iter().map(|(&g, &k)| (g, k as u32)).collect();
            let num = num.scale(&fp.sign());
            return Ok(Self::from_factored(num, &den));
        }
        Self::new(num, self.den.rename(f))
    }

    /// Sets the selected variables to zero.
    pub fn kill_vars<F: Fn(Var) -> bool + Copy>(&self, zero: F) -> Result<Self, PolyError> {
        let num = self
            .num
            .eval_partial(|v| if zero(v) { Some(S::zero()) } else { None });
        if let Some(fs) = self.den_factors() {
            let mut fp = FactorPowers::new();
            for (g, k) in fs {
                match g.kill(zero) {
                    FactorImage::Zero => return Err(PolyError::DivisionByZero),
                    FactorImage::Factor(h, neg) => {
                        fp.push(h, k as i32);
                        if neg && k % 2 == 1 {
                            fp.flip();
                        }
                    }
                }
            }
            let den: Vec<(Factor, u32)> = fp.powers.iter().map(|(&g, &k)| (g, k as u32)).collect();
            return Ok(Self::from_factored(num.scale(&fp.sign()), &den));
        }
        let den = self
            .den
            .eval_partial(|v| if zero(v) { Some(S::zero()) } else { None });
        Self::new(num, den)
    }

    /// Numeric evaluation. Errors if the denominator vanishes.
    pub fn eval<F: Fn(Var) -> S + Copy>(&self, val: F) -> Result<S, PolyError> {
        let d = self.den.eval(val);
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(self.num.eval(val) / d)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn has_negative_u(&self) -> bool {
        self.num
            .terms()
            .iter()
            .any(|(m, _)| m.iter().any(|(v, e)| v.is_u() && e < 0))
    }

    pub fn has_positive_u(&self) -> bool {
        self.num
            .terms()
            .iter()
            .any(|(m, _)| m.iter().any(|(v, e)| v.is_u() && e > 0))
    }
}

/// Divides `num` by each factor as often as possible, up to its
/// multiplicity. Returns the quotient and the factors left over.
/// Sum of `poly * powers` over the least common denominator of the parts,
/// reduced by trial division: the numerator and the remaining factors.
fn sum_over_common<S: Scalar>(parts: Vec<(MPoly<S>, &FactorPowers)>) -> (MPoly<S>, Vec<(Factor, u32)>) {
    let mut need: BTreeMap<Factor, i32> = BTreeMap::new();
    for (_, fp) in &parts {
        for (&f, &k) in &fp.powers {
            if k < 0 {
                let e = need.entry(f).or_insert(0);
                *e = (*e).max(-k);
            }
        }
    }
    let mut num = MPoly::zero();
    for (p, fp) in parts {
        if p.is_zero() {
            continue;
        }
        let mut cof: Vec<(Factor, u32)> = Vec::new();
        for (&f, &d) in &need {
            let k = fp.powers.get(&f).copied().unwrap_or(0) + d;
            if k > 0 {
                cof.push((f, k as u32));
            }
        }
        for (&f, &k) in &fp.powers {
            if k > 0 && !need.contains_key(&f) {
                cof.push((f, k as u32));
            }
        }
        num = num.add(&p.mul(&expand(&cof)).scale(&fp.sign()));
    }
    if num.is_zero() {
        return (num, Vec::new());
    }
    let den: Vec<(Factor, u32)> = need.into_iter().map(|(f, k)| (f, k as u32)).collect();
    trial_divide(num, &den)
}

fn trial_divide<S: Scalar>(mut num: MPoly<S>, factors: &[(Factor, u32)]) -> (MPoly<S>, Vec<(Factor, u32)>) {
    let mut rem = Vec::with_capacity(factors.len());
    for &(f, k) in factors {
        let mut left = k;
        while left > 0 {
            match f.divide(&num) {
                Some(q) => {
                    num = q;
                    left -= 1;
                }
                None => break,
            }
        }
        if left > 0 {
            rem.push((f, left));
        }
    }
    (num, rem)
}

impl<S: Scalar> fmt::Display for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<S: Scalar> From<MPoly<S>> for RatFunc<S> {
    fn from(p: MPoly<S>) -> Self {
        RatFunc::from_poly(p)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr<&RatFunc<S>> for &RatFunc<S> {
            type Output = RatFunc<S>;
            fn $m(self, rhs: &RatFunc<S>) -> RatFunc<S> {
                RatFunc::$m(self, rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl<S: Scalar> Neg for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn neg(self) -> RatFunc<S> {
        RatFunc::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Frac, Poly};

    fn w(r: usize) -> Poly {
        Poly::var(Var::w(0, r))
    }
    fn u(r: usize) -> Poly {
        Poly::var(Var::u(0, r))
    }

    #[test]
    fn add_over_opposite_denominators() {
        let a = Frac::new(u(1), &w(1) - &w(2)).unwrap();
        let b = Frac::new(u(2), &w(2) - &w(1)).unwrap();
        let s = &a + &b;
        assert_eq!(s.num(), &(&u(1) - &u(2)));
        assert_eq!(s.den(), &(&w(1) - &w(2)));
        assert_eq!(s.to_string(), "(u[0,1] - u[0,2])/(w[0,1] - w[0,2])");
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let f = Frac::new(&u(1) * &w(3), &w(1) - &w(2)).unwrap();
        assert_eq!(&f + &Frac::zero(), f);
        let g = Frac::new(&(&w(1) - &w(2)) * &u(1), &w(1) - &w(2)).unwrap();
        assert_eq!(g, Frac::from_poly(u(1)));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Frac::new(u(1), Poly::zero()), Err(PolyError::DivisionByZero));
        assert!(Frac::one().div(&Frac::zero()).is_err());
    }

    #[test]
    fn laurent_units_move_to_numerator() {
        let f = Frac::new(w(1), &u(1) * &w(1)).unwrap();
        assert_eq!(f.den(), &Poly::one());
        assert_eq!(f.num().to_string(), "u[0,1]^-1");
        let g = Frac::new(Poly::from_int(2), w(1).scale(&crate::Rational::new(4.into(), 3.into()))).unwrap();
        assert_eq!(g.to_string(), "(3/2)/(w[0,1])");
    }

    #[test]
    fn fast_path_matches_gcd_path() {
        let num = &(&(&w(1) - &w(3)) * &(&w(2) + &u(1))) * &w(2);
        let den = &(&(&w(1) - &w(3)) * &(&w(3) - &w(2))) * &w(2).pow(2);
        let a = Frac::new(num.clone(), den.clone()).unwrap();
        let b = Frac::new_with_gcd(num, den).unwrap();
        assert_eq!(a, b);
        assert!(a.den().leading_coeff() > crate::Rational::from_integer(0.into()));
    }

    #[test]
    fn rename_and_kill() {
        let f = Frac::new(&u(1) - &u(2), &w(1) - &w(2)).unwrap();
        let swapped = f
            .rename(|v| match v {
                Var::W { vertex: 0, index: 1 } => Var::w(0, 2),
                Var::W { vertex: 0, index: 2 } => Var::w(0, 1),
                Var::U { vertex: 0, index: 1 } => Var::u(0, 2),
                Var::U { vertex: 0, index: 2 } => Var::u(0, 1),
                v => v,
            })
            .unwrap();
        assert_eq!(swapped, f);
        let k = f.kill_vars(|v| v == Var::w(0, 2)).unwrap();
        assert_eq!(k, Frac::new(&u(1) - &u(2), w(1)).unwrap());
    }
}
