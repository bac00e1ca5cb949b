use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A ring variable: `w[i,r]`, `u[i,r]` or the spectral parameter `z`.
///
/// The derived order is (kind, vertex, index) with kinds ordered W < U < Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    W { vertex: u32, index: u32 },
    U { vertex: u32, index: u32 },
    Z,
}

impl Var {
    pub fn w(vertex: usize, index: usize) -> Var {
        Var::W {
            vertex: vertex as u32,
            index: index as u32,
        }
    }

    pub fn u(vertex: usize, index: usize) -> Var {
        Var::U {
            vertex: vertex as u32,
            index: index as u32,
        }
    }

    pub fn is_u(&self) -> bool {
        matches!(self, Var::U { .. })
    }

    pub fn is_w(&self) -> bool {
        matches!(self, Var::W { .. })
    }

    /// `(vertex, index)` for W and U variables.
    pub fn site(&self) -> Option<(usize, usize)> {
        match *self {
            Var::W { vertex, index } | Var::U { vertex, index } => {
                Some((vertex as usize, index as usize))
            }
            Var::Z => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::W { vertex, index } => write!(f, "w[{vertex},{index}]"),
            Var::U { vertex, index } => write!(f, "u[{vertex},{index}]"),
            Var::Z => write!(f, "z"),
        }
    }
}

/// Sparse exponent vector, sorted by variable, zero exponents omitted.
/// Exponents may be negative (only U variables are ever given negative
/// exponents by this crate).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        let mut m = SmallVec::new();
        if e != 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    /// Builds a monomial from arbitrary (possibly repeated, unsorted) factors.
    pub fn from_factors<I: IntoIterator<Item = (Var, i32)>>(factors: I) -> Self {
        let mut v: SmallVec<[(Var, i32); 4]> = factors.into_iter().collect();
        v.sort_by_key(|&(x, _)| x);
        let mut out: SmallVec<[(Var, i32); 4]> = SmallVec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some((y, f)) if *y == x => *f += e,
                _ => out.push((x, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().copied()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        match self.0.binary_search_by_key(&v, |&(x, _)| x) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&(_, e)| e < 0)
    }

    fn merge(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, sign * b[j].1));
                j += 1;
            } else {
                let e = a[i].1 + sign * b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, 1)
    }

    /// Exponent-wise difference; may produce negative exponents.
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, -1)
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// True if `other / self` has only nonnegative exponents.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// Exponent-wise minimum, treating absent variables as exponent zero.
    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                if a[i].1 < 0 {
                    out.push(a[i]);
                }
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                if b[j].1 < 0 {
                    out.push(b[j]);
                }
                j += 1;
            } else {
                let e = a[i].1.min(b[j].1);
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    /// Keeps only the factors whose variable satisfies `keep`.
    pub fn restrict<F: Fn(Var) -> bool>(&self, keep: F) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(v, _)| keep(v)).collect())
    }

    /// Renames variables; the result is re-sorted.
    pub fn rename<F: Fn(Var) -> Var>(&self, f: F) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then the exponent of
    /// the smallest variable decides.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, f))) => return 0.cmp(&f),
                (Some(&(x, e)), Some(&(y, f))) => {
                    if x < y {
                        return e.cmp(&0);
                    } else if y < x {
                        return 0.cmp(&f);
                    } else if e != f {
                        return e.cmp(&f);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(i: usize, r: usize) -> Var {
        Var::w(i, r)
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::var(w(0, 1));
        let b = Monomial::var(w(0, 2));
        let c = Monomial::from_factors([(w(0, 2), 2)]);
        // w[0,1] > w[0,2] (smaller variable dominates), degree beats lex
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::var(Var::Z) < a);
        assert!(Monomial::one() < b);
    }

    #[test]
    fn mul_div_cancel() {
        let a = Monomial::from_factors([(w(0, 1), 2), (Var::u(0, 1), -1)]);
        let b = Monomial::from_factors([(Var::u(0, 1), 1), (w(0, 1), 1)]);
        let p = a.mul(&b);
        assert_eq!(p, Monomial::from_factors([(w(0, 1), 3)]));
        assert_eq!(p.div(&b), a);
        assert_eq!(a.meet(&b), Monomial::from_factors([(w(0, 1), 1), (Var::u(0, 1), -1)]));
    }
}
