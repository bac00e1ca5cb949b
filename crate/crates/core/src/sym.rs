//! The partially symmetric dressing ring: polynomials in `w[i,r]` (and the
//! parameter `z`) invariant under permutations of `w[i,1..m_i]` and of
//! `w[i,m_i+1..v_i]` separately at each vertex.

use std::fmt;

use thiserror::Error;

use crate::poly::{Monomial, Var};
use crate::{Frac, Poly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("shape mismatch: m has {m} entries, v has {v}")]
    Shape { m: usize, v: usize },
    #[error("m[{vertex}] = {m} is outside 0..={v}")]
    MOutOfRange { vertex: usize, m: i64, v: i64 },
    #[error("variable {0} is not allowed in a dressing")]
    ForbiddenVariable(Var),
    #[error("not invariant under swapping w[{vertex},{r}] and w[{vertex},{s}]")]
    NotInvariant { vertex: usize, r: usize, s: usize },
    #[error("m is not below v' at vertex {vertex}")]
    NotBelow { vertex: usize },
    #[error("vertex {vertex}: expected {expected} indices, got {got:?}")]
    Cardinality {
        vertex: usize,
        expected: usize,
        got: Vec<usize>,
    },
}

/// Element of the dressing ring attached to `(m, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSymPoly {
    value: Poly,
    m: Vec<i64>,
    v: Vec<i64>,
}

fn swap_var(vertex: usize, r: usize, s: usize) -> impl Fn(Var) -> Var + Copy {
    move |x| match x {
        Var::W { vertex: i, index } if i as usize == vertex => {
            let k = index as usize;
            if k == r {
                Var::w(vertex, s)
            } else if k == s {
                Var::w(vertex, r)
            } else {
                x
            }
        }
        _ => x,
    }
}

impl PartialSymPoly {
    /// Validates shape, variables and invariance on adjacent transpositions.
    pub fn new(value: Poly, m: Vec<i64>, v: Vec<i64>) -> Result<Self, SymError> {
        if m.len() != v.len() {
            return Err(SymError::Shape {
                m: m.len(),
                v: v.len(),
            });
        }
        for (i, (&mi, &vi)) in m.iter().zip(&v).enumerate() {
            if mi < 0 || mi > vi {
                return Err(SymError::MOutOfRange {
                    vertex: i,
                    m: mi,
                    v: vi,
                });
            }
        }
        for x in value.vars() {
            let ok = match x {
                Var::Z => true,
                Var::W { vertex, index } => {
                    (vertex as usize) < v.len() && (index as i64) <= v[vertex as usize]
                }
                Var::U { .. } => false,
            };
            if !ok {
                return Err(SymError::ForbiddenVariable(x));
            }
        }
        let f = Self { value, m, v };
        f.check_invariance()?;
        Ok(f)
    }

    pub fn one(m: Vec<i64>, v: Vec<i64>) -> Result<Self, SymError> {
        Self::new(Poly::one(), m, v)
    }

    fn check_invariance(&self) -> Result<(), SymError> {
        for (i, (&mi, &vi)) in self.m.iter().zip(&self.v).enumerate() {
            let (mi, vi) = (mi as usize, vi as usize);
            for r in 1..vi {
                if r == mi {
                    continue;
                }
                let swapped = self.value.rename(swap_var(i, r, r + 1));
                if swapped != self.value {
                    return Err(SymError::NotInvariant {
                        vertex: i,
                        r,
                        s: r + 1,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    /// Polynomial degree in the `w` variables.
    pub fn w_degree(&self) -> i64 {
        self.value
            .terms()
            .iter()
            .map(|(mono, _)| {
                mono.iter()
                    .filter(|(x, _)| x.is_w())
                    .map(|(_, e)| e as i64)
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Product with a polynomial symmetric under all of `S_v` (the caller
    /// guarantees symmetry; the product is revalidated).
    pub fn mul_poly(&self, g: &Poly) -> Result<Self, SymError> {
        Self::new(self.value.mul(g), self.m.clone(), self.v.clone())
    }

    /// `sigma(f)` for a permutation sending `1..m_i` onto `gamma[i]` in
    /// increasing order and the rest onto the complement in increasing order.
    /// `gamma` holds 1-based indices.
    pub fn restrict_to_gamma(&self, gamma: &[Vec<usize>]) -> Result<Poly, SymError> {
        if gamma.len() != self.v.len() {
            return Err(SymError::Shape {
                m: gamma.len(),
                v: self.v.len(),
            });
        }
        let mut perms: Vec<Vec<usize>> = Vec::with_capacity(gamma.len());
        for (i, g) in gamma.iter().enumerate() {
            let vi = self.v[i] as usize;
            let mut sorted = g.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != self.m[i] as usize
                || g.len() != sorted.len()
                || sorted.iter().any(|&r| r == 0 || r > vi)
            {
                return Err(SymError::Cardinality {
                    vertex: i,
                    expected: self.m[i] as usize,
                    got: g.clone(),
                });
            }
            // perm[k-1] is the image of index k
            let mut perm = sorted.clone();
            perm.extend((1..=vi).filter(|r| !sorted.contains(r)));
            perms.push(perm);
        }
        Ok(self.value.rename(|x| match x {
            Var::W { vertex, index } => {
                Var::w(vertex as usize, perms[vertex as usize][index as usize - 1])
            }
            _ => x,
        }))
    }

    /// Sets `w[i,r]` to zero for `r > v'_i`, giving an element over `v'`.
    pub fn tilde(&self, vprime: &[i64]) -> Result<Self, SymError> {
        self.check_below(vprime)?;
        let value = self.value.eval_partial(|x| match x {
            Var::W { vertex, index } if index as i64 > vprime[vertex as usize] => {
                Some(Rational::from_integer(0.into()))
            }
            _ => None,
        });
        Self::new(value, self.m.clone(), vprime.to_vec())
    }

    fn check_below(&self, vprime: &[i64]) -> Result<(), SymError> {
        if vprime.len() != self.v.len() {
            return Err(SymError::Shape {
                m: vprime.len(),
                v: self.v.len(),
            });
        }
        for (i, ((&mi, &vp), &vi)) in self.m.iter().zip(vprime).zip(&self.v).enumerate() {
            if vp > vi || vp < 0 {
                return Err(SymError::Shape {
                    m: vprime.len(),
                    v: self.v.len(),
                });
            }
            if mi > vp {
                return Err(SymError::NotBelow { vertex: i });
            }
        }
        Ok(())
    }

    /// Splits `f` as a sum of `f1 * f2` with `f1` over `v'` and `f2` a
    /// monomial in the tail variables `w[i,r]`, `r > v'_i`, ordered by
    /// ascending tail monomial.
    pub fn sweedler(&self, vprime: &[i64]) -> Result<Vec<(PartialSymPoly, Poly)>, SymError> {
        self.check_below(vprime)?;
        let tail = |x: Var| match x {
            Var::W { vertex, index } => index as i64 > vprime[vertex as usize],
            _ => false,
        };
        let mut out = Vec::new();
        for (mono, head) in self.value.collect_by(tail).into_iter().rev() {
            let f1 = Self::new(head, self.m.clone(), vprime.to_vec())?;
            out.push((f1, Poly::term(mono, Rational::from_integer(1.into()))));
        }
        Ok(out)
    }

    /// Basis of the degree `<= max_degree` part (in `w`) made of products of
    /// monomial symmetric polynomials, one per block.
    pub fn monomial_basis(
        m: &[i64],
        v: &[i64],
        max_degree: u32,
    ) -> Result<Vec<PartialSymPoly>, SymError> {
        // blocks: (vertex, first index, size)
        let mut blocks = Vec::new();
        for (i, (&mi, &vi)) in m.iter().zip(v).enumerate() {
            if mi < 0 || mi > vi {
                return Err(SymError::MOutOfRange {
                    vertex: i,
                    m: mi,
                    v: vi,
                });
            }
            blocks.push((i, 1usize, mi as usize));
            blocks.push((i, mi as usize + 1, (vi - mi) as usize));
        }
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut choice = Vec::new();
            basis_rec(&blocks, d, &mut choice, &mut |parts: &[Vec<u32>]| {
                let mut p = Poly::one();
                for (&(i, start, size), lambda) in blocks.iter().zip(parts) {
                    p = p.mul(&monomial_symmetric(i, start, lambda, size));
                }
                out.push(p);
            });
        }
        out.into_iter()
            .map(|p| Self::new(p, m.to_vec(), v.to_vec()))
            .collect()
    }
}

/// Distributes total degree `d` over the blocks as partitions that fit.
fn basis_rec(
    blocks: &[(usize, usize, usize)],
    d: u32,
    choice: &mut Vec<Vec<u32>>,
    emit: &mut dyn FnMut(&[Vec<u32>]),
) {
    let k = choice.len();
    if k == blocks.len() {
        if d == 0 {
            emit(choice);
        }
        return;
    }
    let size = blocks[k].2;
    for part_deg in 0..=d {
        for lambda in partitions(part_deg, part_deg, size) {
            choice.push(lambda);
            basis_rec(blocks, d - part_deg, choice, emit);
            choice.pop();
        }
    }
}

/// Partitions of `n` with parts `<= max_part` and at most `len` parts, in
/// reverse lexicographic order.
fn partitions(n: u32, max_part: u32, len: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    if len == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max_part)).rev() {
        for mut rest in partitions(n - first, first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `m_lambda` in the variables `w[i,start..start+size]`.
fn monomial_symmetric(i: usize, start: usize, lambda: &[u32], size: usize) -> Poly {
    let mut exps: Vec<u32> = lambda.to_vec();
    exps.resize(size, 0);
    exps.sort_unstable();
    let mut out = Vec::new();
    loop {
        let mono = Monomial::from_factors(
            exps.iter()
                .enumerate()
                .map(|(k, &e)| (Var::w(i, start + k), e as i32)),
        );
        out.push((mono, Rational::from_integer(1.into())));
        if !next_permutation(&mut exps) {
            break;
        }
    }
    Poly::from_terms(out)
}

fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl fmt::Display for PartialSymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Whether `e` is fixed by every simultaneous swap of `(w[i,r], u[i,r])`
/// with `(w[i,r+1], u[i,r+1])`.
pub fn check_symmetric(e: &Frac, v: &[i64]) -> bool {
    for (i, &vi) in v.iter().enumerate() {
        for r in 1..vi.max(0) as usize {
            let s = r + 1;
            let swapped = e.rename(move |x| match x {
                Var::W { vertex, index } | Var::U { vertex, index } if vertex as usize == i => {
                    let k = index as usize;
                    let k = if k == r {
                        s
                    } else if k == s {
                        r
                    } else {
                        k
                    };
                    if x.is_w() {
                        Var::w(i, k)
                    } else {
                        Var::u(i, k)
                    }
                }
                _ => x,
            });
            match swapped {
                Ok(g) if &g == e => {}
                _ => return false,
            }
        }
    }
    true
}

/// All tuples of `m_i`-subsets of `1..=v_i`, lexicographic per vertex with
/// vertex 0 varying slowest.
pub fn gamma_tuples(m: &[i64], v: &[i64]) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for (&mi, &vi) in m.iter().zip(v) {
        let subsets = combinations(vi as usize, mi as usize);
        let mut next = Vec::with_capacity(out.len() * subsets.len());
        for prefix in &out {
            for s in &subsets {
                let mut t = prefix.clone();
                t.push(s.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// `k`-subsets of `1..=n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (1..=k).collect();
    loop {
        out.push(c.clone());
        let mut j = k;
        while j > 0 && c[j - 1] == n - k + j {
            j -= 1;
        }
        if j == 0 {
            return out;
        }
        c[j - 1] += 1;
        for t in j..k {
            c[t] = c[t - 1] + 1;
        }
    }
}
