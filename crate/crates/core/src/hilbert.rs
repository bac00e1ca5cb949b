//! The monopole formula: `2Delta` of coweights, stabilizer Poincare series,
//! truncated Hilbert series, operator degrees and the good/ugly/bad
//! classification.
//!
//! Degrees are cohomological and kept doubled: the exponent of `t` is `2Delta`
//! plus twice the polynomial degree of a dressing.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::defect::DefectSplit;
use crate::gklo::GkloContext;
use crate::km::{quiver_matter, Coweight, GaugeGroup};
use crate::quiver::{two_delta_minuscule, QuiverError};
use crate::series::TruncSeries;

/// Largest number of dominant coweights the enumerator will visit.
pub const ENUMERATION_LIMIT: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("theory is bad: 2Delta = {min_degree} at m = {witness:?}")]
    Bad { min_degree: i64, witness: Vec<i64> },
    #[error("coweight shape {got:?} does not match v = {v:?}")]
    Shape { got: Vec<usize>, v: Vec<i64> },
    #[error("enumeration needs more than {limit} coweights (shell bound {shells})")]
    Resource { limit: u64, shells: i64 },
    #[error("lower bound 2Delta >= c |gamma| fails at {0:?}")]
    Certification(Vec<Vec<i64>>),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

impl Coweight {
    /// Weakly decreasing at every vertex.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|row| row.windows(2).all(|p| p[0] >= p[1]))
    }

    pub fn abs_sum(&self) -> i64 {
        self.0.iter().flatten().map(|x| x.abs()).sum()
    }
}

fn check_shape(ctx: &GkloContext, gamma: &Coweight) -> Result<(), HilbertError> {
    let v = &ctx.dims().v;
    let got: Vec<usize> = gamma.0.iter().map(Vec::len).collect();
    if got.len() != v.len() || got.iter().zip(v).any(|(&a, &b)| a as i64 != b) {
        return Err(HilbertError::Shape { got, v: v.clone() });
    }
    Ok(())
}

/// `2Delta(gamma)`: minus the roots, plus framing and edge weights, each
/// weighted by the absolute value of its pairing with `gamma`.
pub fn two_delta_general(ctx: &GkloContext, gamma: &Coweight) -> Result<i64, HilbertError> {
    check_shape(ctx, gamma)?;
    let g = &gamma.0;
    let mut total = 0;
    for (i, row) in g.iter().enumerate() {
        for r in 0..row.len() {
            for s in r + 1..row.len() {
                total -= 2 * (row[r] - row[s]).abs();
            }
        }
        total += ctx.w(i) * row.iter().map(|x| x.abs()).sum::<i64>();
    }
    for &(s, t) in ctx.quiver().edges() {
        for a in &g[s] {
            for b in &g[t] {
                total += (b - a).abs();
            }
        }
    }
    Ok(total)
}

/// `prod over blocks of equal entries of prod_{d=1..k} 1/(1 - t^(2d))`.
pub fn stabilizer_poincare(gamma: &Coweight, order: usize) -> TruncSeries {
    let mut out = TruncSeries::one(order);
    for row in &gamma.0 {
        let mut sorted = row.clone();
        sorted.sort_unstable();
        for run in sorted.chunk_by(|a, b| a == b) {
            for d in 1..=run.len() {
                out = out.mul(&TruncSeries::geometric(order, 2 * d));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryClass {
    Good,
    Ugly,
    Bad,
}

impl TheoryClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoryClass::Good => "good",
            TheoryClass::Ugly => "ugly",
            TheoryClass::Bad => "bad",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: TheoryClass,
    /// Minimum of `2Delta(w_m)` over nonzero `0 <= m <= v`; `None` when `v = 0`.
    pub min_degree: Option<i64>,
    pub witness: Option<Vec<i64>>,
    /// Good theories have a Poisson augmentation.
    pub poisson_augmentation: bool,
}

fn nonzero_ms(v: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &vi in v {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=vi).map(move |k| {
                    let mut m = m.clone();
                    m.push(k);
                    m
                })
            })
            .collect();
    }
    out.retain(|m| m.iter().any(|&x| x != 0));
    out
}

/// Minimum of `2Delta` over the nonzero minuscule coweights; the
/// lexicographically least `m` wins ties.
pub fn classify_theory(ctx: &GkloContext) -> Result<Classification, HilbertError> {
    let mut best: Option<(i64, Vec<i64>)> = None;
    for m in nonzero_ms(&ctx.dims().v) {
        let d = two_delta_minuscule(ctx.dims(), ctx.cartan(), &m)?;
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, m));
        }
    }
    let class = match best.as_ref().map(|b| b.0) {
        None => TheoryClass::Good,
        Some(d) if d >= 2 => TheoryClass::Good,
        Some(1) => TheoryClass::Ugly,
        Some(_) => TheoryClass::Bad,
    };
    Ok(Classification {
        class,
        min_degree: best.as_ref().map(|b| b.0),
        witness: best.map(|b| b.1),
        poisson_augmentation: class == TheoryClass::Good,
    })
}

/// `2Delta(w_m) + dressing_degree`, with the dressing degree already doubled.
pub fn fmo_degree(ctx: &GkloContext, m: &[i64], dressing_degree: i64) -> Result<i64, HilbertError> {
    Ok(two_delta_minuscule(ctx.dims(), ctx.cartan(), m)? + dressing_degree)
}

/// Slope `c = min 2Delta(w_m) / |m|` as a reduced fraction `(num, den)`.
/// Every dominant `gamma` is a sum of Weyl conjugates of `+-w_m` taken from
/// its nested level sets, all lying in one chamber of the arrangement on
/// which `2Delta` is linear, so `2Delta(gamma) >= c |gamma|`.
pub fn certified_slope(ctx: &GkloContext) -> Result<Option<(i64, i64)>, HilbertError> {
    let mut best: Option<(i64, i64)> = None;
    for m in nonzero_ms(&ctx.dims().v) {
        let d = two_delta_minuscule(ctx.dims(), ctx.cartan(), &m)?;
        let size: i64 = m.iter().sum();
        if best.is_none_or(|(n, q)| d * q < n * size) {
            best = Some((d, size));
        }
    }
    Ok(best.map(|(n, q)| {
        let g = num_integer::gcd(n, q).max(1);
        (n / g, q / g)
    }))
}

fn check_not_bad(ctx: &GkloContext) -> Result<Classification, HilbertError> {
    let c = classify_theory(ctx)?;
    if c.class == TheoryClass::Bad {
        return Err(HilbertError::Bad {
            min_degree: c.min_degree.unwrap_or(0),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    Ok(c)
}

/// Weakly decreasing tuples of length `len` with entries in `[-bound, bound]`
/// and `sum |x| <= budget`, with their absolute sums.
fn decreasing_tuples(len: usize, bound: i64, budget: i64) -> Vec<(Vec<i64>, i64)> {
    fn go(len: usize, bound: i64, budget: i64, upper: i64, acc: &mut Vec<i64>, out: &mut Vec<(Vec<i64>, i64)>, used: i64) {
        if acc.len() == len {
            out.push((acc.clone(), used));
            return;
        }
        let room = budget - used;
        for x in (-bound.min(room)..=upper.min(room)).rev() {
            acc.push(x);
            go(len, bound, budget, x, acc, out, used + x.abs());
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(len, bound, budget, bound, &mut Vec::new(), &mut out, 0);
    out
}

/// The monopole formula truncated at `order`. Dominant coweights are taken
/// in shells `|gamma| <= order / c` with `c` from [`certified_slope`]; each
/// visited coweight is checked against the bound. Entries are also bounded
/// by `order / min 2Delta(w_m)`, the number of level sets a coweight of
/// degree at most `order` can have.
pub fn hilbert_series(ctx: &GkloContext, order: usize) -> Result<TruncSeries, HilbertError> {
    let class = check_not_bad(ctx)?;
    let shells = match certified_slope(ctx)? {
        None => 0,
        Some((num, den)) => order as i64 * den / num,
    };
    let bound = class.min_degree.map_or(0, |d| order as i64 / d);
    let per_vertex: Vec<Vec<(Vec<i64>, i64)>> = ctx
        .dims()
        .v
        .iter()
        .map(|&vi| decreasing_tuples(vi as usize, bound, shells))
        .collect();
    let count: u64 = per_vertex
        .iter()
        .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
        .unwrap_or(u64::MAX);
    if count > ENUMERATION_LIMIT {
        return Err(HilbertError::Resource {
            limit: ENUMERATION_LIMIT,
            shells,
        });
    }
    let slope = certified_slope(ctx)?;
    let visit = |gamma: &Coweight, size: i64, acc: &mut TruncSeries| -> Result<(), HilbertError> {
        let d = two_delta_general(ctx, gamma)?;
        if let Some((num, den)) = slope {
            if d * den < num * size {
                return Err(HilbertError::Certification(gamma.0.clone()));
            }
        }
        if d >= 0 && d as usize <= order {
            let d = d as usize;
            acc.add_assign(&stabilizer_poincare(gamma, order - d).shift_into(order, d));
        }
        Ok(())
    };
    fn walk<F>(
        lists: &[Vec<(Vec<i64>, i64)>],
        gamma: &mut Coweight,
        depth: usize,
        used: i64,
        shells: i64,
        acc: &mut TruncSeries,
        visit: &F,
    ) -> Result<(), HilbertError>
    where
        F: Fn(&Coweight, i64, &mut TruncSeries) -> Result<(), HilbertError>,
    {
        if depth == lists.len() {
            return visit(gamma, used, acc);
        }
        for (t, s) in &lists[depth] {
            if used + s <= shells {
                gamma.0[depth].clone_from(t);
                walk(lists, gamma, depth + 1, used + s, shells, acc, visit)?;
            }
        }
        Ok(())
    }
    let dims: Vec<usize> = ctx.dims().v.iter().map(|&x| x as usize).collect();
    if per_vertex.is_empty() {
        return Ok(TruncSeries::one(order));
    }
    let parts: Result<Vec<TruncSeries>, HilbertError> = per_vertex[0]
        .par_iter()
        .map(|(t, s)| {
            let mut acc = TruncSeries::zero(order);
            let mut gamma = Coweight::zero(&dims);
            gamma.0[0].clone_from(t);
            walk(&per_vertex, &mut gamma, 1, *s, shells, &mut acc, &visit)?;
            Ok(acc)
        })
        .collect();
    let mut out = TruncSeries::zero(order);
    for p in parts? {
        out.add_assign(&p);
    }
    Ok(out)
}

impl TruncSeries {
    /// `t^k` times `self`, reinterpreted at the larger order.
    fn shift_into(&self, order: usize, k: usize) -> TruncSeries {
        let mut coeffs = vec![0; order + 1];
        for (j, &c) in self.coeffs().iter().enumerate() {
            if j + k <= order {
                coeffs[j + k] = c;
            }
        }
        TruncSeries::from_coeffs(order, &coeffs)
    }
}

/// Number of partitions of `n` into at most `k` parts, for `n <= order`.
fn partitions_at_most(k: usize, order: usize) -> Vec<i64> {
    // p(n, k) = p(n, k - 1) + p(n - k, k)
    let mut p = vec![0i64; order + 1];
    p[0] = 1;
    for part in 1..=k {
        for n in part..=order {
            p[n] += p[n - part];
        }
    }
    p
}

/// Independent evaluation of the monopole formula: every dominant coweight
/// with entries bounded by `order / min 2Delta(w_m)`, with `2Delta` computed
/// from the root and matter weights and the stabilizer factor from
/// partition counts.
pub fn hilbert_series_bruteforce(ctx: &GkloContext, order: usize) -> Result<TruncSeries, HilbertError> {
    let class = check_not_bad(ctx)?;
    let bound = class.min_degree.map_or(0, |d| order as i64 / d);
    let v = ctx.dims().v.clone();
    let group = GaugeGroup::quiver(&v);
    let split = DefectSplit::new(v.clone(), v.clone()).expect("v' = v is a valid split");
    let matter = quiver_matter(ctx, &split);
    let roots = group.roots();
    let naive = |gamma: &Coweight| -> i64 {
        let mut d = 0;
        for &(a, b) in &roots {
            d -= (gamma.at(a) - gamma.at(b)).abs();
        }
        for s in &matter {
            for (x, k) in &s.weights {
                d += x.pair(gamma).abs() * k;
            }
        }
        d
    };
    let mut rows: Vec<Vec<Vec<i64>>> = vec![vec![]];
    for &vi in &v {
        let mut tuples: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..vi {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    let top = t.last().copied().unwrap_or(bound);
                    (-bound..=top).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        rows = rows
            .into_iter()
            .flat_map(|r| {
                tuples.iter().map(move |t| {
                    let mut r = r.clone();
                    r.push(t.clone());
                    r
                })
            })
            .collect();
    }
    let mut out = TruncSeries::zero(order);
    for r in rows {
        let gamma = Coweight(r);
        let d = naive(&gamma);
        if d < 0 || d as usize > order {
            continue;
        }
        let mut term = TruncSeries::one(order);
        for row in &gamma.0 {
            let mut runs: Vec<usize> = Vec::new();
            for (k, x) in row.iter().enumerate() {
                if k > 0 && row[k - 1] == *x {
                    *runs.last_mut().unwrap() += 1;
                } else {
                    runs.push(1);
                }
            }
            for len in runs {
                let p = partitions_at_most(len, order / 2);
                let mut coeffs = vec![0; order + 1];
                for (n, c) in p.into_iter().enumerate() {
                    coeffs[2 * n] = c;
                }
                term = term.mul(&TruncSeries::from_coeffs(order, &coeffs));
            }
        }
        out.add_assign(&term.shift(d as usize));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DimData, Quiver};

    fn ctx(q: Quiver, w: &[i64], v: &[i64]) -> GkloContext {
        GkloContext::new(q, DimData::new(w.to_vec(), v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn two_delta_examples() {
        let a1 = ctx(Quiver::a1(), &[2], &[1]);
        for k in -4..=4 {
            assert_eq!(two_delta_general(&a1, &Coweight(vec![vec![k]])).unwrap(), 2 * k.abs());
        }
        let a2 = ctx(Quiver::a2(), &[1, 2], &[3, 2]);
        assert_eq!(two_delta_general(&a2, &Coweight::zero(&[3, 2])).unwrap(), 0);
        for m in nonzero_ms(&[3, 2]) {
            for sign in [crate::gklo::Sign::Plus, crate::gklo::Sign::Minus] {
                let g = Coweight::fundamental(&[3, 2], &m, sign);
                assert_eq!(
                    two_delta_general(&a2, &g).unwrap(),
                    two_delta_minuscule(a2.dims(), a2.cartan(), &m).unwrap()
                );
            }
        }
        assert!(two_delta_general(&a2, &Coweight(vec![vec![1]])).is_err());
    }

    #[test]
    fn poincare_examples() {
        let s = stabilizer_poincare(&Coweight(vec![vec![1, 0]]), 6);
        assert_eq!(s.coeffs(), &[1, 0, 2, 0, 3, 0, 4]);
        let s = stabilizer_poincare(&Coweight(vec![vec![1, 1]]), 6);
        assert_eq!(s.coeffs(), &[1, 0, 1, 0, 2, 0, 2]);
        let s = stabilizer_poincare(&Coweight(vec![vec![3, 1], vec![0]]), 4);
        assert_eq!(s.coeffs(), &[1, 0, 3, 0, 6]);
    }

    #[test]
    fn classification_examples() {
        let c = classify_theory(&ctx(Quiver::a1(), &[2], &[1])).unwrap();
        assert_eq!((c.class, c.min_degree), (TheoryClass::Good, Some(2)));
        let c = classify_theory(&ctx(Quiver::affine_sl2(), &[1, 0], &[1, 1])).unwrap();
        assert_eq!(c.class, TheoryClass::Ugly);
        assert_eq!(c.witness, Some(vec![1, 1]));
        let c = classify_theory(&ctx(Quiver::a1(), &[2], &[2])).unwrap();
        assert_eq!((c.class, c.min_degree), (TheoryClass::Bad, Some(0)));
        let c = classify_theory(&ctx(Quiver::a2(), &[0, 0], &[0, 0])).unwrap();
        assert_eq!((c.class, c.min_degree), (TheoryClass::Good, None));
    }

    #[test]
    fn series_examples() {
        let a1 = ctx(Quiver::a1(), &[2], &[1]);
        let h = hilbert_series(&a1, 8).unwrap();
        assert_eq!(h.coeffs(), &[1, 0, 3, 0, 5, 0, 7, 0, 9]);
        assert_eq!(hilbert_series_bruteforce(&a1, 8).unwrap(), h);
        let empty = ctx(Quiver::a2(), &[1, 1], &[0, 0]);
        assert_eq!(hilbert_series(&empty, 6).unwrap(), TruncSeries::one(6));
        let bad = ctx(Quiver::a1(), &[2], &[2]);
        assert!(matches!(hilbert_series(&bad, 6), Err(HilbertError::Bad { .. })));
        let a2 = ctx(Quiver::a2(), &[1, 1], &[1, 1]);
        assert_eq!(hilbert_series(&a2, 6).unwrap(), hilbert_series_bruteforce(&a2, 6).unwrap());
        let ugly = ctx(Quiver::affine_sl2(), &[1, 0], &[1, 1]);
        let h = hilbert_series(&ugly, 10).unwrap();
        assert_eq!(h, hilbert_series_bruteforce(&ugly, 10).unwrap());
        assert!(h.coeff(1) > 0);
    }

    #[test]
    fn degrees() {
        let a1 = ctx(Quiver::a1(), &[2], &[1]);
        assert_eq!(fmo_degree(&a1, &[0], 0).unwrap(), 0);
        assert_eq!(fmo_degree(&a1, &[1], 0).unwrap(), 2);
        assert_eq!(fmo_degree(&a1, &[1], 4).unwrap(), 6);
        assert_eq!(hilbert_series(&a1, 2).unwrap().coeff(2), 3);
    }
}
