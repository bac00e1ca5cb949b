//! Multivariate polynomial gcd over an exact field.
//!
//! Strategy: strip monomial content, drop variables private to one operand
//! by recursing on coefficients, then for a chosen main variable split off
//! contents and decide the primitive part. A random evaluation certifies
//! coprimality cheaply in the common case; otherwise a primitive
//! pseudo-remainder sequence finishes the job.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::monomial::Var;
use super::mpoly::MPoly;
use crate::scalar::Scalar;

/// Monic gcd (leading coefficient one). `gcd(0, 0) = 0`.
/// Both inputs must have nonnegative exponents.
pub fn gcd<S: Scalar>(a: &MPoly<S>, b: &MPoly<S>) -> MPoly<S> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.meet(&mb);
    let a = a.div_monomial(&ma);
    let b = b.div_monomial(&mb);
    gcd_no_monomial(&a, &b).mul_monomial(&mono).monic()
}

fn gcd_no_monomial<S: Scalar>(a: &MPoly<S>, b: &MPoly<S>) -> MPoly<S> {
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    let only_a: BTreeSet<Var> = va.difference(&vb).copied().collect();
    if !only_a.is_empty() {
        return gcd_with_coeffs(b, a, &only_a);
    }
    let only_b: BTreeSet<Var> = vb.difference(&va).copied().collect();
    if !only_b.is_empty() {
        return gcd_with_coeffs(a, b, &only_b);
    }
    if va.len() == 1 {
        let x = *va.iter().next().unwrap();
        return univariate_gcd(a, b, x);
    }
    // main variable: smallest combined degree keeps the PRS short
    let x = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v) + b.degree_in(v), v))
        .unwrap();
    multivariate_gcd(a, b, x)
}

/// gcd(p, q) where the variables in `private` occur only in `q`: it equals
/// the gcd of `p` with all coefficients of `q` viewed as a polynomial in the
/// private variables.
fn gcd_with_coeffs<S: Scalar>(p: &MPoly<S>, q: &MPoly<S>, private: &BTreeSet<Var>) -> MPoly<S> {
    let mut coeffs: Vec<MPoly<S>> = q
        .collect_by(|v| private.contains(&v))
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = p.clone();
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g
}

fn univariate_gcd<S: Scalar>(a: &MPoly<S>, b: &MPoly<S>, x: Var) -> MPoly<S> {
    let mut r0 = a.univariate(x);
    let mut r1 = b.univariate(x);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    let to_scalar = |v: Vec<MPoly<S>>| -> Vec<S> {
        v.into_iter().map(|c| c.as_constant().expect("univariate")).collect()
    };
    let mut f = to_scalar(r0);
    let mut g = to_scalar(r1);
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let r = uni_rem(&f, &g);
        f = g;
        g = r;
    }
    let lc = f.last().cloned().unwrap_or_else(S::one);
    let coeffs: Vec<MPoly<S>> = f
        .into_iter()
        .map(|c| MPoly::constant(c / lc.clone()))
        .collect();
    MPoly::from_univariate(x, &coeffs)
}

fn trim<S: Scalar>(v: &mut Vec<S>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn uni_rem<S: Scalar>(f: &[S], g: &[S]) -> Vec<S> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let inv = S::one() / g[dg].clone();
    while r.len() > dg {
        let k = r.len() - 1;
        let q = r[k].clone() * inv.clone();
        if !q.is_zero() {
            for (j, gj) in g.iter().enumerate() {
                let idx = k - dg + j;
                r[idx] = r[idx].clone() - q.clone() * gj.clone();
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// gcd of a list of polynomials, early exit at a constant.
fn content<S: Scalar>(coeffs: &[MPoly<S>]) -> MPoly<S> {
    let mut sorted: Vec<&MPoly<S>> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    sorted.sort_by_key(|c| c.len());
    let mut g = MPoly::zero();
    for c in sorted {
        g = gcd(&g, c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g
}

fn exact_div_all<S: Scalar>(coeffs: &[MPoly<S>], d: &MPoly<S>) -> Vec<MPoly<S>> {
    coeffs
        .iter()
        .map(|c| c.div_exact(d).expect("content divides coefficient"))
        .collect()
}

fn multivariate_gcd<S: Scalar>(a: &MPoly<S>, b: &MPoly<S>, x: Var) -> MPoly<S> {
    let ca = a.univariate(x);
    let cb = b.univariate(x);
    let cont_a = content(&ca);
    let cont_b = content(&cb);
    let cont_g = gcd(&cont_a, &cont_b);
    let pa_c = exact_div_all(&ca, &cont_a);
    let pb_c = exact_div_all(&cb, &cont_b);
    let pa = MPoly::from_univariate(x, &pa_c);
    let pb = MPoly::from_univariate(x, &pb_c);

    if pa_c.len() == 1 || pb_c.len() == 1 {
        // a primitive part of degree 0 in x is a unit
        return cont_g;
    }
    if certify_coprime(&pa_c, &pb_c) {
        return cont_g;
    }
    if pa_c.len() <= pb_c.len() && pb.div_exact(&pa).is_some() {
        return pa.mul(&cont_g).monic();
    }
    if pb_c.len() <= pa_c.len() && pa.div_exact(&pb).is_some() {
        return pb.mul(&cont_g).monic();
    }
    primitive_prs(pa_c, pb_c, x).mul(&cont_g).monic()
}

/// Evaluates every variable except the main one at a pseudo-random point
/// where both leading coefficients survive. If the images are coprime the
/// primitive parts are coprime.
fn certify_coprime<S: Scalar>(pa: &[MPoly<S>], pb: &[MPoly<S>]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_9c0d);
    for _ in 0..3 {
        let mut point: std::collections::HashMap<Var, S> = std::collections::HashMap::new();
        let mut value = |v: Var| -> S {
            point
                .entry(v)
                .or_insert_with(|| S::from_i64(rng.gen_range(-997..=997)))
                .clone()
        };
        let mut eval = |coeffs: &[MPoly<S>]| -> Vec<S> {
            coeffs
                .iter()
                .map(|c| {
                    let vars: Vec<Var> = c.vars().into_iter().collect();
                    let vals: Vec<(Var, S)> = vars.iter().map(|&v| (v, value(v))).collect();
                    c.eval(|v| {
                        vals.iter()
                            .find(|(w, _)| *w == v)
                            .map(|(_, x)| x.clone())
                            .unwrap()
                    })
                })
                .collect()
        };
        let ia = eval(pa);
        let ib = eval(pb);
        if ia.last().unwrap().is_zero() || ib.last().unwrap().is_zero() {
            continue;
        }
        let (mut f, mut g) = (ia, ib);
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        trim(&mut f);
        trim(&mut g);
        while !g.is_empty() {
            let r = uni_rem(&f, &g);
            f = g;
            g = r;
        }
        return f.len() == 1;
    }
    false
}

fn primitive_prs<S: Scalar>(pa: Vec<MPoly<S>>, pb: Vec<MPoly<S>>, x: Var) -> MPoly<S> {
    let (mut f, mut g) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
    loop {
        let r = pseudo_rem(&f, &g);
        if r.is_empty() {
            return MPoly::from_univariate(x, &g);
        }
        if r.len() == 1 {
            return MPoly::one();
        }
        let c = content(&r);
        let r = exact_div_all(&r, &c);
        f = g;
        g = r;
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn pseudo_rem<S: Scalar>(f: &[MPoly<S>], g: &[MPoly<S>]) -> Vec<MPoly<S>> {
    let dg = g.len() - 1;
    let lg = &g[dg];
    let mut r: Vec<MPoly<S>> = f.to_vec();
    while r.len() > dg && !r.is_empty() {
        let k = r.len() - 1;
        let lr = r[k].clone();
        for c in r.iter_mut() {
            *c = c.mul(lg);
        }
        for (j, gj) in g.iter().enumerate() {
            let idx = k - dg + j;
            r[idx] = r[idx].sub(&gj.mul(&lr));
        }
        debug_assert!(r[k].is_zero());
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Convenience: gcd together with the cofactors `a / g` and `b / g`.
pub fn gcd_cofactors<S: Scalar>(
    a: &MPoly<S>,
    b: &MPoly<S>,
) -> (MPoly<S>, MPoly<S>, MPoly<S>) {
    let g = gcd(a, b);
    if g.is_one() {
        return (g, a.clone(), b.clone());
    }
    let ca = a.div_exact(&g).expect("gcd divides");
    let cb = b.div_exact(&g).expect("gcd divides");
    (g, ca, cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn w(i: usize, r: usize) -> Poly {
        Poly::var(Var::w(i, r))
    }

    #[test]
    fn gcd_of_products() {
        let a = &w(0, 1) - &w(0, 2);
        let b = &w(0, 1) + &(&w(0, 3) * &w(1, 1));
        let c = &(&w(1, 1) * &w(1, 1)) - &Poly::from_int(3);
        let p = &(&a * &b) * &c;
        let q = &(&a * &c) * &(&w(0, 2) + &Poly::from_int(1));
        let g = gcd(&p, &q);
        assert_eq!(g, (&a * &c).monic());
    }

    #[test]
    fn coprime_and_monomial() {
        let a = &(&w(0, 1) * &w(0, 1)) * &(&w(0, 1) - &w(0, 2));
        let b = &w(0, 1) * &(&w(0, 1) + &w(0, 2));
        assert_eq!(gcd(&a, &b), w(0, 1));
        assert_eq!(gcd(&a, &Poly::zero()), a.monic());
    }

    #[test]
    fn univariate_euclid() {
        let x = w(0, 1);
        let one = Poly::one();
        let p = &(&x - &one) * &(&x + &Poly::from_int(2));
        let q = &(&x - &one) * &(&x - &Poly::from_int(5));
        assert_eq!(gcd(&p, &q), &x - &one);
    }

    #[test]
    fn prs_path_with_shared_factor_in_several_variables() {
        // shared factor with full support forces the PRS fallback
        let s = &(&w(0, 1) * &w(0, 2)) + &(&w(0, 3) - &Poly::one());
        let a = &s * &(&w(0, 1) + &w(0, 3));
        let b = &s * &(&w(0, 2) - &w(0, 3));
        let g = gcd(&a, &b);
        assert_eq!(g, s.monic());
    }
}
