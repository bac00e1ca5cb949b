//! The adding-defect map on GKLO coordinates and the restriction of
//! monopole operators along embeddings of zastava spaces and slices.

use serde::Serialize;
use thiserror::Error;

use crate::gklo::{substitute_u, GkloContext, GkloError, Sign, UImage};
use crate::poly::{FactorPowers, Var};
use crate::quiver::check_m;
use crate::ring::{GkloElement, RingTag};
use crate::sym::PartialSymPoly;
use crate::Frac;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DefectError {
    #[error(transparent)]
    Gklo(#[from] GkloError),
    #[error("v' = {vprime:?} is not within 0 <= v' <= v = {v:?}")]
    Split { v: Vec<i64>, vprime: Vec<i64> },
    #[error("the adding-defect map needs nonnegative powers of u")]
    NegativeU,
    #[error("w' = w - C v'' = {0:?} has a negative entry")]
    NotDominant(Vec<i64>),
}

impl From<crate::sym::SymError> for DefectError {
    fn from(e: crate::sym::SymError) -> Self {
        DefectError::Gklo(e.into())
    }
}

impl From<crate::quiver::QuiverError> for DefectError {
    fn from(e: crate::quiver::QuiverError) -> Self {
        DefectError::Gklo(e.into())
    }
}

impl From<crate::poly::PolyError> for DefectError {
    fn from(e: crate::poly::PolyError) -> Self {
        DefectError::Gklo(e.into())
    }
}

/// `v = v' + v''` with `0 <= v' <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectSplit {
    v: Vec<i64>,
    vprime: Vec<i64>,
}

impl DefectSplit {
    pub fn new(v: Vec<i64>, vprime: Vec<i64>) -> Result<Self, DefectError> {
        if v.len() != vprime.len() || v.iter().zip(&vprime).any(|(&a, &b)| b < 0 || b > a) {
            return Err(DefectError::Split { v, vprime });
        }
        Ok(Self { v, vprime })
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn vprime(&self) -> &[i64] {
        &self.vprime
    }

    pub fn vdoubleprime(&self) -> Vec<i64> {
        self.v.iter().zip(&self.vprime).map(|(a, b)| a - b).collect()
    }

    /// Whether `w[i,r]` is a tail variable, i.e. `r > v'_i`.
    pub fn is_tail(&self, x: Var) -> bool {
        match x {
            Var::W { vertex, index } | Var::U { vertex, index } => {
                index as i64 > self.vprime[vertex as usize]
            }
            Var::Z => false,
        }
    }
}

/// Both sides of a claimed identity.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub holds: bool,
    #[serde(serialize_with = "as_text")]
    pub lhs: Frac,
    #[serde(serialize_with = "as_text")]
    pub rhs: Frac,
}

fn as_text<S: serde::Serializer>(f: &Frac, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

impl Comparison {
    fn new(lhs: Frac, rhs: Frac) -> Self {
        Self {
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

fn split_for(ctx: &GkloContext, vprime: &[i64]) -> Result<DefectSplit, DefectError> {
    DefectSplit::new(ctx.dims().v.clone(), vprime.to_vec())
}

/// The adding-defect map: `u[i,r]` is rescaled for `r <= v'_i` and sent to
/// zero otherwise; `w` and `z` are fixed.
pub fn phi(ctx: &GkloContext, split: &DefectSplit, e: &Frac) -> Result<GkloElement, DefectError> {
    if split.v() != ctx.dims().v.as_slice() {
        return Err(DefectError::Split {
            v: ctx.dims().v.clone(),
            vprime: split.vprime().to_vec(),
        });
    }
    if e.has_negative_u() {
        return Err(DefectError::NegativeU);
    }
    let vp = split.vprime();
    let q = ctx.quiver();
    let value = substitute_u(e, |i, r| {
        if r as i64 > vp[i] {
            return UImage::Zero;
        }
        let mut factor = FactorPowers::new();
        for s in vp[i] as usize + 1..=ctx.v(i) {
            factor.push_diff(Var::w(i, r), Var::w(i, s), 1);
        }
        for (_, t) in q.out_edges(i) {
            for k in vp[t] as usize + 1..=ctx.v(t) {
                factor.push_diff(Var::w(t, k), Var::w(i, r), -1);
            }
        }
        UImage::Scaled {
            factor,
            invert: false,
        }
    })?;
    Ok(GkloElement::new(value, RingTag::DefectLoc).map_err(GkloError::from)?)
}

/// Images of `Q_i` and `P_i` under the adding-defect map against the
/// products with `L_i(z) = prod_{r > v'_i} (z - w[i,r])`.
pub fn verify_gklo_square(
    ctx: &GkloContext,
    split: &DefectSplit,
    i: usize,
) -> Result<(Comparison, Comparison), DefectError> {
    let small = ctx.with_dims(ctx.dims().w.clone(), split.vprime().to_vec())?;
    let z = crate::Poly::var(Var::Z);
    let l = (split.vprime()[i] as usize + 1..=ctx.v(i)).fold(crate::Poly::one(), |acc, r| {
        acc.mul(&z.sub(&crate::Poly::var(Var::w(i, r))))
    });
    let q = Frac::from_poly(ctx.q_image(i)?);
    let q_lhs = phi(ctx, split, &q)?.into_value();
    let q_rhs = Frac::from_poly(small.q_image(i)?.mul(&l));
    let p_lhs = phi(ctx, split, ctx.p_image(i)?.value())?.into_value();
    let p_rhs = small.p_image(i)?.value().mul_poly(&l);
    Ok((Comparison::new(q_lhs, q_rhs), Comparison::new(p_lhs, p_rhs)))
}

/// `phi(M+_m(f))` against `sum M+_m(f1) f2` over the split of `f` into
/// head and tail parts, or zero when `m` is not below `v'`.
pub fn verify_adding_defect(
    ctx: &GkloContext,
    vprime: &[i64],
    m: &[i64],
    f: &PartialSymPoly,
) -> Result<Comparison, DefectError> {
    let split = split_for(ctx, vprime)?;
    let lhs = phi(ctx, &split, ctx.fmo_plus(m, f)?.value())?.into_value();
    let rhs = if check_m(m, vprime).is_ok() {
        let small = ctx.with_dims(ctx.dims().w.clone(), vprime.to_vec())?;
        let mut acc = Frac::zero();
        for (f1, f2) in f.sweedler(vprime)? {
            acc = acc.add(&small.fmo_plus(m, &f1)?.value().mul_poly(&f2));
        }
        acc
    } else {
        Frac::zero()
    };
    Ok(Comparison::new(lhs, rhs))
}

/// The context over `v'` with framing `w' = w - C v''`.
pub fn slice_context(ctx: &GkloContext, vprime: &[i64]) -> Result<GkloContext, DefectError> {
    let split = split_for(ctx, vprime)?;
    let cv = ctx.cartan().apply(&split.vdoubleprime());
    let wp: Vec<i64> = ctx.dims().w.iter().zip(&cv).map(|(a, b)| a - b).collect();
    if wp.iter().any(|&x| x < 0) {
        return Err(DefectError::NotDominant(wp));
    }
    ctx.with_dims(wp, vprime.to_vec()).map_err(Into::into)
}

/// `M_m(f~)` over the slice context, or zero when `m` is not below `v'`.
pub fn restrict_fmo_slice(
    ctx: &GkloContext,
    vprime: &[i64],
    m: &[i64],
    f: &PartialSymPoly,
    sign: Sign,
) -> Result<Frac, DefectError> {
    let small = slice_context(ctx, vprime)?;
    check_m(m, &ctx.dims().v)?;
    if check_m(m, vprime).is_err() {
        return Ok(Frac::zero());
    }
    let ft = f.tilde(vprime)?;
    Ok(small.fmo(sign, m, &ft)?.into_value())
}

/// Restriction along the slice embedding computed through the adding-defect
/// map (tail `w` set to zero afterwards), against [`restrict_fmo_slice`].
/// The negative side goes through the Chevalley involutions of both rings.
pub fn verify_slice_restriction(
    ctx: &GkloContext,
    vprime: &[i64],
    m: &[i64],
    f: &PartialSymPoly,
    sign: Sign,
) -> Result<Comparison, DefectError> {
    let small = slice_context(ctx, vprime)?;
    let split = split_for(ctx, vprime)?;
    let through_defect = |e: &Frac| -> Result<Frac, DefectError> {
        let image = phi(ctx, &split, e)?;
        Ok(image.value().kill_vars(|x| x.is_w() && split.is_tail(x))?)
    };
    let lhs = match sign {
        Sign::Plus => through_defect(ctx.fmo_plus(m, f)?.value())?,
        Sign::Minus => {
            let flipped = ctx.chevalley(&ctx.fmo_minus(m, f)?)?;
            let restricted = through_defect(flipped.value())?;
            let tagged = GkloElement::new(restricted, RingTag::FullLoc).map_err(GkloError::from)?;
            small.chevalley(&tagged)?.into_value()
        }
    };
    let rhs = restrict_fmo_slice(ctx, vprime, m, f, sign)?;
    Ok(Comparison::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DimData, Quiver};

    fn ctx(q: Quiver, w: &[i64], v: &[i64]) -> GkloContext {
        GkloContext::new(q, DimData::new(w.to_vec(), v.to_vec()).unwrap()).unwrap()
    }

    fn fr(s: &str) -> Frac {
        s.parse().unwrap()
    }

    #[test]
    fn phi_on_variables() {
        let c = ctx(Quiver::a1(), &[0], &[2]);
        let split = DefectSplit::new(vec![2], vec![1]).unwrap();
        assert_eq!(
            phi(&c, &split, &fr("u[0,1]")).unwrap().value(),
            &fr("(w[0,1] - w[0,2])*u[0,1]")
        );
        assert!(phi(&c, &split, &fr("u[0,2]")).unwrap().is_zero());
        assert_eq!(phi(&c, &split, &fr("u[0,1]^-1")), Err(DefectError::NegativeU));
    }

    #[test]
    fn gklo_square() {
        let c = ctx(Quiver::a2(), &[1, 0], &[2, 2]);
        for vp in [[1, 1], [0, 2], [2, 0], [1, 0]] {
            let split = DefectSplit::new(vec![2, 2], vp.to_vec()).unwrap();
            for i in 0..2 {
                let (q, p) = verify_gklo_square(&c, &split, i).unwrap();
                assert!(q.holds && p.holds, "{vp:?} {i}");
            }
        }
    }

    #[test]
    fn adding_defect_examples() {
        let c = ctx(Quiver::a1(), &[0], &[2]);
        let one = PartialSymPoly::one(vec![1], vec![2]).unwrap();
        let cmp = verify_adding_defect(&c, &[1], &[1], &one).unwrap();
        assert!(cmp.holds);
        assert_eq!(cmp.lhs, fr("u[0,1]"));
        let two = PartialSymPoly::one(vec![2], vec![2]).unwrap();
        let cmp = verify_adding_defect(&c, &[1], &[2], &two).unwrap();
        assert!(cmp.holds && cmp.lhs.is_zero());
        let f = PartialSymPoly::new("w[0,1] + w[0,2]".parse().unwrap(), vec![0], vec![2]).unwrap();
        let cmp = verify_adding_defect(&c, &[1], &[0], &f).unwrap();
        assert!(cmp.holds);
        assert_eq!(cmp.lhs, Frac::from_poly(f.value().clone()));
    }

    #[test]
    fn slice_examples() {
        let c = ctx(Quiver::a1(), &[2], &[2]);
        let one = PartialSymPoly::one(vec![1], vec![2]).unwrap();
        assert_eq!(restrict_fmo_slice(&c, &[1], &[1], &one, Sign::Plus).unwrap(), fr("u[0,1]"));
        let two = PartialSymPoly::one(vec![2], vec![2]).unwrap();
        assert!(restrict_fmo_slice(&c, &[1], &[2], &two, Sign::Plus).unwrap().is_zero());
        let f = PartialSymPoly::new("w[0,1]*w[0,2]".parse().unwrap(), vec![0], vec![2]).unwrap();
        assert!(restrict_fmo_slice(&c, &[1], &[0], &f, Sign::Plus).unwrap().is_zero());
        for sign in [Sign::Plus, Sign::Minus] {
            assert!(verify_slice_restriction(&c, &[1], &[1], &one, sign).unwrap().holds);
        }
        // w' = w - C v'' must stay dominant
        let tight = ctx(Quiver::a1(), &[1], &[2]);
        assert!(matches!(
            restrict_fmo_slice(&tight, &[1], &[1], &one, Sign::Plus),
            Err(DefectError::NotDominant(_))
        ));
    }
}
