//! Dressed minuscule monopole operators for products of general linear
//! groups, and the chain of maps that realizes the slice embedding in
//! Kac-Moody type: Levi restriction, the cone-point map, two Fourier
//! transforms and forgetting matter.
//!
//! Operators are formal: a coweight together with a rational dressing. The
//! torus side is a formal sum of `r_gamma` with rational coefficients; the
//! GKLO image replaces `r_gamma` by `prod u[i,r]^gamma[i][r]`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::defect::{restrict_fmo_slice, slice_context, DefectError, DefectSplit};
use crate::gklo::{GkloContext, GkloError, Sign};
use crate::poly::{Factor, FactorPowers, Monomial, PolyError, Var};
use crate::quiver::{check_conicity, check_m, DimData};
use crate::sym::PartialSymPoly;
use crate::{Frac, Poly};

/// Torus coordinate `(vertex, index)`, index starting at 1.
pub type Site = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KmError {
    #[error("coweight {0:?} is not minuscule for the group")]
    NotMinuscule(Vec<Vec<i64>>),
    #[error("dressing is not invariant under the stabilizer (sites {0:?} and {1:?})")]
    NotInvariant(Site, Site),
    #[error("conicity fails for (w, v''): witness {witness:?} with value {value}")]
    NotConical { witness: Vec<i64>, value: i64 },
    #[error("stage {stage}: denominator factor {factor} is not allowed")]
    Discipline { stage: &'static str, factor: String },
    #[error("stage {stage}: denominator {den} does not split into linear factors")]
    NotFactored { stage: &'static str, den: String },
    #[error("framing weights at site {site:?} have multiplicity {got}, expected {expected}")]
    Framing {
        site: Site,
        got: i64,
        expected: i64,
    },
    #[error("weight {0} is not a root or a coordinate weight")]
    Weight(String),
    #[error(transparent)]
    Defect(#[from] DefectError),
    #[error(transparent)]
    Gklo(#[from] GkloError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<crate::sym::SymError> for KmError {
    fn from(e: crate::sym::SymError) -> Self {
        KmError::Gklo(e.into())
    }
}

impl From<crate::quiver::QuiverError> for KmError {
    fn from(e: crate::quiver::QuiverError) -> Self {
        KmError::Gklo(e.into())
    }
}

/// Integer combination of coordinate characters `e_(i,r)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<(Site, i64)>);

impl Weight {
    pub fn from_terms(mut terms: Vec<(Site, i64)>) -> Self {
        terms.sort();
        let mut out: Vec<(Site, i64)> = Vec::with_capacity(terms.len());
        for (s, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += c,
                _ => out.push((s, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Weight(out)
    }

    pub fn coordinate(s: Site) -> Self {
        Weight(vec![(s, 1)])
    }

    /// `e_a - e_b`.
    pub fn difference(a: Site, b: Site) -> Self {
        Self::from_terms(vec![(a, 1), (b, -1)])
    }

    pub fn neg(&self) -> Self {
        Weight(self.0.iter().map(|&(s, c)| (s, -c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pair(&self, gamma: &Coweight) -> i64 {
        self.0.iter().map(|&(s, c)| c * gamma.at(s)).sum()
    }

    /// Drops the coordinates outside `keep`.
    pub fn restrict<F: Fn(Site) -> bool>(&self, keep: F) -> Self {
        Weight(self.0.iter().copied().filter(|&(s, _)| keep(s)).collect())
    }

    /// The weight as a linear polynomial in the `w` variables: a factor and
    /// whether it carries a minus sign.
    pub fn to_factor(&self) -> Result<(Factor, bool), KmError> {
        let w = |s: Site| Var::w(s.0, s.1);
        match self.0.as_slice() {
            [(a, 1)] => Ok((Factor::Var(w(*a)), false)),
            [(a, -1)] => Ok((Factor::Var(w(*a)), true)),
            [(a, 1), (b, -1)] => Ok(Factor::diff(w(*a), w(*b))),
            [(a, -1), (b, 1)] => Ok(Factor::diff(w(*b), w(*a))),
            _ => Err(KmError::Weight(self.to_string())),
        }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, &((i, r), c)) in self.0.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}e[{i},{r}]")?;
            } else {
                write!(f, "{sign}{mag}e[{i},{r}]")?;
            }
        }
        Ok(())
    }
}

/// Cocharacter of the maximal torus, stored per vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Coweight(pub Vec<Vec<i64>>);

impl Coweight {
    pub fn zero(dims: &[usize]) -> Self {
        Coweight(dims.iter().map(|&d| vec![0; d]).collect())
    }

    /// `sign` in the first `m_i` slots at each vertex.
    pub fn fundamental(dims: &[usize], m: &[i64], sign: Sign) -> Self {
        let x = match sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        Coweight(
            dims.iter()
                .zip(m)
                .map(|(&d, &k)| (0..d).map(|r| if (r as i64) < k { x } else { 0 }).collect())
                .collect(),
        )
    }

    pub fn at(&self, (i, r): Site) -> i64 {
        self.0[i][r - 1]
    }

    fn set(&mut self, (i, r): Site, x: i64) {
        self.0[i][r - 1] = x;
    }

    /// `prod u[i,r]^gamma[i][r]`.
    pub fn u_monomial(&self) -> Monomial {
        Monomial::from_factors(self.0.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(r, &x)| (Var::u(i, r + 1), x as i32))
        }))
    }
}

/// Product of general linear groups: each block is a list of torus sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeGroup {
    dims: Vec<usize>,
    blocks: Vec<Vec<Site>>,
}

impl GaugeGroup {
    /// One block per vertex.
    pub fn quiver(v: &[i64]) -> Self {
        let dims: Vec<usize> = v.iter().map(|&x| x as usize).collect();
        let blocks = dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| (1..=d).map(|r| (i, r)).collect())
            .collect();
        Self { dims, blocks }
    }

    /// Blocks `1..=v'_i` and `v'_i+1..=v_i` at each vertex.
    pub fn levi(split: &DefectSplit) -> Self {
        let dims: Vec<usize> = split.v().iter().map(|&x| x as usize).collect();
        let mut blocks = Vec::new();
        for (i, (&v, &vp)) in split.v().iter().zip(split.vprime()).enumerate() {
            let (v, vp) = (v as usize, vp as usize);
            if vp > 0 {
                blocks.push((1..=vp).map(|r| (i, r)).collect());
            }
            if v > vp {
                blocks.push((vp + 1..=v).map(|r| (i, r)).collect());
            }
        }
        Self { dims, blocks }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn blocks(&self) -> &[Vec<Site>] {
        &self.blocks
    }

    fn block_of(&self, s: Site) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&s))
            .expect("site belongs to a block")
    }

    /// All roots `e_a - e_b` with `a != b` in one block.
    pub fn roots(&self) -> Vec<(Site, Site)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for &a in b {
                for &c in b {
                    if a != c {
                        out.push((a, c));
                    }
                }
            }
        }
        out
    }

    pub fn is_minuscule(&self, gamma: &Coweight) -> bool {
        self.blocks.iter().all(|b| {
            let vals = b.iter().map(|&s| gamma.at(s));
            let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(l, h), x| (l.min(x), h.max(x)));
            hi - lo <= 1
        })
    }

    /// Per block, values sorted by `(-|x|, -x)`: nonzero entries first,
    /// positive before negative.
    pub fn canonical(&self, gamma: &Coweight) -> Coweight {
        let mut out = gamma.clone();
        for b in &self.blocks {
            let mut vals: Vec<i64> = b.iter().map(|&s| gamma.at(s)).collect();
            vals.sort_by_key(|&x| (-x.abs(), -x));
            for (&s, x) in b.iter().zip(vals) {
                out.set(s, x);
            }
        }
        out
    }

    /// The orbit of `gamma` under the Weyl group, sorted.
    pub fn orbit(&self, gamma: &Coweight) -> Vec<Coweight> {
        let mut out = vec![gamma.clone()];
        for b in &self.blocks {
            let mut vals: Vec<i64> = b.iter().map(|&s| gamma.at(s)).collect();
            vals.sort_unstable();
            let mut perms = Vec::new();
            loop {
                perms.push(vals.clone());
                if !next_permutation(&mut vals) {
                    break;
                }
            }
            let mut next = Vec::with_capacity(out.len() * perms.len());
            for g in &out {
                for p in &perms {
                    let mut h = g.clone();
                    for (&s, &x) in b.iter().zip(p) {
                        h.set(s, x);
                    }
                    next.push(h);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// A Weyl group element sending `from` to `to`: within each block the
    /// k-th site carrying a value goes to the k-th site carrying it in `to`.
    fn transport(&self, from: &Coweight, to: &Coweight) -> HashMap<Site, Site> {
        let mut map = HashMap::new();
        for b in &self.blocks {
            let mut targets: BTreeMap<i64, Vec<Site>> = BTreeMap::new();
            for &s in b {
                targets.entry(to.at(s)).or_default().push(s);
            }
            let mut used: BTreeMap<i64, usize> = BTreeMap::new();
            for &s in b {
                let x = from.at(s);
                let k = used.entry(x).or_insert(0);
                map.insert(s, targets[&x][*k]);
                *k += 1;
            }
        }
        map
    }
}

fn next_permutation(a: &mut [i64]) -> bool {
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

fn rename_sites(f: &Frac, map: &HashMap<Site, Site>) -> Result<Frac, KmError> {
    Ok(f.rename(|x| match x {
        Var::W { vertex, index } => match map.get(&(vertex as usize, index as usize)) {
            Some(&(i, r)) => Var::w(i, r),
            None => x,
        },
        _ => x,
    })?)
}

/// A minuscule monopole operator `M_gamma(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DressedMmo {
    pub gamma: Coweight,
    pub dressing: Frac,
}

impl DressedMmo {
    /// Checks minusculity and invariance of the dressing under the
    /// stabilizer of `gamma`.
    pub fn validate(&self, g: &GaugeGroup) -> Result<(), KmError> {
        if !g.is_minuscule(&self.gamma) {
            return Err(KmError::NotMinuscule(self.gamma.0.clone()));
        }
        for b in g.blocks() {
            let mut by_value: BTreeMap<i64, Vec<Site>> = BTreeMap::new();
            for &s in b {
                by_value.entry(self.gamma.at(s)).or_default().push(s);
            }
            for sites in by_value.values() {
                for pair in sites.windows(2) {
                    let map: HashMap<Site, Site> =
                        [(pair[0], pair[1]), (pair[1], pair[0])].into_iter().collect();
                    if rename_sites(&self.dressing, &map)? != self.dressing {
                        return Err(KmError::NotInvariant(pair[0], pair[1]));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Weights of one direct summand of the matter representation, with
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub label: &'static str,
    pub weights: Vec<(Weight, i64)>,
}

impl Summand {
    fn dual(&self, label: &'static str) -> Summand {
        Summand {
            label,
            weights: self.weights.iter().map(|(x, k)| (x.neg(), *k)).collect(),
        }
    }
}

/// Fourier sign exponent: `sum over weights pairing positively with gamma`
/// of the pairing times the multiplicity.
pub fn fourier_exponent(s: &Summand, gamma: &Coweight) -> i64 {
    s.weights
        .iter()
        .map(|(x, k)| (x.pair(gamma), k))
        .filter(|(p, _)| *p > 0)
        .map(|(p, k)| p * k)
        .sum()
}

/// The factor `prod over weights pairing negatively with gamma` of
/// `xi^(-pairing * multiplicity)` applied when forgetting the summands.
pub fn forget_factor(summands: &[Summand], gamma: &Coweight) -> Result<FactorPowers, KmError> {
    let mut fp = FactorPowers::new();
    for s in summands {
        for (x, k) in &s.weights {
            let p = x.pair(gamma);
            if p < 0 {
                let e = (-p * k) as i32;
                let (f, neg) = x.to_factor()?;
                fp.push(f, e);
                if neg && e % 2 != 0 {
                    fp.flip();
                }
            }
        }
    }
    Ok(fp)
}

/// The quiver matter representation, each piece labeled by whether its
/// source and target sites lie in the head `r <= v'_i` or the tail.
pub fn quiver_matter(ctx: &GkloContext, split: &DefectSplit) -> Vec<Summand> {
    let head = |(i, r): Site| r as i64 <= split.vprime()[i];
    let mut pieces: BTreeMap<&'static str, Vec<(Weight, i64)>> = BTreeMap::new();
    for &(s, t) in ctx.quiver().edges() {
        for p in 1..=ctx.v(s) {
            for q in 1..=ctx.v(t) {
                let label = match (head((s, p)), head((t, q))) {
                    (true, true) => "hom_head",
                    (true, false) => "mix1",
                    (false, true) => "mix2",
                    (false, false) => "hom_tail",
                };
                pieces
                    .entry(label)
                    .or_default()
                    .push((Weight::difference((t, q), (s, p)), 1));
            }
        }
    }
    for i in 0..ctx.n() {
        for r in 1..=ctx.v(i) {
            let label = if head((i, r)) { "framing_head" } else { "framing_tail" };
            if ctx.w(i) > 0 {
                pieces
                    .entry(label)
                    .or_default()
                    .push((Weight::coordinate((i, r)), ctx.w(i)));
            }
        }
    }
    pieces
        .into_iter()
        .map(|(label, weights)| Summand { label, weights })
        .collect()
}

fn factored_parts(f: &Frac, stage: &'static str) -> Result<(Poly, FactorPowers), KmError> {
    let fs = f.den_factors().ok_or_else(|| KmError::NotFactored {
        stage,
        den: f.den().to_string(),
    })?;
    let mut fp = FactorPowers::new();
    for (g, k) in fs {
        fp.push(g, -(k as i32));
    }
    Ok((f.num().clone(), fp))
}

/// `sum over the orbit of sigma(f) r_sigma(gamma) / prod_{<beta, sigma gamma> > 0} beta`.
pub fn localize_mmo(g: &GaugeGroup, mmo: &DressedMmo) -> Result<BTreeMap<Coweight, Frac>, KmError> {
    mmo.validate(g)?;
    let roots = g.roots();
    let mut out: BTreeMap<Coweight, Frac> = BTreeMap::new();
    for target in g.orbit(&mmo.gamma) {
        let sigma = g.transport(&mmo.gamma, &target);
        let moved = rename_sites(&mmo.dressing, &sigma)?;
        let (num, mut fp) = factored_parts(&moved, "localize")?;
        for &(a, b) in &roots {
            if Weight::difference(a, b).pair(&target) > 0 {
                fp.push_diff(Var::w(a.0, a.1), Var::w(b.0, b.1), -1);
            }
        }
        let coeff = Frac::sum_factored(vec![(num, fp)]);
        let slot = out.entry(target).or_insert_with(Frac::zero);
        *slot = slot.add(&coeff);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// GKLO image: localize, forget all matter, and send `r_gamma` to
/// `prod u^gamma`.
pub fn gklo_image(g: &GaugeGroup, matter: &[Summand], mmo: &DressedMmo) -> Result<Frac, KmError> {
    mmo.validate(g)?;
    let roots = g.roots();
    let mut terms = Vec::new();
    for target in g.orbit(&mmo.gamma) {
        let sigma = g.transport(&mmo.gamma, &target);
        let moved = rename_sites(&mmo.dressing, &sigma)?;
        let (num, mut fp) = factored_parts(&moved, "gklo")?;
        for &(a, b) in &roots {
            if Weight::difference(a, b).pair(&target) > 0 {
                fp.push_diff(Var::w(a.0, a.1), Var::w(b.0, b.1), -1);
            }
        }
        fp.extend(&forget_factor(matter, &target)?);
        terms.push((num.mul_monomial(&target.u_monomial()), fp));
    }
    Ok(Frac::sum_factored(terms))
}

/// Restriction from `g` to the Levi subgroup `l` (same torus): one operator
/// per `l`-orbit inside the `g`-orbit of `gamma`, at its canonical
/// representative, dressed by `sigma(f) / prod beta` over the roots of `g`
/// outside `l` pairing positively with it.
pub fn levi_restrict(
    g: &GaugeGroup,
    l: &GaugeGroup,
    mmo: &DressedMmo,
) -> Result<Vec<DressedMmo>, KmError> {
    mmo.validate(g)?;
    let outside: Vec<(Site, Site)> = g
        .roots()
        .into_iter()
        .filter(|&(a, b)| l.block_of(a) != l.block_of(b))
        .collect();
    let mut out = Vec::new();
    for target in g.orbit(&mmo.gamma) {
        if l.canonical(&target) != target {
            continue;
        }
        let sigma = g.transport(&mmo.gamma, &target);
        let moved = rename_sites(&mmo.dressing, &sigma)?;
        let (num, mut fp) = factored_parts(&moved, "levi")?;
        for &(a, b) in &outside {
            if Weight::difference(a, b).pair(&target) > 0 {
                fp.push_diff(Var::w(a.0, a.1), Var::w(b.0, b.1), -1);
            }
        }
        out.push(DressedMmo {
            gamma: target,
            dressing: Frac::sum_factored(vec![(num, fp)]),
        });
    }
    Ok(out)
}

/// Sum of the localizations of several operators.
pub fn localize_sum(g: &GaugeGroup, terms: &[DressedMmo]) -> Result<BTreeMap<Coweight, Frac>, KmError> {
    let mut out: BTreeMap<Coweight, Frac> = BTreeMap::new();
    for t in terms {
        for (k, c) in localize_mmo(g, t)? {
            let slot = out.entry(k).or_insert_with(Frac::zero);
            *slot = slot.add(&c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Node of the embedding chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Levi,
    Cone,
    Fourier1,
    Fourier2,
    Forgotten,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Levi => "levi",
            Stage::Cone => "cone",
            Stage::Fourier1 => "fourier1",
            Stage::Fourier2 => "fourier2",
            Stage::Forgotten => "forgotten",
        }
    }

    /// Localization allowed at this stage: head/tail differences at one
    /// vertex after the Levi restriction, head variables afterwards.
    fn allows(&self, f: &Factor, split: &DefectSplit) -> bool {
        let head = |x: Var| match x {
            Var::W { vertex, index } => index as i64 <= split.vprime()[vertex as usize],
            _ => false,
        };
        match (self, f) {
            (Stage::Levi, Factor::Diff(x, y)) => match (x.site(), y.site()) {
                (Some((i, _)), Some((j, _))) => {
                    x.is_w() && y.is_w() && i == j && head(*x) != head(*y)
                }
                _ => false,
            },
            (Stage::Levi, Factor::Var(_)) => false,
            (_, Factor::Var(x)) => x.is_w() && head(*x),
            (_, Factor::Diff(..)) => false,
        }
    }
}

/// Value of the chain at one stage.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub stage: Stage,
    pub group: GaugeGroup,
    pub matter: Vec<Summand>,
    pub terms: Vec<DressedMmo>,
}

impl ChainState {
    fn check_discipline(&self, split: &DefectSplit) -> Result<(), KmError> {
        let stage = self.stage.as_str();
        for t in &self.terms {
            let fs = t.dressing.den_factors().ok_or_else(|| KmError::NotFactored {
                stage,
                den: t.dressing.den().to_string(),
            })?;
            if let Some((f, _)) = fs.iter().find(|(f, _)| !self.stage.allows(f, split)) {
                return Err(KmError::Discipline {
                    stage,
                    factor: f.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Levi restriction followed by the cone-point map: returns both states.
/// The cone state has no terms when `m` is not below `v'`.
pub fn split_and_project(
    ctx: &GkloContext,
    vprime: &[i64],
    m: &[i64],
    f: &PartialSymPoly,
    sign: Sign,
) -> Result<(ChainState, ChainState), KmError> {
    let split = DefectSplit::new(ctx.dims().v.clone(), vprime.to_vec())?;
    check_m(m, &ctx.dims().v)?;
    let vpp = split.vdoubleprime();
    let conical = check_conicity(&DimData::new(ctx.dims().w.clone(), vpp)?, ctx.cartan());
    if !conical.holds {
        return Err(KmError::NotConical {
            witness: conical.witness.unwrap_or_default(),
            value: conical.min_value.unwrap_or(0),
        });
    }
    let g = GaugeGroup::quiver(&ctx.dims().v);
    let l = GaugeGroup::levi(&split);
    let mmo = DressedMmo {
        gamma: Coweight::fundamental(g.dims(), m, sign),
        dressing: Frac::from_poly(f.value().clone()),
    };
    let matter = quiver_matter(ctx, &split);
    let levi = ChainState {
        stage: Stage::Levi,
        group: l,
        matter: matter.clone(),
        terms: levi_restrict(&g, &GaugeGroup::levi(&split), &mmo)?,
    };
    levi.check_discipline(&split)?;

    let head = |(i, r): Site| r as i64 <= vprime[i];
    let head_group = GaugeGroup::quiver(vprime);
    let mut terms = Vec::new();
    for t in &levi.terms {
        let tail_zero = t
            .gamma
            .0
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().skip(vprime[i] as usize).all(|&x| x == 0));
        if !tail_zero {
            continue;
        }
        let dressing = t
            .dressing
            .kill_vars(|x| x.is_w() && !head(x.site().unwrap()))?;
        let gamma = Coweight(
            t.gamma
                .0
                .iter()
                .enumerate()
                .map(|(i, row)| row[..vprime[i] as usize].to_vec())
                .collect(),
        );
        terms.push(DressedMmo { gamma, dressing });
    }
    let restricted: Vec<Summand> = matter
        .iter()
        .map(|s| Summand {
            label: s.label,
            weights: s
                .weights
                .iter()
                .map(|(x, k)| (x.restrict(head), *k))
                .filter(|(x, _)| !x.is_zero())
                .collect(),
        })
        .filter(|s| !s.weights.is_empty())
        .collect();
    let cone = ChainState {
        stage: Stage::Cone,
        group: head_group,
        matter: restricted,
        terms,
    };
    cone.check_discipline(&split)?;
    Ok((levi, cone))
}

/// Dualizes the summand `label` (renamed to `dual_label`) and multiplies each
/// dressing by the Fourier sign computed from its weights. Returns the new
/// state and the sign exponent of the (single) term, or zero if empty.
pub fn fourier_step(
    state: &ChainState,
    label: &'static str,
    dual_label: &'static str,
    stage: Stage,
) -> (ChainState, i64) {
    let mut out = state.clone();
    out.stage = stage;
    let summand = state.matter.iter().find(|s| s.label == label);
    let mut exponent = 0;
    for t in &mut out.terms {
        let e = summand.map_or(0, |s| fourier_exponent(s, &t.gamma));
        exponent = e;
        if e % 2 != 0 {
            t.dressing = t.dressing.neg();
        }
    }
    out.matter = state
        .matter
        .iter()
        .map(|s| if s.label == label { s.dual(dual_label) } else { s.clone() })
        .collect();
    (out, exponent)
}

/// Collects all coordinate weights `+e_(i,r)` into `framing` (multiplicity
/// `w'_i`), `n4_plus` and `n4_minus` (multiplicity `v''_i` each), checking
/// that the total is `w'_i + 2 v''_i`.
fn regroup(state: &ChainState, wprime: &[i64], vpp: &[i64]) -> Result<ChainState, KmError> {
    let mut counts: BTreeMap<Site, i64> = BTreeMap::new();
    let mut rest = Vec::new();
    for s in &state.matter {
        let mut kept = Vec::new();
        for (x, k) in &s.weights {
            match x.0.as_slice() {
                [(site, 1)] => *counts.entry(*site).or_insert(0) += k,
                _ => kept.push((x.clone(), *k)),
            }
        }
        if !kept.is_empty() {
            rest.push(Summand {
                label: s.label,
                weights: kept,
            });
        }
    }
    let mut framing = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, row) in state.group.dims().iter().enumerate() {
        for r in 1..=*row {
            let got = counts.remove(&(i, r)).unwrap_or(0);
            let expected = wprime[i] + 2 * vpp[i];
            if got != expected {
                return Err(KmError::Framing {
                    site: (i, r),
                    got,
                    expected,
                });
            }
            let x = Weight::coordinate((i, r));
            if wprime[i] > 0 {
                framing.push((x.clone(), wprime[i]));
            }
            if vpp[i] > 0 {
                plus.push((x.clone(), vpp[i]));
                minus.push((x, vpp[i]));
            }
        }
    }
    if let Some((&site, &got)) = counts.iter().next() {
        return Err(KmError::Framing {
            site,
            got,
            expected: 0,
        });
    }
    rest.push(Summand {
        label: "framing",
        weights: framing,
    });
    rest.push(Summand {
        label: "n4_plus",
        weights: plus,
    });
    rest.push(Summand {
        label: "n4_minus",
        weights: minus,
    });
    Ok(ChainState {
        stage: state.stage,
        group: state.group.clone(),
        matter: rest,
        terms: state.terms.clone(),
    })
}

/// Forgets the summands `labels`, multiplying dressings by the weight
/// factor. Returns the new state and the factor of the (single) term.
pub fn forget_matter_step(
    state: &ChainState,
    labels: &[&str],
) -> Result<(ChainState, FactorPowers), KmError> {
    let forgotten: Vec<Summand> = state
        .matter
        .iter()
        .filter(|s| labels.contains(&s.label))
        .cloned()
        .collect();
    let mut out = state.clone();
    out.stage = Stage::Forgotten;
    out.matter.retain(|s| !labels.contains(&s.label));
    let mut last = FactorPowers::new();
    for t in &mut out.terms {
        let fp = forget_factor(&forgotten, &t.gamma)?;
        let (num, mut own) = factored_parts(&t.dressing, "forget")?;
        own.extend(&fp);
        t.dressing = Frac::sum_factored(vec![(num, own)]);
        last = fp;
    }
    Ok((out, last))
}

#[derive(Clone, Debug, Serialize)]
pub struct TermRecord {
    pub gamma: Vec<Vec<i64>>,
    pub dressing: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub terms: Vec<TermRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_exponent: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_exponent: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
}

fn record(state: &ChainState) -> StageRecord {
    StageRecord {
        stage: state.stage,
        terms: state
            .terms
            .iter()
            .map(|t| TermRecord {
                gamma: t.gamma.0.clone(),
                dressing: t.dressing.to_string(),
            })
            .collect(),
        sign_exponent: None,
        closed_form_exponent: None,
        factor: None,
    }
}

fn powers_text(fp: &FactorPowers) -> String {
    let list: Vec<(Factor, u32)> = fp
        .powers
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(&f, &k)| (f, k as u32))
        .collect();
    let p: Poly = crate::poly::expand(&list).scale(&fp.sign());
    let den: Vec<(Factor, u32)> = fp
        .powers
        .iter()
        .filter(|(_, &k)| k < 0)
        .map(|(&f, &k)| (f, (-k) as u32))
        .collect();
    Frac::from_factored(p, &den).to_string()
}

/// Outcome of running the whole chain on one operator.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub stages: Vec<StageRecord>,
    pub result: String,
    pub expected: String,
    pub matches: bool,
    /// Fourier exponents computed from weights agree with the closed forms.
    pub signs_match: bool,
    /// The total chain sign cancels the operator sign exponents.
    pub parity_ok: bool,
    #[serde(skip)]
    pub result_value: Frac,
}

/// Runs Levi restriction, the cone-point map, both Fourier transforms and
/// forgetting matter on `M^sign_m(f)`, converts the result back to GKLO
/// coordinates over `(w', v')` and compares with the direct restriction.
pub fn compose_embedding(
    ctx: &GkloContext,
    vprime: &[i64],
    m: &[i64],
    f: &PartialSymPoly,
    sign: Sign,
) -> Result<ChainReport, KmError> {
    let small = slice_context(ctx, vprime)?;
    let split = DefectSplit::new(ctx.dims().v.clone(), vprime.to_vec())?;
    let vpp = split.vdoubleprime();
    let (levi, cone) = split_and_project(ctx, vprime, m, f, sign)?;
    let mut stages = vec![record(&levi), record(&cone)];

    let edges = ctx.quiver().edges();
    let mv: i64 = m.iter().zip(&vpp).map(|(a, b)| a * b).sum();
    let msv: i64 = edges.iter().map(|&(s, t)| m[s] * vpp[t]).sum();
    let (closed1, closed2) = match sign {
        Sign::Plus => (0, mv),
        Sign::Minus => (msv, 0),
    };

    let (f1, e1) = fourier_step(&cone, "mix1", "mix1_dual", Stage::Fourier1);
    f1.check_discipline(&split)?;
    let regrouped = regroup(&f1, &small.dims().w, &vpp)?;
    let (f2, e2) = fourier_step(&regrouped, "n4_minus", "n4_minus_dual", Stage::Fourier2);
    f2.check_discipline(&split)?;
    let (done, factor) = forget_matter_step(&f2, &["n4_plus", "n4_minus_dual"])?;
    done.check_discipline(&split)?;

    let empty = cone.terms.is_empty();
    let mut r1 = record(&f1);
    r1.sign_exponent = Some(e1);
    r1.closed_form_exponent = Some(closed1);
    let mut r2 = record(&f2);
    r2.sign_exponent = Some(e2);
    r2.closed_form_exponent = Some(closed2);
    let mut r3 = record(&done);
    r3.factor = Some(powers_text(&factor));
    stages.extend([r1, r2, r3]);
    let signs_match = empty || (e1 % 2 == closed1 % 2 && e2 % 2 == closed2 % 2);

    let mut result = Frac::zero();
    for t in &done.terms {
        result = result.add(&gklo_image(&done.group, &done.matter, t)?);
    }
    let parity_ok = match sign {
        Sign::Plus => true,
        Sign::Minus => {
            if ctx.fmo_sign_exponent(m) % 2 != 0 {
                result = result.neg();
            }
            empty || (mv + msv + ctx.fmo_sign_exponent(m) + small.fmo_sign_exponent(m)) % 2 == 0
        }
    };
    let expected = restrict_fmo_slice(ctx, vprime, m, f, sign)?;
    Ok(ChainReport {
        stages,
        matches: result == expected,
        result: result.to_string(),
        expected: expected.to_string(),
        signs_match,
        parity_ok,
        result_value: result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn ctx(q: Quiver, w: &[i64], v: &[i64]) -> GkloContext {
        GkloContext::new(q, DimData::new(w.to_vec(), v.to_vec()).unwrap()).unwrap()
    }

    fn fr(s: &str) -> Frac {
        s.parse().unwrap()
    }

    #[test]
    fn localization_examples() {
        let g1 = GaugeGroup::quiver(&[1]);
        let one = DressedMmo {
            gamma: Coweight(vec![vec![1]]),
            dressing: Frac::one(),
        };
        let loc = localize_mmo(&g1, &one).unwrap();
        assert_eq!(loc.len(), 1);
        assert!(loc[&Coweight(vec![vec![1]])].is_one());

        let g2 = GaugeGroup::quiver(&[2]);
        let mmo = DressedMmo {
            gamma: Coweight(vec![vec![1, 0]]),
            dressing: Frac::one(),
        };
        let loc = localize_mmo(&g2, &mmo).unwrap();
        assert_eq!(loc[&Coweight(vec![vec![1, 0]])], fr("1/(w[0,1] - w[0,2])"));
        assert_eq!(loc[&Coweight(vec![vec![0, 1]])], fr("1/(w[0,2] - w[0,1])"));

        let zero = DressedMmo {
            gamma: Coweight(vec![vec![0, 0]]),
            dressing: fr("w[0,1] + w[0,2]"),
        };
        let loc = localize_mmo(&g2, &zero).unwrap();
        assert_eq!(loc.len(), 1);
        assert_eq!(loc[&Coweight(vec![vec![0, 0]])], fr("w[0,1] + w[0,2]"));

        let bad = DressedMmo {
            gamma: Coweight(vec![vec![2, 0]]),
            dressing: Frac::one(),
        };
        assert!(matches!(localize_mmo(&g2, &bad), Err(KmError::NotMinuscule(_))));
        let asym = DressedMmo {
            gamma: Coweight(vec![vec![0, 0]]),
            dressing: fr("w[0,1]"),
        };
        assert!(matches!(localize_mmo(&g2, &asym), Err(KmError::NotInvariant(..))));
    }

    #[test]
    fn levi_restriction_matches_localization() {
        let g = GaugeGroup::quiver(&[3, 2]);
        let split = DefectSplit::new(vec![3, 2], vec![1, 1]).unwrap();
        let l = GaugeGroup::levi(&split);
        for sign in [Sign::Plus, Sign::Minus] {
            let mmo = DressedMmo {
                gamma: Coweight::fundamental(g.dims(), &[2, 1], sign),
                dressing: fr("w[0,1] + w[0,2] + w[1,2]^2"),
            };
            let terms = levi_restrict(&g, &l, &mmo).unwrap();
            assert_eq!(terms.len(), 4);
            assert_eq!(localize_sum(&l, &terms).unwrap(), localize_mmo(&g, &mmo).unwrap());
        }
    }

    #[test]
    fn gklo_image_is_the_fmo() {
        let c = ctx(Quiver::a2(), &[1, 2], &[2, 2]);
        let split = DefectSplit::new(vec![2, 2], vec![2, 2]).unwrap();
        let matter = quiver_matter(&c, &split);
        let g = GaugeGroup::quiver(&[2, 2]);
        let f = PartialSymPoly::new("w[0,1]*w[1,1]".parse().unwrap(), vec![1, 1], vec![2, 2]).unwrap();
        let plus = DressedMmo {
            gamma: Coweight::fundamental(g.dims(), &[1, 1], Sign::Plus),
            dressing: Frac::from_poly(f.value().clone()),
        };
        assert_eq!(&gklo_image(&g, &matter, &plus).unwrap(), c.fmo_plus(&[1, 1], &f).unwrap().value());
        let minus = DressedMmo {
            gamma: Coweight::fundamental(g.dims(), &[1, 1], Sign::Minus),
            dressing: plus.dressing.clone(),
        };
        let mut image = gklo_image(&g, &matter, &minus).unwrap();
        if c.fmo_sign_exponent(&[1, 1]) % 2 != 0 {
            image = image.neg();
        }
        assert_eq!(&image, c.fmo_minus(&[1, 1], &f).unwrap().value());
    }

    #[test]
    fn split_and_project_examples() {
        let c = ctx(Quiver::a1(), &[2], &[2]);
        let one = PartialSymPoly::one(vec![1], vec![2]).unwrap();
        let (_, cone) = split_and_project(&c, &[1], &[1], &one, Sign::Plus).unwrap();
        assert_eq!(cone.terms.len(), 1);
        assert_eq!(cone.terms[0].gamma, Coweight(vec![vec![1]]));
        assert_eq!(cone.terms[0].dressing, fr("1/w[0,1]"));
        let (_, cone) = split_and_project(&c, &[1], &[1], &one, Sign::Minus).unwrap();
        assert_eq!(cone.terms[0].gamma, Coweight(vec![vec![-1]]));
        assert_eq!(cone.terms[0].dressing, fr("-1/w[0,1]"));
        let two = PartialSymPoly::one(vec![2], vec![2]).unwrap();
        let (_, cone) = split_and_project(&c, &[1], &[2], &two, Sign::Plus).unwrap();
        assert!(cone.terms.is_empty());
    }

    #[test]
    fn conicity_is_required() {
        let c = ctx(Quiver::affine_sl2(), &[0, 0], &[1, 1]);
        let one = PartialSymPoly::one(vec![0, 0], vec![1, 1]).unwrap();
        let err = split_and_project(&c, &[0, 0], &[0, 0], &one, Sign::Plus).unwrap_err();
        assert_eq!(
            err,
            KmError::NotConical {
                witness: vec![1, 1],
                value: 0
            }
        );
    }

    #[test]
    fn chain_examples() {
        let c = ctx(Quiver::a1(), &[2], &[2]);
        let one = PartialSymPoly::one(vec![1], vec![2]).unwrap();
        let rep = compose_embedding(&c, &[1], &[1], &one, Sign::Plus).unwrap();
        assert!(rep.matches && rep.signs_match && rep.parity_ok);
        assert_eq!(rep.stages[2].sign_exponent, Some(0));
        assert_eq!(rep.stages[3].sign_exponent, Some(1));
        assert_eq!(rep.stages[4].factor.as_deref(), Some("-w[0,1]"));
        assert_eq!(rep.stages[4].terms[0].dressing, "1");
        assert_eq!(rep.result, "u[0,1]");

        let rep = compose_embedding(&c, &[1], &[1], &one, Sign::Minus).unwrap();
        assert!(rep.matches && rep.signs_match && rep.parity_ok);
        assert_eq!(rep.stages[4].factor.as_deref(), Some("w[0,1]"));

        let f = PartialSymPoly::new("w[0,1] + w[0,2]".parse().unwrap(), vec![0], vec![2]).unwrap();
        let rep = compose_embedding(&c, &[1], &[0], &f, Sign::Plus).unwrap();
        assert!(rep.matches);
        assert_eq!(rep.result, "w[0,1]");
    }

    #[test]
    fn chain_on_a2_and_affine() {
        let c = ctx(Quiver::a2(), &[1, 1], &[2, 2]);
        let f = PartialSymPoly::new("w[0,1]*w[1,2] + w[0,2]*w[1,2]".parse().unwrap(), vec![0, 1], vec![2, 2])
            .unwrap();
        for vp in [[1, 1], [2, 1], [1, 2], [0, 1]] {
            for sign in [Sign::Plus, Sign::Minus] {
                match compose_embedding(&c, &vp, &[0, 1], &f, sign) {
                    Ok(rep) => assert!(rep.matches && rep.signs_match && rep.parity_ok, "{vp:?} {sign}"),
                    Err(KmError::Defect(DefectError::NotDominant(_))) => {}
                    Err(e) => panic!("{vp:?} {sign}: {e}"),
                }
            }
        }
        let k = ctx(Quiver::affine_sl2(), &[2, 0], &[2, 1]);
        let one = PartialSymPoly::one(vec![1, 1], vec![2, 1]).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let rep = compose_embedding(&k, &[1, 1], &[1, 1], &one, sign).unwrap();
            assert!(rep.matches && rep.signs_match && rep.parity_ok);
        }
    }
}
