//! The verification suite: small quivers, dimension vectors with entries at
//! most 3, and one runner per acceptance criterion.
//!
//! Framings are chosen per split as `w = max(C v'', 0)` and that plus one at
//! each vertex, so the slice framing `w - C v''` is never negative.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::defect::{verify_adding_defect, verify_slice_restriction, DefectSplit};
use crate::gklo::{GkloContext, Sign};
use crate::hilbert::{
    classify_theory, hilbert_series, hilbert_series_bruteforce, two_delta_general, TheoryClass,
};
use crate::km::{compose_embedding, split_and_project, Coweight, KmError};
use crate::quiver::{
    affine_classify, check_conicity, check_good, mu_pairing, predict, two_delta_minuscule, DimData,
    Quiver,
};
use crate::sym::{check_symmetric, PartialSymPoly};
use crate::Poly;

/// Largest entry of a suite dimension vector.
pub const MAX_DIM: i64 = 3;
/// Largest dressing degree in the suite.
pub const MAX_DRESSING_DEGREE: u32 = 2;

pub fn quivers() -> Vec<(&'static str, Quiver)> {
    vec![
        ("a1", Quiver::a1()),
        ("a2", Quiver::a2()),
        ("affine_sl2", Quiver::affine_sl2()),
    ]
}

/// All vectors `0 <= x <= upper`, lexicographic.
pub fn boxed(upper: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &u in upper {
        out = out
            .into_iter()
            .flat_map(|x| {
                (0..=u).map(move |k| {
                    let mut x = x.clone();
                    x.push(k);
                    x
                })
            })
            .collect();
    }
    out
}

/// One `(quiver, w, v, v')` of the suite.
#[derive(Clone, Debug)]
pub struct Instance {
    pub quiver_name: &'static str,
    pub ctx: GkloContext,
    pub vprime: Vec<i64>,
}

impl Instance {
    pub fn label(&self) -> String {
        format!(
            "{} w={:?} v={:?} v'={:?}",
            self.quiver_name,
            self.ctx.dims().w,
            self.ctx.dims().v,
            self.vprime
        )
    }
}

/// Every `(quiver, w, v, v')` of the suite.
pub fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, q) in quivers() {
        let c = q.cartan();
        for v in boxed(&vec![MAX_DIM; q.n()]) {
            for vprime in boxed(&v) {
                let vpp: Vec<i64> = v.iter().zip(&vprime).map(|(a, b)| a - b).collect();
                let base: Vec<i64> = c.apply(&vpp).into_iter().map(|x| x.max(0)).collect();
                for shift in 0..=1 {
                    let w: Vec<i64> = base.iter().map(|x| x + shift).collect();
                    let ctx = GkloContext::new(q.clone(), DimData::new(w, v.clone()).expect("valid dims"))
                        .expect("valid context");
                    out.push(Instance {
                        quiver_name: name,
                        ctx,
                        vprime: vprime.clone(),
                    });
                }
            }
        }
    }
    out
}

/// The distinct `(quiver, w, v)` among [`instances`].
pub fn pairs() -> Vec<(&'static str, GkloContext)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for inst in instances() {
        let key = (inst.quiver_name, inst.ctx.dims().w.clone(), inst.ctx.dims().v.clone());
        if seen.insert(key) {
            out.push((inst.quiver_name, inst.ctx));
        }
    }
    out
}

/// The dressings used for `(m, v)`.
pub fn dressings(m: &[i64], v: &[i64]) -> Vec<PartialSymPoly> {
    PartialSymPoly::monomial_basis(m, v, MAX_DRESSING_DEGREE).expect("m within v")
}

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(id: u8, name: &'static str) -> Self {
        Self {
            id,
            name,
            checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures.is_empty()
    }

    /// One line: status, id, name, counts and the first failure.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} criterion {}: {} ({} checks, {} failures)",
            self.id,
            self.name,
            self.checked,
            self.failures.len()
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; first: {f}"));
        }
        s
    }

    fn absorb(&mut self, results: Vec<(usize, Vec<String>)>) {
        for (n, f) in results {
            self.checked += n;
            self.failures.extend(f);
        }
    }
}

type Outcome = (usize, Vec<String>);

fn check(out: &mut Outcome, ok: bool, what: impl FnOnce() -> String) {
    out.0 += 1;
    if !ok {
        out.1.push(what());
    }
}

fn check_result<E: std::fmt::Display>(out: &mut Outcome, r: Result<bool, E>, what: impl Fn() -> String) {
    match r {
        Ok(ok) => check(out, ok, what),
        Err(e) => check(out, false, || format!("{}: {e}", what())),
    }
}

/// Restriction along adding defect (positive operators) and along the slice
/// embedding (both signs).
pub fn criterion_restriction() -> CriterionReport {
    let mut rep = CriterionReport::new(1, "restriction theorems");
    let results: Vec<Outcome> = instances()
        .par_iter()
        .map(|inst| {
            let mut out = (0, Vec::new());
            let v = inst.ctx.dims().v.clone();
            for m in boxed(&v) {
                for f in dressings(&m, &v) {
                    let what = |kind: &str| format!("{} m={m:?} f={} {kind}", inst.label(), f.value());
                    check_result(
                        &mut out,
                        verify_adding_defect(&inst.ctx, &inst.vprime, &m, &f).map(|c| c.holds),
                        || what("adding defect"),
                    );
                    for sign in [Sign::Plus, Sign::Minus] {
                        check_result(
                            &mut out,
                            verify_slice_restriction(&inst.ctx, &inst.vprime, &m, &f, sign).map(|c| c.holds),
                            || what(&format!("slice {sign}")),
                        );
                    }
                }
            }
            out
        })
        .collect();
    rep.absorb(results);
    rep
}

/// The Chevalley involution squares to the identity and swaps the signs.
pub fn criterion_chevalley() -> CriterionReport {
    let mut rep = CriterionReport::new(2, "Chevalley involution");
    let results: Vec<Outcome> = pairs()
        .par_iter()
        .map(|(name, ctx)| {
            let mut out = (0, Vec::new());
            let v = ctx.dims().v.clone();
            for m in boxed(&v) {
                for f in dressings(&m, &v) {
                    let what = || format!("{name} w={:?} v={v:?} m={m:?} f={}", ctx.dims().w, f.value());
                    let r = (|| -> Result<bool, crate::gklo::GkloError> {
                        let plus = ctx.fmo_plus(&m, &f)?;
                        let minus = ctx.fmo_minus(&m, &f)?;
                        let ip = ctx.chevalley(&plus)?;
                        let im = ctx.chevalley(&minus)?;
                        Ok(ip.value() == minus.value()
                            && im.value() == plus.value()
                            && ctx.chevalley(&ip)?.value() == plus.value())
                    })();
                    check_result(&mut out, r, what);
                }
            }
            out
        })
        .collect();
    rep.absorb(results);
    rep
}

/// The determinant identity at every vertex.
pub fn criterion_d_identity() -> CriterionReport {
    let mut rep = CriterionReport::new(3, "determinant identity");
    let results: Vec<Outcome> = pairs()
        .par_iter()
        .map(|(name, ctx)| {
            let mut out = (0, Vec::new());
            for i in 0..ctx.n() {
                check_result(&mut out, ctx.d_identity(i).map(|d| d.holds), || {
                    format!("{name} w={:?} v={:?} i={i}", ctx.dims().w, ctx.dims().v)
                });
            }
            out
        })
        .collect();
    rep.absorb(results);
    rep
}

/// The Kac-Moody chain against the direct slice restriction on every
/// instance where `(w, v'')` is conical; elsewhere the chain must refuse.
pub fn criterion_km_chain() -> CriterionReport {
    let mut rep = CriterionReport::new(4, "Kac-Moody embedding chain");
    let results: Vec<(Outcome, usize, usize)> = instances()
        .par_iter()
        .map(|inst| {
            let mut out = (0, Vec::new());
            let split = DefectSplit::new(inst.ctx.dims().v.clone(), inst.vprime.clone()).expect("v' <= v");
            let d = DimData::new(inst.ctx.dims().w.clone(), split.vdoubleprime()).expect("dims");
            let conical = check_conicity(&d, inst.ctx.cartan()).holds;
            let v = inst.ctx.dims().v.clone();
            if !conical {
                let m = vec![0; v.len()];
                let one = PartialSymPoly::one(m.clone(), v.clone()).expect("trivial dressing");
                let refused = matches!(
                    split_and_project(&inst.ctx, &inst.vprime, &m, &one, Sign::Plus),
                    Err(KmError::NotConical { .. })
                );
                check(&mut out, refused, || format!("{} accepted a non-conical split", inst.label()));
                return (out, 0, 1);
            }
            for m in boxed(&v) {
                for f in dressings(&m, &v) {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let what = || format!("{} m={m:?} f={} {sign}", inst.label(), f.value());
                        let r = compose_embedding(&inst.ctx, &inst.vprime, &m, &f, sign)
                            .map(|rep| rep.matches && rep.signs_match && rep.parity_ok);
                        check_result(&mut out, r, what);
                    }
                }
            }
            (out, 1, 0)
        })
        .collect();
    let (mut con, mut non) = (0, 0);
    for (o, c, n) in results {
        rep.absorb(vec![o]);
        con += c;
        non += n;
    }
    rep.notes.push(format!("{con} conical splits, {non} non-conical splits refused"));
    rep
}

/// The monopole formula: closed form for A1 and agreement with brute force.
pub fn criterion_hilbert() -> CriterionReport {
    let mut rep = CriterionReport::new(5, "Hilbert series");
    let mut out = (0, Vec::new());
    let a1 = GkloContext::new(Quiver::a1(), DimData::new(vec![2], vec![1]).expect("dims")).expect("ctx");
    let expected: Vec<i64> = (0..=20).map(|k| if k % 2 == 0 { k + 1 } else { 0 }).collect();
    check_result(
        &mut out,
        hilbert_series(&a1, 20).map(|h| h.coeffs() == expected.as_slice()),
        || "A1 w=(2) v=(1) to order 20".to_string(),
    );
    rep.absorb(vec![out]);
    let results: Vec<Outcome> = pairs()
        .par_iter()
        .filter(|(_, ctx)| classify_theory(ctx).map_or(false, |c| c.class != TheoryClass::Bad))
        .map(|(name, ctx)| {
            let mut out = (0, Vec::new());
            let what = || format!("{name} w={:?} v={:?}", ctx.dims().w, ctx.dims().v);
            match (hilbert_series(ctx, 10), hilbert_series_bruteforce(ctx, 10)) {
                (Ok(a), Ok(b)) => {
                    let good = classify_theory(ctx).map_or(false, |c| c.class == TheoryClass::Good);
                    let shape = a.coeff(0) == 1
                        && a.coeffs().iter().all(|&c| c >= 0)
                        && (!good || a.coeff(1) == 0);
                    check(&mut out, a == b && shape, || format!("{}: {a} vs {b}", what()));
                }
                (Err(e), _) | (_, Err(e)) => check(&mut out, false, || format!("{}: {e}", what())),
            }
            out
        })
        .collect();
    rep.absorb(results);
    rep
}

/// Direct conicity and goodness checks against the level prediction on all
/// dominant affine sl2 pairs, and classification on the finite-type pairs.
pub fn criterion_classification() -> CriterionReport {
    let mut rep = CriterionReport::new(6, "classification");
    let mut out = (0, Vec::new());
    let aff = Quiver::affine_sl2();
    let c = aff.cartan();
    let ty = affine_classify(&c);
    let mut levels = BTreeSet::new();
    for w in boxed(&[MAX_DIM, MAX_DIM]) {
        for v in boxed(&[MAX_DIM, MAX_DIM]) {
            let d = DimData::new(w.clone(), v.clone()).expect("dims");
            let Some(p) = predict(&d, &c, &ty) else { continue };
            levels.insert(ty.level(&d, &c).expect("affine").min(2));
            let conical = check_conicity(&d, &c).holds;
            let good = check_good(&d, &c).holds;
            check(&mut out, p.agrees_with(conical, good), || {
                format!("affine_sl2 w={w:?} v={v:?}: predicted {}, conical {conical}, good {good}", p.as_str())
            });
            let ctx = GkloContext::new(aff.clone(), d.clone()).expect("ctx");
            let class = classify_theory(&ctx).expect("classify").class;
            check(
                &mut out,
                (class == TheoryClass::Good) == good && (class != TheoryClass::Bad) == conical,
                || format!("affine_sl2 w={w:?} v={v:?}: classified {}", class.as_str()),
            );
        }
    }
    check(&mut out, levels.len() == 3, || format!("levels represented: {levels:?}"));
    for (name, ctx) in pairs() {
        if name == "affine_sl2" || !mu_pairing(ctx.dims(), ctx.cartan()).dominant {
            continue;
        }
        let class = classify_theory(&ctx).expect("classify").class;
        check(&mut out, class == TheoryClass::Good, || {
            format!("{name} w={:?} v={:?} classified {}", ctx.dims().w, ctx.dims().v, class.as_str())
        });
    }
    rep.absorb(vec![out]);
    rep
}

/// `2Delta` of fundamental coweights against the closed formula, and its
/// invariance under every suite embedding.
pub fn criterion_degrees() -> CriterionReport {
    let mut rep = CriterionReport::new(7, "degree cross-check");
    let mut out = (0, Vec::new());
    for (name, ctx) in pairs() {
        let v = ctx.dims().v.clone();
        let dims: Vec<usize> = v.iter().map(|&x| x as usize).collect();
        for m in boxed(&v) {
            let closed = two_delta_minuscule(ctx.dims(), ctx.cartan(), &m).expect("m within v");
            for sign in [Sign::Plus, Sign::Minus] {
                let g = Coweight::fundamental(&dims, &m, sign);
                let general = two_delta_general(&ctx, &g).expect("shape");
                check(&mut out, general == closed, || {
                    format!("{name} w={:?} v={v:?} m={m:?} {sign}: {general} vs {closed}", ctx.dims().w)
                });
            }
        }
    }
    for inst in instances() {
        let Ok(small) = crate::defect::slice_context(&inst.ctx, &inst.vprime) else {
            check(&mut out, false, || format!("{}: negative slice framing", inst.label()));
            continue;
        };
        let big_mu = mu_pairing(inst.ctx.dims(), inst.ctx.cartan()).values;
        let small_mu = mu_pairing(small.dims(), small.cartan()).values;
        for m in boxed(&inst.vprime) {
            let a: i64 = m.iter().zip(&big_mu).map(|(x, y)| x * y).sum();
            let b: i64 = m.iter().zip(&small_mu).map(|(x, y)| x * y).sum();
            let da = two_delta_minuscule(inst.ctx.dims(), inst.ctx.cartan(), &m).expect("m");
            let db = two_delta_minuscule(small.dims(), small.cartan(), &m).expect("m");
            check(&mut out, a == b && da == db, || format!("{} m={m:?}: {a} vs {b}", inst.label()));
        }
    }
    rep.absorb(vec![out]);
    rep
}

/// Symmetry of every operator in the suite, linearity over fully symmetric
/// dressings, and the generating series identities.
pub fn criterion_symmetry() -> CriterionReport {
    let mut rep = CriterionReport::new(8, "symmetry, linearity and generating series");
    let results: Vec<Outcome> = pairs()
        .par_iter()
        .map(|(name, ctx)| {
            let mut out = (0, Vec::new());
            let v = ctx.dims().v.clone();
            let label = || format!("{name} w={:?} v={v:?}", ctx.dims().w);
            // power sum p_1 at every vertex, symmetric under the whole group
            let p1 = (0..ctx.n())
                .flat_map(|i| (1..=ctx.v(i)).map(move |r| (i, r)))
                .fold(Poly::zero(), |acc, (i, r)| acc.add(&Poly::var(crate::Var::w(i, r))));
            for m in boxed(&v) {
                for f in dressings(&m, &v) {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let what = || format!("{} m={m:?} f={} {sign}", label(), f.value());
                        let r = (|| -> Result<bool, crate::gklo::GkloError> {
                            let e = ctx.fmo(sign, &m, &f)?;
                            let sym = check_symmetric(e.value(), &v);
                            let lin = if f.w_degree() == 0 {
                                let g = f.mul_poly(&p1)?;
                                ctx.fmo(sign, &m, &g)?.value() == &e.value().mul_poly(&p1)
                            } else {
                                true
                            };
                            Ok(sym && lin)
                        })();
                        check_result(&mut out, r, what);
                    }
                }
            }
            for i in 0..ctx.n() {
                check_result(&mut out, ctx.verify_generating_series(i), || format!("{} i={i}", label()));
            }
            out
        })
        .collect();
    rep.absorb(results);
    rep
}

/// All criteria in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_restriction(),
        criterion_chevalley(),
        criterion_d_identity(),
        criterion_km_chain(),
        criterion_hilbert(),
        criterion_classification(),
        criterion_degrees(),
        criterion_symmetry(),
    ]
}

