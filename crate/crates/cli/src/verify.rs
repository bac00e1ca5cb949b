use clap::Subcommand;
use monopole_core::defect::{verify_adding_defect, verify_gklo_square, verify_slice_restriction, Comparison, DefectSplit};
use monopole_core::gklo::Sign;
use monopole_core::km::{compose_embedding, KmError};
use monopole_core::suite::{boxed, dressings};
use monopole_core::sym::PartialSymPoly;
use monopole_core::Frac;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::job::{Job, JobArgs};
use crate::{CliError, Outcome};

#[derive(Subcommand, Clone, Debug)]
pub enum Check {
    /// Restriction of operators along the slice embedding.
    Restriction(JobArgs),
    /// Compatibility of operators and generators with adding defect.
    AddingDefect(JobArgs),
    /// Chevalley involution on positive and negative operators.
    Involution(JobArgs),
    /// Determinant identity at every vertex.
    DIdentity(JobArgs),
    /// Levi, cone, Fourier and forgetting chain against the direct restriction.
    KmEmbedding(JobArgs),
    /// Sign rule for reversing each edge.
    Orientation(JobArgs),
}

impl Check {
    pub fn args(&self) -> &JobArgs {
        match self {
            Check::Restriction(a)
            | Check::AddingDefect(a)
            | Check::Involution(a)
            | Check::DIdentity(a)
            | Check::KmEmbedding(a)
            | Check::Orientation(a) => a,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Check::Restriction(_) => "restriction",
            Check::AddingDefect(_) => "adding-defect",
            Check::Involution(_) => "involution",
            Check::DIdentity(_) => "d-identity",
            Check::KmEmbedding(_) => "km-embedding",
            Check::Orientation(_) => "orientation",
        }
    }
}

struct Case {
    inputs: Value,
    holds: bool,
    lhs: String,
    rhs: String,
    detail: Option<Value>,
}

impl Case {
    fn compare(inputs: Value, c: Comparison) -> Self {
        Self::sides(inputs, &c.lhs, &c.rhs, c.holds)
    }

    fn sides(inputs: Value, lhs: &Frac, rhs: &Frac, holds: bool) -> Self {
        Case {
            inputs,
            holds,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            detail: None,
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "inputs": self.inputs,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
        });
        if let Some(d) = &self.detail {
            v["detail"] = d.clone();
        }
        v
    }
}

fn internal<E: std::fmt::Display>(inputs: &Value) -> impl Fn(E) -> CliError {
    let label = inputs.to_string();
    move |e| CliError::Internal(format!("{label}: {e}"))
}

/// One operator to check: `(v', m, f, sign)`.
struct Task {
    vprime: Vec<i64>,
    m: Vec<i64>,
    f: PartialSymPoly,
    sign: Sign,
}

impl Task {
    fn inputs(&self) -> Value {
        json!({
            "vprime": self.vprime,
            "m": self.m,
            "f": self.f.to_string(),
            "sign": self.sign.to_string(),
        })
    }
}

fn ms(job: &Job) -> Vec<Vec<i64>> {
    match &job.m {
        Some(m) => vec![m.clone()],
        None => boxed(job.v()),
    }
}

fn fs(job: &Job, m: &[i64]) -> Result<Vec<PartialSymPoly>, CliError> {
    if job.f.is_some() {
        Ok(vec![job.dressing(m)?])
    } else {
        Ok(dressings(m, job.v()))
    }
}

/// `w - C v''`, the framing of the slice through `v'`.
fn slice_framing(job: &Job, vprime: &[i64]) -> Vec<i64> {
    let vpp: Vec<i64> = job.v().iter().zip(vprime).map(|(a, b)| a - b).collect();
    let cv = job.ctx.cartan().apply(&vpp);
    job.ctx.dims().w.iter().zip(&cv).map(|(a, b)| a - b).collect()
}

/// The requested `v'`, or every `v'` in the box; with `slice`, only those
/// with dominant `w'` (an explicit non-dominant `v'` is an input error).
fn vprimes(job: &Job, slice: bool, notes: &mut Vec<String>) -> Result<Vec<Vec<i64>>, CliError> {
    match &job.vprime {
        Some(vp) => {
            let wp = slice_framing(job, vp);
            if slice && wp.iter().any(|&x| x < 0) {
                return Err(CliError::Input(format!("w' = w - C v'' = {wp:?} has a negative entry")));
            }
            Ok(vec![vp.clone()])
        }
        None => {
            let all = boxed(job.v());
            let total = all.len();
            let kept: Vec<_> = all
                .into_iter()
                .filter(|vp| !slice || slice_framing(job, vp).iter().all(|&x| x >= 0))
                .collect();
            if kept.len() < total {
                notes.push(format!("{} of {total} splits skipped: w' not dominant", total - kept.len()));
            }
            Ok(kept)
        }
    }
}

fn tasks(job: &Job, vps: &[Vec<i64>], signs: &[Sign]) -> Result<Vec<Task>, CliError> {
    let mut out = Vec::new();
    for vp in vps {
        for m in ms(job) {
            for f in fs(job, &m)? {
                for &sign in signs {
                    out.push(Task {
                        vprime: vp.clone(),
                        m: m.clone(),
                        f: f.clone(),
                        sign,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn run_tasks<T, F>(items: &[T], f: F) -> Result<Vec<Option<Case>>, CliError>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<Case>, CliError> + Send + Sync,
{
    items.par_iter().map(f).collect()
}

pub fn run(check: &Check, job: &Job) -> Result<Outcome, CliError> {
    let ctx = &job.ctx;
    let mut notes = Vec::new();
    let cases: Vec<Option<Case>> = match check {
        Check::Restriction(_) => {
            let list = tasks(job, &vprimes(job, true, &mut notes)?, &job.signs())?;
            run_tasks(&list, |t| {
                let inputs = t.inputs();
                let c = verify_slice_restriction(ctx, &t.vprime, &t.m, &t.f, t.sign).map_err(internal(&inputs))?;
                Ok(Some(Case::compare(inputs, c)))
            })?
        }
        Check::AddingDefect(_) => {
            let vps = vprimes(job, false, &mut notes)?;
            let list = tasks(job, &vps, &[Sign::Plus])?;
            let mut cases = run_tasks(&list, |t| {
                let inputs = t.inputs();
                let c = verify_adding_defect(ctx, &t.vprime, &t.m, &t.f).map_err(internal(&inputs))?;
                Ok(Some(Case::compare(inputs, c)))
            })?;
            let gens: Vec<(Vec<i64>, usize)> = vps
                .iter()
                .flat_map(|vp| (0..ctx.n()).map(move |i| (vp.clone(), i)))
                .collect();
            for (vp, i) in &gens {
                let inputs = json!({"vprime": vp, "vertex": i});
                let split = DefectSplit::new(job.v().to_vec(), vp.clone()).map_err(internal(&inputs))?;
                let (q, p) = verify_gklo_square(ctx, &split, *i).map_err(internal(&inputs))?;
                for (name, c) in [("Q", q), ("P", p)] {
                    let mut inputs = inputs.clone();
                    inputs["generator"] = json!(name);
                    cases.push(Some(Case::compare(inputs, c)));
                }
            }
            cases
        }
        Check::Involution(_) => {
            let list = tasks(job, &[job.v().to_vec()], &[Sign::Plus])?;
            let pairs = run_tasks(&list, |t| {
                let inputs = json!({"m": t.m, "f": t.f.to_string()});
                let err = internal(&inputs);
                let plus = ctx.fmo_plus(&t.m, &t.f).map_err(&err)?;
                let minus = ctx.fmo_minus(&t.m, &t.f).map_err(&err)?;
                let once = ctx.chevalley(&plus).map_err(&err)?;
                let twice = ctx.chevalley(&once).map_err(&err)?;
                let holds = once.value() == minus.value() && twice.value() == plus.value();
                let mut case = Case::sides(inputs, once.value(), minus.value(), holds);
                case.detail = Some(json!({
                    "involution_holds": twice.value() == plus.value(),
                    "positive": plus.value().to_string(),
                }));
                Ok(Some(case))
            })?;
            pairs
        }
        Check::DIdentity(_) => {
            let vertices: Vec<usize> = (0..ctx.n()).collect();
            run_tasks(&vertices, |&i| {
                let inputs = json!({"vertex": i});
                let err = internal(&inputs);
                let id = ctx.d_identity(i).map_err(&err)?;
                let q = ctx.q_image(i).map_err(&err)?;
                let lhs = id.d.value().mul_poly(&q);
                let mut case = Case::sides(inputs, &lhs, &id.rhs, id.holds);
                case.detail = Some(json!({"d": id.d.value().to_string()}));
                Ok(Some(case))
            })?
        }
        Check::KmEmbedding(_) => {
            let explicit = job.vprime.is_some();
            let list = tasks(job, &vprimes(job, true, &mut notes)?, &job.signs())?;
            let cases = run_tasks(&list, |t| {
                let inputs = t.inputs();
                match compose_embedding(ctx, &t.vprime, &t.m, &t.f, t.sign) {
                    Ok(rep) => {
                        let holds = rep.matches && rep.signs_match && rep.parity_ok;
                        let chain = serde_json::to_value(&rep).map_err(internal(&inputs))?;
                        Ok(Some(Case {
                            inputs,
                            holds,
                            lhs: rep.result.clone(),
                            rhs: rep.expected.clone(),
                            detail: Some(chain),
                        }))
                    }
                    Err(e @ KmError::NotConical { .. }) if explicit => Err(CliError::Input(e.to_string())),
                    Err(KmError::NotConical { .. }) => Ok(None),
                    Err(e) => Err(internal(&inputs)(e)),
                }
            })?;
            let refused = cases.iter().filter(|c| c.is_none()).count();
            if refused > 0 {
                notes.push(format!("{refused} operators skipped: split not conical"));
            }
            cases
        }
        Check::Orientation(_) => {
            let list = tasks(job, &[job.v().to_vec()], &[Sign::Plus])?;
            let edges: Vec<(usize, &Task)> = (0..job.quiver.edges().len())
                .flat_map(|a| list.iter().map(move |t| (a, t)))
                .collect();
            run_tasks(&edges, |&(a, t)| {
                let inputs = json!({"edge": a, "m": t.m, "f": t.f.to_string()});
                let c = ctx.verify_orientation(a, &t.m, &t.f).map_err(internal(&inputs))?;
                let mut case = Case::sides(inputs, &c.flipped, &c.predicted, c.holds);
                case.detail = Some(json!({"sign": c.sign}));
                Ok(Some(case))
            })?
        }
    };
    let cases: Vec<Case> = cases.into_iter().flatten().collect();
    let failed = cases.iter().filter(|c| !c.holds).count();
    if job.json {
        let report = json!({
            "check": check.name(),
            "quiver": job.quiver.names(),
            "w": ctx.dims().w,
            "v": ctx.dims().v,
            "checked": cases.len(),
            "failed": failed,
            "all_hold": failed == 0,
            "notes": notes,
            "cases": cases.iter().map(Case::to_json).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        for c in &cases {
            println!("{} {}", if c.holds { "ok  " } else { "FAIL" }, c.inputs);
            if !c.holds {
                println!("  lhs: {}", c.lhs);
                println!("  rhs: {}", c.rhs);
            }
        }
        for n in &notes {
            println!("note: {n}");
        }
        println!("{}: {} checked, {failed} failed", check.name(), cases.len());
    }
    Ok(if failed == 0 { Outcome::Pass } else { Outcome::Fail })
}
