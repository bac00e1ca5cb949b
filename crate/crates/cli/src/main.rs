//! `monopole`: classification, operators, Hilbert series and symbolic
//! verification from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input, 3 internal mismatch.

mod job;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monopole_core::gklo::Sign;
use monopole_core::hilbert::{classify_theory, hilbert_series, HilbertError};
use monopole_core::quiver::{affine_classify, box_size, check_conicity, check_good, predict, DimData, Kind};
use serde_json::json;

use job::{Job, JobArgs};

/// Classification, monopole operators and Hilbert series of quiver gauge theories.
#[derive(Parser, Debug)]
#[command(name = "monopole", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conicity and goodness of (w, v''), where v'' = v - v' if --vprime is given.
    Classify(JobArgs),
    /// A fundamental monopole operator in GKLO coordinates.
    Fmo(JobArgs),
    /// Truncated Hilbert series from the monopole formula.
    Hilbert(JobArgs),
    /// Symbolic checks over a single case or the whole box of cases.
    Verify {
        #[command(subcommand)]
        check: verify::Check,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

pub enum Outcome {
    Pass,
    Fail,
}

const BOX_WARNING: u128 = 10_000_000;

fn emit(job: &Job, report: serde_json::Value, text: impl FnOnce() -> String) {
    if job.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        println!("{}", text());
    }
}

fn classify(job: &Job) -> Result<Outcome, CliError> {
    let w = job.ctx.dims().w.clone();
    let vpp: Vec<i64> = match &job.vprime {
        Some(vp) => job.v().iter().zip(vp).map(|(a, b)| a - b).collect(),
        None => job.v().to_vec(),
    };
    let size = box_size(&vpp);
    if size > BOX_WARNING {
        eprintln!("warning: enumerating a box of {size} points");
    }
    let d = DimData::for_quiver(&job.quiver, w.clone(), vpp.clone()).map_err(|e| CliError::Input(e.to_string()))?;
    let c = job.ctx.cartan();
    let conicity = check_conicity(&d, c);
    let goodness = check_good(&d, c);
    let ty = affine_classify(c);
    let level = ty.level(&d, c);
    let prediction = predict(&d, c, &ty);
    let inner = job.ctx.with_dims(w.clone(), vpp.clone()).map_err(|e| CliError::Input(e.to_string()))?;
    let theory = classify_theory(&inner).map_err(|e| CliError::Internal(e.to_string()))?;

    let mut mismatches = Vec::new();
    if let Some(p) = prediction {
        if !p.agrees_with(conicity.holds, goodness.holds) {
            mismatches.push(format!(
                "level prediction {} disagrees with the direct check (conical {}, good {})",
                p.as_str(),
                conicity.holds,
                goodness.holds
            ));
        }
    }
    let class = theory.class.as_str();
    if (class == "good") != goodness.holds || (class != "bad") != conicity.holds {
        mismatches.push(format!("operator degrees classify the theory as {class}"));
    }

    let kind = match ty.kind {
        Kind::Finite => "finite",
        Kind::Affine => "affine",
        Kind::Indefinite => "indefinite",
    };
    let report = json!({
        "w": w,
        "v_doubleprime": vpp,
        "conical": conicity.holds,
        "good": goodness.holds,
        "conicity": conicity,
        "goodness": goodness,
        "type": kind,
        "marks": ty.marks,
        "level": level,
        "theorem_prediction": prediction.map(|p| p.as_str()),
        "theory": theory,
        "mismatches": mismatches,
    });
    emit(job, report, || {
        let mut s = format!("conical: {}\ngood: {}\ntype: {kind}", conicity.holds, goodness.holds);
        if let Some(w) = &conicity.witness {
            s.push_str(&format!("\nconicity witness: {w:?}"));
        }
        if let Some(w) = &goodness.witness {
            s.push_str(&format!("\ngoodness witness: {w:?}"));
        }
        if let Some(l) = level {
            s.push_str(&format!("\nlevel: {l}"));
        }
        if let Some(p) = prediction {
            s.push_str(&format!("\nprediction: {}", p.as_str()));
        }
        s.push_str(&format!("\ntheory: {class}"));
        s
    });
    if mismatches.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Err(CliError::Internal(mismatches.join("; ")))
    }
}

fn fmo(job: &Job) -> Result<Outcome, CliError> {
    let m = job.m.clone().unwrap_or_else(|| vec![0; job.ctx.n()]);
    let sign = job.sign.unwrap_or(Sign::Plus);
    let f = job.dressing(&m)?;
    let e = job
        .ctx
        .fmo(sign, &m, &f)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let value = e.value();
    let report = json!({
        "m": m,
        "sign": sign.to_string(),
        "dressing": f.value().to_string(),
        "result": {"num": value.num().to_string(), "den": value.den().to_string()},
        "ring": e.tag().as_str(),
    });
    emit(job, report, || value.to_string());
    Ok(Outcome::Pass)
}

fn hilbert(job: &Job) -> Result<Outcome, CliError> {
    let order = job.order.unwrap_or(10);
    let class = classify_theory(&job.ctx).map_err(|e| CliError::Internal(e.to_string()))?;
    let series = hilbert_series(&job.ctx, order).map_err(|e| match e {
        HilbertError::Bad { .. } => CliError::Input(format!("no Hilbert series: {e}")),
        _ => CliError::Internal(e.to_string()),
    })?;
    let report = json!({
        "order": order,
        "coeffs": series.coeffs(),
        "classification": class.class.as_str(),
        "min_degree": class.min_degree,
        "witness": class.witness,
    });
    emit(job, report, || format!("{series}\nclassification: {}", class.class.as_str()));
    Ok(Outcome::Pass)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Classify(a) => classify(&Job::from_args(a)?),
        Command::Fmo(a) => fmo(&Job::from_args(a)?),
        Command::Hilbert(a) => hilbert(&Job::from_args(a)?),
        Command::Verify { check } => verify::run(check, &Job::from_args(check.args())?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
