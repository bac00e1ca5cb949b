//! One line per acceptance criterion; the target fails if any criterion does.
//! Runs without the test harness so the lines are never captured.

use std::process::ExitCode;
use std::time::Instant;

use monopole_core::suite;

fn main() -> ExitCode {
    let start = Instant::now();
    let runners: [fn() -> suite::CriterionReport; 8] = [
        suite::criterion_restriction,
        suite::criterion_chevalley,
        suite::criterion_d_identity,
        suite::criterion_km_chain,
        suite::criterion_hilbert,
        suite::criterion_classification,
        suite::criterion_degrees,
        suite::criterion_symmetry,
    ];
    let mut failed = Vec::new();
    for run in runners {
        let t = Instant::now();
        let rep = run();
        println!("{} [{:.1}s]", rep.line(), t.elapsed().as_secs_f64());
        for note in &rep.notes {
            println!("    {note}");
        }
        if !rep.passed() {
            for f in rep.failures.iter().take(5) {
                println!("    {f}");
            }
            failed.push(rep.id);
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
