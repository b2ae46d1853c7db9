//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use freeidx::acceptance::{self, CriterionOutcome};

fn report(o: &CriterionOutcome) {
    let limit = o.time_limit_seconds.map(|l| format!(" (limit {l:.0} s)")).unwrap_or_default();
    println!(
        "[{}] criterion {}: {} in {:.2} s{limit}: {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.name,
        o.seconds,
        o.detail
    );
}

fn main() -> ExitCode {
    // accept and ignore libtest arguments such as --nocapture
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let outcomes = acceptance::run_all();
    for o in &outcomes {
        report(o);
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
