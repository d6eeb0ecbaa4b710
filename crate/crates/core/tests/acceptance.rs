//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion. Criteria listed as unattainable are reported as FAIL
//! but do not fail the run; any other failure, or an unattainable criterion
//! that starts passing, does.

use std::process::ExitCode;

use ybx_core::acceptance::{run_all, Config, KNOWN_UNATTAINABLE};

fn main() -> ExitCode {
    let quick = std::env::args().any(|a| a == "--quick") || std::env::var_os("YBX_QUICK").is_some();
    let outcomes = run_all(&Config { quick, ..Default::default() });
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_UNATTAINABLE.contains(&o.id);
        let verdict = match (o.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (unattainable)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if o.passed == known {
            unexpected += 1;
        }
        println!(
            "criterion {:>2}: {verdict}  worst {:.2e}  [{:.2?}]  {}: {}",
            o.id, o.worst, o.elapsed, o.title, o.detail
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria pass; {unexpected} unexpected outcome(s)", outcomes.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
