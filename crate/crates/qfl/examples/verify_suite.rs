//! Run the full fixed verification suite: truth-table reference rows,
//! label/inequality equivalence, exhaustive oracle sweeps in both modes,
//! the ancilla reset invariant with its mutation check, and the resource
//! formulas. Exits nonzero if anything fails.
//!
//! ```bash
//! cargo run -p qfl --example verify_suite
//! ```

use std::process::ExitCode;

use qfl::verify::{all_passed, reports_to_text, run_suite};

fn main() -> ExitCode {
    let reports = match run_suite() {
        Ok(reports) => reports,
        Err(err) => {
            eprintln!("suite failed to run: {err}");
            return ExitCode::FAILURE;
        }
    };
    print!("{}", reports_to_text(&reports));
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed}/{} checks passed", reports.len());
    if all_passed(&reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
