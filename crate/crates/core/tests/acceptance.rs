//! Runs the ten acceptance criteria, one PASS/FAIL line each; exits non-zero
//! when any fails.

use std::process::ExitCode;

use hypmax::validate::{run_criterion, CRITERIA};
use hypmax::QuadratureConfig;

fn main() -> ExitCode {
    let q = QuadratureConfig::default();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let r = run_criterion(id, &q).expect("criterion ids come from the table");
        println!("{}", r.line());
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
