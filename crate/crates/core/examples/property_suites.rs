//! Runs every property suite: coefficient laws, operator accuracy, matrix
//! structure, stability, solver agreement and the classical limit.

use rsfade::verify;

fn main() -> rsfade::Result<()> {
    let verbose = std::env::args().any(|a| a == "-v" || a == "--verbose");
    let mut failed = false;
    for report in verify::run_all()? {
        println!("{report}");
        for c in &report.checks {
            if verbose || !c.passed {
                println!("    [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
            }
        }
        failed |= !report.passed();
    }
    if failed {
        std::process::exit(1);
    }
    Ok(())
}
