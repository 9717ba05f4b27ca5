//! Crank–Nicolson convergence tables for the two manufactured problems and
//! the extrapolated table, written as CSV plus aligned text.
//!
//! ```text
//! cargo run --release --example convergence_tables -- [out-dir] [max|l2]
//! ```

use std::path::PathBuf;

use rsfade::harness::{emit_table, render_text, run_convergence, ConfigLayer, RunConfig};

fn main() -> rsfade::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("rsfade-tables"));
    let norm = args.next().unwrap_or_else(|| "max".into());
    std::fs::create_dir_all(&dir)?;

    let runs = [
        ("cn_example1", format!(r#"{{"problem": "example1", "norm": "{norm}"}}"#)),
        ("cn_example2", format!(r#"{{"problem": "example2", "norm": "{norm}"}}"#)),
        ("rem_example2", format!(r#"{{"problem": "example2", "rem": true, "norm": "{norm}"}}"#)),
    ];
    for (name, json) in runs {
        let config = RunConfig::resolve(ConfigLayer::from_json(&json)?)?;
        let report = run_convergence(&config)?;
        println!("{}", render_text(&report));
        let csv = dir.join(format!("{name}.csv"));
        emit_table(&report, &csv)?;
        println!(
            "-> {} ({:.2} s of solver time)\n",
            csv.display(),
            report.total_wall_time().as_secs_f64()
        );
    }
    Ok(())
}
