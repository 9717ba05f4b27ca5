//! Long-time profiles on `[0, π]`: varying the advection order, varying the
//! dispersion order, and a single run sampled at several times. Each sweep
//! is written as a wide CSV (`x` then one column per curve).
//!
//! ```text
//! cargo run --release --example parameter_sweeps -- [out-dir]
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use rsfade::harness::{format_sci, profile, Profile};
use rsfade::problems::example3;
use rsfade::{Grid, SolverChoice};

fn grid(t_final: f64) -> rsfade::Result<Grid> {
    Grid::from_steps(PI, 0.01, t_final, 0.01)
}

fn final_profile(alpha: f64, beta: f64, t: f64) -> rsfade::Result<Profile> {
    profile(&example3(alpha, beta)?, &grid(t)?, &[t], &SolverChoice::dense())
}

fn write_wide(path: &PathBuf, labels: &[String], x: &[f64], curves: &[Vec<f64>]) -> rsfade::Result<()> {
    let mut out = format!("x,{}\n", labels.join(","));
    for (i, xi) in x.iter().enumerate() {
        let row: Vec<String> = curves.iter().map(|c| format_sci(c[i])).collect();
        let _ = writeln!(out, "{},{}", format_sci(*xi), row.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn report(title: &str, labels: &[String], curves: &[Vec<f64>]) {
    println!("{title}");
    for (l, c) in labels.iter().zip(curves) {
        println!("  {l:<10} max u = {:.5}", c.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
}

fn main() -> rsfade::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("rsfade-sweeps"));
    std::fs::create_dir_all(&dir)?;
    let x: Vec<f64> = (0..=grid(1.0)?.m()).map(|i| grid(1.0).unwrap().x(i)).collect();

    let alphas = [0.1, 0.3, 0.5, 0.7, 0.9];
    let curves: Vec<Vec<f64>> = alphas
        .par_iter()
        .map(|&a| final_profile(a, 1.7, 10.0).map(|p| p.numeric[0].clone()))
        .collect::<rsfade::Result<_>>()?;
    let labels: Vec<String> = alphas.iter().map(|a| format!("alpha={a}")).collect();
    report("T = 10, beta = 1.7", &labels, &curves);
    write_wide(&dir.join("alpha_sweep.csv"), &labels, &x, &curves)?;

    let betas = [1.2, 1.4, 1.6, 1.8, 2.0];
    let curves: Vec<Vec<f64>> = betas
        .par_iter()
        .map(|&b| final_profile(0.3, b, 10.0).map(|p| p.numeric[0].clone()))
        .collect::<rsfade::Result<_>>()?;
    let labels: Vec<String> = betas.iter().map(|b| format!("beta={b}")).collect();
    report("T = 10, alpha = 0.3", &labels, &curves);
    write_wide(&dir.join("beta_sweep.csv"), &labels, &x, &curves)?;

    let times = [1.0, 2.0, 4.0, 8.0];
    let prof = profile(&example3(0.4, 1.6)?, &grid(8.0)?, &times, &SolverChoice::dense())?;
    let labels: Vec<String> = times.iter().map(|t| format!("t={t}")).collect();
    report("alpha = 0.4, beta = 1.6", &labels, &prof.numeric);
    write_wide(&dir.join("time_sweep.csv"), &labels, &x, &prof.numeric)?;

    println!("curves written to {}", dir.display());
    Ok(())
}
