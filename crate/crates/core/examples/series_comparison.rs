//! Homogeneous problem on `[0, π]` with `ψ = x²(π - x)`: numerical profile
//! at `T = 0.4` next to the sine-series solution.

use std::f64::consts::PI;

use rsfade::harness::profile;
use rsfade::problems::example3;
use rsfade::{Grid, SolverChoice};

fn main() -> rsfade::Result<()> {
    let problem = example3(0.4, 1.8)?;
    let grid = Grid::from_steps(PI, 0.01, 0.4, 0.01)?;
    let prof = profile(&problem, &grid, &[0.4], &SolverChoice::dense())?;
    let exact = prof.exact.as_ref().expect("series solution");
    println!("m = {}, N = {}", grid.m(), grid.n_steps());
    println!("{:>8}  {:>12}  {:>12}", "x", "numeric", "series");
    for i in (0..prof.x.len()).step_by(grid.m() / 12) {
        println!("{:>8.4}  {:>12.6}  {:>12.6}", prof.x[i], prof.numeric[0][i], exact[0][i]);
    }
    println!("max gap = {:.4e}", prof.max_gap().expect("exact known"));
    Ok(())
}
