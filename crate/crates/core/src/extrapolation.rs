//! Richardson extrapolation over three nested grids `(h, τ)`, `(h/2, τ/2)`,
//! `(h/4, τ/4)`.
//!
//! Solutions are compared only at coincident nodes. The two combiners are
//! `(4 mid - coarse) / 3`, which removes an `h²` term, and
//! `(8 mid - coarse) / 7`, which removes an `h³` term.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linsolve::SolverChoice;
use crate::problems::ProblemSpec;
use crate::stepper::{integrate, GridSolution, Keep};

/// Subsamples interior values from a grid refined by `factor` down to the
/// coarse interior nodes.
///
/// A fine interior vector of length `factor · m - 1` maps to a coarse one of
/// length `m - 1`; coarse node `i` is fine node `factor · i`.
pub fn restrict(fine: &[f64], factor: usize) -> Result<Vec<f64>> {
    if factor == 0 {
        return Err(Error::Grid("restriction factor must be positive".into()));
    }
    let fine_cells = fine.len() + 1;
    if fine_cells % factor != 0 || fine_cells / factor < 2 {
        return Err(Error::Grid(format!(
            "{} interior values do not form a {factor}-fold refinement",
            fine.len()
        )));
    }
    let coarse_cells = fine_cells / factor;
    Ok((1..coarse_cells).map(|i| fine[i * factor - 1]).collect())
}

fn combine(coarse: &[f64], mid: &[f64], weight: f64) -> Result<Vec<f64>> {
    if coarse.len() != mid.len() {
        return Err(Error::DimensionMismatch {
            expected: coarse.len(),
            got: mid.len(),
        });
    }
    let denom = weight - 1.0;
    Ok(coarse
        .iter()
        .zip(mid)
        .map(|(c, m)| (weight * m - c) / denom)
        .collect())
}

/// `(4 mid - coarse) / 3`, both on the coarse nodes.
pub fn richardson_order3(coarse: &[f64], mid_restricted: &[f64]) -> Result<Vec<f64>> {
    combine(coarse, mid_restricted, 4.0)
}

/// `(8 mid - coarse) / 7`, both on the coarse nodes.
pub fn richardson_order4(coarse3: &[f64], mid3: &[f64]) -> Result<Vec<f64>> {
    combine(coarse3, mid3, 8.0)
}

/// Final-time solutions on three nested grids.
#[derive(Debug, Clone)]
pub struct NestedSolutions {
    pub coarse: GridSolution,
    pub mid: GridSolution,
    pub fine: GridSolution,
}

impl NestedSolutions {
    pub fn solve(problem: &ProblemSpec, grid: &Grid, choice: &SolverChoice) -> Result<Self> {
        let mid_grid = grid.refined(2)?;
        let fine_grid = grid.refined(4)?;
        let run = |g: &Grid| integrate(problem, g, choice, Keep::FinalOnly);
        let (coarse, (mid, fine)) = rayon::join(|| run(grid), || rayon::join(|| run(&mid_grid), || run(&fine_grid)));
        Ok(Self {
            coarse: coarse?,
            mid: mid?,
            fine: fine?,
        })
    }

    /// Applies both extrapolation levels at `t = T` on the coarse nodes.
    pub fn extrapolate(&self) -> Result<Vec<f64>> {
        let c = self.coarse.final_values();
        let m = restrict(self.mid.final_values(), 2)?;
        let f = restrict(self.fine.final_values(), 4)?;
        let first = richardson_order3(c, &m)?;
        let second = richardson_order3(&m, &f)?;
        richardson_order4(&first, &second)
    }
}

/// Extrapolated solution at `t = T` on the interior nodes of the coarse grid.
pub fn rem_solve(problem: &ProblemSpec, grid: &Grid, choice: &SolverChoice) -> Result<Vec<f64>> {
    NestedSolutions::solve(problem, grid, choice)?.extrapolate()
}
