//! Crank–Nicolson time marching: `(I + D) Uⁿ = (I - D) Uⁿ⁻¹ + τ/2 (fⁿ⁻¹ + fⁿ)`.

use crate::discretization::{assemble_system, RieszSystem};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linsolve::{SolverChoice, SpdSolver};
use crate::problems::ProblemSpec;

/// Which time levels [`integrate`] retains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Keep {
    /// Levels `0` and `N`.
    FinalOnly,
    AllSteps,
    /// Level `0`, the listed levels and `N`.
    Levels(Vec<usize>),
}

/// Interior values `u_i^n` on a grid; the boundary values are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub grid: Grid,
    levels: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl GridSolution {
    /// Retained time-level indices, ascending.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Interior vector at time level `n`, if retained.
    pub fn level(&self, n: usize) -> Option<&[f64]> {
        self.levels
            .binary_search(&n)
            .ok()
            .map(|k| self.rows[k].as_slice())
    }

    pub fn initial(&self) -> &[f64] {
        &self.rows[0]
    }

    pub fn final_values(&self) -> &[f64] {
        self.rows.last().expect("solution always holds level 0")
    }

    /// Values at `x_0 .. x_m` for level `n`, boundary zeros included.
    pub fn with_boundary(&self, n: usize) -> Option<Vec<f64>> {
        self.level(n).map(|row| {
            let mut v = Vec::with_capacity(row.len() + 2);
            v.push(0.0);
            v.extend_from_slice(row);
            v.push(0.0);
            v
        })
    }
}

fn residual_rhs(sys: &RieszSystem, u_prev: &[f64], f_prev: &[f64], f_curr: &[f64], tau: f64) -> Result<Vec<f64>> {
    let n = sys.dim();
    for v in [u_prev, f_prev, f_curr] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let du = sys.toeplitz().matvec(u_prev)?;
    Ok(u_prev
        .iter()
        .zip(&du)
        .zip(f_prev.iter().zip(f_curr))
        .map(|((u, d), (a, b))| u - d + 0.5 * tau * (a + b))
        .collect())
}

/// A Crank–Nicolson stepper with its linear solver prepared once.
#[derive(Debug, Clone)]
pub struct CnStepper {
    sys: RieszSystem,
    solver: SpdSolver,
    tau: f64,
}

impl CnStepper {
    pub fn new(sys: RieszSystem, tau: f64, choice: &SolverChoice) -> Result<Self> {
        let solver = SpdSolver::new(&sys, choice)?;
        Ok(Self { sys, solver, tau })
    }

    pub fn system(&self) -> &RieszSystem {
        &self.sys
    }

    /// One step from `u_prev`, with the source sampled at `t_{n-1}` and `t_n`.
    pub fn step(&self, u_prev: &[f64], f_prev: &[f64], f_curr: &[f64]) -> Result<Vec<f64>> {
        let rhs = residual_rhs(&self.sys, u_prev, f_prev, f_curr, self.tau)?;
        self.solver.solve_from(&rhs, Some(u_prev))
    }
}

/// Single Crank–Nicolson step, preparing the solver on the fly.
pub fn cn_step(
    sys: &RieszSystem,
    u_prev: &[f64],
    f_prev: &[f64],
    f_curr: &[f64],
    tau: f64,
    choice: &SolverChoice,
) -> Result<Vec<f64>> {
    let rhs = residual_rhs(sys, u_prev, f_prev, f_curr, tau)?;
    SpdSolver::new(sys, choice)?.solve_from(&rhs, Some(u_prev))
}

/// Assembles `D` for `problem` on `grid`.
pub fn system_for(problem: &ProblemSpec, grid: &Grid) -> Result<RieszSystem> {
    assemble_system(
        grid,
        problem.alpha(),
        problem.beta(),
        problem.k_alpha(),
        problem.k_beta(),
    )
}

/// Marches the scheme from `ψ` to `T`.
pub fn integrate(problem: &ProblemSpec, grid: &Grid, choice: &SolverChoice, keep: Keep) -> Result<GridSolution> {
    let initial = grid.sample(|x| problem.psi(x));
    integrate_from(problem, grid, choice, keep, initial)
}

/// Like [`integrate`] but starting from the given interior vector instead of `ψ`.
pub fn integrate_from(
    problem: &ProblemSpec,
    grid: &Grid,
    choice: &SolverChoice,
    keep: Keep,
    initial: Vec<f64>,
) -> Result<GridSolution> {
    let rel = (problem.length() - grid.length()).abs() / problem.length();
    if rel > 1e-12 {
        return Err(Error::Grid(format!(
            "grid length {} does not match problem length {}",
            grid.length(),
            problem.length()
        )));
    }
    if initial.len() != grid.interior_len() {
        return Err(Error::DimensionMismatch {
            expected: grid.interior_len(),
            got: initial.len(),
        });
    }
    let stepper = CnStepper::new(system_for(problem, grid)?, grid.tau(), choice)?;
    let n_steps = grid.n_steps();
    let nodes = grid.interior_nodes();
    let sample_source = |t: f64| -> Vec<f64> {
        if problem.has_source() {
            nodes.iter().map(|&x| problem.source(x, t)).collect()
        } else {
            vec![0.0; nodes.len()]
        }
    };

    let mut wanted = match &keep {
        Keep::FinalOnly => vec![0, n_steps],
        Keep::AllSteps => (0..=n_steps).collect(),
        Keep::Levels(ls) => {
            let mut v = vec![0, n_steps];
            v.extend(ls.iter().copied().filter(|&l| l <= n_steps));
            v
        }
    };
    wanted.sort_unstable();
    wanted.dedup();

    let mut u = initial;
    let mut levels = vec![0];
    let mut rows = vec![u.clone()];
    let mut next_wanted = 1;
    let mut f_prev = sample_source(0.0);

    for n in 1..=n_steps {
        let f_curr = sample_source(grid.t(n));
        u = stepper.step(&u, &f_prev, &f_curr)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: n });
        }
        if next_wanted < wanted.len() && wanted[next_wanted] == n {
            levels.push(n);
            rows.push(u.clone());
            next_wanted += 1;
        }
        f_prev = f_curr;
    }

    Ok(GridSolution {
        grid: *grid,
        levels,
        rows,
    })
}
