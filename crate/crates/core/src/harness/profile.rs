use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linsolve::SolverChoice;
use crate::problems::ProblemSpec;
use crate::stepper::{integrate, Keep};

use super::table::format_sci;

pub const PROFILE_HEADER: &str = "t,x,u_numeric,u_exact";

/// Numerical (and, when known, exact) solution at selected times on all
/// nodes `x_0 .. x_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    /// One row per entry of `times`.
    pub numeric: Vec<Vec<f64>>,
    pub exact: Option<Vec<Vec<f64>>>,
}

impl Profile {
    /// `max |numeric - exact|` over all times and nodes.
    pub fn max_gap(&self) -> Option<f64> {
        let exact = self.exact.as_ref()?;
        Some(
            self.numeric
                .iter()
                .flatten()
                .zip(exact.iter().flatten())
                .fold(0.0, |m, (u, v)| m.max((u - v).abs())),
        )
    }

    /// `max_x u` at each time.
    pub fn peaks(&self) -> Vec<f64> {
        self.numeric
            .iter()
            .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }

    /// Long-format CSV, one line per `(t, x)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(PROFILE_HEADER);
        out.push('\n');
        for (k, &t) in self.times.iter().enumerate() {
            for (i, &x) in self.x.iter().enumerate() {
                let exact = self
                    .exact
                    .as_ref()
                    .map_or_else(|| "n/a".to_string(), |e| format_sci(e[k][i]));
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    format_sci(t),
                    format_sci(x),
                    format_sci(self.numeric[k][i]),
                    exact
                );
            }
        }
        out
    }
}

/// Solves once and samples the solution at each requested time, which must
/// lie on the time grid.
pub fn profile(problem: &ProblemSpec, grid: &Grid, times: &[f64], choice: &SolverChoice) -> Result<Profile> {
    if times.is_empty() {
        return Err(Error::Config("at least one output time is required".into()));
    }
    let levels: Vec<usize> = times.iter().map(|&t| grid.time_index(t)).collect::<Result<_>>()?;
    let sol = integrate(problem, grid, choice, Keep::Levels(levels.clone()))?;
    let x: Vec<f64> = (0..=grid.m()).map(|i| grid.x(i)).collect();
    let numeric = levels
        .iter()
        .map(|&n| sol.with_boundary(n).expect("level retained"))
        .collect();
    let exact = problem.has_exact().then(|| {
        levels
            .iter()
            .map(|&n| {
                let t = grid.t(n);
                x.iter().map(|&xi| problem.exact(xi, t).expect("has exact")).collect()
            })
            .collect()
    });
    Ok(Profile {
        times: levels.iter().map(|&n| grid.t(n)).collect(),
        x,
        numeric,
        exact,
    })
}

/// [`profile`] written as CSV to `path`.
pub fn emit_profile(
    problem: &ProblemSpec,
    grid: &Grid,
    times: &[f64],
    choice: &SolverChoice,
    path: &Path,
) -> Result<Profile> {
    let p = profile(problem, grid, times, choice)?;
    std::fs::write(path, p.to_csv()).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(p)
}
