//! Convergence studies, table emission and solution profiles.

mod config;
mod profile;
mod table;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrapolation::rem_solve;
use crate::grid::Grid;
use crate::problems::ProblemSpec;
use crate::stepper::{integrate, Keep};

pub use config::{
    ConfigLayer, CustomProblem, LadderEntry, OneOrMany, ProblemId, RunConfig, DEFAULT_LADDER, DEFAULT_REM_LADDER,
};
pub use profile::{emit_profile, profile, Profile};
pub use table::{emit_table, format_sci, parse_csv, render_csv, render_text, text_path, TableRow, CSV_HEADER};

/// Error norm over interior nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// `max_i |e_i|`.
    #[default]
    Max,
    /// `sqrt(h Σ_i e_i²)`.
    L2,
}

impl Norm {
    pub fn eval(self, errors: &[f64], h: f64) -> f64 {
        match self {
            Norm::Max => errors.iter().fold(0.0, |m, e| m.max(e.abs())),
            Norm::L2 => (h * errors.iter().map(|e| e * e).sum::<f64>()).sqrt(),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::Max => "max",
            Norm::L2 => "l2",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Norm::Max),
            "l2" => Ok(Norm::L2),
            _ => Err(Error::Config(format!("unknown norm {s:?}; expected max or l2"))),
        }
    }
}

/// One refinement level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub h: f64,
    pub tau: f64,
    pub error: f64,
    /// `log2(E_prev / E)`; `None` on the first row or when undefined.
    pub order: Option<f64>,
    pub wall_time: Duration,
}

/// All refinement levels for one `(α, β)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    /// `None` when the problem has no advection term.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub norm: Norm,
    pub rem: bool,
    pub t_final: f64,
    /// Sorted by `α`, then `β`; rows sorted by `m`.
    pub series: Vec<Series>,
}

impl ConvergenceReport {
    pub fn is_empty(&self) -> bool {
        self.series.iter().all(|s| s.rows.is_empty())
    }

    pub fn find(&self, alpha: Option<f64>, beta: f64) -> Option<&Series> {
        self.series.iter().find(|s| s.alpha == alpha && s.beta == beta)
    }

    pub fn total_wall_time(&self) -> Duration {
        self.series.iter().flat_map(|s| &s.rows).map(|r| r.wall_time).sum()
    }
}

/// `log2(E_prev / E)`, or `None` when either error is zero or non-finite.
pub fn observed_order(prev: f64, curr: f64) -> Option<f64> {
    let p = (prev / curr).log2();
    p.is_finite().then_some(p)
}

/// Attaches orders to consecutive errors.
pub fn orders_of(errors: &[f64]) -> Vec<Option<f64>> {
    std::iter::once(None)
        .chain(errors.windows(2).map(|w| observed_order(w[0], w[1])))
        .take(errors.len())
        .collect()
}

/// Error at `t = T` on the interior nodes of `grid`, plain or extrapolated.
pub fn final_time_error(problem: &ProblemSpec, grid: &Grid, config: &RunConfig) -> Result<f64> {
    if !problem.has_exact() {
        return Err(Error::Config(format!(
            "problem {} has no exact solution, so errors cannot be measured",
            problem.name()
        )));
    }
    let numeric = if config.rem {
        rem_solve(problem, grid, &config.solver)?
    } else {
        integrate(problem, grid, &config.solver, Keep::FinalOnly)?
            .final_values()
            .to_vec()
    };
    let t = grid.t_final();
    let errors: Vec<f64> = grid
        .interior_nodes()
        .iter()
        .zip(&numeric)
        .map(|(&x, u)| u - problem.exact(x, t).expect("checked above"))
        .collect();
    Ok(config.norm.eval(&errors, grid.h()))
}

/// Runs every `(α, β, m)` of the config in the rayon pool and assembles a
/// report ordered by `(α, β, m)`.
pub fn run_convergence(config: &RunConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let points = config.parameter_points();
    let problems: Vec<ProblemSpec> = points
        .iter()
        .map(|&(a, b)| config.problem.build(a, b))
        .collect::<Result<_>>()?;
    if let Some(p) = problems.iter().find(|p| !p.has_exact()) {
        return Err(Error::Config(format!(
            "problem {} has no exact solution; convergence runs need one",
            p.name()
        )));
    }

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|k| config.ladder.iter().map(move |&m| (k, m)))
        .collect();
    let results: Vec<(usize, ConvergenceRow)> = jobs
        .par_iter()
        .map(|&(k, m)| {
            let grid = config.grid(m)?;
            let start = Instant::now();
            let error = final_time_error(&problems[k], &grid, config)?;
            Ok((
                k,
                ConvergenceRow {
                    m,
                    h: grid.h(),
                    tau: grid.tau(),
                    error,
                    order: None,
                    wall_time: start.elapsed(),
                },
            ))
        })
        .collect::<Result<_>>()?;

    let mut series: Vec<Series> = points
        .iter()
        .map(|&(a, b)| Series {
            alpha: (!config.problem.ignores_alpha()).then_some(a),
            beta: b,
            rows: Vec::new(),
        })
        .collect();
    for (k, row) in results {
        series[k].rows.push(row);
    }
    for s in &mut series {
        s.rows.sort_by_key(|r| r.m);
        let errors: Vec<f64> = s.rows.iter().map(|r| r.error).collect();
        for (row, order) in s.rows.iter_mut().zip(orders_of(&errors)) {
            row.order = order;
        }
    }

    Ok(ConvergenceReport {
        problem: config.problem.to_string(),
        norm: config.norm,
        rem: config.rem,
        t_final: config.t_final,
        series,
    })
}
