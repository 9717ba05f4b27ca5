use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linsolve::{SolverChoice, SolverKind};
use crate::problems::{self, ProblemSpec};

use super::Norm;

/// Which problem a run uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProblemId {
    Example1,
    Example2,
    Example3,
    /// `ψ ≡ 0, f ≡ 0` on `[0, 1]`.
    Zero,
    /// A [`CustomProblem`] read from a JSON file.
    File(PathBuf),
}

impl ProblemId {
    /// Domain length, read from disk for custom problems.
    pub fn length(&self) -> Result<f64> {
        Ok(match self {
            ProblemId::Example3 => std::f64::consts::PI,
            ProblemId::File(path) => CustomProblem::load(path)?.length,
            _ => 1.0,
        })
    }

    pub fn default_t_final(&self) -> f64 {
        match self {
            ProblemId::Example3 => 0.4,
            _ => 1.0,
        }
    }

    fn default_alphas(&self) -> Vec<f64> {
        match self {
            ProblemId::Example1 => vec![0.5],
            ProblemId::Example2 => vec![0.1, 0.5, 0.9],
            ProblemId::Example3 => vec![0.4],
            _ => vec![0.5],
        }
    }

    fn default_betas(&self, rem: bool) -> Vec<f64> {
        match self {
            ProblemId::Example1 => vec![1.2, 1.5, 1.8],
            ProblemId::Example2 if !rem => vec![1.2, 1.5, 1.8],
            ProblemId::Example2 => vec![1.8],
            ProblemId::Example3 => vec![1.8],
            _ => vec![1.5],
        }
    }

    /// Whether the advection order is irrelevant because `K_α = 0`.
    pub fn ignores_alpha(&self) -> bool {
        matches!(self, ProblemId::Example1)
    }

    /// Instantiates the problem at `(α, β)`.
    pub fn build(&self, alpha: f64, beta: f64) -> Result<ProblemSpec> {
        match self {
            ProblemId::Example1 => problems::example1(beta),
            ProblemId::Example2 => problems::example2(alpha, beta),
            ProblemId::Example3 => problems::example3(alpha, beta),
            ProblemId::Zero => ProblemSpec::zero(1.0, alpha, beta),
            ProblemId::File(path) => CustomProblem::load(path)?.build(alpha, beta),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemId::Example1 => f.write_str("example1"),
            ProblemId::Example2 => f.write_str("example2"),
            ProblemId::Example3 => f.write_str("example3"),
            ProblemId::Zero => f.write_str("zero"),
            ProblemId::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example1" => Ok(ProblemId::Example1),
            "example2" => Ok(ProblemId::Example2),
            "example3" => Ok(ProblemId::Example3),
            "zero" => Ok(ProblemId::Zero),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(ProblemId::File(PathBuf::from(path))),
                _ => Err(Error::Config(format!(
                    "unknown problem {s:?}; expected example1, example2, example3, zero or file:<path>"
                ))),
            },
        }
    }
}

impl TryFrom<String> for ProblemId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProblemId> for String {
    fn from(p: ProblemId) -> String {
        p.to_string()
    }
}

/// A problem with polynomial initial data and no source, read from JSON:
///
/// ```json
/// { "length": 1.0, "k_alpha": 1.0, "k_beta": 1.0, "psi": [0, 1, -1] }
/// ```
///
/// `psi` lists polynomial coefficients by ascending power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomProblem {
    pub length: f64,
    pub k_alpha: f64,
    pub k_beta: f64,
    pub psi: Vec<f64>,
}

impl CustomProblem {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read problem file {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid problem file {}: {e}", path.display())))
    }

    pub fn build(&self, alpha: f64, beta: f64) -> Result<ProblemSpec> {
        problems::polynomial_problem(self.length, alpha, beta, self.k_alpha, self.k_beta, self.psi.clone())
    }
}

/// One refinement level: a cell count (`"64"`) or a step size (`"1/64"`,
/// `"0.015625"`), the latter rounded to the nearest cell count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEntry", into = "String")]
pub enum LadderEntry {
    Cells(usize),
    Step(f64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Int(u64),
    Float(f64),
    Text(String),
}

impl TryFrom<RawEntry> for LadderEntry {
    type Error = Error;

    fn try_from(raw: RawEntry) -> Result<Self> {
        match raw {
            RawEntry::Int(n) => Ok(LadderEntry::Cells(n as usize)),
            RawEntry::Float(h) => LadderEntry::step(h),
            RawEntry::Text(s) => s.parse(),
        }
    }
}

impl LadderEntry {
    fn step(h: f64) -> Result<Self> {
        if h > 0.0 && h.is_finite() {
            Ok(LadderEntry::Step(h))
        } else {
            Err(Error::Config(format!("step size must be positive, got {h}")))
        }
    }

    /// Number of cells on a domain of the given length.
    pub fn cells(self, length: f64) -> usize {
        match self {
            LadderEntry::Cells(m) => m,
            LadderEntry::Step(h) => (length / h).round() as usize,
        }
    }
}

impl FromStr for LadderEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot read refinement level {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            return LadderEntry::step(num / den);
        }
        if let Ok(m) = s.parse::<usize>() {
            return Ok(LadderEntry::Cells(m));
        }
        LadderEntry::step(s.parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for LadderEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderEntry::Cells(m) => write!(f, "{m}"),
            LadderEntry::Step(h) => write!(f, "{h}"),
        }
    }
}

impl From<LadderEntry> for String {
    fn from(e: LadderEntry) -> String {
        e.to_string()
    }
}

/// Scalar or list in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Every setting as optional, for a JSON config file or for CLI
/// overrides. [`RunConfig::resolve`] layers them over the defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub problem: Option<ProblemId>,
    pub alpha: Option<OneOrMany<f64>>,
    pub beta: Option<OneOrMany<f64>>,
    pub m: Option<LadderEntry>,
    pub ladder: Option<Vec<LadderEntry>>,
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    pub tau_ratio: Option<f64>,
    pub norm: Option<Norm>,
    pub solver: Option<SolverKind>,
    pub cg_tol: Option<f64>,
    pub jacobi: Option<bool>,
    pub rem: Option<bool>,
    pub times: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ConfigLayer {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `self` with every field set in `over` replaced.
    pub fn overlay(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            problem: over.problem.or(self.problem),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            m: over.m.or(self.m),
            ladder: over.ladder.or(self.ladder),
            t_final: over.t_final.or(self.t_final),
            tau_ratio: over.tau_ratio.or(self.tau_ratio),
            norm: over.norm.or(self.norm),
            solver: over.solver.or(self.solver),
            cg_tol: over.cg_tol.or(self.cg_tol),
            jacobi: over.jacobi.or(self.jacobi),
            rem: over.rem.or(self.rem),
            times: over.times.or(self.times),
            out: over.out.or(self.out),
            threads: over.threads.or(self.threads),
        }
    }
}

pub const DEFAULT_LADDER: [usize; 5] = [8, 16, 32, 64, 128];
pub const DEFAULT_REM_LADDER: [usize; 4] = [8, 16, 32, 64];

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub length: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Cell counts, strictly increasing.
    pub ladder: Vec<usize>,
    /// Cell count for single runs.
    pub m: usize,
    pub t_final: f64,
    /// `τ / h`.
    pub tau_ratio: f64,
    pub norm: Norm,
    pub solver: SolverChoice,
    pub rem: bool,
    pub times: Vec<f64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Defaults for `problem`, overridden by `layer`.
    pub fn resolve(layer: ConfigLayer) -> Result<Self> {
        let problem = layer.problem.unwrap_or(ProblemId::Example2);
        let rem = layer.rem.unwrap_or(false);
        let length = problem.length()?;
        let t_final = layer.t_final.unwrap_or_else(|| problem.default_t_final());
        let ladder: Vec<usize> = match layer.ladder {
            Some(entries) => entries.iter().map(|e| e.cells(length)).collect(),
            None if rem => DEFAULT_REM_LADDER.to_vec(),
            None => DEFAULT_LADDER.to_vec(),
        };
        let m = match layer.m {
            Some(e) => e.cells(length),
            None if problem == ProblemId::Example3 => LadderEntry::Step(0.01).cells(length),
            None => 32,
        };
        let mut solver = match layer.solver.unwrap_or(SolverKind::Dense) {
            SolverKind::Dense => SolverChoice::dense(),
            SolverKind::Cg => SolverChoice::cg(),
        };
        if let Some(tol) = layer.cg_tol {
            solver = solver.with_cg_tol(tol);
        }
        if let Some(j) = layer.jacobi {
            solver = solver.with_jacobi(j);
        }
        let config = RunConfig {
            alphas: layer.alpha.map(OneOrMany::into_vec).unwrap_or_else(|| problem.default_alphas()),
            betas: layer.beta.map(OneOrMany::into_vec).unwrap_or_else(|| problem.default_betas(rem)),
            ladder,
            m,
            t_final,
            tau_ratio: layer.tau_ratio.unwrap_or(1.0),
            norm: layer.norm.unwrap_or_default(),
            solver,
            rem,
            times: layer.times.unwrap_or_else(|| vec![t_final]),
            out: layer.out,
            threads: layer.threads,
            length,
            problem,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.alphas.is_empty() || self.betas.is_empty() {
            return bad("at least one alpha and one beta are required".into());
        }
        if self.ladder.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("refinement ladder must be strictly increasing in m, got {:?}", self.ladder));
        }
        if let Some(&m) = self.ladder.iter().find(|&&m| m < 3) {
            return bad(format!("ladder entry m = {m} is below the minimum of 3"));
        }
        if self.m < 3 {
            return bad(format!("m = {} is below the minimum of 3", self.m));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("T must be positive, got {}", self.t_final));
        }
        if !(self.tau_ratio > 0.0 && self.tau_ratio.is_finite()) {
            return bad(format!("tau/h must be positive, got {}", self.tau_ratio));
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }

    /// `(α, β)` pairs in ascending order, deduplicated. A problem without
    /// advection term contributes its single nominal `α`.
    pub fn parameter_points(&self) -> Vec<(f64, f64)> {
        let alphas: Vec<f64> = if self.problem.ignores_alpha() {
            vec![self.problem.default_alphas()[0]]
        } else {
            sorted_unique(&self.alphas)
        };
        let betas = sorted_unique(&self.betas);
        alphas
            .iter()
            .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn grid(&self, m: usize) -> Result<Grid> {
        Grid::with_step_ratio(self.length, m, self.t_final, self.tau_ratio)
    }
}

fn sorted_unique(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}
