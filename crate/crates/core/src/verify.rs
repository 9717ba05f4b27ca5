//! Executable property suites: coefficient laws, operator accuracy, matrix
//! structure, unconditional stability, solver agreement and the classical
//! second-order limit.
//!
//! Each suite returns a [`SuiteReport`] of named checks. Nothing here panics
//! on a failed property; failures are data.

use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{Polynomial, PolynomialDerivative};
use crate::coeffs::{verify_coefficient_lemmas, wsgd_weights, FractionalOrder, GrunwaldSeq};
use crate::discretization::{assemble_system, left_rl_derivative, right_rl_derivative, RieszSystem};
use crate::error::Result;
use crate::grid::Grid;
use crate::linsolve::{SolverChoice, SpdSolver};
use crate::problems::example2;
use crate::stepper::{integrate_from, CnStepper, Keep};

/// Orders sampled by the coefficient suite.
pub const COEFF_GAMMAS: [f64; 19] = [
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0,
];
pub const COEFF_LENGTH: usize = 256;
/// Length used for the "partial sums shrink" comparison against [`COEFF_LENGTH`].
pub const COEFF_TAIL_LENGTH: usize = 4096;

pub const PARAM_ALPHAS: [f64; 3] = [0.1, 0.5, 0.9];
pub const PARAM_BETAS: [f64; 4] = [1.2, 1.5, 1.8, 2.0];
pub const STRUCTURE_SIZES: [usize; 2] = [8, 32];

/// Orders and refinements for the operator accuracy suite.
pub const OPERATOR_GAMMAS: [f64; 6] = [0.3, 0.5, 0.8, 1.2, 1.5, 1.8];
pub const OPERATOR_SIZES: [usize; 3] = [32, 64, 128];
pub const OPERATOR_ORDER_BAND: (f64, f64) = (1.8, 2.2);

pub const STEP_RATIOS: [f64; 3] = [0.1, 1.0, 10.0];
pub const STABILITY_STEPS: usize = 200;
pub const STABILITY_M: usize = 32;

pub const EQUIVALENCE_M: usize = 64;
pub const EQUIVALENCE_RHS: usize = 20;

const SEED: u64 = 0x5eed_f00d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Coefficients,
    OperatorAccuracy,
    MatrixStructure,
    Stability,
    SolverEquivalence,
    ClassicalLimit,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Coefficients,
        Suite::OperatorAccuracy,
        Suite::MatrixStructure,
        Suite::Stability,
        Suite::SolverEquivalence,
        Suite::ClassicalLimit,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Coefficients => "coefficient laws",
            Suite::OperatorAccuracy => "operator accuracy",
            Suite::MatrixStructure => "matrix structure",
            Suite::Stability => "stability",
            Suite::SolverEquivalence => "solver equivalence",
            Suite::ClassicalLimit => "classical limit",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        write!(
            f,
            "{} {:<20} {:>4} checks, {} failed ({:.3} s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite.label(),
            self.checks.len(),
            failed,
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::Coefficients => coefficient_checks()?,
        Suite::OperatorAccuracy => operator_accuracy_checks()?,
        Suite::MatrixStructure => matrix_structure_checks()?,
        Suite::Stability => stability_checks()?,
        Suite::SolverEquivalence => solver_equivalence_checks()?,
        Suite::ClassicalLimit => classical_limit_checks()?,
    };
    Ok(SuiteReport {
        suite,
        checks,
        elapsed: start.elapsed(),
    })
}

pub fn run_all() -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s)).collect()
}

fn coefficient_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &gamma in &COEFF_GAMMAS {
        let report = verify_coefficient_lemmas(&GrunwaldSeq::new(gamma, COEFF_LENGTH)?);
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        out.push(Check::new(
            format!("lemmas gamma={gamma}"),
            failed.is_empty(),
            if failed.is_empty() {
                format!("{} properties hold", report.checks.len())
            } else {
                format!("violated: {}", failed.join("; "))
            },
        ));
        if gamma < 2.0 {
            let short: f64 = wsgd_weights(gamma, COEFF_LENGTH)?.iter().sum();
            let long: f64 = wsgd_weights(gamma, COEFF_TAIL_LENGTH)?.iter().sum();
            out.push(Check::new(
                format!("weight sum shrinks gamma={gamma}"),
                long.abs() < short.abs(),
                format!("|S_{COEFF_TAIL_LENGTH}| = {:.3e}, |S_{COEFF_LENGTH}| = {:.3e}", long.abs(), short.abs()),
            ));
        }
    }
    Ok(out)
}

/// Which one-sided operator to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Errors of a one-sided WSGD operator applied to `x³(1-x)³` against its
/// exact derivative, one per grid size, with observed orders.
///
/// `errors` is the max norm over nodes in the fixed window `[1/4, 3/4]`.
/// `full_errors` covers every interior node and includes the first-node
/// layer caused by the zero extension being only `C²` at the boundary.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorOrders {
    pub gamma: f64,
    pub side: Side,
    pub sizes: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
    pub full_errors: Vec<f64>,
    pub full_orders: Vec<f64>,
}

fn log2_ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect()
}

/// Grid sizes must be multiples of 4 so the window edges are nodes.
pub fn operator_orders(gamma: f64, side: Side, sizes: &[usize]) -> Result<OperatorOrders> {
    let poly = Polynomial::bump(3, 3, 1.0);
    let exact = PolynomialDerivative::new(&poly, gamma, 1.0);
    let mut errors = Vec::with_capacity(sizes.len());
    let mut full_errors = Vec::with_capacity(sizes.len());
    for &m in sizes {
        if m % 4 != 0 {
            return Err(crate::Error::Grid(format!("operator accuracy needs m divisible by 4, got {m}")));
        }
        let h = 1.0 / m as f64;
        let values: Vec<f64> = (0..=m).map(|i| poly.eval(i as f64 * h)).collect();
        let (mut window, mut full): (f64, f64) = (0.0, 0.0);
        for i in 1..m {
            let x = i as f64 * h;
            let (approx, want) = match side {
                Side::Left => (left_rl_derivative(&values, gamma, h, i)?, exact.left(x)),
                Side::Right => (right_rl_derivative(&values, gamma, h, i)?, exact.right(x)),
            };
            let e = (approx - want).abs();
            full = full.max(e);
            if (m / 4..=3 * m / 4).contains(&i) {
                window = window.max(e);
            }
        }
        errors.push(window);
        full_errors.push(full);
    }
    Ok(OperatorOrders {
        gamma,
        side,
        sizes: sizes.to_vec(),
        orders: log2_ratios(&errors),
        errors,
        full_orders: log2_ratios(&full_errors),
        full_errors,
    })
}

fn operator_accuracy_checks() -> Result<Vec<Check>> {
    let (lo, hi) = OPERATOR_ORDER_BAND;
    let mut out = Vec::new();
    for &gamma in &OPERATOR_GAMMAS {
        for side in [Side::Left, Side::Right] {
            let r = operator_orders(gamma, side, &OPERATOR_SIZES)?;
            let ok = r.orders.iter().all(|&p| (lo..=hi).contains(&p));
            let fmt = |v: &[f64]| v.iter().map(|p| format!("{p:.3}")).collect::<Vec<_>>().join(", ");
            out.push(Check::new(
                format!("{side:?} gamma={gamma}"),
                ok,
                format!(
                    "orders [{}] on [1/4, 3/4], [{}] on all nodes, m = {:?}",
                    fmt(&r.orders),
                    fmt(&r.full_orders),
                    r.sizes
                ),
            ));
        }
    }
    Ok(out)
}

fn dense(sys: &RieszSystem) -> DMatrix<f64> {
    let n = sys.dim();
    let t = sys.toeplitz();
    DMatrix::from_fn(n, n, |i, j| t.get(i, j))
}

/// Structural facts about one assembled `D`.
#[derive(Debug, Clone, Serialize)]
pub struct StructureSummary {
    /// `min_i (|D_ii| - Σ_{j≠i} |D_ij|)`.
    pub dominance_margin: f64,
    pub min_eigenvalue: f64,
    /// `‖(I + D)⁻¹‖₂`.
    pub inverse_norm: f64,
    /// `‖(I + D)⁻¹ (I - D)‖₂`.
    pub propagator_norm: f64,
    pub symmetric: bool,
}

pub fn structure_summary(sys: &RieszSystem) -> Result<StructureSummary> {
    let d = dense(sys);
    let n = d.nrows();
    let dominance_margin = (0..n)
        .map(|i| {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| d[(i, j)].abs()).sum();
            d[(i, i)].abs() - off
        })
        .fold(f64::INFINITY, f64::min);
    let symmetric = d == d.transpose();
    let min_eigenvalue = SymmetricEigen::new(d.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);

    let id = DMatrix::<f64>::identity(n, n);
    let inv = (&id + &d)
        .try_inverse()
        .ok_or_else(|| crate::Error::Problem("I + D is singular".into()))?;
    let spectral = |a: DMatrix<f64>| a.singular_values().max();
    let propagator = &inv * (&id - &d);
    Ok(StructureSummary {
        dominance_margin,
        min_eigenvalue,
        inverse_norm: spectral(inv),
        propagator_norm: spectral(propagator),
        symmetric,
    })
}

/// Systems over the `(α, β, m)` parameter grid with `τ = h`, `K_α = K_β = 2`.
pub fn structure_parameter_grid() -> Result<Vec<(f64, f64, usize, RieszSystem)>> {
    let mut out = Vec::new();
    for &m in &STRUCTURE_SIZES {
        let grid = Grid::new(1.0, m, 1.0, m)?;
        for &a in &PARAM_ALPHAS {
            for &b in &PARAM_BETAS {
                let sys = assemble_system(&grid, FractionalOrder::advection(a)?, FractionalOrder::dispersion(b)?, 2.0, 2.0)?;
                out.push((a, b, m, sys));
            }
        }
    }
    Ok(out)
}

fn matrix_structure_checks() -> Result<Vec<Check>> {
    // rounding allowance for the computed norms, which are 1 at most
    let slack = 1e-12;
    let mut out = Vec::new();
    for (a, b, m, sys) in structure_parameter_grid()? {
        let s = structure_summary(&sys)?;
        let tag = format!("alpha={a} beta={b} m={m}");
        out.push(Check::new(
            format!("diagonal dominance {tag}"),
            s.dominance_margin > 0.0,
            format!("margin {:.3e}", s.dominance_margin),
        ));
        out.push(Check::new(
            format!("positive definite {tag}"),
            s.symmetric && s.min_eigenvalue > 0.0,
            format!("symmetric {}, min eigenvalue {:.3e}", s.symmetric, s.min_eigenvalue),
        ));
        out.push(Check::new(
            format!("norm bounds {tag}"),
            s.inverse_norm <= 1.0 + slack && s.propagator_norm <= 1.0 + slack,
            format!("|(I+D)^-1| = {:.6}, |(I+D)^-1 (I-D)| = {:.6}", s.inverse_norm, s.propagator_norm),
        ));
    }
    Ok(out)
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// 2-norms of the homogeneous iterates `U⁰ … U^steps` for one configuration.
pub fn homogeneous_norms(
    alpha: f64,
    beta: f64,
    m: usize,
    ratio: f64,
    steps: usize,
    initial: &[f64],
) -> Result<Vec<f64>> {
    let h = 1.0 / m as f64;
    let grid = Grid::new(1.0, m, ratio * h * steps as f64, steps)?;
    let sys = assemble_system(&grid, FractionalOrder::advection(alpha)?, FractionalOrder::dispersion(beta)?, 2.0, 2.0)?;
    let stepper = CnStepper::new(sys, grid.tau(), &SolverChoice::dense())?;
    let zero = vec![0.0; m - 1];
    let mut u = initial.to_vec();
    let mut norms = vec![norm2(&u)];
    for _ in 0..steps {
        u = stepper.step(&u, &zero, &zero)?;
        norms.push(norm2(&u));
    }
    Ok(norms)
}

fn stability_checks() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = STABILITY_M;
    let smooth = Grid::new(1.0, m, 1.0, 1)?.sample(|x| x * x * (1.0 - x) * (1.0 - x));
    let mut out = Vec::new();
    for &a in &PARAM_ALPHAS {
        for &b in &PARAM_BETAS {
            for &ratio in &STEP_RATIOS {
                let rough: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
                for (label, init) in [("smooth", &smooth), ("random", &rough)] {
                    let norms = homogeneous_norms(a, b, m, ratio, STABILITY_STEPS, init)?;
                    let worst = norms
                        .windows(2)
                        .map(|w| w[1] - w[0] * (1.0 + 1e-13))
                        .fold(f64::NEG_INFINITY, f64::max);
                    out.push(Check::new(
                        format!("non-increasing {label} alpha={a} beta={b} tau/h={ratio}"),
                        worst <= 0.0,
                        format!("|U^0| = {:.3e}, |U^N| = {:.3e}", norms[0], norms[STABILITY_STEPS]),
                    ));
                }
            }
        }
    }
    out.extend(perturbation_checks(&mut rng)?);
    Ok(out)
}

fn perturbation_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let problem = example2(0.5, 1.5)?;
    let mut out = Vec::new();
    for &ratio in &STEP_RATIOS {
        let grid = Grid::with_step_ratio(1.0, STABILITY_M, 1.0, ratio)?;
        let start = grid.sample(|x| problem.psi(x));
        let delta: Vec<f64> = start.iter().map(|_| rng.gen_range(-1e-3..1e-3)).collect();
        let shifted = start.iter().zip(&delta).map(|(u, d)| u + d).collect();
        let choice = SolverChoice::dense();
        let u = integrate_from(&problem, &grid, &choice, Keep::FinalOnly, start)?;
        let v = integrate_from(&problem, &grid, &choice, Keep::FinalOnly, shifted)?;
        let diff: Vec<f64> = u.final_values().iter().zip(v.final_values()).map(|(a, b)| b - a).collect();
        let (e0, en) = (norm2(&delta), norm2(&diff));
        out.push(Check::new(
            format!("perturbation tau/h={ratio}"),
            en <= e0 * (1.0 + 1e-12),
            format!("|E^0| = {e0:.3e}, |E^N| = {en:.3e} after {} steps", grid.n_steps()),
        ));
    }
    Ok(out)
}

fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&diff) / norm2(b).max(f64::MIN_POSITIVE)
}

fn solver_equivalence_checks() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let m = EQUIVALENCE_M;
    let grid = Grid::new(1.0, m, 1.0, m)?;
    let sys = assemble_system(&grid, FractionalOrder::advection(0.5)?, FractionalOrder::dispersion(1.5)?, 2.0, 2.0)?;
    let dense_solver = SpdSolver::new(&sys, &SolverChoice::dense())?;
    let cg_solver = SpdSolver::new(&sys, &SolverChoice::cg())?;
    let mut worst: f64 = 0.0;
    for _ in 0..EQUIVALENCE_RHS {
        let b: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = dense_solver.solve(&b)?;
        let y = cg_solver.solve(&b)?;
        worst = worst.max(relative_gap(&y, &x));
    }
    let mut out = vec![Check::new(
        "dense vs cg",
        worst <= 1e-10,
        format!("max relative gap {worst:.3e} over {EQUIVALENCE_RHS} right-hand sides"),
    )];

    let d = dense(&sys);
    let mut matvec_gap: f64 = 0.0;
    for _ in 0..EQUIVALENCE_RHS {
        let v: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let want = &d * nalgebra::DVector::from_column_slice(&v);
        let got = sys.toeplitz().matvec(&v)?;
        matvec_gap = matvec_gap.max(relative_gap(&got, want.as_slice()));
    }
    out.push(Check::new(
        "toeplitz vs dense matvec",
        matvec_gap <= 1e-13,
        format!("max relative gap {matvec_gap:.3e}"),
    ));
    Ok(out)
}

/// Solves a tridiagonal system with constant bands by the Thomas algorithm.
fn thomas(diag: f64, off: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = off / diag;
    d[0] = rhs[0] / diag;
    for i in 1..n {
        let denom = diag - off * c[i - 1];
        c[i] = off / denom;
        d[i] = (rhs[i] - off * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// One step of the textbook Crank–Nicolson scheme for `u_t = u_xx + f`.
pub fn classical_cn_step(u: &[f64], f_prev: &[f64], f_curr: &[f64], h: f64, tau: f64) -> Vec<f64> {
    let r = tau / (h * h);
    let n = u.len();
    let rhs: Vec<f64> = (0..n)
        .map(|i| {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            (1.0 - r) * u[i] + 0.5 * r * (left + right) + 0.5 * tau * (f_prev[i] + f_curr[i])
        })
        .collect();
    thomas(1.0 + r, -0.5 * r, &rhs)
}

fn classical_limit_checks() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut out = Vec::new();
    for (m, n_steps) in [(8, 64), (16, 16), (32, 4)] {
        let grid = Grid::new(1.0, m, 1.0, n_steps)?;
        let sys = assemble_system(&grid, FractionalOrder::advection(0.5)?, FractionalOrder::dispersion(2.0)?, 0.0, 1.0)?;
        let stepper = CnStepper::new(sys, grid.tau(), &SolverChoice::dense())?;
        let mut draw = || -> Vec<f64> { (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect() };
        let (u, fp, fc) = (draw(), draw(), draw());
        let ours = stepper.step(&u, &fp, &fc)?;
        let theirs = classical_cn_step(&u, &fp, &fc, grid.h(), grid.tau());
        let gap = relative_gap(&ours, &theirs);
        out.push(Check::new(
            format!("tridiagonal step m={m} tau/h^2={}", grid.tau() / (grid.h() * grid.h())),
            gap <= 1e-12,
            format!("relative gap {gap:.3e}"),
        ));
    }
    Ok(out)
}
