//! Solvers for `(I + D) x = b`.
//!
//! `I + D` is symmetric and strictly diagonally dominant with positive
//! diagonal, hence SPD. Two routes are provided: a dense Cholesky factor
//! built once per system, and conjugate gradients on the Toeplitz product.

use nalgebra::{DMatrix, DVector};

use crate::discretization::RieszSystem;
use crate::error::{Error, Result};
use crate::toeplitz::SymmetricToeplitz;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[serde(alias = "dense_direct")]
    Dense,
    #[serde(alias = "conjugate_gradient")]
    Cg,
}

/// Which linear solver to use and its knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverChoice {
    pub kind: SolverKind,
    /// Relative residual target for CG.
    pub cg_tol: f64,
    /// Iteration cap for CG; `None` means `10 · (m - 1)`.
    pub cg_max_iter: Option<usize>,
    /// Diagonal preconditioning for CG.
    pub jacobi: bool,
}

impl Default for SolverChoice {
    fn default() -> Self {
        Self::dense()
    }
}

impl SolverChoice {
    pub fn dense() -> Self {
        Self {
            kind: SolverKind::Dense,
            cg_tol: 1e-12,
            cg_max_iter: None,
            jacobi: false,
        }
    }

    pub fn cg() -> Self {
        Self {
            kind: SolverKind::Cg,
            ..Self::dense()
        }
    }

    pub fn with_cg_tol(mut self, tol: f64) -> Self {
        self.cg_tol = tol;
        self
    }

    pub fn with_jacobi(mut self, on: bool) -> Self {
        self.jacobi = on;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.cg_tol > 0.0) {
            return Err(Error::Domain {
                name: "cg_tol",
                value: self.cg_tol,
                range: "(0, inf)",
            });
        }
        if self.cg_max_iter == Some(0) {
            return Err(Error::Domain {
                name: "cg_max_iter",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        Ok(())
    }
}

/// Cholesky factor of a dense SPD matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    factor: nalgebra::linalg::Cholesky<f64, nalgebra::Dyn>,
}

impl Cholesky {
    /// Factors the dense matrix given row by row. Only the lower triangle is read.
    pub fn factor(a: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        let factor = nalgebra::linalg::Cholesky::new(m).ok_or(Error::NotPositiveDefinite { dim: n })?;
        Ok(Self { factor })
    }

    pub fn dim(&self) -> usize {
        self.factor.l_dirty().nrows()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: b.len(),
            });
        }
        let x = self.factor.solve(&DVector::from_column_slice(b));
        Ok(x.as_slice().to_vec())
    }
}

/// `(I + D) v` through the Toeplitz product.
pub fn apply_shifted(d: &SymmetricToeplitz, v: &[f64]) -> Result<Vec<f64>> {
    let mut out = d.matvec(v)?;
    for (o, x) in out.iter_mut().zip(v) {
        *o += x;
    }
    Ok(out)
}

/// Outcome of a CG solve.
#[derive(Debug, Clone)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients on `(I + D) x = b`, starting from `x0` (zero if `None`).
///
/// Stops when `‖b - (I+D)x‖₂ ≤ tol · ‖b‖₂`; the returned residual is the
/// recomputed true residual, not the recursively updated one.
pub fn conjugate_gradient(
    d: &SymmetricToeplitz,
    b: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
    jacobi: bool,
) -> Result<CgSolution> {
    let n = d.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok(CgSolution {
            x: vec![0.0; n],
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let inv_diag = 1.0 / (1.0 + d.column()[0]);
    let precond = |r: &[f64]| -> Vec<f64> {
        if jacobi {
            r.iter().map(|x| x * inv_diag).collect()
        } else {
            r.to_vec()
        }
    };

    let mut x = match x0 {
        Some(x0) if x0.len() == n => x0.to_vec(),
        Some(x0) => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x0.len(),
            })
        }
        None => vec![0.0; n],
    };
    let ax = apply_shifted(d, &x)?;
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let target = tol * b_norm;

    let true_residual = |x: &[f64]| -> Result<f64> {
        let ax = apply_shifted(d, x)?;
        Ok(b.iter().zip(&ax).map(|(b, a)| (b - a) * (b - a)).sum::<f64>().sqrt())
    };

    let mut res = dot(&r, &r).sqrt();
    let mut iterations = 0;
    while iterations < max_iter {
        if res <= target {
            // guard against drift of the recursive residual
            let t = true_residual(&x)?;
            if t <= target {
                return Ok(CgSolution {
                    x,
                    iterations,
                    relative_residual: t / b_norm,
                });
            }
            let ax = apply_shifted(d, &x)?;
            r = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            z = precond(&r);
            p = z.clone();
            rz = dot(&r, &z);
        }
        let ap = apply_shifted(d, &p)?;
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let step = rz / pap;
        for ((xi, pi), (ri, api)) in x.iter_mut().zip(&p).zip(r.iter_mut().zip(&ap)) {
            *xi += step * pi;
            *ri -= step * api;
        }
        z = precond(&r);
        let rz_new = dot(&r, &z);
        let ratio = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + ratio * *pi;
        }
        res = dot(&r, &r).sqrt();
        iterations += 1;
    }

    let t = true_residual(&x)?;
    if t <= target {
        Ok(CgSolution {
            x,
            iterations,
            relative_residual: t / b_norm,
        })
    } else {
        Err(Error::CgNotConverged {
            iterations,
            residual: t / b_norm,
        })
    }
}

/// A solver for `(I + D) x = b` prepared once for a time-invariant system.
#[derive(Debug, Clone)]
pub enum SpdSolver {
    Dense(Cholesky),
    Cg {
        d: SymmetricToeplitz,
        tol: f64,
        max_iter: usize,
        jacobi: bool,
    },
}

impl SpdSolver {
    pub fn new(sys: &RieszSystem, choice: &SolverChoice) -> Result<Self> {
        choice.validate()?;
        let n = sys.dim();
        match choice.kind {
            SolverKind::Dense => {
                let mut a = sys.to_dense();
                for (i, row) in a.iter_mut().enumerate() {
                    row[i] += 1.0;
                }
                Ok(SpdSolver::Dense(Cholesky::factor(&a)?))
            }
            SolverKind::Cg => Ok(SpdSolver::Cg {
                d: sys.toeplitz().clone(),
                tol: choice.cg_tol,
                max_iter: choice.cg_max_iter.unwrap_or(10 * n.max(1)),
                jacobi: choice.jacobi,
            }),
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.solve_from(b, None)
    }

    /// Like [`solve`](Self::solve); CG starts from `guess` when given.
    pub fn solve_from(&self, b: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
        match self {
            SpdSolver::Dense(ch) => ch.solve(b),
            SpdSolver::Cg {
                d,
                tol,
                max_iter,
                jacobi,
            } => Ok(conjugate_gradient(d, b, guess, *tol, *max_iter, *jacobi)?.x),
        }
    }
}

/// One-shot solve of `(I + D) x = b`.
pub fn solve_spd(sys: &RieszSystem, b: &[f64], choice: &SolverChoice) -> Result<Vec<f64>> {
    if b.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: b.len(),
        });
    }
    SpdSolver::new(sys, choice)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FractionalOrder;
    use crate::discretization::assemble_system;
    use crate::grid::Grid;

    fn system(m: usize, a: f64, b: f64) -> RieszSystem {
        let grid = Grid::new(1.0, m, 1.0, m).unwrap();
        assemble_system(
            &grid,
            FractionalOrder::new(a).unwrap(),
            FractionalOrder::new(b).unwrap(),
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn zero_rhs() {
        let sys = system(16, 0.5, 1.5);
        for choice in [SolverChoice::dense(), SolverChoice::cg()] {
            let x = solve_spd(&sys, &vec![0.0; 15], &choice).unwrap();
            assert!(x.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn recovers_ones() {
        let sys = system(32, 0.3, 1.7);
        let ones = vec![1.0; 31];
        let b = apply_shifted(sys.toeplitz(), &ones).unwrap();
        for choice in [
            SolverChoice::dense(),
            SolverChoice::cg(),
            SolverChoice::cg().with_jacobi(true),
        ] {
            let x = solve_spd(&sys, &b, &choice).unwrap();
            for v in x {
                assert!((v - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cg_failure_reports_residual() {
        let sys = system(64, 0.5, 1.5);
        let b: Vec<f64> = (0..63).map(|i| (i as f64).sin()).collect();
        let choice = SolverChoice {
            cg_max_iter: Some(1),
            ..SolverChoice::cg().with_cg_tol(1e-14)
        };
        match solve_spd(&sys, &b, &choice) {
            Err(Error::CgNotConverged { iterations, residual }) => {
                assert_eq!(iterations, 1);
                assert!(residual > 1e-14);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(matches!(
            Cholesky::factor(&a),
            Err(Error::NotPositiveDefinite { dim: 2 })
        ));
    }

    #[test]
    fn invalid_choice() {
        let sys = system(8, 0.5, 1.5);
        let bad = SolverChoice::cg().with_cg_tol(0.0);
        assert!(solve_spd(&sys, &[1.0; 7], &bad).is_err());
        assert!(solve_spd(&sys, &[1.0; 6], &SolverChoice::dense()).is_err());
    }
}
