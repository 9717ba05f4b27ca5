//! Finite-difference solver for the Riesz space fractional
//! advection-dispersion equation on `[0, L]`:
//!
//! ```text
//! u_t = K_α ∂^α u/∂|x|^α + K_β ∂^β u/∂|x|^β + f(x, t),   0 < α < 1 < β ≤ 2
//! ```
//!
//! with zero Dirichlet data. Space is discretised with weighted shifted
//! Grünwald (WSGD) operators, time with Crank–Nicolson, giving
//! `(I + D) Uⁿ = (I - D) Uⁿ⁻¹ + τ/2 (fⁿ⁻¹ + fⁿ)` with `D` symmetric
//! positive definite Toeplitz. Richardson extrapolation over three nested
//! grids lifts the second-order scheme to fourth order.

pub mod analytic;
pub mod coeffs;
pub mod discretization;
pub mod error;
pub mod extrapolation;
pub mod grid;
pub mod harness;
pub mod linsolve;
pub mod problems;
pub mod stepper;
pub mod toeplitz;
pub mod verify;

pub use coeffs::{grunwald_coeffs, wsgd_weights, FractionalOrder, GrunwaldSeq};
pub use discretization::{assemble_system, RieszSystem};
pub use error::{Error, Result};
pub use grid::Grid;
pub use linsolve::{solve_spd, SolverChoice, SolverKind};
pub use problems::ProblemSpec;
pub use stepper::{integrate, integrate_from, GridSolution, Keep};
