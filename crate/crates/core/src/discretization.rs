//! WSGD approximations of the Riemann–Liouville derivatives and the
//! Crank–Nicolson system matrix
//!
//! ```text
//! D = μ_α (A + Aᵀ) + μ_β (B + Bᵀ),    μ_γ = τ K_γ c_γ / (2 h^γ)
//! ```
//!
//! `A` (resp. `B`) is the lower Hessenberg Toeplitz matrix with `w_{i-j+1}`
//! in entry `(i, j)`. `D` is symmetric Toeplitz and is stored by its first
//! column only.

use crate::coeffs::{wsgd_weights, FractionalOrder};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::toeplitz::SymmetricToeplitz;

fn check_node(values: &[f64], i: usize) -> Result<usize> {
    if values.len() < 4 {
        return Err(Error::Grid(format!(
            "need samples at x_0..x_m with m >= 3, got {} values",
            values.len()
        )));
    }
    let m = values.len() - 1;
    if i == 0 || i >= m {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 1,
            hi: m - 1,
        });
    }
    Ok(m)
}

/// WSGD approximation of the left Riemann–Liouville derivative `₀D_x^γ v` at
/// the interior node `x_i`.
///
/// `values` holds `v(x_0), ..., v(x_m)`; `v` is implicitly zero for `x < 0`.
pub fn left_rl_derivative(values: &[f64], gamma: f64, h: f64, i: usize) -> Result<f64> {
    check_node(values, i)?;
    let w = wsgd_weights(gamma, i + 1)?;
    let sum: f64 = w
        .iter()
        .enumerate()
        .map(|(k, wk)| wk * values[i + 1 - k])
        .sum();
    Ok(sum / h.powf(gamma))
}

/// WSGD approximation of the right Riemann–Liouville derivative `ₓD_L^γ v`
/// at the interior node `x_i`; `v` is implicitly zero for `x > L`.
pub fn right_rl_derivative(values: &[f64], gamma: f64, h: f64, i: usize) -> Result<f64> {
    let m = check_node(values, i)?;
    let w = wsgd_weights(gamma, m - i + 1)?;
    let sum: f64 = w
        .iter()
        .enumerate()
        .map(|(k, wk)| wk * values[i + k - 1])
        .sum();
    Ok(sum / h.powf(gamma))
}

/// WSGD approximation of the Riesz derivative
/// `∂^γ v / ∂|x|^γ = -c_γ (₀D_x^γ v + ₓD_L^γ v)` at `x_i`.
pub fn riesz_derivative(values: &[f64], order: FractionalOrder, h: f64, i: usize) -> Result<f64> {
    let g = order.value();
    let left = left_rl_derivative(values, g, h, i)?;
    let right = right_rl_derivative(values, g, h, i)?;
    Ok(-order.riesz_constant() * (left + right))
}

/// First column of `A_γ + A_γᵀ` for a grid with `m` subintervals:
/// `[2 w_1, w_0 + w_2, w_3, ..., w_{m-1}]`.
pub fn riesz_toeplitz_column(gamma: f64, m: usize) -> Result<Vec<f64>> {
    if m < 3 {
        return Err(Error::Grid(format!(
            "need at least 3 space subintervals, got {m}"
        )));
    }
    let w = wsgd_weights(gamma, m - 1)?;
    let mut col = Vec::with_capacity(m - 1);
    col.push(2.0 * w[1]);
    col.push(w[0] + w[2]);
    col.extend_from_slice(&w[3..]);
    Ok(col)
}

/// The assembled Crank–Nicolson operator for one grid and parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszSystem {
    pub alpha: FractionalOrder,
    pub beta: FractionalOrder,
    pub k_alpha: f64,
    pub k_beta: f64,
    pub mu_alpha: f64,
    pub mu_beta: f64,
    d: SymmetricToeplitz,
}

impl RieszSystem {
    /// Number of interior unknowns, `m - 1`.
    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    /// First column of `D`.
    pub fn d_col(&self) -> &[f64] {
        self.d.column()
    }

    pub fn toeplitz(&self) -> &SymmetricToeplitz {
        &self.d
    }

    /// Dense `D`, row major.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.d.to_dense()
    }
}

/// Builds `D` for the given grid and coefficients.
pub fn assemble_system(
    grid: &Grid,
    alpha: FractionalOrder,
    beta: FractionalOrder,
    k_alpha: f64,
    k_beta: f64,
) -> Result<RieszSystem> {
    let alpha = FractionalOrder::advection(alpha.value())?;
    let beta = FractionalOrder::dispersion(beta.value())?;
    if !(k_alpha >= 0.0 && k_alpha.is_finite()) {
        return Err(Error::Domain {
            name: "K_alpha",
            value: k_alpha,
            range: "[0, inf)",
        });
    }
    if !(k_beta > 0.0 && k_beta.is_finite()) {
        return Err(Error::Domain {
            name: "K_beta",
            value: k_beta,
            range: "(0, inf)",
        });
    }

    let h = grid.h();
    let tau = grid.tau();
    let m = grid.m();
    let mu_alpha = tau * k_alpha * alpha.riesz_constant() / (2.0 * h.powf(alpha.value()));
    let mu_beta = tau * k_beta * beta.riesz_constant() / (2.0 * h.powf(beta.value()));

    let ca = riesz_toeplitz_column(alpha.value(), m)?;
    let cb = riesz_toeplitz_column(beta.value(), m)?;
    let col = ca
        .iter()
        .zip(&cb)
        .map(|(a, b)| mu_alpha * a + mu_beta * b)
        .collect();

    Ok(RieszSystem {
        alpha,
        beta,
        k_alpha,
        k_beta,
        mu_alpha,
        mu_beta,
        d: SymmetricToeplitz::new(col),
    })
}

/// `D · v` by the reference `O(m²)` Toeplitz product.
pub fn apply_d(sys: &RieszSystem, v: &[f64]) -> Result<Vec<f64>> {
    sys.d.matvec_direct(v)
}

/// `D · v` by the FFT circulant embedding.
pub fn apply_d_fast(sys: &RieszSystem, v: &[f64]) -> Result<Vec<f64>> {
    sys.d.matvec_fft(v)
}
