//! Closed-form fractional derivatives of polynomials.
//!
//! On `[0, L]` the left Riemann–Liouville derivative of a monomial is
//! `₀D_x^γ x^p = Γ(p+1)/Γ(p+1-γ) · x^{p-γ}`. The right derivative of `v` at
//! `x` equals the left derivative of `y ↦ v(L - y)` at `L - x`, so both are
//! exact for polynomial data.

use statrs::function::gamma::{gamma, ln_gamma};

use crate::coeffs::FractionalOrder;

/// `Γ(a) / Γ(b)` for `a > 0`. Log-gamma is used when `b > 0`; a pole of
/// `Γ(b)` gives 0.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0, "gamma_ratio({a}, {b})");
    if b > 0.0 {
        (ln_gamma(a) - ln_gamma(b)).exp()
    } else if b == b.round() {
        0.0
    } else {
        gamma(a) / gamma(b)
    }
}

/// A polynomial `Σ c_p x^p` stored by ascending power.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// `x^a (L - x)^b` expanded.
    pub fn bump(a: usize, b: usize, length: f64) -> Self {
        let mut coeffs = vec![0.0; a + b + 1];
        for j in 0..=b {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[a + j] = sign * binomial(b, j) * length.powi((b - j) as i32);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `y ↦ p(L - y)`.
    pub fn reflect(&self, length: f64) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (p, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            // c (L - y)^p = c Σ_j C(p, j) L^{p-j} (-y)^j
            for (j, slot) in out.iter_mut().enumerate().take(p + 1) {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                *slot += c * sign * binomial(p, j) * length.powi((p - j) as i32);
            }
        }
        Self { coeffs: out }
    }

    /// Terms `(k, e)` with `₀D_x^γ p(x) = Σ k x^e`.
    pub fn left_rl_terms(&self, gamma: f64) -> Vec<(f64, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(p, &c)| {
                let p = p as f64;
                (c * gamma_ratio(p + 1.0, p + 1.0 - gamma), p - gamma)
            })
            .collect()
    }
}

fn eval_terms(terms: &[(f64, f64)], x: f64) -> f64 {
    terms.iter().map(|(k, e)| k * x.powf(*e)).sum()
}

/// Left/right Riemann–Liouville derivatives of a fixed polynomial on
/// `[0, L]`, with the Γ-ratios evaluated once.
#[derive(Debug, Clone)]
pub struct PolynomialDerivative {
    length: f64,
    left: Vec<(f64, f64)>,
    right: Vec<(f64, f64)>,
}

impl PolynomialDerivative {
    pub fn new(poly: &Polynomial, gamma: f64, length: f64) -> Self {
        Self {
            length,
            left: poly.left_rl_terms(gamma),
            right: poly.reflect(length).left_rl_terms(gamma),
        }
    }

    pub fn left(&self, x: f64) -> f64 {
        eval_terms(&self.left, x)
    }

    pub fn right(&self, x: f64) -> f64 {
        eval_terms(&self.right, self.length - x)
    }
}

/// Exact Riesz derivative `-c_γ (₀D_x^γ + ₓD_L^γ)` of a polynomial.
#[derive(Debug, Clone)]
pub struct RieszOfPolynomial {
    scale: f64,
    parts: PolynomialDerivative,
}

impl RieszOfPolynomial {
    pub fn new(poly: &Polynomial, order: FractionalOrder, length: f64) -> Self {
        Self {
            scale: -order.riesz_constant(),
            parts: PolynomialDerivative::new(poly, order.value(), length),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale * (self.parts.left(x) + self.parts.right(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_ratio_small_integers() {
        assert!((gamma_ratio(5.0, 3.0) - 12.0).abs() < 1e-12);
        assert!((gamma_ratio(0.5, 1.0) - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn half_derivative_of_identity() {
        // ₀D^{1/2} x = 2 sqrt(x / π)
        let p = Polynomial::new(vec![0.0, 1.0]);
        let d = PolynomialDerivative::new(&p, 0.5, 1.0);
        for x in [0.1, 0.4, 0.9] {
            assert!((d.left(x) - 2.0 * (x / PI).sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn integer_order_is_classical() {
        // γ = 2: left derivative is p'', right derivative is also p''
        let p = Polynomial::bump(2, 2, 1.0);
        let d = PolynomialDerivative::new(&p, 2.0, 1.0);
        for x in [0.2, 0.5, 0.7] {
            let second = 2.0 - 12.0 * x + 12.0 * x * x;
            assert!((d.left(x) - second).abs() < 1e-12);
            assert!((d.right(x) - second).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_and_reflect() {
        let p = Polynomial::bump(2, 3, 2.0);
        let r = p.reflect(2.0);
        for x in [0.0, 0.3, 1.1, 2.0] {
            assert!((p.eval(x) - x * x * (2.0 - x).powi(3)).abs() < 1e-12);
            assert!((r.eval(x) - p.eval(2.0 - x)).abs() < 1e-12);
        }
    }
}
