use crate::error::{Error, Result};

/// Uniform space-time grid on `[0, L] × [0, T]`.
///
/// Interior unknowns are the nodes `x_1 .. x_{m-1}`; the boundary nodes
/// `x_0` and `x_m` carry the homogeneous Dirichlet data and are never stored.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    length: f64,
    m: usize,
    t_final: f64,
    n_steps: usize,
}

impl Grid {
    pub fn new(length: f64, m: usize, t_final: f64, n_steps: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain {
                name: "L",
                value: length,
                range: "(0, inf)",
            });
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::Domain {
                name: "T",
                value: t_final,
                range: "(0, inf)",
            });
        }
        if m < 3 {
            return Err(Error::Grid(format!(
                "need at least 3 space subintervals, got {m}"
            )));
        }
        if n_steps < 1 {
            return Err(Error::Grid("need at least one time step".into()));
        }
        Ok(Self {
            length,
            m,
            t_final,
            n_steps,
        })
    }

    /// Grid whose time step is `ratio · h`, rounded to the nearest whole
    /// number of steps.
    pub fn with_step_ratio(length: f64, m: usize, t_final: f64, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::Domain {
                name: "tau/h",
                value: ratio,
                range: "(0, inf)",
            });
        }
        let h = length / m as f64;
        let n = (t_final / (ratio * h)).round().max(1.0) as usize;
        Self::new(length, m, t_final, n)
    }

    /// Grid with the nearest whole numbers of cells and steps to the
    /// requested `h` and `τ`.
    pub fn from_steps(length: f64, h: f64, t_final: f64, tau: f64) -> Result<Self> {
        if !(h > 0.0 && tau > 0.0) {
            return Err(Error::Grid(format!("steps must be positive (h = {h}, tau = {tau})")));
        }
        let m = (length / h).round() as usize;
        let n = (t_final / tau).round().max(1.0) as usize;
        Self::new(length, m, t_final, n)
    }

    /// Same domain with `factor` times as many cells and steps.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(
            self.length,
            self.m * factor,
            self.t_final,
            self.n_steps * factor,
        )
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of space subintervals.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Number of time steps.
    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.length / self.m as f64
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    #[inline]
    pub fn interior_len(&self) -> usize {
        self.m - 1
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i == self.m {
            self.length
        } else {
            i as f64 * self.h()
        }
    }

    #[inline]
    pub fn t(&self, n: usize) -> f64 {
        if n == self.n_steps {
            self.t_final
        } else {
            n as f64 * self.tau()
        }
    }

    /// Interior node coordinates `x_1 .. x_{m-1}`.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..self.m).map(|i| self.x(i)).collect()
    }

    /// Samples `f` at the interior nodes.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (1..self.m).map(|i| f(self.x(i))).collect()
    }

    /// Index of the time level equal to `t`, if `t` is a grid time.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        let tau = self.tau();
        let pos = t / tau;
        let n = pos.round();
        let tol = 1e-9 * pos.abs().max(1.0);
        if n >= 0.0 && n as usize <= self.n_steps && (pos - n).abs() <= tol {
            return Ok(n as usize);
        }
        let below = (pos.floor().clamp(0.0, self.n_steps as f64)) * tau;
        let above = (pos.ceil().clamp(0.0, self.n_steps as f64)) * tau;
        Err(Error::OffGridTime {
            requested: t,
            below,
            above,
        })
    }
}
