use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the correlated sparse Erdős–Rényi model.
///
/// Each unordered pair is two-colored with probability `lambda * s / n`,
/// blue-only or red-only with probability `lambda * (1 - s) / n` each, and
/// absent otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub lambda: f64,
    pub s: f64,
}

impl ModelParams {
    pub fn new(n: usize, lambda: f64, s: f64) -> Result<Self> {
        let p = ModelParams { n, lambda, s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::invalid(format!("lambda must be a finite non-negative real, got {}", self.lambda)));
        }
        if !self.s.is_finite() || !(0.0..=1.0).contains(&self.s) {
            return Err(Error::invalid(format!("s must lie in [0, 1], got {}", self.s)));
        }
        if self.lambda * (2.0 - self.s) > self.n as f64 {
            return Err(Error::invalid(format!(
                "lambda * (2 - s) / n = {} exceeds 1",
                self.lambda * (2.0 - self.s) / self.n as f64
            )));
        }
        Ok(())
    }

    /// Mean degree of the intersection graph, `lambda * s`.
    pub fn mu(&self) -> f64 {
        self.lambda * self.s
    }

    pub fn p_two_colored(&self) -> f64 {
        self.lambda * self.s / self.n as f64
    }

    pub fn p_mono(&self) -> f64 {
        self.lambda * (1.0 - self.s) / self.n as f64
    }

    pub fn p_any(&self) -> f64 {
        self.lambda * (2.0 - self.s) / self.n as f64
    }

    /// Expected number of extra double edges created by a random block
    /// permutation, `lambda^2 (1-s)^2 (1-c(lambda s))^2 / 2`.
    pub fn poisson_delta_mean(&self) -> f64 {
        let giant = super::giant::solve_c(self.mu(), super::giant::DEFAULT_TOL).unwrap_or(0.0);
        let m = self.lambda * (1.0 - self.s) * (1.0 - giant);
        m * m / 2.0
    }

    /// The same quantity without the giant-component correction,
    /// `lambda^2 (1-s)^2 / 2`.
    pub fn poisson_delta_mean_uncorrected(&self) -> f64 {
        let m = self.lambda * (1.0 - self.s);
        m * m / 2.0
    }
}
