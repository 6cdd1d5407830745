use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Giant-component fraction `c(mu)`: the greatest non-negative root of
/// `exp(-mu x) = 1 - x`.
///
/// Returns exactly zero for `mu <= 1`. Above the threshold the unique
/// positive root is bracketed in `[1e-12, 1]` and bisected until the
/// residual is below `tol`.
pub fn solve_c(mu: f64, tol: f64) -> Result<f64> {
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::invalid(format!("mu must be finite and non-negative, got {mu}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tol must be positive, got {tol}")));
    }
    if mu <= 1.0 {
        return Ok(0.0);
    }
    let g = |x: f64| (-mu * x).exp() - 1.0 + x;
    // g < 0 on (0, c) and g > 0 on (c, 1]
    let (mut lo, mut hi) = (1e-12_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if g(lo).abs() <= g(hi).abs() { lo } else { hi };
    if g(root).abs() > tol {
        return Err(Error::Domain(format!("bisection residual {} exceeds tol {tol} at mu={mu}", g(root).abs())));
    }
    Ok(root)
}
