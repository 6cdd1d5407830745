use crate::error::{Error, Result};

/// Size cutoff for "small" trees: `floor(sqrt(ln n))`, at least 1.
pub fn k_cutoff(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    ((n as f64).ln().sqrt().floor() as usize).max(1)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Lower-bound class frequency `mu^(k-1) e^(-mu k) / k!`.
pub fn class_frequency(k: usize, mu: f64) -> f64 {
    debug_assert!(k >= 1);
    let k_f = k as f64;
    (mu.powi(k as i32 - 1) * (-mu * k_f).exp()) / factorial(k)
}

/// First moment of the class count, `n mu^(k-1) e^(-mu k) / a(T)` where
/// `a(T)` is the automorphism count of the tree.
pub fn class_first_moment(n: usize, k: usize, mu: f64, automorphisms: u64) -> f64 {
    n as f64 * mu.powi(k as i32 - 1) * (-mu * k as f64).exp() / automorphisms as f64
}

/// Number of labeled trees on `k` vertices, `k^(k-2)`.
pub fn cayley_count(k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("tree size must be at least 1"));
    }
    if k <= 2 {
        return Ok(1);
    }
    (k as u64).checked_pow(k as u32 - 2).ok_or_else(|| Error::Overflow(format!("{k}^{} does not fit in u64", k - 2)))
}
