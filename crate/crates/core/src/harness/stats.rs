//! Small descriptive and goodness-of-fit statistics.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

/// Linear-interpolation quantile of the sorted data (`q` in `[0, 1]`).
pub fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Empirical factorial moment `E[X (X-1) ... (X-l+1)]`.
pub fn factorial_moment(xs: &[f64], l: u32) -> Option<f64> {
    let terms: Vec<f64> = xs.iter().map(|&x| (0..l).map(|j| x - j as f64).product()).collect();
    mean(&terms)
}

/// Pearson correlation; `None` when either sample is constant.
pub fn correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let mx = mean(xs)?;
    let my = mean(ys)?;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareFit {
    /// Lower edge of each bin; the last bin is open-ended.
    pub bin_starts: Vec<u64>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square goodness of fit of counts against `Poisson(mean)` with bins
/// `{0}, {1}, ..., {max_bin - 1}, {>= max_bin}`. Tail bins whose expected
/// count falls below 5 are merged into their left neighbour.
pub fn poisson_chi_square(samples: &[u64], mean: f64, max_bin: u64) -> Option<ChiSquareFit> {
    if samples.is_empty() || mean.is_nan() || mean <= 0.0 || max_bin == 0 {
        return None;
    }
    let total = samples.len() as f64;
    let pois = Poisson::new(mean).ok()?;
    let mut bin_starts: Vec<u64> = (0..=max_bin).collect();
    let mut probs: Vec<f64> = (0..max_bin).map(|k| pois.pmf(k)).collect();
    probs.push((1.0 - probs.iter().sum::<f64>()).max(0.0));
    while bin_starts.len() > 2 && probs[probs.len() - 1] * total < 5.0 {
        let tail = probs.pop().unwrap();
        *probs.last_mut().unwrap() += tail;
        bin_starts.pop();
    }
    let mut observed = vec![0u64; bin_starts.len()];
    for &x in samples {
        let bin = bin_starts.iter().rposition(|&b| x >= b).unwrap();
        observed[bin] += 1;
    }
    let expected: Vec<f64> = probs.iter().map(|p| p * total).collect();
    let statistic = observed.iter().zip(&expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum::<f64>();
    let dof = bin_starts.len() - 1;
    let p_value = 1.0 - ChiSquared::new(dof as f64).ok()?.cdf(statistic);
    Some(ChiSquareFit { bin_starts, observed, expected, statistic, dof, p_value })
}
