//! Tail-index inference from a positive sample.
//!
//! The ratio estimator splits the data into consecutive blocks of
//! `block_size`, averages `S_n(alpha)` over blocks to get `gamma_hat`, and
//! maps it back to `beta` through the inverse of `gamma_map`. Since the map is
//! decreasing, a normal interval for `gamma` maps to a `beta` interval with
//! its endpoints swapped. The Hill estimator serves as an independent
//! baseline.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::McEstimate;
use crate::special_fn::{invert_gamma_map, Alpha, GammaVal};
use crate::statistics::{s_n_logs, KahanSum, PositiveSample};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RatioInverse,
    Hill,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaEstimate {
    pub beta_hat: f64,
    pub gamma_hat: McEstimate,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: Method,
    pub block_size: usize,
}

/// `floor(sqrt(N))` rounded to the nearest power of ten, at least 10.
pub fn default_block_size(n: usize) -> usize {
    let root = (n as f64).sqrt().floor().max(1.0);
    let exp = root.log10().round().max(1.0) as i32;
    let mut block = 10usize.pow(exp as u32);
    // keep at least two blocks
    while block > 2 && 2 * block > n {
        block /= 10;
    }
    block.max(2)
}

/// Default Hill order `k = N / 100`, kept inside `[2, N - 1]`.
pub fn default_hill_k(n: usize) -> usize {
    (n / 100).max(2).min(n.saturating_sub(1))
}

/// Mean and standard error of `S_m(alpha)` over consecutive blocks of size `m`.
pub fn estimate_gamma(data: &PositiveSample, alpha: Alpha, block_size: usize) -> Result<McEstimate> {
    if block_size < 2 {
        return Err(Error::invalid(format!("block size must be at least 2, got {block_size}")));
    }
    let needed = 2 * block_size;
    if data.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: data.len(),
        });
    }
    let a = alpha.value();
    let blocks: Vec<&[f64]> = data.blocks(block_size).collect();
    let values: Vec<f64> = blocks.par_iter().map(|b| s_n_logs(b, a)).collect();
    McEstimate::from_values(&values, block_size, 0)
}

/// Ratio-inverse estimate of the tail index with a 95% interval.
pub fn estimate_beta(data: &PositiveSample, alpha: Alpha, block_size: usize) -> Result<BetaEstimate> {
    let gamma_hat = estimate_gamma(data, alpha, block_size)?;
    beta_from_gamma(gamma_hat, alpha, block_size)
}

/// Maps a `gamma` estimate to `beta` and its interval.
pub fn beta_from_gamma(gamma_hat: McEstimate, alpha: Alpha, block_size: usize) -> Result<BetaEstimate> {
    let g = gamma_hat.mean;
    if !(g > 0.0) {
        return Err(Error::NoHeavyTail(g));
    }
    let clip = |v: f64| v.clamp(f64::MIN_POSITIVE, 1.0);
    let invert = |v: f64| invert_gamma_map(alpha, GammaVal::new(clip(v)).expect("clipped")).value();
    let half = Z_95 * gamma_hat.stderr;
    let beta_hat = invert(g);
    // decreasing map: the upper gamma end gives the lower beta end
    let ci_low = invert(g + half).min(beta_hat);
    let ci_high = invert(g - half).max(beta_hat);
    Ok(BetaEstimate {
        beta_hat,
        gamma_hat,
        ci_low,
        ci_high,
        method: Method::RatioInverse,
        block_size,
    })
}

/// Hill estimate `k / Σ_{i<=k} ln(Y_(i) / Y_(k+1))` over the top `k` order
/// statistics.
pub fn hill_estimator(data: &PositiveSample, k: usize) -> Result<f64> {
    let n = data.len();
    if k < 2 || k >= n {
        return Err(Error::invalid(format!("hill k must satisfy 2 <= k < N = {n}, got {k}")));
    }
    let mut logs = data.logs().to_vec();
    // descending: the top k land in [..k], Y_(k+1) at index k
    logs.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let pivot = logs[k];
    let spacing: KahanSum = logs[..k].iter().map(|l| l - pivot).collect();
    let denom = spacing.total();
    if !(denom > 0.0) {
        return Err(Error::invalid("hill denominator is zero: the top order statistics are tied"));
    }
    Ok(k as f64 / denom)
}
