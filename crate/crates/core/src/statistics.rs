//! Ratio statistics on finite samples:
//!
//! * `T_n = Σ x_i y_i / Σ y_i`
//! * `S_n(alpha) = Σ y_i^alpha / (Σ y_i)^alpha`
//! * `D_n = max y_i / Σ y_i`
//!
//! Positive samples are held as logarithms and every statistic is computed
//! from the ratios `y_i / max y`, so draws far beyond `f64::MAX` (the slowly
//! varying family produces `exp(1/U)`) are handled without overflow.

use crate::error::{Error, Result};
use crate::special_fn::Alpha;

/// A sample of strictly positive values, stored as natural logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveSample {
    logs: Vec<f64>,
}

impl PositiveSample {
    /// From linear values; every entry must be finite and `> 0`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        let logs = values
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if value > 0.0 && value.is_finite() {
                    Ok(value.ln())
                } else {
                    Err(Error::BadValue { index, value })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PositiveSample { logs })
    }

    /// From natural logarithms; every entry must be finite.
    pub fn from_logs(logs: Vec<f64>) -> Result<Self> {
        if logs.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = logs.iter().enumerate().find(|(_, l)| !l.is_finite()) {
            return Err(Error::BadValue { index, value });
        }
        Ok(PositiveSample { logs })
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    /// Linear values; may contain `+inf` for values beyond `f64::MAX`.
    pub fn values(&self) -> Vec<f64> {
        self.logs.iter().map(|l| l.exp()).collect()
    }

    /// Consecutive sub-samples of `len` entries; a short remainder is dropped.
    pub fn blocks(&self, len: usize) -> impl Iterator<Item = &[f64]> {
        self.logs.chunks_exact(len.max(1))
    }

    /// The same sample multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> PositiveSample {
        let shift = c.ln();
        PositiveSample {
            logs: self.logs.iter().map(|l| l + shift).collect(),
        }
    }
}

/// Neumaier-compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

fn max_of(logs: &[f64]) -> f64 {
    logs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Maximum `m` and `W = Σ exp(l_i - m)`, so `Σ y_i = e^m W` with `W >= 1`.
#[inline]
fn rescaled_total(logs: &[f64]) -> (f64, f64) {
    let m = max_of(logs);
    let w: KahanSum = logs.iter().map(|l| (l - m).exp()).collect();
    (m, w.total())
}

/// `S_n(alpha)` on raw log values. Panics on an empty slice.
#[inline]
pub(crate) fn s_n_logs(logs: &[f64], alpha: f64) -> f64 {
    let (m, w) = rescaled_total(logs);
    let s: KahanSum = logs.iter().map(|l| (alpha * (l - m)).exp()).collect();
    s.total() / w.powf(alpha)
}

/// `D_n` on raw log values. Panics on an empty slice.
#[inline]
pub(crate) fn d_max_logs(logs: &[f64]) -> f64 {
    1.0 / rescaled_total(logs).1
}

/// `Σ x_i y_i / Σ y_i`.
pub fn stat_t_n(x: &[f64], y: &PositiveSample) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::BadValue { index, value });
    }
    Ok(t_n_logs(x, y.logs()))
}

pub(crate) fn t_n_logs(x: &[f64], logs: &[f64]) -> f64 {
    let m = max_of(logs);
    let mut num = KahanSum::default();
    let mut den = KahanSum::default();
    for (&xi, &l) in x.iter().zip(logs) {
        let w = (l - m).exp();
        num.add(xi * w);
        den.add(w);
    }
    num.total() / den.total()
}

/// `Σ y_i^alpha / (Σ y_i)^alpha`, which lies in `[n^(1-alpha), 1]`.
pub fn stat_s_n(y: &PositiveSample, alpha: Alpha) -> f64 {
    s_n_logs(y.logs(), alpha.value())
}

/// `max y_i / Σ y_i`, in `(0, 1]`.
pub fn stat_d_max(y: &PositiveSample) -> f64 {
    d_max_logs(y.logs())
}
