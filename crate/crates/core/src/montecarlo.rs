//! Replicated Monte Carlo for `E S_n(alpha)`, the law of `T_n` and the
//! LePage oracle `E(V / U^alpha)`.
//!
//! Replicate `j` always draws from `substream(seed, j)`. Per-replicate
//! outputs land in an index-ordered buffer and are reduced sequentially, so
//! results are bit-identical for any worker-thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::samplers::{sample_levy_pair, substream, DistSpecX, DistSpecY};
use crate::special_fn::{gamma_map, Alpha, BetaIdx};
use crate::statistics::{s_n_logs, t_n_logs, KahanSum};

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over replicates divided by `sqrt(replicates)`.
    pub stderr: f64,
    pub replicates: usize,
    pub n: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Mean and standard error of `values`, reduced in index order.
    pub fn from_values(values: &[f64], n: usize, seed: u64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: values.len(),
            });
        }
        let r = values.len() as f64;
        let mean = values.iter().copied().collect::<KahanSum>().total() / r;
        let ss = values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .collect::<KahanSum>()
            .total();
        let stderr = (ss / (r - 1.0) / r).sqrt();
        Ok(McEstimate {
            mean,
            stderr,
            replicates: values.len(),
            n,
            seed,
        })
    }
}

/// Runs `f` on a dedicated pool of `threads` workers (`None`: rayon's default).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("thread count must be at least 1")),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn check_counts(n: usize, r: usize, min_r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("sample size n must be at least 1"));
    }
    if r < min_r {
        return Err(Error::invalid(format!("need at least {min_r} replicates, got {r}")));
    }
    Ok(())
}

/// Applies `stat` to the log-values of `r` independent samples of size `n`.
pub fn mc_statistic<F>(yspec: &DistSpecY, n: usize, r: usize, seed: u64, stat: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    yspec.validate()?;
    check_counts(n, r, 1)?;
    let spec = *yspec;
    Ok((0..r)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, j| {
                let mut stream = substream(seed, j as u64);
                buf.clear();
                buf.extend((0..n).map(|_| spec.draw_log(&mut stream)));
                stat(buf)
            },
        )
        .collect())
}

/// Estimate of `E S_n(alpha)` from `r` replicates of size `n`.
pub fn mc_mean_s_n(yspec: &DistSpecY, alpha: Alpha, n: usize, r: usize, seed: u64) -> Result<McEstimate> {
    check_counts(n, r, 2)?;
    let a = alpha.value();
    let values = mc_statistic(yspec, n, r, seed, |logs| s_n_logs(logs, a))?;
    McEstimate::from_values(&values, n, seed)
}

/// Limit of `E S_n(alpha)` for a family: `gamma_map` for the stable-domain
/// families, 1 for the slowly varying one, 0 when `E Y < ∞`.
pub fn theory_gamma(yspec: &DistSpecY, alpha: Alpha) -> Result<f64> {
    yspec.validate()?;
    Ok(match yspec.tail_index() {
        None => 0.0,
        Some(b) => gamma_map(alpha, BetaIdx::new(b)?).value(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub estimate: McEstimate,
    pub theory: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: &str = "n,estimate,stderr,gamma_theory,abs_error";

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n, row.estimate.mean, row.estimate.stderr, row.theory, row.abs_error
            ));
        }
        out
    }
}

/// One `mc_mean_s_n` per grid point. Every grid point reuses `seed`.
pub fn mc_sweep(yspec: &DistSpecY, alpha: Alpha, n_grid: &[usize], r: usize, seed: u64) -> Result<SweepTable> {
    if n_grid.is_empty() {
        return Err(Error::invalid("n grid is empty"));
    }
    if n_grid[0] == 0 || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("n grid must be positive and strictly increasing"));
    }
    let theory = theory_gamma(yspec, alpha)?;
    let rows = n_grid
        .iter()
        .map(|&n| {
            let estimate = mc_mean_s_n(yspec, alpha, n, r, seed)?;
            Ok(SweepRow {
                n,
                estimate,
                theory,
                abs_error: (estimate.mean - theory).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

/// `r` independent realizations of `T_n`.
pub fn mc_t_n_sample(xspec: &DistSpecX, yspec: &DistSpecY, n: usize, r: usize, seed: u64) -> Result<Vec<f64>> {
    xspec.validate()?;
    yspec.validate()?;
    check_counts(n, r, 1)?;
    let (xs, ys) = (*xspec, *yspec);
    Ok((0..r)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(n), Vec::with_capacity(n)),
            |(xbuf, ybuf), j| {
                let mut stream = substream(seed, j as u64);
                ybuf.clear();
                xbuf.clear();
                ybuf.extend((0..n).map(|_| ys.draw_log(&mut stream)));
                xbuf.extend((0..n).map(|_| xs.draw(&mut stream)));
                t_n_logs(xbuf, ybuf)
            },
        )
        .collect())
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::invalid("ks_distance input contains NaN"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        // advance past every copy of the smaller value in both samples
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Estimate of `E(V / U^alpha)` from `r` LePage pairs.
pub fn mc_levy_ratio(beta: BetaIdx, alpha: Alpha, r: usize, tol: f64, seed: u64) -> Result<McEstimate> {
    if beta.value() == 0.0 {
        return Err(Error::invalid("levy ratio requires beta in (0, 1)"));
    }
    if r < 2 {
        return Err(Error::invalid(format!("need at least 2 replicates, got {r}")));
    }
    let values = (0..r)
        .into_par_iter()
        .map(|j| {
            let mut stream = substream(seed, j as u64);
            sample_levy_pair(beta, alpha, tol, &mut stream).map(|p| p.ratio(alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    McEstimate::from_values(&values, 0, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn estimate_from_values() {
        let e = McEstimate::from_values(&[1.0, 2.0, 3.0, 4.0], 10, 5).unwrap();
        assert_eq!(e.mean, 2.5);
        let sd = (5.0_f64 / 3.0).sqrt();
        assert!((e.stderr - sd / 2.0).abs() < 1e-15);
        assert!(McEstimate::from_values(&[1.0], 1, 0).is_err());
    }

    #[test]
    fn ks_examples() {
        let a = [0.3, 1.2, -4.0, 7.0];
        assert_eq!(ks_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_distance(&[0.0; 10], &[1.0; 7]).unwrap(), 1.0);
        assert_eq!(ks_distance(&[1.0, 2.0], &[2.0, 1.0]).unwrap(), 0.0);
        // F_a jumps to 1/2 at 1; F_b is still 0 there
        assert_eq!(ks_distance(&[1.0, 3.0], &[2.0, 3.0]).unwrap(), 0.5);
        assert!(ks_distance(&[], &[1.0]).is_err());
    }

    // Brute force: evaluate both ECDFs at every pooled point.
    fn ks_brute(a: &[f64], b: &[f64]) -> f64 {
        let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        a.iter()
            .chain(b)
            .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn ks_matches_brute_force_with_ties() {
        let mut s = substream(11, 0);
        use rand::Rng;
        for _ in 0..200 {
            let na = s.random_range(1..30);
            let nb = s.random_range(1..30);
            let a: Vec<f64> = (0..na).map(|_| s.random_range(0..6) as f64).collect();
            let b: Vec<f64> = (0..nb).map(|_| s.random_range(0..6) as f64).collect();
            assert!((ks_distance(&a, &b).unwrap() - ks_brute(&a, &b)).abs() < 1e-15);
        }
    }

    #[test]
    fn exponential_control_decays() {
        let y = DistSpecY::Exponential { rate: 1.0 };
        let e = mc_mean_s_n(&y, alpha(2.0), 10_000, 200, 3).unwrap();
        assert!(e.mean < 1e-3);
        assert!((e.mean - 2e-4).abs() < 2e-5, "{e:?}");
    }

    #[test]
    fn thread_count_invariance() {
        let y = DistSpecY::Pareto { beta: 0.5, xmin: 1.0 };
        let run = |t| with_threads(Some(t), || mc_mean_s_n(&y, alpha(1.5), 500, 64, 9).unwrap()).unwrap();
        let base = run(1);
        for t in [2, 8] {
            let other = run(t);
            assert_eq!(base.mean.to_bits(), other.mean.to_bits());
            assert_eq!(base.stderr.to_bits(), other.stderr.to_bits());
        }
        let lr = |t| {
            with_threads(Some(t), || {
                mc_levy_ratio(BetaIdx::positive(0.5).unwrap(), alpha(2.0), 64, 1e-3, 1).unwrap()
            })
            .unwrap()
        };
        assert_eq!(lr(1), lr(8));
    }

    #[test]
    fn sweep_table_shape() {
        let y = DistSpecY::Pareto { beta: 0.5, xmin: 1.0 };
        let t = mc_sweep(&y, alpha(2.0), &[10, 100], 20, 0).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows.iter().all(|r| (r.theory - 0.5).abs() < 1e-14));
        let csv = t.to_csv();
        assert!(csv.starts_with("n,estimate,stderr,gamma_theory,abs_error\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(mc_sweep(&y, alpha(2.0), &[], 20, 0).is_err());
        assert!(mc_sweep(&y, alpha(2.0), &[100, 100], 20, 0).is_err());
        assert!(mc_sweep(&y, alpha(2.0), &[0, 10], 20, 0).is_err());
    }

    #[test]
    fn theory_column_by_family() {
        let a = alpha(1.5);
        assert_eq!(theory_gamma(&DistSpecY::SlowVary, a).unwrap(), 1.0);
        assert_eq!(theory_gamma(&DistSpecY::Exponential { rate: 2.0 }, a).unwrap(), 0.0);
        let g = theory_gamma(&DistSpecY::PositiveStable { beta: 0.5 }, a).unwrap();
        assert!((g - 2.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn rademacher_t_n_is_convex_combination() {
        let t = mc_t_n_sample(&DistSpecX::Rademacher, &DistSpecY::SlowVary, 200, 100, 4).unwrap();
        assert_eq!(t.len(), 100);
        assert!(t.iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn levy_summands_bounded() {
        let e = mc_levy_ratio(BetaIdx::positive(0.3).unwrap(), alpha(1.2), 100, 1e-3, 2).unwrap();
        assert!(e.mean > 0.0 && e.mean <= 1.0);
        assert!(mc_levy_ratio(BetaIdx::new(0.0).unwrap(), alpha(1.2), 100, 1e-3, 2).is_err());
    }
}
