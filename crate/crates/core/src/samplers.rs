//! Deterministic, splittable variate generation for the `Y` and `X`
//! families, and the LePage series sampler for the bivariate stable limit
//! `(U, V)`.
//!
//! Every draw goes through an [`RngStream`]: a ChaCha8 generator keyed by
//! `seed` with its 64-bit stream counter set to `index`. Creating a substream
//! is O(1), and `(seed, index)` fixes the output sequence regardless of which
//! thread consumes it.
//!
//! Positive variates are produced in log space (`sample_log_y`). Linear draws
//! are `exp` of those; for the slowly varying family `exp(1/U)` exceeds
//! `f64::MAX` roughly once every 710 draws, so scale-free computations should
//! stay in log space.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::special_fn::{Alpha, BetaIdx};

/// A single-owner random stream identified by `(seed, index)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    index: u64,
    rng: ChaCha8Rng,
}

/// Stream `index` of the family keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    RngStream { seed, index, rng }
}

impl RngStream {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Uniform on `(0, 1]`.
    fn open_unit(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    /// Uniform on the open interval `(0, 1)`.
    fn open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    fn exp1(&mut self) -> f64 {
        self.rng.sample(Exp1)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Families for the positive weights `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpecY {
    /// `P(Y > y) = (y / xmin)^(-beta)` for `y >= xmin`.
    Pareto { beta: f64, xmin: f64 },
    /// `P(Y > y) = 1 / ln y` for `y >= e`, via `Y = exp(1/U)`.
    SlowVary,
    /// Strictly stable with `E exp(-tY) = exp(-t^beta)`.
    PositiveStable { beta: f64 },
    /// Finite-mean control.
    Exponential { rate: f64 },
}

/// Mean-zero families for `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpecX {
    Normal { sigma: f64 },
    Rademacher,
    /// Symmetric stable with characteristic function `exp(-(scale |t|)^alpha)`.
    SymStable { alpha: f64, scale: f64 },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be a finite positive number, got {v}")))
    }
}

impl DistSpecY {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistSpecY::Pareto { beta, xmin } => {
                BetaIdx::positive(beta).map_err(|_| {
                    Error::invalid(format!("pareto beta must lie in (0, 1), got {beta}"))
                })?;
                check_positive("pareto xmin", xmin)
            }
            DistSpecY::SlowVary => Ok(()),
            DistSpecY::PositiveStable { beta } => BetaIdx::positive(beta)
                .map(|_| ())
                .map_err(|_| {
                    Error::invalid(format!("posstable beta must lie in (0, 1), got {beta}"))
                }),
            DistSpecY::Exponential { rate } => check_positive("exp rate", rate),
        }
    }

    /// Tail index of the family: `Some(beta)` for the stable-domain
    /// families, `Some(0)` for the slowly varying one, `None` when `E Y < ∞`.
    pub fn tail_index(&self) -> Option<f64> {
        match *self {
            DistSpecY::Pareto { beta, .. } | DistSpecY::PositiveStable { beta } => Some(beta),
            DistSpecY::SlowVary => Some(0.0),
            DistSpecY::Exponential { .. } => None,
        }
    }

    /// One draw of `ln Y`.
    #[inline]
    pub fn draw_log(&self, rng: &mut RngStream) -> f64 {
        match *self {
            DistSpecY::Pareto { beta, xmin } => xmin.ln() - rng.open_unit().ln() / beta,
            DistSpecY::SlowVary => 1.0 / rng.open_unit(),
            DistSpecY::PositiveStable { beta } => log_positive_stable(beta, rng),
            DistSpecY::Exponential { rate } => (rng.exp1() / rate).ln(),
        }
    }
}

// Kanter's representation: with Θ ~ U(0, π) and E ~ Exp(1),
// Y = sin(βΘ) / sin(Θ)^(1/β) * (sin((1-β)Θ) / E)^((1-β)/β)
// has Laplace transform exp(-t^β).
fn log_positive_stable(beta: f64, rng: &mut RngStream) -> f64 {
    let theta = PI * rng.open01();
    let e = rng.exp1();
    (beta * theta).sin().ln() - (theta.sin().ln()) / beta
        + (1.0 - beta) / beta * (((1.0 - beta) * theta).sin().ln() - e.ln())
}

impl DistSpecX {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistSpecX::Normal { sigma } => check_positive("normal sigma", sigma),
            DistSpecX::Rademacher => Ok(()),
            DistSpecX::SymStable { alpha, scale } => {
                if !(alpha > 1.0 && alpha < 2.0) {
                    return Err(Error::invalid(format!(
                        "symstable alpha must lie in (1, 2), got {alpha}"
                    )));
                }
                check_positive("symstable scale", scale)
            }
        }
    }

    /// The pair `(alpha, c)` for which `-log Re φ(t) / |t|^alpha → c` as `t → 0`.
    pub fn cf_exponent(&self) -> (f64, f64) {
        match *self {
            DistSpecX::Normal { sigma } => (2.0, sigma * sigma / 2.0),
            DistSpecX::Rademacher => (2.0, 0.5),
            DistSpecX::SymStable { alpha, scale } => (alpha, scale.powf(alpha)),
        }
    }

    /// Real part of the characteristic function at `t`, in closed form.
    pub fn re_cf(&self, t: f64) -> f64 {
        match *self {
            DistSpecX::Normal { sigma } => (-0.5 * sigma * sigma * t * t).exp(),
            DistSpecX::Rademacher => t.cos(),
            DistSpecX::SymStable { alpha, scale } => (-(scale * t.abs()).powf(alpha)).exp(),
        }
    }

    #[inline]
    pub fn draw(&self, rng: &mut RngStream) -> f64 {
        match *self {
            DistSpecX::Normal { sigma } => sigma * rng.rng.sample::<f64, _>(StandardNormal),
            DistSpecX::Rademacher => {
                if rng.rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            DistSpecX::SymStable { alpha, scale } => scale * symmetric_stable(alpha, rng),
        }
    }
}

// Chambers-Mallows-Stuck, symmetric case.
fn symmetric_stable(alpha: f64, rng: &mut RngStream) -> f64 {
    let v = PI * (rng.open01() - 0.5);
    let w = rng.exp1();
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// `n` draws of `ln Y`.
pub fn sample_log_y(spec: &DistSpecY, n: usize, stream: &mut RngStream) -> Result<Vec<f64>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok((0..n).map(|_| spec.draw_log(stream)).collect())
}

/// `n` draws of `Y`. Slowly varying draws beyond `f64::MAX` come back as `+inf`.
pub fn sample_y(spec: &DistSpecY, n: usize, stream: &mut RngStream) -> Result<Vec<f64>> {
    Ok(sample_log_y(spec, n, stream)?.into_iter().map(f64::exp).collect())
}

/// `n` mean-zero draws of `X`.
pub fn sample_x(spec: &DistSpecX, n: usize, stream: &mut RngStream) -> Result<Vec<f64>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok((0..n).map(|_| spec.draw(stream)).collect())
}

/// One draw of the limit pair `(U, V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyPair {
    pub u: f64,
    pub v: f64,
    /// Number of Poisson points summed explicitly.
    pub terms_used: usize,
    /// Standard deviation of the omitted part of `U`, relative to `u`.
    pub tail_bound: f64,
}

impl LevyPair {
    /// `v / u^alpha`, which is invariant under `(u, v) -> (c u, c^alpha v)`.
    pub fn ratio(&self, alpha: Alpha) -> f64 {
        self.v / self.u.powf(alpha.value())
    }
}

const LEVY_MIN_TERMS: usize = 32;
const LEVY_MAX_TERMS: usize = 50_000_000;

/// Draws `(U, V) = (Σ Γ_k^(-1/β), Σ Γ_k^(-α/β))` over the arrival times
/// `Γ_k` of a unit-rate Poisson process.
///
/// Points beyond the last explicit arrival `Γ_K` form a unit-rate Poisson
/// process on `(Γ_K, ∞)`, so the conditional means of the omitted sums are
/// `β/(1-β) Γ_K^(1-1/β)` and `β/(α-β) Γ_K^(1-α/β)`; both are added back.
/// Summation stops once the standard deviation of the omitted `U` mass,
/// `sqrt(β/(2-β) Γ_K^(1-2/β))`, falls below `tol * u`.
pub fn sample_levy_pair(
    beta: BetaIdx,
    alpha: Alpha,
    tol: f64,
    stream: &mut RngStream,
) -> Result<LevyPair> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!("levy tolerance must be positive, got {tol}")));
    }
    let b = beta.value();
    if b == 0.0 {
        return Err(Error::invalid("levy pair requires beta in (0, 1)"));
    }
    let a = alpha.value();
    let inv_b = 1.0 / b;
    let a_over_b = a / b;
    let rem_u = b / (1.0 - b);
    let rem_v = b / (a - b);
    let var_coef = b / (2.0 - b);
    let var_exp = 1.0 - 2.0 * inv_b;

    let mut arrival = 0.0_f64;
    let mut u = 0.0_f64;
    let mut v = 0.0_f64;
    let mut k = 0usize;
    loop {
        // Check in batches; each check costs a powf.
        for _ in 0..LEVY_MIN_TERMS {
            arrival += stream.exp1();
            let ln_g = arrival.ln();
            u += (-inv_b * ln_g).exp();
            v += (-a_over_b * ln_g).exp();
        }
        k += LEVY_MIN_TERMS;
        let sd = (var_coef * arrival.powf(var_exp)).sqrt();
        let u_total = u + rem_u * arrival.powf(1.0 - inv_b);
        let rel = sd / u_total;
        if rel < tol || k >= LEVY_MAX_TERMS {
            let v_total = v + rem_v * arrival.powf(1.0 - a_over_b);
            // With one dominant point v/u^alpha sits at 1 up to rounding.
            let v_total = v_total.min(u_total.powf(a));
            return Ok(LevyPair {
                u: u_total,
                v: v_total,
                terms_used: k,
                tail_bound: rel,
            });
        }
    }
}

impl fmt::Display for DistSpecY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistSpecY::Pareto { beta, xmin } if xmin == 1.0 => write!(f, "pareto:{beta}"),
            DistSpecY::Pareto { beta, xmin } => write!(f, "pareto:{beta}:{xmin}"),
            DistSpecY::SlowVary => write!(f, "slowvary"),
            DistSpecY::PositiveStable { beta } => write!(f, "posstable:{beta}"),
            DistSpecY::Exponential { rate } => write!(f, "exp:{rate}"),
        }
    }
}

impl fmt::Display for DistSpecX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistSpecX::Normal { sigma } => write!(f, "normal:{sigma}"),
            DistSpecX::Rademacher => write!(f, "rademacher"),
            DistSpecX::SymStable { alpha, scale } => write!(f, "symstable:{alpha}:{scale}"),
        }
    }
}

/// A parsed `family:param:param` distribution string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    Y(DistSpecY),
    X(DistSpecX),
}

fn parse_params(family: &str, params: &[&str], min: usize, max: usize) -> Result<Vec<f64>> {
    if params.len() < min || params.len() > max {
        return Err(Error::invalid(format!(
            "{family} takes {min}..={max} parameters, got {}",
            params.len()
        )));
    }
    params
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("{family}: cannot parse parameter {p:?}")))
        })
        .collect()
}

impl FromStr for DistSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let family = parts.next().unwrap_or("").to_ascii_lowercase();
        let params: Vec<&str> = parts.collect();
        let spec = match family.as_str() {
            "pareto" => {
                let p = parse_params("pareto", &params, 1, 2)?;
                DistSpec::Y(DistSpecY::Pareto {
                    beta: p[0],
                    xmin: p.get(1).copied().unwrap_or(1.0),
                })
            }
            "slowvary" => {
                parse_params("slowvary", &params, 0, 0)?;
                DistSpec::Y(DistSpecY::SlowVary)
            }
            "posstable" => {
                let p = parse_params("posstable", &params, 1, 1)?;
                DistSpec::Y(DistSpecY::PositiveStable { beta: p[0] })
            }
            "exp" => {
                let p = parse_params("exp", &params, 0, 1)?;
                DistSpec::Y(DistSpecY::Exponential {
                    rate: p.first().copied().unwrap_or(1.0),
                })
            }
            "normal" => {
                let p = parse_params("normal", &params, 0, 1)?;
                DistSpec::X(DistSpecX::Normal {
                    sigma: p.first().copied().unwrap_or(1.0),
                })
            }
            "rademacher" => {
                parse_params("rademacher", &params, 0, 0)?;
                DistSpec::X(DistSpecX::Rademacher)
            }
            "symstable" => {
                let p = parse_params("symstable", &params, 1, 2)?;
                DistSpec::X(DistSpecX::SymStable {
                    alpha: p[0],
                    scale: p.get(1).copied().unwrap_or(1.0),
                })
            }
            other => return Err(Error::invalid(format!("unknown distribution family {other:?}"))),
        };
        match &spec {
            DistSpec::Y(y) => y.validate()?,
            DistSpec::X(x) => x.validate()?,
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn substream_determinism() {
        let a: Vec<u64> = {
            let mut s = substream(42, 0);
            (0..1000).map(|_| s.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut s = substream(42, 0);
            (0..1000).map(|_| s.next_u64()).collect()
        };
        let c: Vec<u64> = {
            let mut s = substream(42, 1);
            (0..1000).map(|_| s.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn substream_is_thread_independent() {
        let draw = || {
            let mut s = substream(42, 7);
            (0..1000).map(|_| s.next_u64()).collect::<Vec<_>>()
        };
        let reference = draw();
        let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(draw)).collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), reference);
        }
    }

    #[test]
    fn pareto_tail_fraction() {
        let spec = DistSpecY::Pareto { beta: 0.5, xmin: 1.0 };
        let ys = sample_y(&spec, 1_000_000, &mut substream(1, 0)).unwrap();
        assert!(ys.iter().all(|&y| y >= 1.0));
        let frac = ys.iter().filter(|&&y| y > 4.0).count() as f64 / ys.len() as f64;
        let se = (0.25_f64 / ys.len() as f64).sqrt();
        assert!((frac - 0.5).abs() < 3.0 * se, "{frac}");
    }

    #[test]
    fn pareto_inverse_transform_is_exact() {
        // draw = xmin * U^(-1/beta) with U = 1 - uniform, computed in log space
        let spec = DistSpecY::Pareto { beta: 0.3, xmin: 2.0 };
        let mut s1 = substream(9, 3);
        let mut s2 = substream(9, 3);
        for _ in 0..100 {
            let y = spec.draw_log(&mut s1).exp();
            let u = 1.0 - s2.rng.random::<f64>();
            let want = 2.0 * u.powf(-1.0 / 0.3);
            assert!(((y - want) / want).abs() < 1e-12);
        }
    }

    #[test]
    fn slowvary_support_and_median() {
        let logs = sample_log_y(&DistSpecY::SlowVary, 1_000_000, &mut substream(2, 0)).unwrap();
        assert!(logs.iter().all(|&l| l >= 1.0));
        let frac = logs.iter().filter(|&&l| l > 2.0).count() as f64 / logs.len() as f64;
        let se = (0.25_f64 / logs.len() as f64).sqrt();
        assert!((frac - 0.5).abs() < 3.0 * se, "{frac}");
    }

    #[test]
    fn positive_stable_laplace_transform() {
        let spec = DistSpecY::PositiveStable { beta: 0.5 };
        let ys = sample_y(&spec, 1_000_000, &mut substream(3, 0)).unwrap();
        assert!(ys.iter().all(|&y| y > 0.0));
        let vals: Vec<f64> = ys.iter().map(|y| (-y).exp()).collect();
        let (m, se) = mean_se(&vals);
        assert!((m - (-1.0_f64).exp()).abs() < 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn rademacher_and_normal_moments() {
        let xs = sample_x(&DistSpecX::Rademacher, 1_000_000, &mut substream(4, 0)).unwrap();
        let (m, _) = mean_se(&xs);
        assert!(m.abs() < 3e-3);
        assert!(xs.iter().all(|&x| x == 1.0 || x == -1.0));

        let xs = sample_x(&DistSpecX::Normal { sigma: 2.0 }, 1_000_000, &mut substream(4, 1)).unwrap();
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        // Var of the sample variance for a normal: 2 σ^4 / (n - 1)
        let se = (2.0 * 16.0 / (n - 1.0)).sqrt();
        assert!((var - 4.0).abs() < 3.0 * se, "{var}");
    }

    #[test]
    fn symmetric_stable_cosine_cf() {
        let spec = DistSpecX::SymStable { alpha: 1.5, scale: 1.0 };
        let xs = sample_x(&spec, 1_000_000, &mut substream(5, 0)).unwrap();
        let vals: Vec<f64> = xs.iter().map(|x| (0.5 * x).cos()).collect();
        let (m, se) = mean_se(&vals);
        let want = (-(0.5_f64).powf(1.5)).exp();
        assert!((m - want).abs() < 3.0 * se, "{m} vs {want} ± {se}");
    }

    #[test]
    fn levy_pair_ordering_and_bound() {
        let alpha = Alpha::new(1.5).unwrap();
        let mut s = substream(6, 0);
        for &b in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let beta = BetaIdx::positive(b).unwrap();
            for _ in 0..200 {
                let p = sample_levy_pair(beta, alpha, 1e-3, &mut s).unwrap();
                assert!(p.u > 0.0 && p.v > 0.0);
                assert!(p.v <= p.u.powf(1.5));
                assert!(p.tail_bound < 1e-3);
                assert!(p.ratio(alpha) <= 1.0);
            }
        }
    }

    #[test]
    fn levy_ratio_is_scale_free() {
        let alpha = Alpha::new(1.7).unwrap();
        let p = sample_levy_pair(BetaIdx::positive(0.4).unwrap(), alpha, 1e-3, &mut substream(7, 0)).unwrap();
        for c in [0.01, 3.0, 1e5] {
            let scaled = LevyPair { u: c * p.u, v: c.powf(1.7) * p.v, ..p };
            assert!(((scaled.ratio(alpha) - p.ratio(alpha)) / p.ratio(alpha)).abs() < 1e-12);
        }
    }

    #[test]
    fn levy_rejects_bad_tolerance() {
        let r = sample_levy_pair(
            BetaIdx::positive(0.5).unwrap(),
            Alpha::new(2.0).unwrap(),
            0.0,
            &mut substream(0, 0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn parse_dist_strings() {
        assert_eq!(
            "pareto:0.5".parse::<DistSpec>().unwrap(),
            DistSpec::Y(DistSpecY::Pareto { beta: 0.5, xmin: 1.0 })
        );
        assert_eq!("slowvary".parse::<DistSpec>().unwrap(), DistSpec::Y(DistSpecY::SlowVary));
        assert_eq!(
            "symstable:1.5:1".parse::<DistSpec>().unwrap(),
            DistSpec::X(DistSpecX::SymStable { alpha: 1.5, scale: 1.0 })
        );
        assert_eq!("exp:1".parse::<DistSpec>().unwrap(), DistSpec::Y(DistSpecY::Exponential { rate: 1.0 }));
        let err = "pareto:1.5".parse::<DistSpec>().unwrap_err().to_string();
        assert!(err.contains("(0, 1)"), "{err}");
        assert!("cauchy".parse::<DistSpec>().is_err());
        assert!("normal:-1".parse::<DistSpec>().is_err());
        for s in ["pareto:0.5", "posstable:0.25", "exp:2", "normal:1", "rademacher", "symstable:1.5:2"] {
            let spec: DistSpec = s.parse().unwrap();
            let shown = match spec {
                DistSpec::Y(y) => y.to_string(),
                DistSpec::X(x) => x.to_string(),
            };
            assert_eq!(shown, s);
        }
    }

    #[test]
    fn rejects_empty_and_invalid() {
        let mut s = substream(0, 0);
        assert!(sample_y(&DistSpecY::SlowVary, 0, &mut s).is_err());
        assert!(sample_y(&DistSpecY::Pareto { beta: 1.2, xmin: 1.0 }, 5, &mut s).is_err());
        assert!(sample_x(&DistSpecX::SymStable { alpha: 2.0, scale: 1.0 }, 5, &mut s).is_err());
    }
}
