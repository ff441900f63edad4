//! Numerical regular-variation checks built on quadrature.
//!
//! For a survival function `Ḡ` and `alpha` in `(1, 2]`:
//!
//! ```text
//! f(t)      = ∫_0^∞ Ḡ(u) u^(alpha-1) e^(-ut) du
//! g_inf(x)  = ∫_0^∞ Ḡ(ux) u^(alpha-1) e^(-u) du  = x^(-alpha) f(1/x)
//! M(x)      = ∫_1^∞ (u-1)^(alpha-2) u^(-alpha) g_inf(x/u) / g_inf(x) du
//! K(x)      = x^alpha Ḡ(x) / ∫_0^x Ḡ(u) u^(alpha-1) du
//! ```
//!
//! When `Ḡ` is regularly varying with index `-beta`, `M(x) → 1 / (gamma (alpha-1))`
//! with `gamma = gamma_map(alpha, beta)`, and `K(x) → alpha - beta`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_half_line, QuadConfig};
use crate::samplers::{DistSpecX, DistSpecY};
use crate::special_fn::{ln_gamma_pos, tail_constant, Alpha};

/// Relative accuracy requested from `f` and `g_inf`.
pub const QUAD_REL_TOL: f64 = 1e-10;
/// Relative accuracy of the outer Mellin integral.
pub const MELLIN_REL_TOL: f64 = 1e-8;

/// A survival function `Ḡ` with `Ḡ(u) = 1` for `u <= support_low`.
#[derive(Clone)]
pub struct TailFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub support_low: f64,
    pub label: String,
}

impl fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailFunction")
            .field("label", &self.label)
            .field("support_low", &self.support_low)
            .finish()
    }
}

impl TailFunction {
    pub fn new(
        label: impl Into<String>,
        support_low: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TailFunction {
            eval: Arc::new(eval),
            support_low,
            label: label.into(),
        }
    }

    pub fn evaluate(&self, u: f64) -> f64 {
        if u <= self.support_low {
            1.0
        } else {
            (self.eval)(u)
        }
    }

    /// `(u / xmin)^(-beta)` above `xmin`.
    pub fn pareto(beta: f64, xmin: f64) -> Self {
        TailFunction::new(format!("pareto:{beta}:{xmin}"), xmin, move |u| (u / xmin).powf(-beta))
    }

    /// `1 / ln u` above `e`.
    pub fn slow_vary() -> Self {
        TailFunction::new("slowvary", std::f64::consts::E, |u| 1.0 / u.ln())
    }

    /// `exp(-rate u)`; never equal to 1 on `u > 0`.
    pub fn exponential(rate: f64) -> Self {
        TailFunction::new(format!("exp:{rate}"), 0.0, move |u| (-rate * u).exp())
    }

    /// The constant 1 on `(0, ∞)`. Not a survival function, but the
    /// integrals above have closed forms for it.
    pub fn constant_one() -> Self {
        TailFunction::new("one", f64::INFINITY, |_| 1.0)
    }

    /// Closed-form tail of a sampler family.
    pub fn from_spec(spec: &DistSpecY) -> Result<Self> {
        spec.validate()?;
        match *spec {
            DistSpecY::Pareto { beta, xmin } => Ok(TailFunction::pareto(beta, xmin)),
            DistSpecY::SlowVary => Ok(TailFunction::slow_vary()),
            DistSpecY::Exponential { rate } => Ok(TailFunction::exponential(rate)),
            DistSpecY::PositiveStable { .. } => Err(Error::invalid(
                "the positive stable family has no closed-form survival function",
            )),
        }
    }

    fn kink(&self) -> Option<f64> {
        (self.support_low.is_finite() && self.support_low > 0.0).then_some(self.support_low)
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: name,
            value: v,
        })
    }
}

/// `f(t) = ∫_0^∞ Ḡ(u) u^(alpha-1) e^(-ut) du`.
pub fn laplace_f(gbar: &TailFunction, alpha: Alpha, t: f64) -> Result<f64> {
    check_positive("laplace_f requires t > 0", t)?;
    let am1 = alpha.value() - 1.0;
    let h = |u: f64| {
        if u == 0.0 {
            return if am1 == 0.0 { 1.0 } else { 0.0 };
        }
        gbar.evaluate(u) * (am1 * u.ln() - u * t).exp()
    };
    let mut breaks = vec![1.0 / t];
    breaks.extend(gbar.kink());
    let peak = breaks.iter().copied().fold(0.0, f64::max);
    let r = integrate_half_line(h, &breaks, peak.max(1.0 / t), QuadConfig::rel(QUAD_REL_TOL))?;
    Ok(r.value)
}

/// `g_inf(x) = ∫_0^∞ Ḡ(ux) u^(alpha-1) e^(-u) du`.
pub fn g_infinity(gbar: &TailFunction, alpha: Alpha, x: f64) -> Result<f64> {
    check_positive("g_infinity requires x > 0", x)?;
    let am1 = alpha.value() - 1.0;
    let h = |u: f64| {
        if u == 0.0 {
            return if am1 == 0.0 { 1.0 } else { 0.0 };
        }
        gbar.evaluate(u * x) * (am1 * u.ln() - u).exp()
    };
    let mut breaks = vec![1.0];
    breaks.extend(gbar.kink().map(|s| s / x));
    let r = integrate_half_line(h, &breaks, 1.0, QuadConfig::rel(QUAD_REL_TOL))?;
    Ok(r.value)
}

/// Mellin-convolution ratio `(k *M g_inf)(x) / g_inf(x)`.
///
/// The substitution `u = 1 + s^(1/(alpha-1))` absorbs the endpoint factor
/// `(u-1)^(alpha-2) du` into `ds / (alpha-1)`, leaving a bounded integrand.
pub fn mellin_conv_ratio(gbar: &TailFunction, alpha: Alpha, x: f64) -> Result<f64> {
    check_positive("mellin_conv_ratio requires x > 0", x)?;
    let a = alpha.value();
    let am1 = a - 1.0;
    let base = g_infinity(gbar, alpha, x)?;
    let u_of = |s: f64| 1.0 + s.powf(1.0 / am1);
    // the inner quadrature cannot fail on a nonnegative bounded integrand;
    // record the first failure and surface it after the outer pass
    let failure = std::sync::Mutex::new(None);
    let h = |s: f64| {
        let u = u_of(s);
        match g_infinity(gbar, alpha, x / u) {
            Ok(g) => u.powf(-a) * g,
            Err(e) => {
                failure.lock().expect("poisoned").get_or_insert(e);
                0.0
            }
        }
    };
    // the kink of Ḡ(ux/u') sits where x/u = support_low
    let mut breaks = Vec::new();
    if let Some(s0) = gbar.kink() {
        let u0 = x / s0;
        if u0 > 1.0 {
            breaks.push((u0 - 1.0).powf(am1));
        }
    }
    breaks.push(1.0);
    let r = integrate_half_line(h, &breaks, 1.0, QuadConfig::rel(MELLIN_REL_TOL))?;
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(r.value / (am1 * base))
}

/// `U(x) = ∫_0^x Ḡ(u) u^(alpha-1) du`.
pub fn truncated_moment(gbar: &TailFunction, alpha: Alpha, x: f64) -> Result<f64> {
    check_positive("truncated_moment requires x > 0", x)?;
    let am1 = alpha.value() - 1.0;
    let h = |u: f64| {
        if u == 0.0 {
            return if am1 == 0.0 { 1.0 } else { 0.0 };
        }
        gbar.evaluate(u) * u.powf(am1)
    };
    let cfg = QuadConfig::rel(QUAD_REL_TOL);
    match gbar.kink().filter(|&s| s < x) {
        Some(s) => Ok(integrate(h, 0.0, s, cfg)?.value + integrate(h, s, x, cfg)?.value),
        None => Ok(integrate(h, 0.0, x, cfg)?.value),
    }
}

/// `x Ḡ(x) x^(alpha-1) / U(x)`, which tends to `alpha - beta` for a tail
/// regularly varying with index `-beta`.
pub fn karamata_ratio(gbar: &TailFunction, alpha: Alpha, x: f64) -> Result<f64> {
    check_positive("karamata_ratio requires x > 0", x)?;
    if gbar.support_low.is_finite() && x <= gbar.support_low {
        return Err(Error::Domain {
            what: "karamata_ratio requires x above the support lower bound",
            value: x,
        });
    }
    let u = truncated_moment(gbar, alpha, x)?;
    Ok(gbar.evaluate(x) * x.powf(alpha.value()) / u)
}

/// Ratios along a grid, with the value they should approach when known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCurve {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub target: Option<f64>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("evaluation grid is empty"));
    }
    for &v in grid {
        check_positive("grid points must be positive", v)?;
    }
    let up = grid.windows(2).all(|w| w[0] < w[1]);
    let down = grid.windows(2).all(|w| w[0] > w[1]);
    if up || down {
        Ok(())
    } else {
        Err(Error::invalid("grid must be strictly monotone"))
    }
}

/// Source of `Re φ_X`: a closed-form family or an empirical sample.
#[derive(Debug, Clone, Copy)]
pub enum CfSource<'a> {
    Spec(DistSpecX),
    Sample(&'a [f64]),
}

/// `-log Re φ(t) / |t|^alpha` along `t_grid` (slowly varying factor `L ≡ 1`).
///
/// For a sample, `Re φ` is the mean of `cos(t X_i)`.
pub fn cf_condition_ratio(source: CfSource<'_>, alpha: f64, t_grid: &[f64]) -> Result<RatioCurve> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::Domain {
            what: "cf condition exponent must lie in (1, 2]",
            value: alpha,
        });
    }
    check_grid(t_grid)?;
    if let CfSource::Sample(xs) = source {
        if xs.is_empty() {
            return Err(Error::EmptySample);
        }
    }
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let re = match source {
            CfSource::Spec(spec) => spec.re_cf(t),
            CfSource::Sample(xs) => xs.iter().map(|x| (t * x).cos()).sum::<f64>() / xs.len() as f64,
        };
        if !(re > 0.0) {
            return Err(Error::NonPositiveCf(t));
        }
        values.push(-re.ln() / t.powf(alpha));
    }
    let target = match source {
        CfSource::Spec(spec) => {
            let (natural, c) = spec.cf_exponent();
            (natural == alpha).then_some(c)
        }
        CfSource::Sample(_) => None,
    };
    Ok(RatioCurve {
        abscissae: t_grid.to_vec(),
        values,
        target,
    })
}

/// Minimum exceedance count per grid point for [`tail_vs_constant`].
pub const MIN_EXCEEDANCES: usize = 50;

/// Empirical `P{|X| > x} x^alpha` divided by `tail_constant(alpha, c)`.
pub fn tail_vs_constant(sample: &[f64], alpha: f64, c: f64, x_grid: &[f64]) -> Result<RatioCurve> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let constant = tail_constant(alpha, c)?;
    check_grid(x_grid)?;
    let mut abs: Vec<f64> = sample.iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = abs.len();
    let mut values = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let count = n - abs.partition_point(|&v| v <= x);
        if count < MIN_EXCEEDANCES {
            return Err(Error::FewExceedances {
                x,
                count,
                needed: MIN_EXCEEDANCES,
            });
        }
        values.push(count as f64 / n as f64 * x.powf(alpha) / constant);
    }
    Ok(RatioCurve {
        abscissae: x_grid.to_vec(),
        values,
        target: Some(1.0),
    })
}

/// `Γ(alpha) / t^alpha`: the value of `f` for the constant-one function.
pub fn laplace_f_constant_one(alpha: Alpha, t: f64) -> f64 {
    (ln_gamma_pos(alpha.value()) - alpha.value() * t.ln()).exp()
}
