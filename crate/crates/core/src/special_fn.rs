//! Closed-form layer: log-gamma, the ratio-limit map `gamma(alpha, beta)`,
//! its inverse, the Mellin transform of the convolution kernel and the
//! stable tail constant.
//!
//! All limit formulas are evaluated in log space,
//!
//! ```text
//! gamma(alpha, beta) = Γ(alpha - beta) / (Γ(alpha) Γ(1 - beta))
//! ktilde(alpha, z)   = Γ(alpha - 1) Γ(1 + z) / Γ(alpha + z)
//! ```
//!
//! and the two are tied together by `ktilde(alpha, -beta) (alpha - 1) gamma(alpha, beta) = 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Godfrey's Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// B_{2k} / (2k (2k - 1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Exponent of `S_n(alpha)`, restricted to `(1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value > 1.0 && value <= 2.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::Domain {
                what: "alpha must lie in (1, 2]",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Stable tail index in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BetaIdx(f64);

impl BetaIdx {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..1.0).contains(&value) {
            Ok(BetaIdx(value))
        } else {
            Err(Error::Domain {
                what: "beta must lie in [0, 1)",
                value,
            })
        }
    }

    /// Same as [`BetaIdx::new`] but also rejects `beta = 0`.
    pub fn positive(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(BetaIdx(value))
        } else {
            Err(Error::Domain {
                what: "beta must lie in (0, 1)",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Limit of `E S_n(alpha)`, in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaVal(f64);

impl GammaVal {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(GammaVal(value))
        } else {
            Err(Error::Domain {
                what: "gamma must lie in (0, 1]",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "log_gamma requires a finite x > 0",
            value: x,
        });
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x) Γ(1 - x) = π / sin(πx)
        (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x)
    } else if x < 10.0 {
        lanczos(x)
    } else {
        stirling(x)
    }
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * (x.ln() - 1.0) - 0.5 + LN_SQRT_2PI + series
}

/// Γ(x) for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// Limit of `E S_n(alpha)` when `Y` is in the domain of attraction of a
/// `beta`-stable law: `Γ(alpha - beta) / (Γ(alpha) Γ(1 - beta))`.
///
/// Exactly 1 at `beta = 0`; reduces to `1 - beta` at `alpha = 2`.
pub fn gamma_map(alpha: Alpha, beta: BetaIdx) -> GammaVal {
    let (a, b) = (alpha.0, beta.0);
    if b == 0.0 {
        return GammaVal(1.0);
    }
    let ln = ln_gamma_pos(a - b) - ln_gamma_pos(a) - ln_gamma_pos(1.0 - b);
    // Rounding can push values for tiny beta a hair above 1.
    GammaVal(ln.exp().min(1.0))
}

/// Upper end of the bisection bracket for [`invert_gamma_map`].
pub const BETA_BRACKET_HI: f64 = 1.0 - 1e-14;

/// Unique `beta` in `[0, 1)` with `gamma_map(alpha, beta) = gamma`.
///
/// Bracketed bisection on `[0, 1 - 1e-14]`; the map is strictly decreasing
/// in `beta`, so no derivative is needed.
pub fn invert_gamma_map(alpha: Alpha, gamma: GammaVal) -> BetaIdx {
    let target = gamma.0;
    if target >= 1.0 {
        return BetaIdx(0.0);
    }
    let eval = |b: f64| gamma_map(alpha, BetaIdx(b)).0;
    let (mut lo, mut hi) = (0.0_f64, BETA_BRACKET_HI);
    if eval(hi) >= target {
        return BetaIdx(hi);
    }
    // eval(lo) > target > eval(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    BetaIdx(0.5 * (lo + hi))
}

/// Mellin transform of `k(u) = (u - 1)^(alpha - 2) u^(1 - alpha)` on `u > 1`,
/// i.e. `∫_0^1 (1 - v)^(alpha - 2) v^z dv = Beta(alpha - 1, 1 + z)`.
pub fn mellin_ktilde(alpha: Alpha, z: f64) -> Result<f64> {
    if !(z > -1.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "ktilde diverges for z <= -1",
            value: z,
        });
    }
    let a = alpha.0;
    let ln = ln_gamma_pos(a - 1.0) + ln_gamma_pos(1.0 + z) - ln_gamma_pos(a + z);
    Ok(ln.exp())
}

/// Constant `c Γ(alpha) (2/π) sin(π alpha / 2)` in the two-sided tail
/// `P{|X| > x} ~ L(1/x) x^(-alpha) * const`, valid for `1 < alpha < 2`.
pub fn tail_constant(alpha: f64, c: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::Domain {
            what: "tail_constant requires 1 < alpha < 2",
            value: alpha,
        });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain {
            what: "tail_constant requires c > 0",
            value: c,
        });
    }
    Ok(c * ln_gamma_pos(alpha).exp() * (2.0 / PI) * (PI * alpha / 2.0).sin())
}
