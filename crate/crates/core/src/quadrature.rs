//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals, plus a
//! half-line driver that sums geometrically growing panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and work limit for the adaptive driver.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn rel(rel_tol: f64) -> Self {
        QuadConfig {
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    }
}

/// `∫_a^b f`, bisecting the panel with the largest error estimate until the
/// total error meets `max(abs_tol, rel_tol |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("integration bounds must be finite: [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    let first = gk15(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
        if !value.is_finite() {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                a,
                b,
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // panel at machine resolution: accept what we have
            heap.push(Panel { error: 0.0, ..worst });
            error -= worst.error;
            continue;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    if !value.is_finite() {
        return Err(Error::Quadrature {
            a,
            b,
            estimate: value,
            error,
        });
    }
    // re-sum to drop the drift from incremental updates
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadResult { value, error })
}

const MAX_PANELS: usize = 400;

/// `∫_0^∞ f` for a nonnegative integrand that decays at infinity.
///
/// The half-line is covered by panels of width `scale`, `2 scale`, `4 scale`,
/// ..., each cut short at any of the `breaks` (points where `f` has a kink).
/// Summation stops once a geometric extrapolation over two consecutive
/// full-width panels is below `rel_tol` of the running total.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    scale: f64,
    cfg: QuadConfig,
) -> Result<QuadResult> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid(format!("panel scale must be positive, got {scale}")));
    }
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > 0.0)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut pending = points.into_iter().peekable();

    let mut value = 0.0;
    let mut error = 0.0;
    let mut lo = 0.0;
    let mut width = scale;
    let mut prev: Option<f64> = None;
    for _ in 0..MAX_PANELS {
        let mut hi = lo + width;
        let mut full = true;
        if let Some(&p) = pending.peek() {
            if p <= hi {
                hi = p;
                full = false;
                pending.next();
            }
        }
        let r = integrate(&f, lo, hi, cfg)?;
        value += r.value;
        error += r.error;
        lo = hi;
        if !full {
            prev = None;
            continue;
        }
        width *= 2.0;
        let piece = r.value.abs();
        if let Some(prev) = prev {
            let tail = if piece == 0.0 {
                0.0
            } else if piece < prev {
                let q = piece / prev;
                piece * q / (1.0 - q)
            } else {
                f64::INFINITY
            };
            if tail <= cfg.rel_tol * value.abs() {
                return Ok(QuadResult {
                    value,
                    error: error + tail,
                });
            }
        }
        prev = Some(piece);
        if !lo.is_finite() {
            break;
        }
    }
    Err(Error::Quadrature {
        a: 0.0,
        b: f64::INFINITY,
        estimate: value,
        error,
    })
}
