//! Self-contained numerical verification suites with a machine-readable report.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::mc_levy_ratio;
use crate::rv_analysis::{
    cf_condition_ratio, g_infinity, karamata_ratio, laplace_f, mellin_conv_ratio, tail_vs_constant, CfSource,
    RatioCurve, TailFunction,
};
use crate::samplers::{sample_x, substream, DistSpecX, DistSpecY};
use crate::special_fn::{gamma_map, Alpha, BetaIdx};
use crate::statistics::{d_max_logs, s_n_logs};
use crate::tolerances as tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LevyOracle,
    Mellin,
    Karamata,
    CfCondition,
    TailConstant,
    Sandwich,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::LevyOracle,
        Suite::Mellin,
        Suite::Karamata,
        Suite::CfCondition,
        Suite::TailConstant,
        Suite::Sandwich,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LevyOracle => "levy-oracle",
            Suite::Mellin => "mellin",
            Suite::Karamata => "karamata",
            Suite::CfCondition => "cf-condition",
            Suite::TailConstant => "tail-constant",
            Suite::Sandwich => "sandwich",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "levy" {
            return Ok(Suite::LevyOracle);
        }
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::invalid(format!("unknown suite '{s}', expected one of: {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<RatioCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub seed: u64,
    pub levy_tol: f64,
    pub all_pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub levy_tol: f64,
    pub levy_replicates: usize,
    /// Restrict the LePage suite to one `(beta, alpha)` point.
    pub levy_point: Option<(f64, f64)>,
    pub tail_draws: usize,
    pub sandwich_samples: usize,
    /// Replaces every check's tolerance.
    pub tol_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: Suite::ALL.to_vec(),
            seed: 0,
            levy_tol: tol::DEFAULT_LEVY_TOL,
            levy_replicates: 20_000,
            levy_point: None,
            tail_draws: 1_000_000,
            sandwich_samples: 10_000,
            tol_override: None,
        }
    }
}

/// The LePage grid checked by default.
pub const LEVY_GRID: [(f64, f64); 5] = [(0.25, 2.0), (0.5, 2.0), (0.75, 2.0), (0.25, 1.5), (0.5, 1.5)];

struct Recorder<'a> {
    cfg: &'a VerifyConfig,
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn push(&mut self, name: String, measured: f64, target: f64, tolerance: f64, curve: Option<RatioCurve>) {
        let tolerance = self.cfg.tol_override.unwrap_or(tolerance);
        let pass = (measured - target).abs() <= tolerance;
        self.checks.push(Check {
            suite: self.suite,
            name,
            measured,
            target,
            tolerance,
            pass,
            curve,
        });
    }
}

fn alpha(v: f64) -> Result<Alpha> {
    Alpha::new(v)
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if !(cfg.levy_tol > 0.0) {
        return Err(Error::invalid(format!("levy tolerance must be positive, got {}", cfg.levy_tol)));
    }
    if let Some(t) = cfg.tol_override {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("tolerance must be nonnegative, got {t}")));
        }
    }
    let mut checks = Vec::new();
    for &suite in &cfg.suites {
        let mut rec = Recorder {
            cfg,
            suite,
            checks: Vec::new(),
        };
        match suite {
            Suite::LevyOracle => levy_suite(&mut rec)?,
            Suite::Mellin => mellin_suite(&mut rec)?,
            Suite::Karamata => karamata_suite(&mut rec)?,
            Suite::CfCondition => cf_suite(&mut rec)?,
            Suite::TailConstant => tail_suite(&mut rec)?,
            Suite::Sandwich => sandwich_suite(&mut rec)?,
        }
        checks.extend(rec.checks);
    }
    Ok(VerifyReport {
        command: "verify",
        seed: cfg.seed,
        levy_tol: cfg.levy_tol,
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

fn levy_suite(rec: &mut Recorder<'_>) -> Result<()> {
    let grid: Vec<(f64, f64)> = match rec.cfg.levy_point {
        Some(p) => vec![p],
        None => LEVY_GRID.to_vec(),
    };
    for (b, a) in grid {
        let beta = BetaIdx::positive(b)?;
        let alpha = alpha(a)?;
        let est = mc_levy_ratio(beta, alpha, rec.cfg.levy_replicates, rec.cfg.levy_tol, rec.cfg.seed)?;
        let target = gamma_map(alpha, beta).value();
        rec.push(
            format!("E[V/U^alpha] beta={b} alpha={a}"),
            est.mean,
            target,
            tol::SIGMAS * est.stderr + tol::LEVY_SLACK,
            None,
        );
    }
    Ok(())
}

fn mellin_suite(rec: &mut Recorder<'_>) -> Result<()> {
    let pareto = TailFunction::pareto(0.5, 1.0);
    for a in [2.0, 1.5] {
        let alpha = alpha(a)?;
        let target = 1.0 / (gamma_map(alpha, BetaIdx::new(0.5)?).value() * (a - 1.0));
        let xs = [1e2, 1e4, 1e6, 1e8, 1e10];
        let values = xs
            .iter()
            .map(|&x| mellin_conv_ratio(&pareto, alpha, x))
            .collect::<Result<Vec<_>>>()?;
        let measured = values[2];
        let curve = RatioCurve {
            abscissae: xs.to_vec(),
            values,
            target: Some(target),
        };
        rec.push(
            format!("mellin ratio pareto:0.5 alpha={a} x=1e6"),
            measured,
            target,
            tol::MELLIN_REL * target,
            Some(curve),
        );
    }
    let slow = TailFunction::slow_vary();
    let measured = mellin_conv_ratio(&slow, alpha(2.0)?, 1e10)?;
    rec.push(
        "mellin ratio slowvary alpha=2 x=1e10".into(),
        measured,
        1.0,
        tol::MELLIN_D0_REL,
        None,
    );
    let mut worst: f64 = 0.0;
    let a = alpha(2.0)?;
    for k in 0..10 {
        let x = 10f64.powi(k - 2);
        let direct = g_infinity(&pareto, a, x)?;
        let via_f = x.powf(-2.0) * laplace_f(&pareto, a, 1.0 / x)?;
        worst = worst.max(((direct - via_f) / direct).abs());
    }
    rec.push(
        "g_inf two-route max relative gap pareto:0.5 alpha=2".into(),
        worst,
        0.0,
        tol::TWO_ROUTE_REL,
        None,
    );
    Ok(())
}

fn karamata_suite(rec: &mut Recorder<'_>) -> Result<()> {
    let pareto = TailFunction::pareto(0.5, 1.0);
    let a = alpha(2.0)?;
    let xs = [1e2, 1e3, 1e4, 1e5, 1e6];
    let values = xs
        .iter()
        .map(|&x| karamata_ratio(&pareto, a, x))
        .collect::<Result<Vec<_>>>()?;
    let measured = values[4];
    let curve = RatioCurve {
        abscissae: xs.to_vec(),
        values,
        target: Some(1.5),
    };
    rec.push(
        "karamata ratio pareto:0.5 alpha=2 x=1e6".into(),
        measured,
        1.5,
        tol::KARAMATA_REL * 1.5,
        Some(curve),
    );
    let one = karamata_ratio(&TailFunction::constant_one(), alpha(1.5)?, 50.0)?;
    rec.push(
        "karamata ratio constant-one alpha=1.5".into(),
        one,
        1.5,
        tol::KARAMATA_EXACT_ABS,
        None,
    );
    let exp = karamata_ratio(&TailFunction::exponential(1.0), a, 50.0)?;
    rec.push(
        "karamata ratio exp:1 alpha=2 x=50".into(),
        exp,
        0.0,
        tol::KARAMATA_EXACT_ABS,
        None,
    );
    Ok(())
}

fn cf_suite(rec: &mut Recorder<'_>) -> Result<()> {
    let grid = [0.5, 0.1, 0.05, 0.01];
    let rad = cf_condition_ratio(CfSource::Spec(DistSpecX::Rademacher), 2.0, &grid)?;
    rec.push(
        "cf ratio rademacher t=0.01".into(),
        rad.values[3],
        0.5,
        tol::CF_RADEMACHER_ABS,
        Some(rad),
    );
    for spec in [
        DistSpecX::Normal { sigma: 1.0 },
        DistSpecX::SymStable { alpha: 1.5, scale: 1.0 },
    ] {
        let (a, c) = spec.cf_exponent();
        let curve = cf_condition_ratio(CfSource::Spec(spec), a, &grid)?;
        let worst = curve
            .values
            .iter()
            .copied()
            .max_by(|x, y| (x - c).abs().total_cmp(&(y - c).abs()))
            .expect("nonempty grid");
        rec.push(
            format!("cf ratio {spec} worst grid point"),
            worst,
            c,
            tol::CF_CLOSED_FORM_ABS,
            Some(curve),
        );
    }
    Ok(())
}

fn tail_suite(rec: &mut Recorder<'_>) -> Result<()> {
    let n = rec.cfg.tail_draws;
    let stable = DistSpecX::SymStable { alpha: 1.5, scale: 1.0 };
    let xs = sample_x(&stable, n, &mut substream(rec.cfg.seed, 0))?;
    let curve = tail_vs_constant(&xs, 1.5, 1.0, &[2.5, 5.0, 10.0, 20.0])?;
    for (i, &x) in curve.abscissae.iter().enumerate().skip(2) {
        rec.push(
            format!("stable tail ratio symstable:1.5:1 x={x}"),
            curve.values[i],
            1.0,
            tol::TAIL_BAND,
            (i == 3).then(|| curve.clone()),
        );
    }
    let normal = sample_x(&DistSpecX::Normal { sigma: 1.0 }, n, &mut substream(rec.cfg.seed, 1))?;
    let ncurve = tail_vs_constant(&normal, 1.5, 1.0, &[1.0, 2.0, 3.0])?;
    rec.push(
        "normal tail ratio x=3 (control)".into(),
        ncurve.values[2],
        0.0,
        tol::TAIL_BAND,
        Some(ncurve),
    );
    Ok(())
}

/// Number of random samples, out of `samples`, on which
/// `D_n^alpha <= S_n(alpha) <= D_n^(alpha-1)` fails beyond rounding.
///
/// Sample `i` draws its family, size (1 to 200) and `alpha` from
/// `substream(seed, i)`.
pub fn sandwich_violations(samples: usize, seed: u64) -> usize {
    (0..samples)
        .filter(|&i| {
            let mut stream = substream(seed, i as u64);
            let n = stream.random_range(1..=200usize);
            let a = 2.0 - stream.random::<f64>();
            let b = 0.05 + 0.9 * stream.random::<f64>();
            let spec = match stream.random_range(0..4u8) {
                0 => DistSpecY::Pareto { beta: b, xmin: 1.0 },
                1 => DistSpecY::SlowVary,
                2 => DistSpecY::PositiveStable { beta: b },
                _ => DistSpecY::Exponential { rate: 1.0 },
            };
            let logs: Vec<f64> = (0..n).map(|_| spec.draw_log(&mut stream)).collect();
            let s = s_n_logs(&logs, a);
            let d = d_max_logs(&logs);
            s < d.powf(a) * (1.0 - tol::SANDWICH_REL) || s > d.powf(a - 1.0) * (1.0 + tol::SANDWICH_REL)
        })
        .count()
}

fn sandwich_suite(rec: &mut Recorder<'_>) -> Result<()> {
    let n = rec.cfg.sandwich_samples;
    let violations = sandwich_violations(n, rec.cfg.seed);
    rec.push(
        format!("sandwich violations over {n} samples"),
        violations as f64,
        0.0,
        0.0,
        None,
    );
    Ok(())
}
