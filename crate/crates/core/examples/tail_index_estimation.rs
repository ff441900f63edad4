//! Estimating the tail index from one long sample with the ratio estimator
//! and the Hill estimator.
//!
//! Run with: `cargo run --release --example tail_index_estimation`

use heavyratio::estimator::{default_block_size, default_hill_k, estimate_beta, hill_estimator};
use heavyratio::samplers::{sample_log_y, substream, DistSpecY};
use heavyratio::special_fn::Alpha;
use heavyratio::statistics::PositiveSample;

fn main() -> heavyratio::Result<()> {
    let n = 1_000_000;
    for spec in [
        DistSpecY::Pareto { beta: 0.25, xmin: 1.0 },
        DistSpecY::Pareto { beta: 0.5, xmin: 1.0 },
        DistSpecY::Pareto { beta: 0.75, xmin: 1.0 },
        DistSpecY::PositiveStable { beta: 0.6 },
        DistSpecY::SlowVary,
    ] {
        let data = PositiveSample::from_logs(sample_log_y(&spec, n, &mut substream(9, 0))?)?;
        let m = default_block_size(n);
        let hill = hill_estimator(&data, default_hill_k(n))?;
        for a in [2.0, 1.5] {
            let est = estimate_beta(&data, Alpha::new(a)?, m)?;
            println!(
                "{spec:<16} alpha={a:<3} block={m}: beta_hat = {:.4} [{:.4}, {:.4}]  hill = {hill:.4}",
                est.beta_hat, est.ci_low, est.ci_high
            );
        }
    }
    Ok(())
}
