//! Convergence of `E S_n(alpha)` to its limit for several tails, and the
//! degenerate versus nondegenerate behaviour of `T_n`.
//!
//! Run with: `cargo run --release --example monte_carlo_convergence`

use heavyratio::montecarlo::{mc_sweep, mc_t_n_sample};
use heavyratio::samplers::{DistSpecX, DistSpecY};
use heavyratio::special_fn::Alpha;

fn std_dev(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn main() -> heavyratio::Result<()> {
    let alpha = Alpha::new(2.0)?;
    let grid = [10, 100, 1000, 10_000];
    for spec in [
        DistSpecY::Pareto { beta: 0.25, xmin: 1.0 },
        DistSpecY::Pareto { beta: 0.75, xmin: 1.0 },
        DistSpecY::SlowVary,
        DistSpecY::Exponential { rate: 1.0 },
    ] {
        println!("# {spec}, alpha = 2");
        print!("{}", mc_sweep(&spec, alpha, &grid, 400, 7)?.to_csv());
    }

    let x = DistSpecX::Normal { sigma: 1.0 };
    for y in [DistSpecY::Pareto { beta: 0.5, xmin: 1.0 }, DistSpecY::Exponential { rate: 1.0 }] {
        let spread: Vec<String> = [100, 1000, 10_000]
            .iter()
            .map(|&n| Ok(format!("{:.4}", std_dev(&mc_t_n_sample(&x, &y, n, 500, 3)?))))
            .collect::<heavyratio::Result<_>>()?;
        println!("std of T_n with {y} weights at n = 1e2, 1e3, 1e4: {}", spread.join(", "));
    }
    Ok(())
}
