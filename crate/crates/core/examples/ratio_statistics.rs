//! `T_n`, `S_n(alpha)` and `D_n` on small samples, including one whose values
//! overflow `f64`.
//!
//! Run with: `cargo run --example ratio_statistics`

use heavyratio::special_fn::Alpha;
use heavyratio::statistics::{stat_d_max, stat_s_n, stat_t_n, PositiveSample};

fn main() -> heavyratio::Result<()> {
    let a = Alpha::new(2.0)?;

    let y = PositiveSample::from_values(&[3.0, 1.0])?;
    println!("y = (3, 1): S_n(2) = {}  D_n = {}", stat_s_n(&y, a), stat_d_max(&y));
    println!("x = (1, -1): T_n = {}", stat_t_n(&[1.0, -1.0], &y)?);

    let flat = PositiveSample::from_values(&[2.5; 100])?;
    println!("100 equal values: S_n(2) = {} (minimum 1/n)", stat_s_n(&flat, a));

    // ln y = 1e6 is far beyond f64::MAX; statistics use ratios to the maximum
    let huge = PositiveSample::from_logs(vec![1e6, 1e6 - 1.0, 5.0, 2.0])?;
    let s = stat_s_n(&huge, a);
    let d = stat_d_max(&huge);
    println!("huge sample: S_n(2) = {s:.6}  D_n = {d:.6}");
    println!("sandwich D^2 <= S <= D: {:.6} <= {s:.6} <= {d:.6}", d * d);

    let scaled = huge.scaled(1e-300);
    println!("scaled by 1e-300: S_n(2) = {:.6}", stat_s_n(&scaled, a));
    Ok(())
}
