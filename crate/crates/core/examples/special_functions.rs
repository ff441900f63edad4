//! The limit map `gamma(alpha, beta)`, its inverse and the Mellin transform
//! of the kernel.
//!
//! Run with: `cargo run --example special_functions`

use heavyratio::special_fn::{gamma_map, invert_gamma_map, log_gamma, mellin_ktilde, tail_constant, Alpha, BetaIdx};

fn main() -> heavyratio::Result<()> {
    println!("ln Γ(0.5) = {:.10}  (ln √π = {:.10})", log_gamma(0.5)?, std::f64::consts::PI.sqrt().ln());

    println!("\n  beta   gamma(2,b)  gamma(1.5,b)  gamma(1.2,b)");
    for k in 0..=9 {
        let b = BetaIdx::new(k as f64 / 10.0)?;
        let row: Vec<String> = [2.0, 1.5, 1.2]
            .iter()
            .map(|&a| format!("{:>11.6}", gamma_map(Alpha::new(a).unwrap(), b).value()))
            .collect();
        println!("  {:.1}  {}", b.value(), row.join(" "));
    }

    let a = Alpha::new(1.5)?;
    let g = gamma_map(a, BetaIdx::new(0.5)?);
    println!("\ngamma(1.5, 0.5) = {:.10} (2/π = {:.10})", g.value(), 2.0 / std::f64::consts::PI);
    println!("inverse         = {:.12}", invert_gamma_map(a, g).value());

    // fixed point: ktilde(-beta) (alpha - 1) gamma = 1
    let kt = mellin_ktilde(a, -0.5)?;
    println!("ktilde(-0.5)    = {kt:.10}, product = {:.12}", kt * 0.5 * g.value());

    println!("\nstable tail constant, alpha = 1.5: c=1 -> {:.6}, c=2 -> {:.6}", tail_constant(1.5, 1.0)?, tail_constant(1.5, 2.0)?);
    Ok(())
}
