//! `E(V / U^alpha)` for the limiting pair built from Poisson arrivals,
//! compared with the closed-form limit map.
//!
//! Run with: `cargo run --release --example levy_oracle`

use heavyratio::montecarlo::mc_levy_ratio;
use heavyratio::samplers::{sample_levy_pair, substream};
use heavyratio::special_fn::{gamma_map, Alpha, BetaIdx};

fn main() -> heavyratio::Result<()> {
    let tol = 1e-3;
    let p = sample_levy_pair(BetaIdx::positive(0.75)?, Alpha::new(2.0)?, tol, &mut substream(0, 0))?;
    println!("one pair: u = {:.4}, v = {:.4}, terms = {}, tail bound = {:.1e}", p.u, p.v, p.terms_used, p.tail_bound);

    println!("\n beta alpha   E(V/U^a)   stderr    closed form");
    for (b, a) in [(0.25, 2.0), (0.5, 2.0), (0.75, 2.0), (0.25, 1.5), (0.5, 1.5), (0.5, 1.2)] {
        let beta = BetaIdx::positive(b)?;
        let alpha = Alpha::new(a)?;
        let est = mc_levy_ratio(beta, alpha, 50_000, tol, 1)?;
        println!(
            " {b:<4} {a:<5} {:>9.5} {:>9.5} {:>12.5}",
            est.mean,
            est.stderr,
            gamma_map(alpha, beta).value()
        );
    }
    Ok(())
}
