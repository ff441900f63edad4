//! Quadrature checks of regular variation: the Mellin-convolution ratio, the
//! Karamata ratio, the characteristic-function condition and the stable tail.
//!
//! Run with: `cargo run --release --example regular_variation`

use heavyratio::rv_analysis::{
    cf_condition_ratio, karamata_ratio, mellin_conv_ratio, tail_vs_constant, CfSource, TailFunction,
};
use heavyratio::samplers::{sample_x, substream, DistSpecX};
use heavyratio::special_fn::{gamma_map, Alpha, BetaIdx};

fn main() -> heavyratio::Result<()> {
    let xs = [1e2, 1e4, 1e6, 1e8, 1e10];
    for (tail, a, beta) in [
        (TailFunction::pareto(0.5, 1.0), 2.0, 0.5),
        (TailFunction::pareto(0.5, 1.0), 1.5, 0.5),
        (TailFunction::slow_vary(), 2.0, 0.0),
    ] {
        let alpha = Alpha::new(a)?;
        let limit = 1.0 / (gamma_map(alpha, BetaIdx::new(beta)?).value() * (a - 1.0));
        let curve: Vec<String> = xs
            .iter()
            .map(|&x| Ok(format!("{:.4}", mellin_conv_ratio(&tail, alpha, x)?)))
            .collect::<heavyratio::Result<_>>()?;
        println!("mellin {} alpha={a}: {} -> {limit:.4}", tail.label, curve.join(" "));
    }

    let k: Vec<String> = xs
        .iter()
        .map(|&x| Ok(format!("{:.5}", karamata_ratio(&TailFunction::pareto(0.5, 1.0), Alpha::new(2.0)?, x)?)))
        .collect::<heavyratio::Result<_>>()?;
    println!("karamata pareto:0.5 alpha=2: {} -> 1.5", k.join(" "));

    let t = [0.5, 0.1, 0.01];
    for spec in [DistSpecX::Rademacher, DistSpecX::Normal { sigma: 2.0 }] {
        let c = cf_condition_ratio(CfSource::Spec(spec), 2.0, &t)?;
        println!("cf ratio {spec}: {:?} -> {:?}", c.values, c.target);
    }
    let draws = sample_x(&DistSpecX::Rademacher, 100_000, &mut substream(1, 0))?;
    let c = cf_condition_ratio(CfSource::Sample(&draws), 2.0, &t)?;
    println!("cf ratio rademacher sample: {:?}", c.values);

    let stable = sample_x(&DistSpecX::SymStable { alpha: 1.5, scale: 1.0 }, 2_000_000, &mut substream(2, 0))?;
    let r = tail_vs_constant(&stable, 1.5, 1.0, &[2.5, 5.0, 10.0, 20.0])?;
    println!("stable tail / constant at x = {:?}: {:?}", r.abscissae, r.values);
    Ok(())
}
