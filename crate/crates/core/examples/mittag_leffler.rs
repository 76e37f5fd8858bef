//! Tabulates Γ and the one-parameter Mittag-Leffler function.
//!
//! cargo run --example mittag_leffler

use fracnn::specialfn::{gamma, mittag_leffler, mittag_leffler_with, MLSeriesPolicy};

fn main() -> fracnn::Result<()> {
    println!("{:>6} {:>22}", "x", "gamma(x)");
    for x in [0.1, 0.5, 1.3, 2.5, 5.0, 10.5] {
        println!("{x:>6} {:>22.15e}", gamma(x)?);
    }

    println!();
    println!("{:>6} {:>6} {:>22} {:>22}", "alpha", "z", "E_alpha(z)", "exp(z)");
    for alpha in [1.0, 0.9, 0.8, 0.7, 0.5] {
        for z in [-2.0, 0.5, 1.0, 4.0] {
            println!(
                "{alpha:>6} {z:>6} {:>22.15e} {:>22.15e}",
                mittag_leffler(alpha, z)?,
                f64::exp(z)
            );
        }
    }

    // a short series budget fails loudly instead of truncating
    let tight = MLSeriesPolicy::new(10, 1e-16)?;
    match mittag_leffler_with(0.5, 8.0, &tight) {
        Ok(v) => println!("\n10 terms at z = 8: {v}"),
        Err(err) => println!("\n10 terms at z = 8: {err}"),
    }
    Ok(())
}
