//! Logistic growth with periodic harvesting, a custom harvest amplitude, and
//! a trained network reloaded from its weight file.
//!
//! cargo run --release --example harvested_logistic [epochs] [b]

use fracnn::network::{forward, WeightFile};
use fracnn::run::{defaults_for, run};

fn main() -> fracnn::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut manifest = defaults_for("harvest")?;
    if let Some(epochs) = args.next().and_then(|s| s.parse().ok()) {
        manifest.epochs = epochs;
    }
    if let Some(b) = args.next().and_then(|s| s.parse().ok()) {
        manifest.params.b = b;
    }
    manifest.alphas = vec![1.0, 0.7];
    let report = run(&manifest)?;
    for summary in &report.runs {
        println!("{}", summary.summary_line(manifest.model));
        for w in &summary.warnings {
            println!("    warning: {w}");
        }
    }

    let weights = WeightFile::load(&manifest.weights_path(0.7))?;
    let params = weights.to_params()?;
    println!("reloaded alpha=0.7 network:");
    for t in [0.25, 0.75, 1.25, 1.75] {
        println!("    u({t}) = {:.5}", manifest.params.u0 + t * forward(&params, t));
    }
    Ok(())
}
