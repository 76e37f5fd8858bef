//! Full logistic α sweep, writing CSVs and weights to runs/logistic.
//!
//! cargo run --release --example logistic_sweep [epochs]

use fracnn::run::{defaults_for, run_with_progress};

fn main() -> fracnn::Result<()> {
    let mut manifest = defaults_for("logistic")?;
    if let Some(epochs) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        manifest.epochs = epochs;
    }
    let every = (manifest.epochs / 10).max(1);
    let report = run_with_progress(&manifest, |alpha, epoch, loss| {
        if epoch % every == 0 {
            eprintln!("alpha={alpha} epoch {epoch} loss {loss:.4e}");
        }
    })?;
    for summary in &report.runs {
        println!("{}", summary.summary_line(manifest.model));
    }
    println!("artifacts in {}", manifest.out_dir.display());
    Ok(())
}
