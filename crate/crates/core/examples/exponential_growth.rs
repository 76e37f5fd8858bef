//! Trains the exponential model across fractional orders and compares with
//! u0 E_α(a t^α).
//!
//! cargo run --release --example exponential_growth [epochs]

use fracnn::run::{defaults_for, run_alpha};

fn main() -> fracnn::Result<()> {
    let mut manifest = defaults_for("exp")?;
    if let Some(epochs) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        manifest.epochs = epochs;
    }
    for &alpha in &manifest.alphas {
        let (_, summary) = run_alpha(&manifest, alpha, |_, _| {})?;
        println!("{}", summary.summary_line(manifest.model));
        let reference = summary.reference_values.as_deref().unwrap_or_default();
        for n in (0..summary.trace.nodes.len()).step_by(25) {
            println!(
                "    t={:.2} u_nn={:.6} exact={:.6}",
                summary.trace.nodes[n], summary.trace.u_hat[n], reference[n]
            );
        }
    }
    Ok(())
}
