//! Compares the reverse-mode loss gradient with central differences.
//!
//! cargo run --example gradient_check

use fracnn::caputo::{build_weights, Grid};
use fracnn::models::{GrowthParams, ModelKind};
use fracnn::network::{init_params, LayerSpec};
use fracnn::training::{loss, loss_gradient};

fn main() -> fracnn::Result<()> {
    let grid = Grid::new(1.0, 16)?;
    let spec = LayerSpec::hidden(&[4, 4])?;
    for kind in ModelKind::ALL {
        for alpha in [1.0, 0.8] {
            let problem = GrowthParams::reference(kind).problem(kind, alpha)?;
            let weights = build_weights(alpha, &grid)?;
            let params = init_params(&spec, 1);
            let grad = loss_gradient(&params, &problem, &weights)?;

            let step = 1e-6;
            let mut worst: f64 = 0.0;
            for (i, &g) in grad.iter().enumerate() {
                if g.abs() <= 1e-8 {
                    continue;
                }
                let mut plus = params.clone();
                plus.theta_mut()[i] += step;
                let mut minus = params.clone();
                minus.theta_mut()[i] -= step;
                let fd = (loss(&plus, &problem, &weights)? - loss(&minus, &problem, &weights)?) / (2.0 * step);
                worst = worst.max(((g - fd) / g).abs());
            }
            println!(
                "{kind:>8} alpha={alpha:<4} params={} max rel error {worst:.2e}",
                grad.len()
            );
        }
    }
    Ok(())
}
