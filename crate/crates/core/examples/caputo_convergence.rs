//! Error of the L1 Caputo approximation on u(t) = t², whose Caputo
//! derivative is 2 t^(2-α) / Γ(3-α).
//!
//! cargo run --example caputo_convergence

use fracnn::caputo::{build_weights, Grid};
use fracnn::specialfn::gamma;

fn main() -> fracnn::Result<()> {
    for alpha in [0.5, 0.7, 0.9, 1.0] {
        println!("alpha = {alpha}");
        let mut prev: Option<f64> = None;
        for n_points in [21, 41, 81, 161, 321] {
            let grid = Grid::new(1.0, n_points)?;
            let weights = build_weights(alpha, &grid)?;
            let u: Vec<f64> = grid.nodes().iter().map(|t| t * t).collect();
            let d = weights.apply(&u)?;
            let c = 2.0 / gamma(3.0 - alpha)?;
            let err = grid
                .nodes()
                .iter()
                .zip(&d)
                .skip(1)
                .map(|(t, v)| (v - c * t.powf(2.0 - alpha)).abs())
                .fold(0.0, f64::max);
            let rate = prev.map(|p| (p / err).log2());
            match rate {
                Some(r) => println!("  h = {:<10.3e} max error {err:.3e}  rate {r:.3}", grid.h()),
                None => println!("  h = {:<10.3e} max error {err:.3e}", grid.h()),
            }
            prev = Some(err);
        }
        println!("  expected rate {:.3}", 2.0 - alpha);
    }
    Ok(())
}
