//! Solves the logistic and harvested logistic models with the L1 marching
//! schemes and checks self-convergence.
//!
//! cargo run --release --example oracle_reference

use fracnn::caputo::Grid;
use fracnn::models::{GrowthParams, ModelKind};
use fracnn::oracle::{interpolate, self_convergence, solve, OracleConfig, Scheme};

fn main() -> fracnn::Result<()> {
    let grid = Grid::new(2.0, 2001)?;
    for kind in [ModelKind::Logistic, ModelKind::HarvestedLogistic] {
        let params = GrowthParams::reference(kind);
        for alpha in [1.0, 0.9, 0.8, 0.7] {
            let problem = params.problem(kind, alpha)?;
            let u = solve(&problem, &OracleConfig::implicit(grid.clone()))?;
            let explicit = solve(&problem, &OracleConfig::explicit(grid.clone()))?;
            let gap = u.iter().zip(&explicit).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let report = self_convergence(&problem, &grid, Scheme::L1Implicit)?;
            let samples: Vec<String> = [0.5, 1.0, 1.5, 2.0]
                .iter()
                .map(|&t| format!("u({t})={:.4}", interpolate(&grid, &u, t)))
                .collect();
            println!(
                "{kind:>8} alpha={alpha:<4} {}  explicit gap {gap:.1e}  self-convergence {:.1e} ({} vs {} nodes)",
                samples.join(" "),
                report.max_discrepancy,
                report.coarse_points,
                report.fine_points
            );
        }
    }
    Ok(())
}
