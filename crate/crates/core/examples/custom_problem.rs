//! Solves a user-defined fractional equation, D^α u = -u + sin t, with both
//! the network and the marching oracle.
//!
//! cargo run --release --example custom_problem

use fracnn::caputo::Grid;
use fracnn::network::LayerSpec;
use fracnn::oracle::{interpolate, solve, OracleConfig};
use fracnn::run::rmse;
use fracnn::training::{train, ProblemSpec, TrainConfig};

fn main() -> fracnn::Result<()> {
    let alpha = 0.75;
    let problem = ProblemSpec::new("damped", alpha, 1.0, |u, t| -u + t.sin(), |_, _| -1.0)?;
    let grid = Grid::new(3.0, 61)?;
    let mut config = TrainConfig::new(LayerSpec::hidden(&[16, 16])?, grid.clone(), 5000);
    config.seed = 3;
    let (_, trace) = train(&problem, &config)?;

    let fine = Grid::new(3.0, 3001)?;
    let oracle = solve(&problem, &OracleConfig::implicit(fine.clone()))?;
    let reference: Vec<f64> = grid.nodes().iter().map(|&t| interpolate(&fine, &oracle, t)).collect();
    println!(
        "loss {:.3e} -> {:.3e}, rmse vs oracle {:.3e}",
        trace.loss_history[0],
        trace.final_loss,
        rmse(&trace.u_hat, &reference)
    );
    for n in (0..grid.n_points()).step_by(10) {
        println!(
            "    t={:.2} u_nn={:.5} oracle={:.5}",
            grid.nodes()[n],
            trace.u_hat[n],
            reference[n]
        );
    }
    Ok(())
}
