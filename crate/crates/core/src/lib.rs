//! Neural-network solver for Caputo fractional initial value problems
//!
//! `D^α u(t) = f(u, t)`, `u(0) = u0`, `0 < α ≤ 1`.
//!
//! The unknown is represented by the trial solution `g(t) = u0 + t·N(t)`,
//! where `N` is a small sigmoid feedforward network. The Caputo derivative
//! of `g` is evaluated with the L1 scheme on a uniform grid and the network
//! is trained with Adam on the root-sum-square residual.
//!
//! Modules:
//!
//! - [`specialfn`]: Gamma and Mittag-Leffler functions.
//! - [`caputo`]: uniform grids, L1 weights, the discrete operator and its transpose.
//! - [`network`]: the feedforward approximator with exact reverse-mode gradients.
//! - [`training`]: trial solution, residual loss, Adam, training loop.
//! - [`models`]: exponential, logistic, and harvested logistic growth.
//! - [`oracle`]: time-marching reference solver.
//! - [`run`]: α sweeps with CSV/JSON artifacts (used by the `fracnn` binary).
//!
//! ```no_run
//! use fracnn::{models, training::TrainConfig, caputo::Grid, network::LayerSpec};
//!
//! # fn main() -> fracnn::Result<()> {
//! let problem = models::exponential_model(1.0, 1.0, 0.8)?;
//! let config = TrainConfig::new(LayerSpec::hidden(&[42, 42])?, Grid::new(1.0, 101)?, 20_000);
//! let (_params, trace) = fracnn::training::train(&problem, &config)?;
//! println!("final loss {}", trace.final_loss);
//! # Ok(())
//! # }
//! ```

pub mod caputo;
pub mod error;
pub mod models;
pub mod network;
pub mod oracle;
pub mod run;
pub mod specialfn;
pub mod training;

pub use error::{Error, Result};
