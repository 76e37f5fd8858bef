//! Trial solution, residual loss, Adam, and the training loop.
//!
//! The trial solution `g(t) = u0 + t·N(t)` meets the initial condition for
//! any network `N`. Training minimizes
//!
//! ```text
//! L = sqrt( Σ_{n≥1} [ D^α g(t_n) - f(g(t_n), t_n) ]² )
//! ```
//!
//! where `D^α` is the L1 operator from [`crate::caputo`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::caputo::{build_weights, check_alpha, CaputoWeights, Grid};
use crate::error::{Error, Result};
use crate::network::{forward_backward, forward_batch, init_params, LayerSpec, NetworkParams};

pub type ScalarFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SolutionFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Fractional IVP `D^α u = f(u, t)`, `u(0) = u0`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub label: String,
    pub alpha: f64,
    pub u0: f64,
    /// `f(u, t)`
    pub rhs: ScalarFn2,
    /// `∂f/∂u (u, t)`
    pub rhs_du: ScalarFn2,
    /// Closed-form solution, where one is known.
    pub analytic: Option<SolutionFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("label", &self.label)
            .field("alpha", &self.alpha)
            .field("u0", &self.u0)
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn new<F, D>(label: impl Into<String>, alpha: f64, u0: f64, rhs: F, rhs_du: D) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        check_alpha(alpha)?;
        if !u0.is_finite() {
            return Err(Error::Domain(format!("initial value must be finite, got {u0}")));
        }
        Ok(ProblemSpec {
            label: label.into(),
            alpha,
            u0,
            rhs: Arc::new(rhs),
            rhs_du: Arc::new(rhs_du),
            analytic: None,
        })
    }

    pub fn with_analytic<S>(mut self, solution: S) -> Self
    where
        S: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        self.analytic = Some(Arc::new(solution));
        self
    }

    pub fn f(&self, u: f64, t: f64) -> f64 {
        (self.rhs)(u, t)
    }

    pub fn df_du(&self, u: f64, t: f64) -> f64 {
        (self.rhs_du)(u, t)
    }

    /// Analytic solution sampled at `times`, if the problem has one.
    pub fn analytic_values(&self, times: &[f64]) -> Option<Result<Vec<f64>>> {
        self.analytic
            .as_ref()
            .map(|sol| times.iter().map(|&t| sol(t)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1), got {beta}")));
            }
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::InvalidConfig(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }
}

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        AdamState {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            step: 0,
        }
    }
}

/// One bias-corrected Adam update of `theta` in place.
pub fn adam_step(state: &mut AdamState, theta: &mut [f64], grad: &[f64], config: &AdamConfig) -> Result<()> {
    if grad.len() != theta.len() {
        return Err(Error::LengthMismatch {
            expected: theta.len(),
            got: grad.len(),
        });
    }
    if state.m.len() != theta.len() || state.v.len() != theta.len() {
        return Err(Error::LengthMismatch {
            expected: theta.len(),
            got: state.m.len(),
        });
    }
    state.step += 1;
    let step = i32::try_from(state.step).unwrap_or(i32::MAX);
    let c1 = 1.0 - config.beta1.powi(step);
    let c2 = 1.0 - config.beta2.powi(step);
    let (b1, b2) = (config.beta1, config.beta2);
    for (((p, &g), m), v) in theta.iter_mut().zip(grad).zip(&mut state.m).zip(&mut state.v) {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= config.learning_rate * m_hat / (v_hat.sqrt() + config.eps);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub layers: LayerSpec,
    pub grid: Grid,
    pub epochs: usize,
    pub adam: AdamConfig,
    pub seed: u64,
    /// Feed `t / t_end` to the network instead of `t`.
    pub normalize_input: bool,
}

impl TrainConfig {
    pub fn new(layers: LayerSpec, grid: Grid, epochs: usize) -> Self {
        TrainConfig {
            layers,
            grid,
            epochs,
            adam: AdamConfig::default(),
            seed: 0,
            normalize_input: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        self.adam.validate()
    }

    /// Seeded initial parameters with the configured input scaling.
    pub fn initial_params(&self) -> NetworkParams {
        let params = init_params(&self.layers, self.seed);
        if self.normalize_input {
            params.with_input_scale(1.0 / self.grid.t_end())
        } else {
            params
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace {
    pub nodes: Vec<f64>,
    pub u_hat: Vec<f64>,
    /// Loss before each epoch's update.
    pub loss_history: Vec<f64>,
    /// Loss at the returned parameters.
    pub final_loss: f64,
}

/// `g(t_n) = u0 + t_n · N(t_n)` at every node.
pub fn trial_values(params: &NetworkParams, problem: &ProblemSpec, grid: &Grid) -> Vec<f64> {
    let outputs = forward_batch(params, grid);
    trial_from_outputs(problem.u0, grid.nodes(), &outputs)
}

fn trial_from_outputs(u0: f64, nodes: &[f64], outputs: &[f64]) -> Vec<f64> {
    nodes.iter().zip(outputs).map(|(&t, &y)| u0 + t * y).collect()
}

fn check_weights(problem: &ProblemSpec, weights: &CaputoWeights) -> Result<()> {
    if weights.alpha() != problem.alpha {
        return Err(Error::WeightsMismatch(format!(
            "weights built for alpha {} but problem has alpha {}",
            weights.alpha(),
            problem.alpha
        )));
    }
    Ok(())
}

/// Residuals `D^α g - f(g, t)`; entry 0 is left at 0.
pub fn residuals(trial: &[f64], problem: &ProblemSpec, weights: &CaputoWeights) -> Result<Vec<f64>> {
    let mut r = weights.apply(trial)?;
    r[0] = 0.0;
    for (n, (&t, &g)) in weights.grid().nodes().iter().zip(trial).enumerate().skip(1) {
        r[n] -= problem.f(g, t);
    }
    Ok(r)
}

/// Residual loss of the trial solution built from `params`.
pub fn loss(params: &NetworkParams, problem: &ProblemSpec, weights: &CaputoWeights) -> Result<f64> {
    check_weights(problem, weights)?;
    let g = trial_values(params, problem, weights.grid());
    loss_of_trial(&g, problem, weights)
}

/// Residual loss of arbitrary samples on the weights' grid (e.g. an exact solution).
pub fn loss_of_trial(trial: &[f64], problem: &ProblemSpec, weights: &CaputoWeights) -> Result<f64> {
    check_weights(problem, weights)?;
    let r = residuals(trial, problem, weights)?;
    Ok(r.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// Below this the loss is treated as exactly zero and the gradient vanishes.
const ZERO_LOSS: f64 = 1e-14;

/// Loss and its exact gradient with respect to the flat parameter vector.
pub fn loss_and_gradient(
    params: &NetworkParams,
    problem: &ProblemSpec,
    weights: &CaputoWeights,
) -> Result<(f64, Vec<f64>)> {
    check_weights(problem, weights)?;
    let nodes = weights.grid().nodes();
    let mut value = f64::NAN;
    let (_, grad) = forward_backward(params, nodes, |outputs| {
        let g = trial_from_outputs(problem.u0, nodes, outputs);
        let r = residuals(&g, problem, weights)?;
        value = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if value.is_nan() || value < ZERO_LOSS {
            // zero loss, or NaN which the caller reports
            return Ok(vec![0.0; nodes.len()]);
        }
        let c: Vec<f64> = r.iter().map(|x| x / value).collect();
        let mut dg = weights.apply_transpose(&c)?;
        for n in 1..nodes.len() {
            dg[n] -= c[n] * problem.df_du(g[n], nodes[n]);
        }
        Ok(nodes.iter().zip(&dg).map(|(t, d)| t * d).collect())
    })?;
    Ok((value, grad))
}

pub fn loss_gradient(params: &NetworkParams, problem: &ProblemSpec, weights: &CaputoWeights) -> Result<Vec<f64>> {
    loss_and_gradient(params, problem, weights).map(|(_, g)| g)
}

/// Full-batch Adam training from the seeded initialization.
pub fn train(problem: &ProblemSpec, config: &TrainConfig) -> Result<(NetworkParams, SolutionTrace)> {
    train_with_progress(problem, config, |_, _| {})
}

/// [`train`] with a callback receiving `(epoch, loss)` before each update.
pub fn train_with_progress<P>(
    problem: &ProblemSpec,
    config: &TrainConfig,
    mut progress: P,
) -> Result<(NetworkParams, SolutionTrace)>
where
    P: FnMut(usize, f64),
{
    config.validate()?;
    let weights = build_weights(problem.alpha, &config.grid)?;
    let mut params = config.initial_params();
    let mut state = AdamState::new(params.theta().len());
    let mut loss_history = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let (value, grad) = loss_and_gradient(&params, problem, &weights)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteLoss { epoch, loss: value });
        }
        progress(epoch, value);
        loss_history.push(value);
        adam_step(&mut state, params.theta_mut(), &grad, &config.adam)?;
    }
    let final_loss = loss(&params, problem, &weights)?;
    if !final_loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            epoch: config.epochs,
            loss: final_loss,
        });
    }
    let u_hat = trial_values(&params, problem, &config.grid);
    let trace = SolutionTrace {
        nodes: config.grid.nodes().to_vec(),
        u_hat,
        loss_history,
        final_loss,
    };
    Ok((params, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{forward, init_params};

    fn zero_rhs(alpha: f64, u0: f64) -> ProblemSpec {
        ProblemSpec::new("zero", alpha, u0, |_, _| 0.0, |_, _| 0.0).unwrap()
    }

    fn linear(a: f64, alpha: f64, u0: f64) -> ProblemSpec {
        ProblemSpec::new("linear", alpha, u0, move |u, _| a * u, move |_, _| a).unwrap()
    }

    fn zero_output_net(hidden: usize) -> NetworkParams {
        let spec = LayerSpec::hidden(&[hidden]).unwrap();
        let mut p = init_params(&spec, 4);
        for i in 0..hidden {
            *p.weight_mut(1, i, 0) = 0.0;
        }
        p
    }

    #[test]
    fn problem_rejects_bad_alpha() {
        assert!(ProblemSpec::new("x", 0.0, 1.0, |_, _| 0.0, |_, _| 0.0).is_err());
        assert!(ProblemSpec::new("x", 1.2, 1.0, |_, _| 0.0, |_, _| 0.0).is_err());
        assert!(ProblemSpec::new("x", 0.5, f64::NAN, |_, _| 0.0, |_, _| 0.0).is_err());
    }

    #[test]
    fn trial_keeps_initial_value() {
        let grid = Grid::new(2.0, 11).unwrap();
        let p = init_params(&LayerSpec::hidden(&[5, 5]).unwrap(), 8);
        let g = trial_values(&p, &zero_rhs(0.5, 0.37), &grid);
        assert_eq!(g[0], 0.37);
    }

    #[test]
    fn trial_of_zero_network_is_constant() {
        let grid = Grid::new(1.0, 6).unwrap();
        let g = trial_values(&zero_output_net(3), &zero_rhs(1.0, 2.5), &grid);
        assert!(g.iter().all(|&x| x == 2.5));
    }

    #[test]
    fn trial_of_unit_network() {
        let mut p = NetworkParams::zeros(LayerSpec::hidden(&[1]).unwrap());
        *p.weight_mut(0, 0, 0) = 1.0;
        *p.weight_mut(1, 0, 0) = 1.0;
        let grid = Grid::new(1.0, 2).unwrap();
        let g = trial_values(&p, &zero_rhs(1.0, 0.2), &grid);
        assert!((g[1] - (0.2 + 0.731_058_578_630_004_9)).abs() < 1e-15);
    }

    #[test]
    fn zero_problem_has_zero_loss_and_gradient() {
        let grid = Grid::new(1.0, 9).unwrap();
        let problem = zero_rhs(0.6, 1.0);
        let w = build_weights(0.6, &grid).unwrap();
        let p = zero_output_net(4);
        assert_eq!(loss(&p, &problem, &w).unwrap(), 0.0);
        assert!(loss_gradient(&p, &problem, &w).unwrap().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn two_node_loss_by_hand() {
        let grid = Grid::new(0.5, 2).unwrap();
        let problem = linear(1.3, 0.7, 0.4);
        let w = build_weights(0.7, &grid).unwrap();
        let p = init_params(&LayerSpec::hidden(&[3]).unwrap(), 2);
        let g1 = 0.4 + 0.5 * forward(&p, 0.5);
        let expected = (w.scale() * (g1 - 0.4) - 1.3 * g1).abs();
        assert!((loss(&p, &problem, &w).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn loss_rejects_mismatched_weights() {
        let grid = Grid::new(1.0, 5).unwrap();
        let w = build_weights(0.5, &grid).unwrap();
        let p = zero_output_net(2);
        assert!(matches!(
            loss(&p, &zero_rhs(0.7, 1.0), &w),
            Err(Error::WeightsMismatch(_))
        ));
        assert!(loss_gradient(&p, &zero_rhs(0.7, 1.0), &w).is_err());
    }

    #[test]
    fn exact_exponential_residual_vanishes_with_h() {
        let problem = linear(1.0, 1.0, 1.0);
        let mut prev = f64::INFINITY;
        for n_points in [51, 101, 201, 401] {
            let grid = Grid::new(1.0, n_points).unwrap();
            let w = build_weights(1.0, &grid).unwrap();
            let exact: Vec<f64> = grid.nodes().iter().map(|t| t.exp()).collect();
            let l = loss_of_trial(&exact, &problem, &w).unwrap();
            assert!(l < prev, "{n_points}: {l} !< {prev}");
            prev = l;
        }
        // backward difference residual ≈ h e^t / 2 per node, √N nodes
        assert!(prev < 0.05);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let grid = Grid::new(1.0, 16).unwrap();
        let problem = linear(1.0, 0.8, 1.0);
        let w = build_weights(0.8, &grid).unwrap();
        let p = init_params(&LayerSpec::hidden(&[4, 4]).unwrap(), 17).with_input_scale(1.0);
        let grad = loss_gradient(&p, &problem, &w).unwrap();
        for (i, &g) in grad.iter().enumerate() {
            let mut plus = p.clone();
            plus.theta_mut()[i] += 1e-6;
            let mut minus = p.clone();
            minus.theta_mut()[i] -= 1e-6;
            let fd = (loss(&plus, &problem, &w).unwrap() - loss(&minus, &problem, &w).unwrap()) / 2e-6;
            if g.abs() > 1e-8 {
                assert!(((g - fd) / g).abs() < 1e-5, "component {i}: {g} vs {fd}");
            }
        }
    }

    #[test]
    fn gradient_continuous_at_alpha_one() {
        let grid = Grid::new(1.0, 12).unwrap();
        let p = init_params(&LayerSpec::hidden(&[4]).unwrap(), 6);
        let g1 = loss_gradient(&p, &linear(1.0, 1.0, 1.0), &build_weights(1.0, &grid).unwrap()).unwrap();
        let g2 = loss_gradient(&p, &linear(1.0, 0.999, 1.0), &build_weights(0.999, &grid).unwrap()).unwrap();
        let scale = g1.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let diff = g1.iter().zip(&g2).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-2 * scale.max(1.0), "diff {diff}, scale {scale}");
    }

    #[test]
    fn adam_zero_gradient_leaves_params() {
        let mut state = AdamState::new(3);
        state.m = vec![0.5, -0.2, 0.0];
        state.v = vec![0.1, 0.3, 0.0];
        let mut theta = vec![1.0, 2.0, 3.0];
        let cfg = AdamConfig::default();
        adam_step(&mut state, &mut theta, &[0.0; 3], &cfg).unwrap();
        assert_eq!(state.m, vec![0.9 * 0.5, 0.9 * -0.2, 0.0]);
        assert_eq!(state.v, vec![0.999 * 0.1, 0.999 * 0.3, 0.0]);
        let mut fresh = AdamState::new(3);
        let mut theta2 = vec![1.0, 2.0, 3.0];
        adam_step(&mut fresh, &mut theta2, &[0.0; 3], &cfg).unwrap();
        assert_eq!(theta2, vec![1.0, 2.0, 3.0]);
        assert_eq!(fresh.step, 1);
    }

    #[test]
    fn adam_first_step_closed_form() {
        let cfg = AdamConfig::default();
        let grad = [0.3, -2.0, 1e-9, 0.0];
        let mut theta = [0.0; 4];
        let mut state = AdamState::new(4);
        adam_step(&mut state, &mut theta, &grad, &cfg).unwrap();
        for (p, g) in theta.iter().zip(grad) {
            // m̂ = g, v̂ = g²
            let expected = -cfg.learning_rate * g / (g.abs() + cfg.eps);
            assert!((p - expected).abs() < 1e-15, "{p} vs {expected}");
        }
    }

    #[test]
    fn adam_matches_scalar_reimplementation_on_quadratic() {
        let cfg = AdamConfig {
            learning_rate: 0.1,
            ..AdamConfig::default()
        };
        let mut theta = [1.0];
        let mut state = AdamState::new(1);
        // independent scalar oracle
        let (mut x, mut m, mut v) = (1.0_f64, 0.0_f64, 0.0_f64);
        for k in 1..=10 {
            let grad = [theta[0]];
            adam_step(&mut state, &mut theta, &grad, &cfg).unwrap();
            let g = x;
            m = 0.9 * m + 0.1 * g;
            v = 0.999 * v + 0.001 * g * g;
            let mh = m / (1.0 - 0.9_f64.powi(k));
            let vh = v / (1.0 - 0.999_f64.powi(k));
            x -= 0.1 * mh / (vh.sqrt() + 1e-8);
            assert!((theta[0] - x).abs() < 1e-15, "step {k}");
        }
        assert!(theta[0] < 1.0);
    }

    #[test]
    fn adam_shape_mismatch() {
        let mut state = AdamState::new(2);
        let mut theta = [0.0; 3];
        assert!(adam_step(&mut state, &mut theta, &[0.0; 3], &AdamConfig::default()).is_err());
        let mut state = AdamState::new(3);
        assert!(adam_step(&mut state, &mut theta, &[0.0; 2], &AdamConfig::default()).is_err());
    }

    #[test]
    fn config_validation() {
        let grid = Grid::new(1.0, 5).unwrap();
        let spec = LayerSpec::hidden(&[2]).unwrap();
        let mut cfg = TrainConfig::new(spec, grid, 0);
        assert!(cfg.validate().is_err());
        cfg.epochs = 1;
        assert!(cfg.validate().is_ok());
        cfg.adam.learning_rate = 0.0;
        assert!(cfg.validate().is_err());
        cfg.adam.learning_rate = 1e-3;
        cfg.adam.beta2 = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn single_epoch_training() {
        let grid = Grid::new(1.0, 9).unwrap();
        let cfg = TrainConfig::new(LayerSpec::hidden(&[4]).unwrap(), grid, 1);
        let (params, trace) = train(&linear(1.0, 0.9, 1.0), &cfg).unwrap();
        assert_eq!(trace.loss_history.len(), 1);
        assert_eq!(trace.u_hat[0], 1.0);
        assert_ne!(params.theta(), cfg.initial_params().theta());
    }

    #[test]
    fn training_is_deterministic_and_reduces_loss() {
        let grid = Grid::new(1.0, 21).unwrap();
        let mut cfg = TrainConfig::new(LayerSpec::hidden(&[8]).unwrap(), grid, 400);
        cfg.adam.learning_rate = 1e-2;
        cfg.seed = 3;
        let problem = linear(1.0, 0.8, 1.0);
        let (_, a) = train(&problem, &cfg).unwrap();
        let (_, b) = train(&problem, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.final_loss < a.loss_history[0] / 10.0);
    }

    #[test]
    fn non_finite_loss_is_reported_with_epoch() {
        let grid = Grid::new(1.0, 5).unwrap();
        let cfg = TrainConfig::new(LayerSpec::hidden(&[2]).unwrap(), grid, 5);
        let problem = ProblemSpec::new("bad", 1.0, 1.0, |_, _| f64::NAN, |_, _| 0.0).unwrap();
        assert!(matches!(
            train(&problem, &cfg),
            Err(Error::NonFiniteLoss { epoch: 0, .. })
        ));
    }
}
