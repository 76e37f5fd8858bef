//! Time-marching reference solver built on the same L1 weights.
//!
//! Step `n` solves `scale · Σ_{k<n} (u_{k+1} - u_k) Δ_{n,k} = f(u*, t_n)` for
//! `u_n`. Since `Δ_{n,n-1} = 1` this isolates
//! `u_n = u_{n-1} + f(u*, t_n)/scale - Σ_{k<n-1} (u_{k+1} - u_k) Δ_{n,k}`,
//! with `u* = u_{n-1}` (explicit) or `u* = u_n` by fixed-point iteration (implicit).

use serde::{Deserialize, Serialize};

use crate::caputo::{build_weights, Grid};
use crate::error::{Error, Result};
use crate::training::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    L1Explicit,
    L1Implicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub grid: Grid,
    pub scheme: Scheme,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
}

impl OracleConfig {
    /// Implicit scheme, tolerance 1e-12, at most 100 iterations.
    pub fn implicit(grid: Grid) -> Self {
        OracleConfig {
            grid,
            scheme: Scheme::L1Implicit,
            fixed_point_tol: 1e-12,
            fixed_point_max_iter: 100,
        }
    }

    pub fn explicit(grid: Grid) -> Self {
        OracleConfig {
            scheme: Scheme::L1Explicit,
            ..Self::implicit(grid)
        }
    }

    pub fn with_grid(&self, grid: Grid) -> Self {
        OracleConfig { grid, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.fixed_point_tol.is_nan() || self.fixed_point_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "fixed-point tolerance must be positive, got {}",
                self.fixed_point_tol
            )));
        }
        if self.fixed_point_max_iter == 0 {
            return Err(Error::InvalidConfig(
                "fixed-point iteration limit must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Marches the problem across `config.grid`; returns `u` at every node.
pub fn solve(problem: &ProblemSpec, config: &OracleConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let weights = build_weights(problem.alpha, &config.grid)?;
    let nodes = config.grid.nodes();
    let inv_scale = 1.0 / weights.scale();
    let mut u = vec![0.0; nodes.len()];
    let mut diffs = vec![0.0; nodes.len() - 1];
    u[0] = problem.u0;
    for n in 1..nodes.len() {
        let t = nodes[n];
        let base = u[n - 1] - weights.history_sum(&diffs, n, n - 1);
        let next = match config.scheme {
            Scheme::L1Explicit => base + problem.f(u[n - 1], t) * inv_scale,
            Scheme::L1Implicit => {
                let mut x = u[n - 1];
                let mut converged = false;
                for _ in 0..config.fixed_point_max_iter {
                    let x_new = base + problem.f(x, t) * inv_scale;
                    let step = (x_new - x).abs();
                    x = x_new;
                    if step <= config.fixed_point_tol * (1.0 + x.abs()) {
                        converged = true;
                        break;
                    }
                }
                if !converged || !x.is_finite() {
                    return Err(Error::FixedPointNonConvergence {
                        step: n,
                        iterations: config.fixed_point_max_iter,
                    });
                }
                x
            }
        };
        u[n] = next;
        diffs[n - 1] = next - u[n - 1];
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub coarse_points: usize,
    pub fine_points: usize,
    /// Largest `|u_h - u_{h/2}|` over the coarse nodes.
    pub max_discrepancy: f64,
}

/// Solves on `base_grid` and on its refinement and compares at shared nodes.
pub fn self_convergence(problem: &ProblemSpec, base_grid: &Grid, scheme: Scheme) -> Result<ConvergenceReport> {
    let config = OracleConfig {
        scheme,
        ..OracleConfig::implicit(base_grid.clone())
    };
    self_convergence_with(problem, &config)
}

pub fn self_convergence_with(problem: &ProblemSpec, config: &OracleConfig) -> Result<ConvergenceReport> {
    let fine_grid = config.grid.refined();
    let coarse = solve(problem, config)?;
    let fine = solve(problem, &config.with_grid(fine_grid.clone()))?;
    let max_discrepancy = coarse
        .iter()
        .zip(fine.iter().step_by(2))
        .map(|(c, f)| (c - f).abs())
        .fold(0.0, f64::max);
    Ok(ConvergenceReport {
        coarse_points: config.grid.n_points(),
        fine_points: fine_grid.n_points(),
        max_discrepancy,
    })
}

/// Linear interpolation of `values` (on `grid`) at `t ∈ [0, t_end]`.
pub fn interpolate(grid: &Grid, values: &[f64], t: f64) -> f64 {
    let pos = (t / grid.h()).clamp(0.0, (grid.n_points() - 1) as f64);
    let nearest = pos.round();
    if (pos - nearest).abs() < 1e-9 {
        return values[nearest as usize];
    }
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    values[lo] * (1.0 - frac) + values[lo + 1] * frac
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{exponential_model, logistic_model};

    fn max_err(grid: &Grid, u: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
        grid.nodes()
            .iter()
            .zip(u)
            .map(|(&t, &v)| (v - exact(t)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_rhs_stays_constant() {
        let p = ProblemSpec::new("zero", 0.6, 1.25, |_, _| 0.0, |_, _| 0.0).unwrap();
        for scheme in [Scheme::L1Explicit, Scheme::L1Implicit] {
            let cfg = OracleConfig {
                scheme,
                ..OracleConfig::implicit(Grid::new(1.0, 50).unwrap())
            };
            assert!(solve(&p, &cfg).unwrap().iter().all(|&u| u == 1.25));
            let report = self_convergence(&p, &Grid::new(1.0, 20).unwrap(), scheme).unwrap();
            assert_eq!(report.max_discrepancy, 0.0);
        }
    }

    #[test]
    fn explicit_alpha_one_is_first_order() {
        let p = exponential_model(1.0, 1.0, 1.0).unwrap();
        let mut errors = Vec::new();
        for n_points in [101, 201, 401] {
            let grid = Grid::new(1.0, n_points).unwrap();
            let u = solve(&p, &OracleConfig::explicit(grid.clone())).unwrap();
            errors.push(max_err(&grid, &u, f64::exp));
        }
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn fractional_exponential_approaches_mittag_leffler() {
        let p = exponential_model(1.0, 1.0, 0.7).unwrap();
        let exact = p.analytic.clone().unwrap();
        let mut prev = f64::INFINITY;
        for n_points in [51, 101, 201] {
            let grid = Grid::new(1.0, n_points).unwrap();
            let u = solve(&p, &OracleConfig::implicit(grid)).unwrap();
            let err = (u[n_points - 1] - exact(1.0).unwrap()).abs();
            assert!(err < prev);
            prev = err;
        }
    }

    #[test]
    fn implicit_reports_non_convergence() {
        let p = logistic_model(10.0, 1.0, 0.01, 1.0).unwrap();
        let cfg = OracleConfig {
            fixed_point_max_iter: 1,
            ..OracleConfig::implicit(Grid::new(2.0, 11).unwrap())
        };
        assert!(matches!(
            solve(&p, &cfg),
            Err(Error::FixedPointNonConvergence { step: 1, .. })
        ));
    }

    #[test]
    fn config_validation() {
        let grid = Grid::new(1.0, 5).unwrap();
        let mut cfg = OracleConfig::implicit(grid);
        cfg.fixed_point_tol = 0.0;
        assert!(cfg.validate().is_err());
        cfg.fixed_point_tol = 1e-12;
        cfg.fixed_point_max_iter = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn explicit_self_convergence_halves() {
        let p = exponential_model(1.0, 1.0, 1.0).unwrap();
        let a = self_convergence(&p, &Grid::new(1.0, 101).unwrap(), Scheme::L1Explicit).unwrap();
        let b = self_convergence(&p, &Grid::new(1.0, 201).unwrap(), Scheme::L1Explicit).unwrap();
        assert_eq!((a.coarse_points, a.fine_points), (101, 201));
        let ratio = a.max_discrepancy / b.max_discrepancy;
        assert!((1.5..=3.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn interpolation_hits_nodes_exactly() {
        let grid = Grid::new(2.0, 5).unwrap();
        let v = [1.0, 2.0, 4.0, 8.0, 16.0];
        assert_eq!(interpolate(&grid, &v, 1.0), 4.0);
        assert_eq!(interpolate(&grid, &v, 2.0), 16.0);
        assert!((interpolate(&grid, &v, 0.25) - 1.5).abs() < 1e-15);
    }
}
