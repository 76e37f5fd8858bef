//! L1 discretization of the Caputo derivative on a uniform grid.
//!
//! For `0 < α ≤ 1` the operator at node `n` is
//!
//! ```text
//! D^α x(t_n) ≈ 1 / (h^α Γ(2-α)) · Σ_{k=0}^{n-1} (x_{k+1} - x_k) Δ_{n,k},
//! Δ_{n,k} = (n-k)^{1-α} - (n-k-1)^{1-α}
//! ```
//!
//! with `0^{1-α} = 0` for every α, which makes `α = 1` the plain backward
//! difference. Node 0 carries an empty sum and is reported as 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::gamma;

/// Uniform partition `t_k = k·h` of `[0, t_end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridShape", into = "GridShape")]
pub struct Grid {
    t_end: f64,
    n_points: usize,
    h: f64,
    nodes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridShape {
    t_end: f64,
    n_points: usize,
}

impl TryFrom<GridShape> for Grid {
    type Error = Error;

    fn try_from(shape: GridShape) -> Result<Self> {
        Grid::new(shape.t_end, shape.n_points)
    }
}

impl From<Grid> for GridShape {
    fn from(grid: Grid) -> Self {
        GridShape {
            t_end: grid.t_end,
            n_points: grid.n_points,
        }
    }
}

impl Grid {
    pub fn new(t_end: f64, n_points: usize) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "t_end must be positive and finite, got {t_end}"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {n_points}")));
        }
        let intervals = (n_points - 1) as f64;
        let h = t_end / intervals;
        let mut nodes: Vec<f64> = (0..n_points).map(|k| k as f64 * h).collect();
        nodes[n_points - 1] = t_end;
        Ok(Grid {
            t_end,
            n_points,
            h,
            nodes,
        })
    }

    /// Same horizon, step halved.
    pub fn refined(&self) -> Grid {
        Grid::new(self.t_end, 2 * self.n_points - 1).expect("refining a valid grid")
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// L1 weights for one `(α, grid)` pair.
///
/// `Δ_{n,k}` depends only on `n - k`, so the triangular table is held as the
/// kernel `Δ_j = j^{1-α} - (j-1)^{1-α}` for `j = 1..n_points`.
#[derive(Debug, Clone, PartialEq)]
pub struct CaputoWeights {
    alpha: f64,
    grid: Grid,
    kernel: Vec<f64>,
    scale: f64,
}

/// Checks `α ∈ (0, 1]`.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Builds the L1 weights and the prefactor `1 / (h^α Γ(2-α))`.
pub fn build_weights(alpha: f64, grid: &Grid) -> Result<CaputoWeights> {
    check_alpha(alpha)?;
    let exponent = 1.0 - alpha;
    let power = |j: usize| if j == 0 { 0.0 } else { (j as f64).powf(exponent) };
    let mut kernel = vec![0.0; grid.n_points()];
    for (j, slot) in kernel.iter_mut().enumerate().skip(1) {
        *slot = if alpha == 1.0 {
            if j == 1 {
                1.0
            } else {
                0.0
            }
        } else {
            power(j) - power(j - 1)
        };
    }
    let scale = 1.0 / (grid.h().powf(alpha) * gamma(2.0 - alpha)?);
    Ok(CaputoWeights {
        alpha,
        grid: grid.clone(),
        kernel,
        scale,
    })
}

impl CaputoWeights {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `Δ_{n,k}` for `0 ≤ k < n < n_points`.
    pub fn delta(&self, n: usize, k: usize) -> f64 {
        assert!(k < n && n < self.grid.n_points(), "delta index ({n}, {k}) out of range");
        self.kernel[n - k]
    }

    /// Discrete Caputo derivative at every node; entry 0 is 0.
    pub fn apply(&self, samples: &[f64]) -> Result<Vec<f64>> {
        let n_points = self.grid.n_points();
        if samples.len() != n_points {
            return Err(Error::LengthMismatch {
                expected: n_points,
                got: samples.len(),
            });
        }
        let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
        let mut out = vec![0.0; n_points];
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = self.scale * self.history_sum(&diffs, n, n);
        }
        Ok(out)
    }

    /// `Σ_{k<upto} (x_{k+1}-x_k) Δ_{n,k}` given the forward differences of `x`.
    ///
    /// `upto = n` is the full sum; `upto = n - 1` drops the newest increment,
    /// which is what a marching scheme needs.
    pub fn history_sum(&self, diffs: &[f64], n: usize, upto: usize) -> f64 {
        debug_assert!(upto <= n && n < self.grid.n_points());
        diffs[..upto]
            .iter()
            .enumerate()
            .map(|(k, d)| d * self.kernel[n - k])
            .sum()
    }

    /// Transpose of [`apply`](Self::apply): maps a cotangent on the output
    /// nodes to a cotangent on the samples. Entry 0 of `cotangent` is ignored.
    pub fn apply_transpose(&self, cotangent: &[f64]) -> Result<Vec<f64>> {
        let n_points = self.grid.n_points();
        if cotangent.len() != n_points {
            return Err(Error::LengthMismatch {
                expected: n_points,
                got: cotangent.len(),
            });
        }
        // q[k] = scale · Σ_{n>k} c_n Δ_{n,k} is the cotangent of the k-th increment.
        let mut q = vec![0.0; n_points - 1];
        for (k, qk) in q.iter_mut().enumerate() {
            let acc: f64 = (k + 1..n_points).map(|n| cotangent[n] * self.kernel[n - k]).sum();
            *qk = self.scale * acc;
        }
        let mut out = vec![0.0; n_points];
        for (k, &qk) in q.iter().enumerate() {
            out[k + 1] += qk;
            out[k] -= qk;
        }
        Ok(out)
    }
}
