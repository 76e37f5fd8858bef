//! Dense scalar-to-scalar feedforward network.
//!
//! Layer `j` maps `x` to `y_j = Σ_i x_i w_ij + b_j`, followed by the hidden
//! activation (identity on the output layer). All weights and biases live in
//! one flat vector `θ`; per layer the `fan_in × fan_out` weight block comes
//! first (row `i` = input unit), then the `fan_out` biases.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::caputo::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Sigmoid,
    Tanh,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, y: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + (-y).exp()),
            Activation::Tanh => y.tanh(),
            Activation::Identity => y,
        }
    }

    /// Derivative expressed through the activation's output `z = φ(y)`.
    #[inline]
    pub fn derivative_from_output(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => z * (1.0 - z),
            Activation::Tanh => 1.0 - z * z,
            Activation::Identity => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayerSpecShape")]
pub struct LayerSpec {
    widths: Vec<usize>,
    activation: Activation,
}

#[derive(Deserialize)]
struct LayerSpecShape {
    widths: Vec<usize>,
    #[serde(default)]
    activation: Activation,
}

impl TryFrom<LayerSpecShape> for LayerSpec {
    type Error = Error;

    fn try_from(shape: LayerSpecShape) -> Result<Self> {
        LayerSpec::new(shape.widths, shape.activation)
    }
}

impl LayerSpec {
    /// `widths` runs input to output, e.g. `[1, 42, 42, 1]`.
    pub fn new(widths: Vec<usize>, activation: Activation) -> Result<Self> {
        if widths.len() < 3 {
            return Err(Error::InvalidLayers(format!(
                "need input, at least one hidden layer and output; got widths {widths:?}"
            )));
        }
        if widths[0] != 1 || widths[widths.len() - 1] != 1 {
            return Err(Error::InvalidLayers(format!(
                "input and output widths must be 1; got {widths:?}"
            )));
        }
        if widths.contains(&0) {
            return Err(Error::InvalidLayers(format!("zero-width layer in {widths:?}")));
        }
        Ok(LayerSpec { widths, activation })
    }

    /// Sigmoid network with the given hidden widths.
    pub fn hidden(hidden: &[usize]) -> Result<Self> {
        let mut widths = Vec::with_capacity(hidden.len() + 2);
        widths.push(1);
        widths.extend_from_slice(hidden);
        widths.push(1);
        LayerSpec::new(widths, Activation::Sigmoid)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn n_layers(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn param_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    fn layer_activation(&self, layer: usize) -> Activation {
        if layer + 1 == self.n_layers() {
            Activation::Identity
        } else {
            self.activation
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct LayerLayout {
    fan_in: usize,
    fan_out: usize,
    weights: usize,
    bias: usize,
}

fn layouts(spec: &LayerSpec) -> Vec<LayerLayout> {
    let mut offset = 0;
    spec.widths
        .windows(2)
        .map(|w| {
            let layout = LayerLayout {
                fan_in: w[0],
                fan_out: w[1],
                weights: offset,
                bias: offset + w[0] * w[1],
            };
            offset += w[0] * w[1] + w[1];
            layout
        })
        .collect()
}

/// Network weights plus the input scaling applied to `t` before the first layer.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    spec: LayerSpec,
    theta: Vec<f64>,
    input_scale: f64,
}

impl NetworkParams {
    /// Rebuilds parameters from a flat vector.
    pub fn from_theta(spec: LayerSpec, theta: Vec<f64>) -> Result<Self> {
        let expected = spec.param_count();
        if theta.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: theta.len(),
            });
        }
        Ok(NetworkParams {
            spec,
            theta,
            input_scale: 1.0,
        })
    }

    /// All-zero parameters.
    pub fn zeros(spec: LayerSpec) -> Self {
        let theta = vec![0.0; spec.param_count()];
        NetworkParams {
            spec,
            theta,
            input_scale: 1.0,
        }
    }

    /// The network sees `t * scale` instead of `t`.
    pub fn with_input_scale(mut self, scale: f64) -> Self {
        self.input_scale = scale;
        self
    }

    pub fn spec(&self) -> &LayerSpec {
        &self.spec
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_mut(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    pub fn into_theta(self) -> Vec<f64> {
        self.theta
    }

    pub fn input_scale(&self) -> f64 {
        self.input_scale
    }

    /// Weight `w_ij` of `layer` (input unit `i`, output unit `j`).
    pub fn weight(&self, layer: usize, i: usize, j: usize) -> f64 {
        let l = layouts(&self.spec)[layer];
        self.theta[l.weights + i * l.fan_out + j]
    }

    pub fn weight_mut(&mut self, layer: usize, i: usize, j: usize) -> &mut f64 {
        let l = layouts(&self.spec)[layer];
        &mut self.theta[l.weights + i * l.fan_out + j]
    }

    pub fn bias(&self, layer: usize, j: usize) -> f64 {
        let l = layouts(&self.spec)[layer];
        self.theta[l.bias + j]
    }

    pub fn bias_mut(&mut self, layer: usize, j: usize) -> &mut f64 {
        let l = layouts(&self.spec)[layer];
        &mut self.theta[l.bias + j]
    }
}

/// Glorot-uniform weights, zero biases, driven by a ChaCha8 stream seeded with `seed`.
pub fn init_params(spec: &LayerSpec, seed: u64) -> NetworkParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = NetworkParams::zeros(spec.clone());
    for l in layouts(spec) {
        let bound = (6.0 / (l.fan_in + l.fan_out) as f64).sqrt();
        for w in &mut params.theta[l.weights..l.bias] {
            *w = rng.gen_range(-bound..bound);
        }
    }
    params
}

/// Scalar network output at time `t`.
pub fn forward(params: &NetworkParams, t: f64) -> f64 {
    forward_nodes(params, &[t])[0]
}

/// Network output at every grid node.
pub fn forward_batch(params: &NetworkParams, grid: &Grid) -> Vec<f64> {
    forward_nodes(params, grid.nodes())
}

/// Network output at arbitrary times.
pub fn forward_nodes(params: &NetworkParams, times: &[f64]) -> Vec<f64> {
    let tape = Tape::record(params, times);
    tape.activations.last().cloned().unwrap_or_default()
}

/// Gradient of `Σ_n cotangent[n] · forward(t_n)` with respect to `θ`.
pub fn backward(params: &NetworkParams, grid: &Grid, output_cotangent: &[f64]) -> Result<Vec<f64>> {
    backward_nodes(params, grid.nodes(), output_cotangent)
}

pub fn backward_nodes(params: &NetworkParams, times: &[f64], output_cotangent: &[f64]) -> Result<Vec<f64>> {
    if output_cotangent.len() != times.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: output_cotangent.len(),
        });
    }
    let tape = Tape::record(params, times);
    Ok(tape.backward(params, output_cotangent))
}

/// Forward outputs and the parameter gradient in one pass.
pub(crate) fn forward_backward<F>(params: &NetworkParams, times: &[f64], cotangent: F) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: FnOnce(&[f64]) -> Result<Vec<f64>>,
{
    let tape = Tape::record(params, times);
    let outputs = tape.activations.last().cloned().unwrap_or_default();
    let cot = cotangent(&outputs)?;
    if cot.len() != times.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: cot.len(),
        });
    }
    let grad = tape.backward(params, &cot);
    Ok((outputs, grad))
}

/// Per-layer activations for a batch of inputs, node-major (`[node][unit]`).
struct Tape {
    n_nodes: usize,
    layouts: Vec<LayerLayout>,
    /// `activations[0]` is the scaled input, `activations[l + 1]` the output of layer `l`.
    activations: Vec<Vec<f64>>,
}

impl Tape {
    fn record(params: &NetworkParams, times: &[f64]) -> Tape {
        let layouts = layouts(&params.spec);
        let n_nodes = times.len();
        let mut activations = Vec::with_capacity(layouts.len() + 1);
        activations.push(times.iter().map(|t| t * params.input_scale).collect::<Vec<_>>());
        for (layer, l) in layouts.iter().enumerate() {
            let act = params.spec.layer_activation(layer);
            let w = &params.theta[l.weights..l.bias];
            let b = &params.theta[l.bias..l.bias + l.fan_out];
            let input = &activations[layer];
            let mut out = vec![0.0; n_nodes * l.fan_out];
            for (x, y) in input.chunks_exact(l.fan_in).zip(out.chunks_exact_mut(l.fan_out)) {
                y.copy_from_slice(b);
                for (&xi, row) in x.iter().zip(w.chunks_exact(l.fan_out)) {
                    for (yj, &wij) in y.iter_mut().zip(row) {
                        *yj += xi * wij;
                    }
                }
                if act != Activation::Identity {
                    for yj in y.iter_mut() {
                        *yj = act.apply(*yj);
                    }
                }
            }
            activations.push(out);
        }
        Tape {
            n_nodes,
            layouts,
            activations,
        }
    }

    fn backward(&self, params: &NetworkParams, output_cotangent: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; params.theta.len()];
        // cotangent of the pre-activation of the current layer; output layer is identity
        let mut delta = output_cotangent.to_vec();
        for layer in (0..self.layouts.len()).rev() {
            let l = self.layouts[layer];
            let input = &self.activations[layer];
            let w = &params.theta[l.weights..l.bias];
            {
                let (gw, gb) = grad[l.weights..l.bias + l.fan_out].split_at_mut(l.fan_in * l.fan_out);
                for (x, d) in input.chunks_exact(l.fan_in).zip(delta.chunks_exact(l.fan_out)) {
                    for (gbj, &dj) in gb.iter_mut().zip(d) {
                        *gbj += dj;
                    }
                    for (&xi, grow) in x.iter().zip(gw.chunks_exact_mut(l.fan_out)) {
                        for (g, &dj) in grow.iter_mut().zip(d) {
                            *g += xi * dj;
                        }
                    }
                }
            }
            if layer == 0 {
                break;
            }
            let prev_act = params.spec.layer_activation(layer - 1);
            // w transposed to (fan_out, fan_in) so the update below is contiguous
            let mut wt = vec![0.0; w.len()];
            for (i, row) in w.chunks_exact(l.fan_out).enumerate() {
                for (j, &wij) in row.iter().enumerate() {
                    wt[j * l.fan_in + i] = wij;
                }
            }
            let mut prev = vec![0.0; self.n_nodes * l.fan_in];
            for ((d, p), z) in delta
                .chunks_exact(l.fan_out)
                .zip(prev.chunks_exact_mut(l.fan_in))
                .zip(input.chunks_exact(l.fan_in))
            {
                for (&dj, col) in d.iter().zip(wt.chunks_exact(l.fan_in)) {
                    for (pi, &wij) in p.iter_mut().zip(col) {
                        *pi += wij * dj;
                    }
                }
                for (pi, &zi) in p.iter_mut().zip(z) {
                    *pi *= prev_act.derivative_from_output(zi);
                }
            }
            delta = prev;
        }
        grad
    }
}

/// On-disk form of trained weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub spec: LayerSpec,
    pub seed: u64,
    pub theta: Vec<f64>,
    pub normalize_input: bool,
    /// Horizon used for input normalization.
    pub t_end: f64,
}

impl WeightFile {
    pub fn new(params: &NetworkParams, seed: u64, normalize_input: bool, t_end: f64) -> Self {
        WeightFile {
            spec: params.spec.clone(),
            seed,
            theta: params.theta.clone(),
            normalize_input,
            t_end,
        }
    }

    pub fn to_params(&self) -> Result<NetworkParams> {
        let params = NetworkParams::from_theta(self.spec.clone(), self.theta.clone())?;
        Ok(if self.normalize_input {
            params.with_input_scale(1.0 / self.t_end)
        } else {
            params
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
