//! Experiment runs: train over an α sweep, compare against a reference,
//! and write CSV traces, loss histories, and weight files.
//!
//! Layout of an output directory for model `m`:
//!
//! ```text
//! manifest.json
//! m_alpha{α}_solution.csv   t,u_nn,u_ref,abs_err
//! m_alpha{α}_loss.csv       epoch,loss
//! m_alpha{α}_weights.json
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::caputo::{check_alpha, Grid};
use crate::error::{Error, Result};
use crate::models::{GrowthParams, ModelKind};
use crate::network::{Activation, LayerSpec, WeightFile};
use crate::oracle::{interpolate, solve, OracleConfig};
use crate::training::{train_with_progress, AdamConfig, ProblemSpec, SolutionTrace, TrainConfig};

/// Seed used by the reference runs and the acceptance suite.
pub const DEFAULT_SEED: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub model: ModelKind,
    #[serde(flatten)]
    pub params: GrowthParams,
    pub alphas: Vec<f64>,
    pub widths: Vec<usize>,
    pub activation: Activation,
    pub t_end: f64,
    pub nodes: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub seed: u64,
    pub normalize_input: bool,
    /// Oracle resolution on `[0, t_end]`; 0 disables the oracle.
    pub oracle_nodes: usize,
    pub out_dir: PathBuf,
}

/// Reference configuration for one of `exp`, `logistic`, `harvest`.
pub fn defaults_for(name: &str) -> Result<RunManifest> {
    let model: ModelKind = name.parse()?;
    let (widths, t_end, epochs) = match model {
        ModelKind::Exponential => (vec![1, 42, 42, 1], 1.0, 20_000),
        ModelKind::Logistic | ModelKind::HarvestedLogistic => (vec![1, 8, 42, 64, 64, 42, 8, 1], 2.0, 50_000),
    };
    let adam = AdamConfig::default();
    Ok(RunManifest {
        model,
        params: GrowthParams::reference(model),
        alphas: vec![1.0, 0.9, 0.8, 0.7],
        widths,
        activation: Activation::Sigmoid,
        t_end,
        nodes: 101,
        epochs,
        learning_rate: adam.learning_rate,
        beta1: adam.beta1,
        beta2: adam.beta2,
        eps: adam.eps,
        seed: DEFAULT_SEED,
        normalize_input: true,
        oracle_nodes: 2001,
        out_dir: PathBuf::from("runs").join(model.name()),
    })
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::InvalidConfig("alpha list is empty".into()));
        }
        for &alpha in &self.alphas {
            check_alpha(alpha)?;
        }
        if self.oracle_nodes == 1 {
            return Err(Error::InvalidConfig(
                "oracle needs at least 2 nodes (or 0 to disable)".into(),
            ));
        }
        self.train_config()?.validate()?;
        // parameter checks live in the model constructors
        self.problem(self.alphas[0])?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.t_end, self.nodes)
    }

    pub fn layer_spec(&self) -> Result<LayerSpec> {
        LayerSpec::new(self.widths.clone(), self.activation)
    }

    pub fn train_config(&self) -> Result<TrainConfig> {
        Ok(TrainConfig {
            layers: self.layer_spec()?,
            grid: self.grid()?,
            epochs: self.epochs,
            adam: AdamConfig {
                learning_rate: self.learning_rate,
                beta1: self.beta1,
                beta2: self.beta2,
                eps: self.eps,
            },
            seed: self.seed,
            normalize_input: self.normalize_input,
        })
    }

    pub fn problem(&self, alpha: f64) -> Result<ProblemSpec> {
        self.params.problem(self.model, alpha)
    }

    pub fn oracle_config(&self) -> Result<Option<OracleConfig>> {
        if self.oracle_nodes == 0 {
            return Ok(None);
        }
        Ok(Some(OracleConfig::implicit(Grid::new(self.t_end, self.oracle_nodes)?)))
    }

    fn stem(&self, alpha: f64) -> String {
        format!("{}_alpha{}", self.model.name(), alpha)
    }

    pub fn solution_path(&self, alpha: f64) -> PathBuf {
        self.out_dir.join(format!("{}_solution.csv", self.stem(alpha)))
    }

    pub fn loss_path(&self, alpha: f64) -> PathBuf {
        self.out_dir.join(format!("{}_loss.csv", self.stem(alpha)))
    }

    pub fn weights_path(&self, alpha: f64) -> PathBuf {
        self.out_dir.join(format!("{}_weights.json", self.stem(alpha)))
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.out_dir.join("manifest.json")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceKind {
    Analytic,
    Oracle,
    None,
}

impl ReferenceKind {
    pub fn name(self) -> &'static str {
        match self {
            ReferenceKind::Analytic => "analytic",
            ReferenceKind::Oracle => "oracle",
            ReferenceKind::None => "none",
        }
    }
}

/// Reference solution at the training nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub kind: ReferenceKind,
    pub values: Option<Vec<f64>>,
}

/// Closed-form solution if the problem has one, else the implicit oracle
/// interpolated onto `grid`.
pub fn reference_values(problem: &ProblemSpec, grid: &Grid, oracle: Option<&OracleConfig>) -> Result<Reference> {
    if let Some(values) = problem.analytic_values(grid.nodes()) {
        return Ok(Reference {
            kind: ReferenceKind::Analytic,
            values: Some(values?),
        });
    }
    match oracle {
        Some(config) => {
            let fine = solve(problem, config)?;
            let values = grid
                .nodes()
                .iter()
                .map(|&t| interpolate(&config.grid, &fine, t))
                .collect();
            Ok(Reference {
                kind: ReferenceKind::Oracle,
                values: Some(values),
            })
        }
        None => Ok(Reference {
            kind: ReferenceKind::None,
            values: None,
        }),
    }
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (sum / a.len() as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub t: f64,
    pub u_nn: f64,
    pub u_ref: Option<f64>,
    pub abs_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossRow {
    pub epoch: usize,
    pub loss: f64,
}

pub fn solution_rows(trace: &SolutionTrace, reference: Option<&[f64]>) -> Vec<SolutionRow> {
    trace
        .nodes
        .iter()
        .zip(&trace.u_hat)
        .enumerate()
        .map(|(n, (&t, &u_nn))| {
            let u_ref = reference.map(|r| r[n]);
            SolutionRow {
                t,
                u_nn,
                u_ref,
                abs_err: u_ref.map(|r| (u_nn - r).abs()),
            }
        })
        .collect()
}

pub fn loss_rows(trace: &SolutionTrace) -> Vec<LossRow> {
    trace
        .loss_history
        .iter()
        .enumerate()
        .map(|(epoch, &loss)| LossRow { epoch, loss })
        .collect()
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    let rows = reader.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

pub fn write_solution_csv(path: &Path, rows: &[SolutionRow]) -> Result<()> {
    write_rows(path, rows)
}

pub fn read_solution_csv(path: &Path) -> Result<Vec<SolutionRow>> {
    read_rows(path)
}

pub fn write_loss_csv(path: &Path, rows: &[LossRow]) -> Result<()> {
    write_rows(path, rows)
}

pub fn read_loss_csv(path: &Path) -> Result<Vec<LossRow>> {
    read_rows(path)
}

/// Outcome of one α in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub reference: ReferenceKind,
    pub rmse: Option<f64>,
    pub trace: SolutionTrace,
    pub reference_values: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl AlphaSummary {
    pub fn summary_line(&self, model: ModelKind) -> String {
        let err = match self.rmse {
            Some(r) => format!("rmse={r:.3e} vs {}", self.reference.name()),
            None => "rmse=n/a".to_string(),
        };
        format!(
            "model={model} alpha={} loss {:.3e} -> {:.3e} {err}",
            self.alpha, self.initial_loss, self.final_loss
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub runs: Vec<AlphaSummary>,
}

/// Trains one α and computes its reference; writes nothing.
pub fn run_alpha<P>(
    manifest: &RunManifest,
    alpha: f64,
    progress: P,
) -> Result<(crate::network::NetworkParams, AlphaSummary)>
where
    P: FnMut(usize, f64),
{
    let problem = manifest.problem(alpha)?;
    let config = manifest.train_config()?;
    let (params, trace) = train_with_progress(&problem, &config, progress)?;
    let oracle = manifest.oracle_config()?;
    let reference = reference_values(&problem, &config.grid, oracle.as_ref())?;
    let mut warnings = Vec::new();
    if let Some(values) = &reference.values {
        if let Some(min) = values.iter().copied().reduce(f64::min).filter(|m| *m < 0.0) {
            warnings.push(format!("reference solution goes negative (min {min:.4e})"));
        }
    }
    if let Some(min) = trace.u_hat.iter().copied().reduce(f64::min).filter(|m| *m < 0.0) {
        warnings.push(format!("network solution goes negative (min {min:.4e})"));
    }
    let summary = AlphaSummary {
        alpha,
        initial_loss: trace.loss_history[0],
        final_loss: trace.final_loss,
        reference: reference.kind,
        rmse: reference.values.as_deref().map(|r| rmse(&trace.u_hat, r)),
        trace,
        reference_values: reference.values,
        warnings,
    };
    Ok((params, summary))
}

/// Runs the full sweep and writes every artifact into `manifest.out_dir`.
pub fn run(manifest: &RunManifest) -> Result<RunReport> {
    run_with_progress(manifest, |_, _, _| {})
}

/// [`run`] with a callback receiving `(alpha, epoch, loss)`.
pub fn run_with_progress<P>(manifest: &RunManifest, mut progress: P) -> Result<RunReport>
where
    P: FnMut(f64, usize, f64),
{
    manifest.validate()?;
    fs::create_dir_all(&manifest.out_dir).map_err(|e| Error::io(&manifest.out_dir, e))?;
    manifest.save(&manifest.manifest_path())?;
    let mut runs = Vec::with_capacity(manifest.alphas.len());
    for &alpha in &manifest.alphas {
        let (params, summary) = run_alpha(manifest, alpha, |epoch, loss| progress(alpha, epoch, loss))?;
        let rows = solution_rows(&summary.trace, summary.reference_values.as_deref());
        write_solution_csv(&manifest.solution_path(alpha), &rows)?;
        write_loss_csv(&manifest.loss_path(alpha), &loss_rows(&summary.trace))?;
        WeightFile::new(&params, manifest.seed, manifest.normalize_input, manifest.t_end)
            .save(&manifest.weights_path(alpha))?;
        runs.push(summary);
    }
    Ok(RunReport {
        manifest: manifest.clone(),
        runs,
    })
}
