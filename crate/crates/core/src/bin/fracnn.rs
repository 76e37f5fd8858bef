//! Command-line front end: trains an α sweep for one growth model and writes
//! solution CSVs, loss histories, and weight files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracnn::run::{defaults_for, run_with_progress};
use fracnn::Error;

#[derive(Debug, Parser)]
#[command(
    name = "fracnn",
    version,
    about = "Train a network solution of a fractional growth model"
)]
struct Args {
    /// Growth model: exp, logistic, harvest
    #[arg(long)]
    model: String,
    /// Comma-separated fractional orders, each in (0, 1]
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Growth rate
    #[arg(long)]
    a: Option<f64>,
    /// Carrying capacity
    #[arg(long)]
    cap: Option<f64>,
    /// Harvesting amplitude
    #[arg(long)]
    b: Option<f64>,
    /// Initial value
    #[arg(long)]
    u0: Option<f64>,
    /// Time horizon
    #[arg(long)]
    t_end: Option<f64>,
    /// Training grid nodes, including t = 0
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Adam learning rate
    #[arg(long)]
    lr: Option<f64>,
    /// Comma-separated layer widths including input and output, e.g. 1,42,42,1
    #[arg(long, value_delimiter = ',')]
    widths: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Oracle grid nodes (0 disables the oracle)
    #[arg(long)]
    oracle_nodes: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the loss every this many epochs (0 = only the summary)
    #[arg(long, default_value_t = 0)]
    log_every: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn execute(args: Args) -> Result<(), Error> {
    let mut manifest = defaults_for(&args.model)?;
    if let Some(alphas) = args.alpha {
        manifest.alphas = alphas;
    }
    if let Some(a) = args.a {
        manifest.params.a = a;
    }
    if let Some(cap) = args.cap {
        manifest.params.capacity = cap;
    }
    if let Some(b) = args.b {
        manifest.params.b = b;
    }
    if let Some(u0) = args.u0 {
        manifest.params.u0 = u0;
    }
    if let Some(t_end) = args.t_end {
        manifest.t_end = t_end;
    }
    if let Some(nodes) = args.nodes {
        manifest.nodes = nodes;
    }
    if let Some(epochs) = args.epochs {
        manifest.epochs = epochs;
    }
    if let Some(lr) = args.lr {
        manifest.learning_rate = lr;
    }
    if let Some(widths) = args.widths {
        manifest.widths = widths;
    }
    if let Some(seed) = args.seed {
        manifest.seed = seed;
    }
    if let Some(oracle_nodes) = args.oracle_nodes {
        manifest.oracle_nodes = oracle_nodes;
    }
    if let Some(out) = args.out {
        manifest.out_dir = out;
    }

    let log_every = args.log_every;
    let report = run_with_progress(&manifest, |alpha, epoch, loss| {
        if log_every > 0 && epoch % log_every == 0 {
            eprintln!("alpha={alpha} epoch={epoch} loss={loss:.6e}");
        }
    })?;
    for run in &report.runs {
        for warning in &run.warnings {
            eprintln!("warning: alpha={}: {warning}", run.alpha);
        }
        println!("{}", run.summary_line(manifest.model));
    }
    println!("artifacts written to {}", manifest.out_dir.display());
    Ok(())
}
