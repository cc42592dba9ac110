//! Symmetry-breaking statistics of randomly initialised models over a paired
//! dataset.

use crate::channels::NoiseSpec;
use crate::circuit::Circuit;
use crate::error::Result;
use crate::metrics::{
    adaptive_threshold, chi_squared, label_misassignment, prediction_variance, PairedPredictions,
};
use crate::stats::{mean, std_dev};
use crate::trainer::{initial_parameters, Model, SymmetricDataset};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryPoint {
    /// Population variance of every prediction across samples and seeds.
    pub variance: f64,
    pub chi2: f64,
    pub chi2_std: f64,
    pub lm: f64,
    pub lm_std: f64,
    pub mean_prediction: f64,
}

/// Per-seed diagnostics of one parameter draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedDiagnostics {
    pub seed: u64,
    pub chi2: f64,
    pub lm: f64,
    pub variance: f64,
    pub mean_prediction: f64,
}

/// Evaluates `circuit` with parameters drawn from each seed. The LM threshold
/// is the median of that draw's predictions over the whole dataset.
pub fn seed_diagnostics(
    circuit: &Circuit,
    noise: &NoiseSpec,
    data: &SymmetricDataset,
    seeds: &[u64],
    shots: Option<u64>,
) -> Result<Vec<(SeedDiagnostics, Vec<f64>)>> {
    let model = Model::new(circuit, noise)?;
    let (lo, hi) = model.bounds();
    seeds
        .iter()
        .map(|&seed| {
            let params = initial_parameters(circuit.num_params(), seed);
            let preds = model.predict_all(&params, data, shots, seed)?;
            let pairs =
                PairedPredictions::new(preds.chunks(2).map(|c| (c[0], c[1])).collect())?;
            let t = adaptive_threshold(&preds)?;
            let diag = SeedDiagnostics {
                seed,
                chi2: chi_squared(&pairs.normalized(lo, hi)?),
                lm: label_misassignment(&pairs, t),
                variance: prediction_variance(&preds)?,
                mean_prediction: mean(&preds)?,
            };
            Ok((diag, preds))
        })
        .collect()
}

pub fn symmetry_point(
    circuit: &Circuit,
    noise: &NoiseSpec,
    data: &SymmetricDataset,
    seeds: &[u64],
    shots: Option<u64>,
) -> Result<SymmetryPoint> {
    let per_seed = seed_diagnostics(circuit, noise, data, seeds, shots)?;
    let all: Vec<f64> = per_seed.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let chi2: Vec<f64> = per_seed.iter().map(|(d, _)| d.chi2).collect();
    let lm: Vec<f64> = per_seed.iter().map(|(d, _)| d.lm).collect();
    Ok(SymmetryPoint {
        variance: prediction_variance(&all)?,
        chi2: mean(&chi2)?,
        chi2_std: std_dev(&chi2)?,
        lm: mean(&lm)?,
        lm_std: std_dev(&lm)?,
        mean_prediction: mean(&all)?,
    })
}
