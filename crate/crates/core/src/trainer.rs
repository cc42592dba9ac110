//! Symmetric toy dataset, Adam training on binary cross entropy, and the
//! layer/seed/noise sweep.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{NoiseKind, NoiseSpec};
use crate::circuit::{Circuit, ModelKind};
use crate::error::{Error, Result};
use crate::metrics::{
    adaptive_threshold, chi_squared, label_misassignment, prediction_variance, PairedPredictions,
    ThresholdFn,
};
use crate::simulator::{sample_shots, spectrum_bounds, Simulator};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub x: [f64; 2],
    pub label: u8,
    /// Index of the `-x` sample.
    pub partner: usize,
}

/// Samples stored as `(x, -x)` pairs at positions `2k`, `2k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricDataset {
    samples: Vec<Sample>,
}

pub fn label_of(x: [f64; 2]) -> u8 {
    u8::from(x[0].sin() * x[1].sin() > 0.0)
}

/// `count/2` base points with `|sin x0 · sin x1| ≥ margin`, alternating
/// between the two labels, each followed by its negation.
pub fn generate_dataset(count: usize, seed: u64, margin: f64) -> Result<SymmetricDataset> {
    if count == 0 || count % 2 != 0 {
        return Err(Error::InvalidDataset(format!("count must be even and positive, got {count}")));
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(Error::InvalidDataset(format!("margin {margin} outside [0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    for k in 0..count / 2 {
        let want = (k % 2 == 0) as u8;
        let x = loop {
            let x = [rng.gen_range(-PI..=PI), rng.gen_range(-PI..=PI)];
            let v = x[0].sin() * x[1].sin();
            if v.abs() >= margin && v != 0.0 && label_of(x) == want {
                break x;
            }
        };
        samples.push(Sample {
            x,
            label: want,
            partner: 2 * k + 1,
        });
        samples.push(Sample {
            x: [-x[0], -x[1]],
            label: want,
            partner: 2 * k,
        });
    }
    Ok(SymmetricDataset { samples })
}

impl SymmetricDataset {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn num_pairs(&self) -> usize {
        self.samples.len() / 2
    }

    /// First half of the pairs for training, the rest for testing.
    pub fn split(&self) -> (SymmetricDataset, SymmetricDataset) {
        let cut = 2 * (self.num_pairs() / 2);
        let renumber = |s: &[Sample]| SymmetricDataset {
            samples: s
                .iter()
                .enumerate()
                .map(|(i, smp)| Sample {
                    partner: i ^ 1,
                    ..*smp
                })
                .collect(),
        };
        (renumber(&self.samples[..cut]), renumber(&self.samples[cut..]))
    }

    pub fn count_label(&self, label: u8) -> usize {
        self.samples.iter().filter(|s| s.label == label).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub model: ModelKind,
    pub d: usize,
    pub noise: NoiseSpec,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    pub adaptive_threshold: bool,
    /// Shot budget for the reported predictions; training gradients are exact.
    pub shots: Option<u64>,
}

impl TrainConfig {
    pub fn new(model: ModelKind, d: usize) -> Self {
        Self {
            model,
            d,
            noise: NoiseSpec::noiseless(),
            lr: 0.01,
            epochs: 100,
            seed: 0,
            adaptive_threshold: false,
            shots: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.epochs < 1 {
            return Err(Error::InvalidTrainConfig("epochs must be at least 1".into()));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidTrainConfig(format!("learning rate {} must be positive", self.lr)));
        }
        Ok(())
    }
}

/// First/second-moment adaptive gradient steps.
#[derive(Clone, Debug)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(dim: usize, lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params[i] -= self.lr * mh / (vh.sqrt() + self.eps);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochRecord {
    pub loss: f64,
    pub train_accuracy: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub params: Vec<f64>,
    pub history: Vec<EpochRecord>,
    pub threshold: ThresholdFn,
}

const PROB_CLAMP: f64 = 1e-12;

/// A compiled model with its observable range.
#[derive(Clone, Debug)]
pub struct Model {
    sim: Simulator,
    lo: f64,
    hi: f64,
}

impl Model {
    pub fn new(circuit: &Circuit, noise: &NoiseSpec) -> Result<Self> {
        let (lo, hi) = spectrum_bounds(circuit.observable())?;
        Ok(Self {
            sim: Simulator::new(circuit, noise)?,
            lo,
            hi,
        })
    }

    pub fn simulator(&self) -> &Simulator {
        &self.sim
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Threshold at the midpoint of the spectrum, i.e. `p > 1/2`.
    pub fn fixed_threshold(&self) -> ThresholdFn {
        ThresholdFn::new((self.lo + self.hi) / 2.0)
    }

    pub fn probability(&self, y: f64) -> f64 {
        (y - self.lo) / (self.hi - self.lo)
    }

    pub fn predict(&self, params: &[f64], x: [f64; 2]) -> Result<f64> {
        self.sim.expectation(params, &x)
    }

    /// Predictions in dataset order; with `shots`, each is a seeded sample mean.
    pub fn predict_all(
        &self,
        params: &[f64],
        data: &SymmetricDataset,
        shots: Option<u64>,
        seed: u64,
    ) -> Result<Vec<f64>> {
        data.samples()
            .iter()
            .enumerate()
            .map(|(i, s)| match shots {
                None => self.predict(params, s.x),
                Some(n) => {
                    let state = self.sim.final_state(params, &s.x)?;
                    let stream = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
                    sample_shots(&state, self.sim.circuit().observable(), n, stream)
                }
            })
            .collect()
    }

    /// Mean BCE loss and its gradient over `data`, plus the raw predictions.
    pub fn loss_and_gradient(
        &self,
        params: &[f64],
        data: &SymmetricDataset,
    ) -> Result<(f64, Vec<f64>, Vec<f64>)> {
        let n = data.len() as f64;
        let mut loss = 0.0;
        let mut grad = vec![0.0; params.len()];
        let mut preds = Vec::with_capacity(data.len());
        let span = self.hi - self.lo;
        for s in data.samples() {
            let (y, g) = self.sim.gradient(params, &s.x)?;
            preds.push(y);
            let p = self.probability(y).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            let target = f64::from(s.label);
            loss -= target * p.ln() + (1.0 - target) * (1.0 - p).ln();
            let dl_dy = (p - target) / (p * (1.0 - p)) / span / n;
            for (acc, gi) in grad.iter_mut().zip(&g) {
                *acc += dl_dy * gi;
            }
        }
        Ok((loss / n, grad, preds))
    }
}

pub fn accuracy(preds: &[f64], data: &SymmetricDataset, threshold: ThresholdFn) -> f64 {
    let correct = preds
        .iter()
        .zip(data.samples())
        .filter(|(&y, s)| threshold.label(y) == s.label)
        .count();
    correct as f64 / data.len() as f64
}

pub fn initial_parameters(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..2.0 * PI)).collect()
}

/// Full-batch Adam on the BCE loss. With `adaptive_threshold`, the decision
/// threshold follows the training-set median each epoch; the loss itself
/// always uses the spectrum mapping.
pub fn train(config: &TrainConfig, data: &SymmetricDataset) -> Result<TrainOutcome> {
    config.validate()?;
    let circuit = config.model.build(config.d)?;
    let model = Model::new(&circuit, &config.noise)?;
    train_model(&model, config, data)
}

pub fn train_model(model: &Model, config: &TrainConfig, data: &SymmetricDataset) -> Result<TrainOutcome> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut params = initial_parameters(model.sim.circuit().num_params(), config.seed);
    let mut opt = Adam::new(params.len(), config.lr);
    let mut history = Vec::with_capacity(config.epochs);
    let mut threshold = model.fixed_threshold();
    for epoch in 0..config.epochs {
        let (loss, grad, preds) = model.loss_and_gradient(&params, data)?;
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteLoss { epoch });
        }
        if config.adaptive_threshold {
            threshold = adaptive_threshold(&preds)?;
        }
        history.push(EpochRecord {
            loss,
            train_accuracy: accuracy(&preds, data, threshold),
            threshold: threshold.t,
        });
        opt.step(&mut params, &grad);
    }
    if config.adaptive_threshold {
        let preds = model.predict_all(&params, data, None, 0)?;
        threshold = adaptive_threshold(&preds)?;
    }
    Ok(TrainOutcome {
        params,
        history,
        threshold,
    })
}

/// Test-set diagnostics of a trained model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestMetrics {
    pub accuracy: f64,
    pub lm: f64,
    pub chi2: f64,
    pub variance: f64,
}

pub fn test_metrics(
    model: &Model,
    params: &[f64],
    threshold: ThresholdFn,
    test: &SymmetricDataset,
    shots: Option<u64>,
    seed: u64,
) -> Result<TestMetrics> {
    let preds = model.predict_all(params, test, shots, seed)?;
    let pairs = PairedPredictions::new(preds.chunks(2).map(|c| (c[0], c[1])).collect())?;
    let (lo, hi) = model.bounds();
    Ok(TestMetrics {
        accuracy: accuracy(&preds, test, threshold),
        lm: label_misassignment(&pairs, threshold),
        chi2: chi_squared(&pairs.normalized(lo, hi)?),
        variance: prediction_variance(&preds)?,
    })
}

/// Grid of training runs for one noise family.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepProtocol {
    pub models: Vec<ModelKind>,
    pub depths: Vec<usize>,
    pub seeds: Vec<u64>,
    pub noise: NoiseKind,
    pub noise_values: Vec<f64>,
    pub epochs: usize,
    pub lr: f64,
    pub adaptive_threshold: bool,
    pub shots: Option<u64>,
    pub dataset_size: usize,
    pub dataset_seed: u64,
    pub margin: f64,
}

impl SweepProtocol {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidTrainConfig(m.into()));
        if self.models.is_empty() {
            return bad("no models");
        }
        if self.depths.is_empty() || self.depths.contains(&0) {
            return bad("depths must be a nonempty list of positive integers");
        }
        if self.seeds.is_empty() {
            return bad("no seeds");
        }
        if self.noise_values.is_empty() {
            return bad("no noise values");
        }
        for &v in &self.noise_values {
            self.noise.channel(v)?;
        }
        if self.epochs < 1 || !(self.lr > 0.0) {
            return bad("epochs and learning rate must be positive");
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for &model in &self.models {
            for &noise_value in &self.noise_values {
                for &d in &self.depths {
                    for &seed in &self.seeds {
                        out.push(SweepCell {
                            model,
                            noise_value,
                            d,
                            seed,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn dataset(&self) -> Result<(SymmetricDataset, SymmetricDataset)> {
        Ok(generate_dataset(self.dataset_size, self.dataset_seed, self.margin)?.split())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub model: ModelKind,
    pub noise_value: f64,
    pub d: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub cell: SweepCell,
    pub metrics: TestMetrics,
    pub final_loss: f64,
    pub threshold: f64,
}

/// Trains and tests one cell of the sweep.
pub fn run_cell(
    protocol: &SweepProtocol,
    cell: SweepCell,
    train_set: &SymmetricDataset,
    test_set: &SymmetricDataset,
) -> Result<SweepRow> {
    let noise = protocol.noise.spec(cell.noise_value)?;
    let config = TrainConfig {
        model: cell.model,
        d: cell.d,
        noise: noise.clone(),
        lr: protocol.lr,
        epochs: protocol.epochs,
        seed: cell.seed,
        adaptive_threshold: protocol.adaptive_threshold,
        shots: protocol.shots,
    };
    let model = Model::new(&cell.model.build(cell.d)?, &noise)?;
    let outcome = train_model(&model, &config, train_set)?;
    let metrics = test_metrics(
        &model,
        &outcome.params,
        outcome.threshold,
        test_set,
        protocol.shots,
        cell.seed,
    )?;
    Ok(SweepRow {
        cell,
        metrics,
        final_loss: outcome.history.last().map_or(f64::NAN, |h| h.loss),
        threshold: outcome.threshold.t,
    })
}

/// Sequential sweep over every cell.
pub fn sweep(protocol: &SweepProtocol) -> Result<Vec<SweepRow>> {
    protocol.validate()?;
    let (train_set, test_set) = protocol.dataset()?;
    protocol
        .cells()
        .into_iter()
        .map(|c| run_cell(protocol, c, &train_set, &test_set))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BestLayer {
    pub model: ModelKind,
    pub noise_value: f64,
    pub d: usize,
    pub mean_accuracy: f64,
}

/// Per (model, noise value): seed-averaged accuracy per depth, maximized over
/// depth. Ties go to the shallower circuit.
pub fn best_layer_summary(rows: &[SweepRow]) -> Vec<BestLayer> {
    let mut keys: Vec<(ModelKind, f64)> = Vec::new();
    for r in rows {
        let k = (r.cell.model, r.cell.noise_value);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(model, noise_value)| {
            let mut depths: Vec<usize> = rows
                .iter()
                .filter(|r| r.cell.model == model && r.cell.noise_value == noise_value)
                .map(|r| r.cell.d)
                .collect();
            depths.sort_unstable();
            depths.dedup();
            let mut best = BestLayer {
                model,
                noise_value,
                d: depths[0],
                mean_accuracy: f64::NEG_INFINITY,
            };
            for d in depths {
                let accs: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.cell.model == model && r.cell.noise_value == noise_value && r.cell.d == d)
                    .map(|r| r.metrics.accuracy)
                    .collect();
                let mean = accs.iter().sum::<f64>() / accs.len() as f64;
                if mean > best.mean_accuracy {
                    best.d = d;
                    best.mean_accuracy = mean;
                }
            }
            best
        })
        .collect()
}
