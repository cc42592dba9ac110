//! Runs a validated config: independent cells go to a worker pool, and a
//! single appender writes their rows in cell order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

use eqnn_noise_core::channels::{NoiseChannel, PauliChannelParams};
use eqnn_noise_core::metrics::{
    adaptive_threshold, chi_squared, label_misassignment, PairedPredictions,
};
use eqnn_noise_core::simulator::{spectrum_bounds, Simulator};
use eqnn_noise_core::symmetry::seed_diagnostics;
use eqnn_noise_core::toy::{simulate_toy, toy_ad, toy_pauli, ToyConfig};
use eqnn_noise_core::trainer::{
    initial_parameters, run_cell, train_model, Model, SweepCell, SweepProtocol, SymmetricDataset,
    TrainConfig,
};
use eqnn_noise_core::zne::ZneEvaluator;
use eqnn_noise_core::{NoiseKind, NoiseSpec};

use crate::config::{Experiment, ExperimentConfig, ModelSpec};
use crate::error::{io_err, HarnessError, Result};
use crate::plot::write_plots;
use crate::table::{read_table, Appender};

pub const RESULTS_FILE: &str = "results.csv";

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub csv: PathBuf,
    pub plots: Vec<PathBuf>,
    pub rows: usize,
    /// The results already existed and nothing was recomputed.
    pub reused: bool,
}

/// `<output_dir>/<experiment>-<first 16 hex digits of the config hash>`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir
        .join(format!("{}-{}", cfg.experiment, &cfg.hash()[..16]))
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Toy { x: f64, theta: f64, d: usize, value: f64 },
    Model { model: ModelSpec, d: usize, value: f64, seed: u64 },
}

fn cells(cfg: &ExperimentConfig) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    if cfg.experiment == Experiment::Toy {
        for &value in &cfg.noise.values {
            for &d in &cfg.depths {
                for &x in &cfg.toy.xs {
                    for &theta in &cfg.toy.thetas {
                        out.push(Cell::Toy { x, theta, d, value });
                    }
                }
            }
        }
        return Ok(out);
    }
    for model in cfg.models()? {
        for &value in &cfg.noise.values {
            for &d in &cfg.depths {
                for &seed in &cfg.seeds {
                    out.push(Cell::Model { model, d, value, seed });
                }
            }
        }
    }
    Ok(out)
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    id: String,
    kind: NoiseKind,
    data: SymmetricDataset,
    train: SymmetricDataset,
    test: SymmetricDataset,
}

fn f(v: f64) -> String {
    format!("{v}")
}

fn toy_channel(channel: NoiseChannel) -> Result<PauliChannelParams> {
    Ok(match channel {
        NoiseChannel::BitFlip(p) => PauliChannelParams::new(p, 0.0, 0.0)?,
        NoiseChannel::PhaseFlip(p) => PauliChannelParams::new(0.0, 0.0, p)?,
        NoiseChannel::Depolarizing(p) => PauliChannelParams::depolarizing(p)?,
        NoiseChannel::Pauli(params) => params,
        NoiseChannel::AmplitudeDamping(_) => unreachable!("handled by the damping path"),
    })
}

fn lm_and_chi2(preds: &[f64], lo: f64, hi: f64) -> Result<(f64, f64)> {
    let pairs = PairedPredictions::new(preds.chunks(2).map(|c| (c[0], c[1])).collect())?;
    let lm = label_misassignment(&pairs, adaptive_threshold(preds)?);
    // extrapolated values can leave the spectrum; clip before the χ² ratio
    let clipped = PairedPredictions::new(
        pairs
            .normalized(lo, hi)?
            .pairs()
            .iter()
            .map(|&(a, b)| (a.clamp(0.0, 1.0), b.clamp(0.0, 1.0)))
            .collect(),
    )?;
    Ok((lm, chi_squared(&clipped)))
}

fn run_one(ctx: &Context<'_>, cell: Cell) -> Result<Vec<Vec<String>>> {
    let cfg = ctx.cfg;
    let start = Instant::now();
    let n = cfg.n.to_string();
    let mut rows = match cell {
        Cell::Toy { x, theta, d, value } => {
            let base = ToyConfig::new(x, theta, d as u32);
            let toy = match ctx.kind {
                NoiseKind::AmplitudeDamping => base.with_damping(value)?,
                _ => base.with_pauli(toy_channel(ctx.kind.channel(value)?)?),
            };
            let closed = match ctx.kind {
                NoiseKind::AmplitudeDamping => toy_ad(&toy),
                _ => toy_pauli(&toy),
            };
            let simulated = simulate_toy(&toy)?;
            let gap = simulated - simulate_toy(&toy.negated())?;
            vec![vec![
                ctx.id.clone(),
                f(x),
                f(theta),
                d.to_string(),
                f(value),
                f(simulated),
                f(closed),
                f((simulated - closed).abs()),
                f(gap),
            ]]
        }
        Cell::Model { model, d, value, seed } => {
            let circuit = model.build(cfg.n, d)?;
            let noise = ctx.kind.spec(value)?;
            let coords = vec![ctx.id.clone(), model.name(), n, d.to_string(), f(value), seed.to_string()];
            let with = |metrics: Vec<f64>| {
                let mut r = coords.clone();
                r.extend(metrics.into_iter().map(f));
                r
            };
            match cfg.experiment {
                Experiment::Toy => unreachable!("toy cells"),
                Experiment::Symmetry => {
                    let (diag, _) = seed_diagnostics(&circuit, &noise, &ctx.data, &[seed], cfg.shots)?
                        .pop()
                        .expect("one seed");
                    vec![with(vec![diag.variance, diag.chi2, diag.lm, diag.mean_prediction])]
                }
                Experiment::Train => {
                    let ModelSpec::Zoo(kind) = model else { unreachable!("validated") };
                    let config = TrainConfig {
                        model: kind,
                        d,
                        noise: noise.clone(),
                        lr: cfg.training.lr,
                        epochs: cfg.training.epochs,
                        seed,
                        adaptive_threshold: cfg.training.adaptive_threshold,
                        shots: cfg.shots,
                    };
                    let outcome = train_model(&Model::new(&circuit, &noise)?, &config, &ctx.train)?;
                    outcome
                        .history
                        .iter()
                        .enumerate()
                        .map(|(epoch, h)| {
                            let mut r = coords.clone();
                            r.extend([epoch.to_string(), f(h.loss), f(h.train_accuracy), f(h.threshold)]);
                            r
                        })
                        .collect()
                }
                Experiment::Sweep => {
                    let ModelSpec::Zoo(kind) = model else { unreachable!("validated") };
                    let protocol = SweepProtocol {
                        models: vec![kind],
                        depths: vec![d],
                        seeds: vec![seed],
                        noise: ctx.kind,
                        noise_values: vec![value],
                        epochs: cfg.training.epochs,
                        lr: cfg.training.lr,
                        adaptive_threshold: cfg.training.adaptive_threshold,
                        shots: cfg.shots,
                        dataset_size: cfg.dataset.size,
                        dataset_seed: cfg.dataset.seed,
                        margin: cfg.dataset.margin,
                    };
                    let row = run_cell(&protocol, SweepCell { model: kind, noise_value: value, d, seed }, &ctx.train, &ctx.test)?;
                    let m = row.metrics;
                    vec![with(vec![m.accuracy, m.lm, m.chi2, m.variance, row.final_loss, row.threshold])]
                }
                Experiment::Zne => {
                    let ev = ZneEvaluator::new(&circuit, &noise, &cfg.zne.scale_factors)?;
                    let exact = Simulator::new(&circuit, &NoiseSpec::noiseless())?;
                    let params = initial_parameters(circuit.num_params(), seed);
                    let (mut raw, mut mitigated, mut err_raw, mut err_mit) = (Vec::new(), Vec::new(), 0.0, 0.0);
                    for (i, s) in ctx.data.samples().iter().enumerate() {
                        let r = ev.evaluate(&params, &s.x, cfg.shots, seed.wrapping_mul(1_000_003).wrapping_add(i as u64))?;
                        let truth = exact.expectation(&params, &s.x)?;
                        err_raw += (r.unmitigated() - truth).abs();
                        err_mit += (r.mitigated - truth).abs();
                        raw.push(r.unmitigated());
                        mitigated.push(r.mitigated);
                    }
                    let count = raw.len() as f64;
                    let (lo, hi) = spectrum_bounds(circuit.observable())?;
                    let (lm_raw, chi_raw) = lm_and_chi2(&raw, lo, hi)?;
                    let (lm_mit, chi_mit) = lm_and_chi2(&mitigated, lo, hi)?;
                    vec![with(vec![lm_raw, lm_mit, chi_raw, chi_mit, err_raw / count, err_mit / count])]
                }
            }
        }
    };
    let secs = format!("{:.6}", start.elapsed().as_secs_f64());
    for r in &mut rows {
        r.push(secs.clone());
    }
    Ok(rows)
}

/// Executes `cfg`, or reuses the results of an earlier run with the same
/// config hash. Nothing that already exists is overwritten.
pub fn run(cfg: &ExperimentConfig, plots: bool) -> Result<RunOutcome> {
    cfg.validate()?;
    let dir = output_dir(cfg);
    let csv = dir.join(RESULTS_FILE);
    if csv.exists() {
        let table = read_table(&csv)?;
        let plot_files = if plots { missing_plots(&table, &dir)? } else { Vec::new() };
        return Ok(RunOutcome { rows: table.rows.len(), dir, csv, plots: plot_files, reused: true });
    }
    let data = cfg.dataset()?;
    let (train, test) = data.split();
    let ctx = Context {
        cfg,
        id: cfg.hash()[..16].to_string(),
        kind: cfg.noise_kind()?,
        data,
        train,
        test,
    };
    let work = cells(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs())
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;

    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let mut appender = Appender::create(&csv, cfg)?;
    let (tx, rx) = mpsc::channel::<(usize, Result<Vec<Vec<String>>>)>();
    let mut written = 0usize;
    let mut failure = None;
    std::thread::scope(|scope| {
        let ctx = &ctx;
        let work = &work;
        scope.spawn(move || {
            pool.install(|| {
                work.par_iter().enumerate().for_each_with(tx, |tx, (i, &cell)| {
                    let _ = tx.send((i, run_one(ctx, cell)));
                });
            });
        });
        // rows are appended in cell order whatever order the workers finish in
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, res) in rx {
            if failure.is_some() {
                continue;
            }
            pending.insert(i, res);
            while let Some(res) = pending.remove(&next) {
                match res.and_then(|rows| rows.iter().try_for_each(|r| appender.append(r)).map(|_| rows.len())) {
                    Ok(k) => written += k,
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
                next += 1;
            }
        }
    });
    if let Some(e) = failure {
        appender.abandon();
        return Err(e);
    }
    let csv = appender.finish()?;
    let plot_files = if plots { write_plots(&read_table(&csv)?, &dir)? } else { Vec::new() };
    Ok(RunOutcome { dir, csv, plots: plot_files, rows: written, reused: false })
}

fn missing_plots(table: &crate::table::Table, dir: &Path) -> Result<Vec<PathBuf>> {
    let all = crate::plot::specs(table.experiment);
    if all.iter().all(|s| dir.join(s.file).exists()) {
        return Ok(all.iter().map(|s| dir.join(s.file)).collect());
    }
    write_plots(table, dir)
}

/// Regenerates the plots of a result file into `out` (default: next to it).
pub fn replay(csv: &Path, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let table = read_table(csv)?;
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => csv.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf),
    };
    write_plots(&table, &dir)
}
