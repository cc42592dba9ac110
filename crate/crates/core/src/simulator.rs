//! Noisy circuit evaluation on PTM coefficient vectors.
//!
//! A [`Simulator`] compiles a circuit and a noise model once: fixed gates and
//! constant rotations become superoperators, every slice is followed by the
//! per-qubit noise, and runs of fixed operators on the same qubits are fused.
//! Data and parameters are bound per call.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::NoiseSpec;
use crate::circuit::{AngleSource, Circuit, GateOp, InitialState};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};
use crate::ptm::{
    cnot_ptm, hadamard_ptm, plus_state, zero_state, LocalSuperoperator, PauliRotation, PtmVector,
};

pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Debug)]
enum Step {
    Rotation {
        rot: PauliRotation,
        angle: AngleSource,
    },
    Fixed {
        op: LocalSuperoperator,
        transpose: LocalSuperoperator,
    },
}

#[derive(Clone, Debug)]
pub struct Simulator {
    circuit: Circuit,
    steps: Vec<Step>,
    initial: PtmVector,
    covector: Vec<f64>,
    /// Step index of each parameter's gate.
    param_steps: Vec<usize>,
}

impl Simulator {
    pub fn new(circuit: &Circuit, noise: &NoiseSpec) -> Result<Self> {
        let n = circuit.num_qubits();
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
        }
        let noise_ops: Vec<Option<LocalSuperoperator>> =
            (0..n).map(|q| noise.composite_ptm(q)).collect();
        let mut steps = Vec::new();
        let mut param_steps = vec![usize::MAX; circuit.num_params()];
        for slice in circuit.slices() {
            for gate in slice {
                match &gate.op {
                    GateOp::Rotation { generator, angle } => {
                        let rot = PauliRotation::new(generator, gate.targets.clone())?;
                        match *angle {
                            AngleSource::Constant(c) => push_fixed(&mut steps, rot.superoperator(c)),
                            AngleSource::Parameter(i) => {
                                if param_steps[i] != usize::MAX {
                                    return Err(Error::SharedParameter(i));
                                }
                                param_steps[i] = steps.len();
                                steps.push(Step::Rotation { rot, angle: *angle });
                            }
                            AngleSource::Feature(_) => steps.push(Step::Rotation { rot, angle: *angle }),
                        }
                    }
                    GateOp::Hadamard => push_fixed(&mut steps, hadamard_ptm(gate.targets[0])),
                    GateOp::Cnot => {
                        push_fixed(&mut steps, cnot_ptm(gate.targets[0], gate.targets[1])?)
                    }
                }
            }
            for op in noise_ops.iter().flatten() {
                push_fixed(&mut steps, op.clone());
            }
        }
        let initial = match circuit.initial_state() {
            InitialState::Zero => zero_state(n)?,
            InitialState::Plus => plus_state(n)?,
        };
        let mut covector = vec![0.0; 1usize << (2 * n)];
        let scale = (1u64 << n) as f64;
        for (w, p) in circuit.observable().terms() {
            covector[p.index()] += w * scale;
        }
        Ok(Self {
            circuit: circuit.clone(),
            steps,
            initial,
            covector,
            param_steps,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Number of compiled operations after fusion.
    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    fn check_inputs(&self, params: &[f64], datum: &[f64]) -> Result<()> {
        if params.len() != self.circuit.num_params() {
            return Err(Error::LengthMismatch {
                expected: self.circuit.num_params(),
                found: params.len(),
            });
        }
        if datum.len() < self.circuit.num_features() {
            return Err(Error::LengthMismatch {
                expected: self.circuit.num_features(),
                found: datum.len(),
            });
        }
        Ok(())
    }

    fn angle(angle: AngleSource, params: &[f64], datum: &[f64]) -> f64 {
        match angle {
            AngleSource::Feature(i) => datum[i],
            AngleSource::Parameter(i) => params[i],
            AngleSource::Constant(c) => c,
        }
    }

    pub fn final_state(&self, params: &[f64], datum: &[f64]) -> Result<PtmVector> {
        self.check_inputs(params, datum)?;
        let mut state = self.initial.clone();
        for step in &self.steps {
            match step {
                Step::Rotation { rot, angle } => {
                    state.apply_rotation(rot, Self::angle(*angle, params, datum))?
                }
                Step::Fixed { op, .. } => state.apply(op)?,
            }
        }
        Ok(state)
    }

    /// `Tr(O ρ_out)`.
    pub fn expectation(&self, params: &[f64], datum: &[f64]) -> Result<f64> {
        let state = self.final_state(params, datum)?;
        Ok(dot(&self.covector, state.coeffs()))
    }

    /// Expectation and its gradient with respect to every parameter, by
    /// reverse accumulation through the transposed superoperators.
    pub fn gradient(&self, params: &[f64], datum: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_inputs(params, datum)?;
        let mut state = self.initial.clone();
        let mut saved = Vec::with_capacity(params.len());
        for step in &self.steps {
            match step {
                Step::Rotation { rot, angle } => {
                    if matches!(angle, AngleSource::Parameter(_)) {
                        saved.push(state.clone());
                    }
                    state.apply_rotation(rot, Self::angle(*angle, params, datum))?
                }
                Step::Fixed { op, .. } => state.apply(op)?,
            }
        }
        let value = dot(&self.covector, state.coeffs());
        let mut lambda = PtmVector::from_coeffs(self.circuit.num_qubits(), self.covector.clone())?;
        let mut grad = vec![0.0; params.len()];
        for step in self.steps.iter().rev() {
            match step {
                Step::Rotation { rot, angle } => {
                    let theta = Self::angle(*angle, params, datum);
                    if let AngleSource::Parameter(i) = *angle {
                        let before = saved.pop().expect("one snapshot per parameter");
                        grad[i] = before.rotation_derivative_dot(rot, theta, lambda.coeffs())?;
                    }
                    lambda.apply_rotation(rot, -theta)?;
                }
                Step::Fixed { transpose, .. } => lambda.apply(transpose)?,
            }
        }
        Ok((value, grad))
    }

    /// `(f(θ_i + π/2) - f(θ_i - π/2)) / 2`.
    pub fn parameter_shift(&self, params: &[f64], datum: &[f64], index: usize) -> Result<f64> {
        if index >= self.circuit.num_params() {
            return Err(Error::ParameterOutOfRange {
                index,
                count: self.circuit.num_params(),
            });
        }
        debug_assert!(self.param_steps[index] < self.steps.len());
        let mut shifted = params.to_vec();
        shifted[index] = params[index] + std::f64::consts::FRAC_PI_2;
        let plus = self.expectation(&shifted, datum)?;
        shifted[index] = params[index] - std::f64::consts::FRAC_PI_2;
        let minus = self.expectation(&shifted, datum)?;
        Ok((plus - minus) / 2.0)
    }

    pub fn parameter_shift_gradient(&self, params: &[f64], datum: &[f64]) -> Result<Vec<f64>> {
        (0..params.len())
            .map(|i| self.parameter_shift(params, datum, i))
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Appends a fixed operator, composing it into an earlier fixed operator on
/// the same targets when only disjoint fixed operators lie in between.
fn push_fixed(steps: &mut Vec<Step>, op: LocalSuperoperator) {
    for step in steps.iter_mut().rev() {
        let Step::Fixed { op: prev, transpose } = step else {
            break;
        };
        if prev.targets() == op.targets() {
            let fused = op.compose(prev).expect("same targets");
            *transpose = fused.transpose();
            *prev = fused;
            return;
        }
        if prev.targets().iter().any(|t| op.targets().contains(t)) {
            break;
        }
    }
    let transpose = op.transpose();
    steps.push(Step::Fixed { op, transpose });
}

/// Product eigenbasis of a qubit-wise commuting observable.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    n: usize,
    qubits: Vec<usize>,
    letters: Vec<Pauli>,
    /// Weight and mask over `qubits` for each term.
    terms: Vec<(f64, usize)>,
}

impl MeasurementBasis {
    pub fn new(obs: &PauliSum) -> Result<Self> {
        let n = obs.num_qubits();
        let mut letter_of: Vec<Option<Pauli>> = vec![None; n];
        for (_, p) in obs.terms() {
            for q in p.support() {
                match letter_of[q] {
                    None => letter_of[q] = Some(p.get(q)),
                    Some(l) if l == p.get(q) => {}
                    Some(_) => return Err(Error::NonCommutingObservable),
                }
            }
        }
        let qubits: Vec<usize> = (0..n).filter(|&q| letter_of[q].is_some()).collect();
        let letters = qubits.iter().map(|&q| letter_of[q].expect("filtered")).collect();
        let terms = obs
            .terms()
            .iter()
            .map(|(w, p)| {
                let mask = qubits
                    .iter()
                    .enumerate()
                    .filter(|(_, &q)| p.get(q) != Pauli::I)
                    .map(|(j, _)| 1usize << j)
                    .sum();
                (*w, mask)
            })
            .collect();
        Ok(Self {
            n,
            qubits,
            letters,
            terms,
        })
    }

    pub fn num_outcomes(&self) -> usize {
        1usize << self.qubits.len()
    }

    /// Observable value for outcome bits `b` (bit `j` is the `j`-th measured
    /// qubit, 1 meaning the −1 eigenvector).
    pub fn eigenvalue(&self, b: usize) -> f64 {
        self.terms
            .iter()
            .map(|&(w, mask)| if (b & mask).count_ones() % 2 == 0 { w } else { -w })
            .sum()
    }

    /// Outcome distribution of `state` in this basis.
    pub fn probabilities(&self, state: &PtmVector) -> Result<Vec<f64>> {
        if state.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: state.num_qubits(),
            });
        }
        let m = self.qubits.len();
        let mut v: Vec<f64> = (0..1usize << m)
            .map(|s| {
                let idx: usize = (0..m)
                    .filter(|j| s >> j & 1 == 1)
                    .map(|j| self.letters[j].index() << (2 * self.qubits[j]))
                    .sum();
                state.coeffs()[idx]
            })
            .collect();
        walsh_hadamard(&mut v);
        let scale = (1u64 << (self.n - m)) as f64;
        Ok(v.into_iter().map(|p| (p * scale).max(0.0)).collect())
    }

    pub fn spectrum_bounds(&self) -> (f64, f64) {
        (0..self.num_outcomes())
            .map(|b| self.eigenvalue(b))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
                (lo.min(e), hi.max(e))
            })
    }
}

fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Smallest and largest eigenvalue of a qubit-wise commuting observable.
pub fn spectrum_bounds(obs: &PauliSum) -> Result<(f64, f64)> {
    Ok(MeasurementBasis::new(obs)?.spectrum_bounds())
}

/// Mean of `shots` simulated measurements of `obs` on `state`.
pub fn sample_shots(state: &PtmVector, obs: &PauliSum, shots: u64, seed: u64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::EmptyInput);
    }
    let basis = MeasurementBasis::new(obs)?;
    let probs = basis.probabilities(state)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::Parse(e.to_string()))?;
    let values: Vec<f64> = (0..probs.len()).map(|b| basis.eigenvalue(b)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..shots {
        total += values[dist.sample(&mut rng)];
    }
    Ok(total / shots as f64)
}

/// `⟨O²⟩ - ⟨O⟩²` on `state`.
pub fn variance_analytic(state: &PtmVector, obs: &PauliSum) -> Result<f64> {
    let mean = state.expectation(obs)?;
    Ok((state.expectation(&obs.square())? - mean * mean).max(0.0))
}

#[derive(Clone, Copy, Debug)]
pub struct EvalRequest<'a> {
    pub circuit: &'a Circuit,
    pub noise: &'a NoiseSpec,
    pub params: &'a [f64],
    pub datum: &'a [f64],
    pub shots: Option<u64>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub expectation: f64,
    pub variance: f64,
    pub shot_estimate: Option<f64>,
}

/// One-off evaluation; compile a [`Simulator`] for repeated calls.
pub fn evaluate(req: &EvalRequest<'_>) -> Result<EvalResult> {
    let sim = Simulator::new(req.circuit, req.noise)?;
    let state = sim.final_state(req.params, req.datum)?;
    let obs = req.circuit.observable();
    let shot_estimate = match req.shots {
        Some(s) => Some(sample_shots(&state, obs, s, req.seed)?),
        None => None,
    };
    Ok(EvalResult {
        expectation: state.expectation(obs)?,
        variance: variance_analytic(&state, obs)?,
        shot_estimate,
    })
}
