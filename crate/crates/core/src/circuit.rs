//! Model circuits as ordered time-slices of gates, plus symmetry tooling.
//!
//! Every circuit carries the Pauli string representing the non-trivial
//! element of its Z₂ symmetry and the observable it is read out with. Local
//! noise is attached by the simulator after every slice, so the slice
//! structure here decides how much noise a model sees.
//!
//! Feature conventions: two-qubit models encode feature 0 on qubit 0 and
//! feature 1 on qubit 1. EQNN-XY uses `R_Y(x0) ⊗ R_X(x1)` in every layer;
//! EQNN-Z alternates it with `R_X(x0) ⊗ R_Y(x1)` on odd layers. EQNN-HWE
//! encodes `R_X(x_{q mod 2})` then `R_Y(x_{(q+1) mod 2})` on qubit `q`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleSource {
    Feature(usize),
    Parameter(usize),
    Constant(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Encoding,
    Trainable,
    Fixed,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    /// `exp(-iθG/2)` with `G` given by one letter per target.
    Rotation {
        generator: PauliString,
        angle: AngleSource,
    },
    Hadamard,
    /// Control on `targets[0]`.
    Cnot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    pub op: GateOp,
    pub targets: Vec<usize>,
}

impl GateSpec {
    pub fn rotation(generator: &str, targets: Vec<usize>, angle: AngleSource) -> Self {
        Self {
            op: GateOp::Rotation {
                generator: generator.parse().expect("static generator"),
                angle,
            },
            targets,
        }
    }

    pub fn hadamard(q: usize) -> Self {
        Self {
            op: GateOp::Hadamard,
            targets: vec![q],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            op: GateOp::Cnot,
            targets: vec![control, target],
        }
    }

    pub fn kind(&self) -> GateKind {
        match &self.op {
            GateOp::Rotation {
                angle: AngleSource::Feature(_),
                ..
            } => GateKind::Encoding,
            GateOp::Rotation {
                angle: AngleSource::Parameter(_),
                ..
            } => GateKind::Trainable,
            _ => GateKind::Fixed,
        }
    }

    /// Full-length generator for rotation gates.
    pub fn global_generator(&self, n: usize) -> Option<PauliString> {
        match &self.op {
            GateOp::Rotation { generator, .. } => {
                let entries: Vec<(usize, Pauli)> = self
                    .targets
                    .iter()
                    .zip(generator.letters())
                    .map(|(&q, &p)| (q, p))
                    .collect();
                PauliString::from_sparse(n, &entries).ok()
            }
            _ => None,
        }
    }
}

pub type Slice = Vec<GateSpec>;

/// Z₂ = {e, σ} acting through `R(e) = I`, `R(σ) = sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    sigma: PauliString,
}

impl Representation {
    pub fn new(sigma: PauliString) -> Self {
        Self { sigma }
    }

    pub fn sigma(&self) -> &PauliString {
        &self.sigma
    }

    /// Pauli strings for `[e, σ]`.
    pub fn elements(&self) -> [PauliString; 2] {
        [PauliString::identity(self.sigma.len()), self.sigma.clone()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    Zero,
    Plus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    name: String,
    n: usize,
    layers: usize,
    initial: InitialState,
    slices: Vec<Slice>,
    representation: Representation,
    observable: PauliSum,
    num_params: usize,
    num_features: usize,
}

impl Circuit {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        layers: usize,
        initial: InitialState,
        slices: Vec<Slice>,
        representation: Representation,
        observable: PauliSum,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        if representation.sigma().len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: representation.sigma().len(),
            });
        }
        if observable.num_qubits() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: observable.num_qubits(),
            });
        }
        let mut params = Vec::new();
        let mut num_features = 0;
        for slice in &slices {
            let mut used = vec![false; n];
            for gate in slice {
                let arity = match &gate.op {
                    GateOp::Rotation { generator, .. } => generator.len(),
                    GateOp::Hadamard => 1,
                    GateOp::Cnot => 2,
                };
                if gate.targets.len() != arity {
                    return Err(Error::LengthMismatch {
                        expected: arity,
                        found: gate.targets.len(),
                    });
                }
                for &q in &gate.targets {
                    if q >= n {
                        return Err(Error::QubitOutOfRange { qubit: q, n });
                    }
                    if used[q] {
                        return Err(Error::DuplicateTarget(q));
                    }
                    used[q] = true;
                }
                if let GateOp::Rotation { generator, angle } = &gate.op {
                    if generator.is_identity() {
                        return Err(Error::IdentityGenerator);
                    }
                    match *angle {
                        AngleSource::Parameter(i) => params.push(i),
                        AngleSource::Feature(f) => num_features = num_features.max(f + 1),
                        AngleSource::Constant(_) => {}
                    }
                }
            }
        }
        params.sort_unstable();
        for (expect, &found) in params.iter().enumerate() {
            if found != expect {
                return Err(Error::ParameterOutOfRange {
                    index: found,
                    count: params.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            layers,
            initial,
            slices,
            representation,
            observable,
            num_params: params.len(),
            num_features,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn num_qubits(&self) -> usize {
        self.n
    }
    pub fn layers(&self) -> usize {
        self.layers
    }
    pub fn initial_state(&self) -> InitialState {
        self.initial
    }
    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }
    pub fn representation(&self) -> &Representation {
        &self.representation
    }
    pub fn observable(&self) -> &PauliSum {
        &self.observable
    }
    pub fn num_params(&self) -> usize {
        self.num_params
    }
    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn with_observable(&self, observable: PauliSum) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.n,
            self.layers,
            self.initial,
            self.slices.clone(),
            self.representation.clone(),
            observable,
        )
    }

    /// Line-oriented text form; see [`Circuit::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let init = match self.initial {
            InitialState::Zero => "zero",
            InitialState::Plus => "plus",
        };
        out.push_str(&format!(
            "circuit {} n={} layers={} init={}\n",
            self.name, self.n, self.layers, init
        ));
        out.push_str(&format!("representation {}\n", self.representation.sigma()));
        out.push_str("observable");
        for (w, p) in self.observable.terms() {
            out.push_str(&format!(" {w} {p}"));
        }
        out.push('\n');
        for slice in &self.slices {
            let line: Vec<String> = slice.iter().map(gate_to_text).collect();
            out.push_str(&line.join(" | "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |what: &str| Error::Parse(format!("circuit text: {what}"));

        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut head = header.split_whitespace();
        if head.next() != Some("circuit") {
            return Err(bad("header must start with 'circuit'"));
        }
        let name = head.next().ok_or_else(|| bad("missing name"))?.to_string();
        let (mut n, mut layers, mut init) = (None, None, InitialState::Zero);
        for kv in head {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("header field"))?;
            match k {
                "n" => n = Some(v.parse::<usize>().map_err(|_| bad("n"))?),
                "layers" => layers = Some(v.parse::<usize>().map_err(|_| bad("layers"))?),
                "init" => {
                    init = match v {
                        "zero" => InitialState::Zero,
                        "plus" => InitialState::Plus,
                        _ => return Err(bad("init")),
                    }
                }
                _ => return Err(bad("unknown header field")),
            }
        }
        let n = n.ok_or_else(|| bad("missing n"))?;
        let layers = layers.ok_or_else(|| bad("missing layers"))?;

        let rep_line = lines.next().ok_or_else(|| bad("missing representation"))?;
        let sigma = rep_line
            .strip_prefix("representation ")
            .ok_or_else(|| bad("representation line"))?
            .parse::<PauliString>()?;

        let obs_line = lines.next().ok_or_else(|| bad("missing observable"))?;
        let tokens: Vec<&str> = obs_line
            .strip_prefix("observable")
            .ok_or_else(|| bad("observable line"))?
            .split_whitespace()
            .collect();
        if tokens.len() % 2 != 0 {
            return Err(bad("observable terms"));
        }
        let terms = tokens
            .chunks(2)
            .map(|c| {
                let w = c[0].parse::<f64>().map_err(|_| bad("observable weight"))?;
                Ok((w, c[1].parse::<PauliString>()?))
            })
            .collect::<Result<Vec<_>>>()?;
        let observable = PauliSum::new(n, terms)?;

        let slices = lines
            .map(|line| line.split('|').map(|g| gate_from_text(g.trim())).collect())
            .collect::<Result<Vec<Slice>>>()?;
        Circuit::new(
            name,
            n,
            layers,
            init,
            slices,
            Representation::new(sigma),
            observable,
        )
    }
}

fn gate_to_text(g: &GateSpec) -> String {
    let targets: Vec<String> = g.targets.iter().map(usize::to_string).collect();
    let targets = targets.join(",");
    match &g.op {
        GateOp::Rotation { generator, angle } => {
            let (kind, src) = match angle {
                AngleSource::Feature(f) => ("encoding", format!("x{f}")),
                AngleSource::Parameter(p) => ("trainable", format!("p{p}")),
                AngleSource::Constant(c) => ("fixed", format!("c{c}")),
            };
            format!("{kind} {generator} {targets} {src}")
        }
        GateOp::Hadamard => format!("fixed H {targets} -"),
        GateOp::Cnot => format!("fixed CX {targets} -"),
    }
}

fn gate_from_text(s: &str) -> Result<GateSpec> {
    let bad = || Error::Parse(format!("gate '{s}'"));
    let parts: Vec<&str> = s.split_whitespace().collect();
    let [kind, gen, targets, src] = parts[..] else {
        return Err(bad());
    };
    let targets = targets
        .split(',')
        .map(|t| t.parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    let op = match (kind, gen, src) {
        ("fixed", "H", "-") => GateOp::Hadamard,
        ("fixed", "CX", "-") => GateOp::Cnot,
        _ => {
            let angle = match (kind, src.split_at(1)) {
                ("encoding", ("x", v)) => AngleSource::Feature(v.parse().map_err(|_| bad())?),
                ("trainable", ("p", v)) => AngleSource::Parameter(v.parse().map_err(|_| bad())?),
                ("fixed", ("c", v)) => AngleSource::Constant(v.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            };
            GateOp::Rotation {
                generator: gen.parse()?,
                angle,
            }
        }
    };
    Ok(GateSpec { op, targets })
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `exp(-iθ X⊗X/2)` as `(H⊗H)·CNOT·(I⊗R_Z(θ))·CNOT·(H⊗H)`, five slices.
pub fn decompose_xx(angle: AngleSource, q0: usize, q1: usize) -> Vec<Slice> {
    vec![
        vec![GateSpec::hadamard(q0), GateSpec::hadamard(q1)],
        vec![GateSpec::cnot(q0, q1)],
        vec![GateSpec::rotation("Z", vec![q1], angle)],
        vec![GateSpec::cnot(q0, q1)],
        vec![GateSpec::hadamard(q0), GateSpec::hadamard(q1)],
    ]
}

/// Decomposition of several disjoint XX rotations run in parallel.
fn decompose_xx_parallel(pairs: &[(usize, usize, AngleSource)]) -> Vec<Slice> {
    let mut slices: Vec<Slice> = vec![Vec::new(); 5];
    for &(a, b, angle) in pairs {
        for (slot, part) in slices.iter_mut().zip(decompose_xx(angle, a, b)) {
            slot.extend(part);
        }
    }
    slices
}

fn observable(n: usize, terms: &[(f64, &str)]) -> PauliSum {
    PauliSum::new(
        n,
        terms
            .iter()
            .map(|(w, s)| (*w, s.parse().expect("static observable")))
            .collect(),
    )
    .expect("static observable length")
}

fn z_average() -> PauliSum {
    observable(2, &[(0.5, "ZI"), (0.5, "IZ")])
}

fn check_layers(d: usize) -> Result<()> {
    if d < 1 {
        return Err(Error::InvalidDepth { min: 1, found: d });
    }
    Ok(())
}

fn eqnn_two_qubit(
    name: &str,
    d: usize,
    alternate: bool,
    native: bool,
    obs: PauliSum,
) -> Result<Circuit> {
    check_layers(d)?;
    let mut slices = Vec::new();
    for layer in 0..d {
        let (g0, g1) = if alternate && layer % 2 == 1 {
            ("X", "Y")
        } else {
            ("Y", "X")
        };
        slices.push(vec![
            GateSpec::rotation(g0, vec![0], AngleSource::Feature(0)),
            GateSpec::rotation(g1, vec![1], AngleSource::Feature(1)),
        ]);
        let base = 3 * layer;
        if native {
            slices.push(vec![GateSpec::rotation(
                "XX",
                vec![0, 1],
                AngleSource::Parameter(base),
            )]);
        } else {
            slices.extend(decompose_xx(AngleSource::Parameter(base), 0, 1));
        }
        slices.push(vec![
            GateSpec::rotation("Z", vec![0], AngleSource::Parameter(base + 1)),
            GateSpec::rotation("Z", vec![1], AngleSource::Parameter(base + 2)),
        ]);
    }
    Circuit::new(
        name,
        2,
        d,
        InitialState::Zero,
        slices,
        Representation::new("ZZ".parse().expect("static")),
        obs,
    )
}

/// EQNN-Z with the XX gate decomposed into CNOTs.
pub fn build_eqnn_z(d: usize) -> Result<Circuit> {
    eqnn_two_qubit("eqnn-z", d, true, false, z_average())
}

/// EQNN-Z with the XX gate applied natively.
pub fn build_eqnn_z_native(d: usize) -> Result<Circuit> {
    eqnn_two_qubit("eqnn-z-native", d, true, true, z_average())
}

pub fn build_eqnn_xy(d: usize) -> Result<Circuit> {
    eqnn_two_qubit("eqnn-xy", d, false, false, observable(2, &[(1.0, "XY")]))
}

pub fn build_eqnn_xy_native(d: usize) -> Result<Circuit> {
    eqnn_two_qubit("eqnn-xy-native", d, false, true, observable(2, &[(1.0, "XY")]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BelObservable {
    /// `(Z0 + Z1)/2`
    Z,
    /// `X0 Y1`
    Xy,
}

/// Basic entangler: `R_X` angle encoding once, then per layer trainable
/// `R_Z` and `R_Y` on each qubit and a CNOT (the two-qubit ring).
///
/// With only real gates after the encoding, `ρ(-x) = ρ(x)*`, which makes the
/// `(Z0+Z1)/2` readout exactly even and `X0Y1` exactly odd in `x`. The `R_Z`
/// slice removes that accidental structure.
pub fn build_bel(d: usize, obs: BelObservable) -> Result<Circuit> {
    check_layers(d)?;
    let mut slices = vec![vec![
        GateSpec::rotation("X", vec![0], AngleSource::Feature(0)),
        GateSpec::rotation("X", vec![1], AngleSource::Feature(1)),
    ]];
    for layer in 0..d {
        let base = 4 * layer;
        slices.push(vec![
            GateSpec::rotation("Z", vec![0], AngleSource::Parameter(base)),
            GateSpec::rotation("Z", vec![1], AngleSource::Parameter(base + 1)),
        ]);
        slices.push(vec![
            GateSpec::rotation("Y", vec![0], AngleSource::Parameter(base + 2)),
            GateSpec::rotation("Y", vec![1], AngleSource::Parameter(base + 3)),
        ]);
        slices.push(vec![GateSpec::cnot(0, 1)]);
    }
    let (name, o) = match obs {
        BelObservable::Z => ("bel-z", z_average()),
        BelObservable::Xy => ("bel-xy", observable(2, &[(1.0, "XY")])),
    };
    Circuit::new(
        name,
        2,
        d,
        InitialState::Zero,
        slices,
        Representation::new("ZZ".parse().expect("static")),
        o,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HweObservable {
    Z,
    Xy,
    Xyz,
    Xyzz,
}

impl HweObservable {
    pub fn letters(self) -> &'static [Pauli] {
        match self {
            Self::Z => &[Pauli::Z],
            Self::Xy => &[Pauli::X, Pauli::Y],
            Self::Xyz => &[Pauli::X, Pauli::Y, Pauli::Z],
            Self::Xyzz => &[Pauli::X, Pauli::Y, Pauli::Z, Pauli::Z],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Z => "z",
            Self::Xy => "xy",
            Self::Xyz => "xyz",
            Self::Xyzz => "xyzz",
        }
    }
}

pub const HWE_MAX_QUBITS: usize = 12;

/// Log depth used with the hardware-efficient model, `round(log₂ n)`.
pub fn log_depth(n: usize) -> usize {
    ((n as f64).log2().round() as usize).max(1)
}

/// Hardware-efficient EQNN on `n` qubits: `R_X`/`R_Y` encoding from `|0…0⟩`,
/// then per layer an odd and an even brick of `exp(-iθXX/2)` on neighbours
/// followed by trainable `R_Z` on every qubit. With `native = false` each
/// brick is CNOT-decomposed into five slices.
pub fn build_eqnn_hwe(n: usize, d: usize, obs: HweObservable, native: bool) -> Result<Circuit> {
    if !(2..=HWE_MAX_QUBITS).contains(&n) {
        return Err(Error::TooManyQubits {
            n,
            max: HWE_MAX_QUBITS,
        });
    }
    check_layers(d)?;
    let width = obs.letters().len();
    if width > n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: width,
        });
    }
    let mut slices = vec![
        (0..n)
            .map(|q| GateSpec::rotation("X", vec![q], AngleSource::Feature(q % 2)))
            .collect::<Slice>(),
        (0..n)
            .map(|q| GateSpec::rotation("Y", vec![q], AngleSource::Feature((q + 1) % 2)))
            .collect::<Slice>(),
    ];
    let mut next_param = 0;
    for _ in 0..d {
        for start in [0usize, 1] {
            let pairs: Vec<(usize, usize, AngleSource)> = (start..n.saturating_sub(1))
                .step_by(2)
                .map(|q| {
                    let a = AngleSource::Parameter(next_param);
                    next_param += 1;
                    (q, q + 1, a)
                })
                .collect();
            if pairs.is_empty() {
                continue;
            }
            if native {
                slices.push(
                    pairs
                        .iter()
                        .map(|&(a, b, s)| GateSpec::rotation("XX", vec![a, b], s))
                        .collect(),
                );
            } else {
                slices.extend(decompose_xx_parallel(&pairs));
            }
        }
        slices.push(
            (0..n)
                .map(|q| {
                    let a = AngleSource::Parameter(next_param);
                    next_param += 1;
                    GateSpec::rotation("Z", vec![q], a)
                })
                .collect(),
        );
    }
    let start = (n - width) / 2;
    let entries: Vec<(usize, Pauli)> = obs
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &p)| (start + i, p))
        .collect();
    let o = PauliSum::from_string(PauliString::from_sparse(n, &entries)?);
    let name = format!(
        "eqnn-hwe-{}{}",
        obs.name(),
        if native { "-native" } else { "" }
    );
    Circuit::new(
        name,
        n,
        d,
        InitialState::Zero,
        slices,
        Representation::new(PauliString::new(vec![Pauli::Z; n])),
        o,
    )
}

/// The two-qubit models used in training and symmetry experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    EqnnZ,
    EqnnZNative,
    EqnnXy,
    BelZ,
    BelXy,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::EqnnZ,
        ModelKind::EqnnZNative,
        ModelKind::EqnnXy,
        ModelKind::BelZ,
        ModelKind::BelXy,
    ];

    pub fn build(self, d: usize) -> Result<Circuit> {
        match self {
            Self::EqnnZ => build_eqnn_z(d),
            Self::EqnnZNative => build_eqnn_z_native(d),
            Self::EqnnXy => build_eqnn_xy(d),
            Self::BelZ => build_bel(d, BelObservable::Z),
            Self::BelXy => build_bel(d, BelObservable::Xy),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::EqnnZ => "eqnn-z",
            Self::EqnnZNative => "eqnn-z-native",
            Self::EqnnXy => "eqnn-xy",
            Self::BelZ => "bel-z",
            Self::BelXy => "bel-xy",
        }
    }

    /// Whether the readout is the `(Z0+Z1)/2` observable.
    pub fn z_observable(self) -> bool {
        matches!(self, Self::EqnnZ | Self::EqnnZNative | Self::BelZ)
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown model '{s}'")))
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateCheck {
    pub slice: usize,
    pub generator: PauliString,
    /// Operator norm of `[G, R(σ)]`: 0 when they commute, 2 otherwise.
    pub commutator_norm: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceReport {
    pub gates: Vec<GateCheck>,
    /// Weight norm of `R(σ) O R(σ)† - O`.
    pub observable_deviation: f64,
    pub observable_passed: bool,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.observable_passed && self.gates.iter().all(|g| g.passed)
    }
}

/// Checks every trainable generator and the observable against the declared
/// representation.
pub fn equivariance_check(circuit: &Circuit) -> EquivarianceReport {
    let sigma = circuit.representation().sigma();
    let n = circuit.num_qubits();
    let mut gates = Vec::new();
    for (i, slice) in circuit.slices().iter().enumerate() {
        for gate in slice.iter().filter(|g| g.kind() == GateKind::Trainable) {
            let g = gate.global_generator(n).expect("trainable gates are rotations");
            let commutes = g.commutes_with(sigma);
            gates.push(GateCheck {
                slice: i,
                generator: g,
                commutator_norm: if commutes { 0.0 } else { 2.0 },
                passed: commutes,
            });
        }
    }
    let observable_deviation: f64 = circuit
        .observable()
        .terms()
        .iter()
        .filter(|(_, p)| !p.commutes_with(sigma))
        .map(|(w, _)| 2.0 * w.abs())
        .sum();
    EquivarianceReport {
        gates,
        observable_deviation,
        observable_passed: observable_deviation == 0.0,
    }
}

/// Group average `(1/|G|) Σ_g R(g) G R(g)†`.
pub fn twirl(generator: &PauliString, rep: &Representation) -> PauliSum {
    let elements = rep.elements();
    let weight = 1.0 / elements.len() as f64;
    let terms = elements
        .iter()
        .map(|r| {
            let sign = if r.commutes_with(generator) { 1.0 } else { -1.0 };
            (sign * weight, generator.clone())
        })
        .collect();
    PauliSum::new(generator.len(), terms)
        .expect("equal lengths")
        .simplified(1e-15)
}
