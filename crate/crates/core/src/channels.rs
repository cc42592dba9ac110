//! Local noise channels as Pauli transfer matrices.
//!
//! Every constructor validates its parameters; an out-of-range probability
//! is an error, never clamped.

use crate::dense::{self, CMatrix, C};
use crate::error::{Error, Result};
use crate::ptm::LocalSuperoperator;

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(())
}

/// Probabilities of applying X, Y or Z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliChannelParams {
    p_x: f64,
    p_y: f64,
    p_z: f64,
}

impl PauliChannelParams {
    pub fn new(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        check_probability("p_x", p_x)?;
        check_probability("p_y", p_y)?;
        check_probability("p_z", p_z)?;
        let total = p_x + p_y + p_z;
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidProbability {
                name: "p_x + p_y + p_z",
                value: total,
            });
        }
        Ok(Self { p_x, p_y, p_z })
    }

    /// Uniform X/Y/Z errors with total probability `p`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Self::new(p / 3.0, p / 3.0, p / 3.0)
    }

    /// Parameters reproducing the given Pauli fidelities.
    pub fn from_fidelities(f_x: f64, f_y: f64, f_z: f64) -> Result<Self> {
        // f_x = 1 - 2(p_y + p_z) and cyclic
        let p_x = (1.0 - f_y - f_z + f_x) / 4.0;
        let p_y = (1.0 - f_x - f_z + f_y) / 4.0;
        let p_z = (1.0 - f_x - f_y + f_z) / 4.0;
        let clean = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
        Self::new(clean(p_x), clean(p_y), clean(p_z))
    }

    pub fn p_x(&self) -> f64 {
        self.p_x
    }
    pub fn p_y(&self) -> f64 {
        self.p_y
    }
    pub fn p_z(&self) -> f64 {
        self.p_z
    }

    /// `(f_x, f_y, f_z)`.
    pub fn fidelities(&self) -> (f64, f64, f64) {
        (
            1.0 - 2.0 * (self.p_y + self.p_z),
            1.0 - 2.0 * (self.p_x + self.p_z),
            1.0 - 2.0 * (self.p_x + self.p_y),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeDampingParams {
    gamma: f64,
}

impl AmplitudeDampingParams {
    pub fn new(gamma: f64) -> Result<Self> {
        check_probability("gamma", gamma)?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// One single-qubit channel of a noise model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseChannel {
    BitFlip(f64),
    PhaseFlip(f64),
    Depolarizing(f64),
    Pauli(PauliChannelParams),
    AmplitudeDamping(AmplitudeDampingParams),
}

impl NoiseChannel {
    pub fn bit_flip(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self::BitFlip(p))
    }

    pub fn phase_flip(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self::PhaseFlip(p))
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self::Depolarizing(p))
    }

    pub fn pauli(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        Ok(Self::Pauli(PauliChannelParams::new(p_x, p_y, p_z)?))
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        Ok(Self::AmplitudeDamping(AmplitudeDampingParams::new(gamma)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::BitFlip(_) => "bitflip",
            Self::PhaseFlip(_) => "phaseflip",
            Self::Depolarizing(_) => "depolarizing",
            Self::Pauli(_) => "pauli",
            Self::AmplitudeDamping(_) => "amplitude_damping",
        }
    }

    /// PTM acting on qubit 0.
    pub fn ptm(&self) -> LocalSuperoperator {
        match *self {
            Self::BitFlip(p) => ptm_bit_flip(p).expect("validated"),
            Self::PhaseFlip(p) => ptm_phase_flip(p).expect("validated"),
            Self::Depolarizing(p) => ptm_depolarizing(p).expect("validated"),
            Self::Pauli(params) => ptm_pauli(&params),
            Self::AmplitudeDamping(params) => ptm_amplitude_damping(&params),
        }
    }

    /// Copy with the damping probability multiplied by `factor`; channels
    /// without damping are returned unchanged.
    pub fn scale_damping(&self, factor: f64) -> Result<Self> {
        match self {
            Self::AmplitudeDamping(p) => Self::amplitude_damping(p.gamma * factor),
            other => Ok(*other),
        }
    }

    pub fn is_noiseless(&self) -> bool {
        match *self {
            Self::BitFlip(p) | Self::PhaseFlip(p) | Self::Depolarizing(p) => p == 0.0,
            Self::Pauli(c) => c.p_x == 0.0 && c.p_y == 0.0 && c.p_z == 0.0,
            Self::AmplitudeDamping(c) => c.gamma == 0.0,
        }
    }
}

/// Single-parameter channel families swept by the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    BitFlip,
    PhaseFlip,
    Depolarizing,
    AmplitudeDamping,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] = [
        NoiseKind::BitFlip,
        NoiseKind::PhaseFlip,
        NoiseKind::Depolarizing,
        NoiseKind::AmplitudeDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::BitFlip => "bitflip",
            Self::PhaseFlip => "phaseflip",
            Self::Depolarizing => "depolarizing",
            Self::AmplitudeDamping => "amplitude_damping",
        }
    }

    pub fn channel(self, value: f64) -> Result<NoiseChannel> {
        match self {
            Self::BitFlip => NoiseChannel::bit_flip(value),
            Self::PhaseFlip => NoiseChannel::phase_flip(value),
            Self::Depolarizing => NoiseChannel::depolarizing(value),
            Self::AmplitudeDamping => NoiseChannel::amplitude_damping(value),
        }
    }

    /// The same channel on every qubit.
    pub fn spec(self, value: f64) -> Result<NoiseSpec> {
        Ok(NoiseSpec::single(self.channel(value)?))
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bitflip" | "bf" => Ok(Self::BitFlip),
            "phaseflip" | "pf" => Ok(Self::PhaseFlip),
            "depolarizing" | "dp" => Ok(Self::Depolarizing),
            "amplitude_damping" | "ad" => Ok(Self::AmplitudeDamping),
            _ => Err(Error::Parse(format!("unknown noise channel '{s}'"))),
        }
    }
}

impl std::fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered channels applied to each qubit after every circuit time-slice.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NoiseSpec {
    shared: Vec<NoiseChannel>,
    per_qubit: Option<Vec<Vec<NoiseChannel>>>,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self::default()
    }

    /// Same channel sequence on every qubit.
    pub fn uniform(channels: Vec<NoiseChannel>) -> Self {
        Self {
            shared: channels,
            per_qubit: None,
        }
    }

    pub fn single(channel: NoiseChannel) -> Self {
        Self::uniform(vec![channel])
    }

    /// Explicit channel sequence for each qubit.
    pub fn per_qubit(channels: Vec<Vec<NoiseChannel>>) -> Self {
        Self {
            shared: vec![],
            per_qubit: Some(channels),
        }
    }

    pub fn channels_for(&self, qubit: usize) -> &[NoiseChannel] {
        match &self.per_qubit {
            Some(all) => all.get(qubit).map(Vec::as_slice).unwrap_or(&[]),
            None => &self.shared,
        }
    }

    /// Composite PTM for `qubit`, or `None` when it is the identity.
    pub fn composite_ptm(&self, qubit: usize) -> Option<LocalSuperoperator> {
        let chans: Vec<_> = self
            .channels_for(qubit)
            .iter()
            .filter(|c| !c.is_noiseless())
            .collect();
        let mut iter = chans.iter();
        let first = iter.next()?.ptm();
        let total = iter.fold(first, |acc, c| compose(&c.ptm(), &acc).expect("same target"));
        Some(total.on(vec![qubit]).expect("single target"))
    }

    pub fn is_noiseless(&self) -> bool {
        match &self.per_qubit {
            Some(all) => all.iter().flatten().all(NoiseChannel::is_noiseless),
            None => self.shared.iter().all(NoiseChannel::is_noiseless),
        }
    }

    /// Multiplies every damping probability by `factor`.
    pub fn scale_damping(&self, factor: f64) -> Result<Self> {
        let scale = |v: &[NoiseChannel]| -> Result<Vec<NoiseChannel>> {
            v.iter().map(|c| c.scale_damping(factor)).collect()
        };
        Ok(Self {
            shared: scale(&self.shared)?,
            per_qubit: match &self.per_qubit {
                Some(all) => Some(all.iter().map(|v| scale(v)).collect::<Result<_>>()?),
                None => None,
            },
        })
    }
}

/// `diag(1, 1, 1-2p, 1-2p)`.
pub fn ptm_bit_flip(p: f64) -> Result<LocalSuperoperator> {
    check_probability("p", p)?;
    let f = 1.0 - 2.0 * p;
    Ok(LocalSuperoperator::diagonal([1.0, 1.0, f, f], 0))
}

/// `diag(1, 1-2p, 1-2p, 1)`.
pub fn ptm_phase_flip(p: f64) -> Result<LocalSuperoperator> {
    check_probability("p", p)?;
    let f = 1.0 - 2.0 * p;
    Ok(LocalSuperoperator::diagonal([1.0, f, f, 1.0], 0))
}

/// `diag(1, f_x, f_y, f_z)`.
pub fn ptm_pauli(params: &PauliChannelParams) -> LocalSuperoperator {
    let (fx, fy, fz) = params.fidelities();
    LocalSuperoperator::diagonal([1.0, fx, fy, fz], 0)
}

/// Depolarizing channel with Kraus weights `√(1-p)` on I and `√(p/3)` on each
/// Pauli: `diag(1, 1-4p/3, 1-4p/3, 1-4p/3)`.
pub fn ptm_depolarizing(p: f64) -> Result<LocalSuperoperator> {
    Ok(ptm_pauli(&PauliChannelParams::depolarizing(p)?))
}

pub fn ptm_amplitude_damping(params: &AmplitudeDampingParams) -> LocalSuperoperator {
    let g = params.gamma;
    let s = (1.0 - g).sqrt();
    LocalSuperoperator::single(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, s, 0.0, 0.0],
            [0.0, 0.0, s, 0.0],
            [g, 0.0, 0.0, 1.0 - g],
        ],
        0,
    )
}

pub fn amplitude_damping_kraus(gamma: f64) -> Result<[CMatrix; 2]> {
    check_probability("gamma", gamma)?;
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    Ok([
        CMatrix::from_rows(&[&[l, o], &[o, C::new((1.0 - gamma).sqrt(), 0.0)]]),
        CMatrix::from_rows(&[&[o, C::new(gamma.sqrt(), 0.0)], &[o, o]]),
    ])
}

/// PTM of a single-qubit Kraus set, `R[a][b] = Tr(P_a Σ K P_b K†)/2`.
///
/// Rejects sets with `Σ K†K > I` (beyond 1e-10); trace-decreasing sets are
/// accepted.
pub fn kraus_to_ptm(kraus: &[CMatrix]) -> Result<LocalSuperoperator> {
    if kraus.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = kraus.iter().find(|k| k.dim != 2) {
        return Err(Error::LengthMismatch {
            expected: 2,
            found: bad.dim,
        });
    }
    let mut gram = CMatrix::zeros(2);
    for k in kraus {
        gram.add_assign(&k.dagger().matmul(k));
    }
    // largest eigenvalue of the 2×2 Hermitian Σ K†K
    let a = gram.at(0, 0).re;
    let d = gram.at(1, 1).re;
    let b = gram.at(0, 1);
    let top = 0.5 * (a + d) + (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
    if top > 1.0 + 1e-10 {
        return Err(Error::NotCompletelyPositive {
            deviation: top - 1.0,
        });
    }
    LocalSuperoperator::new(dense::kraus_superoperator(kraus), vec![0])
}

/// `a · b`, i.e. `b` applied first.
pub fn compose(a: &LocalSuperoperator, b: &LocalSuperoperator) -> Result<LocalSuperoperator> {
    a.compose(b)
}

/// `(4,1)` entry of `Λ_AD^d`, exactly `1 - (1-γ)^d`.
pub fn ad_offdiagonal_exact(d: u32, gamma: f64) -> f64 {
    1.0 - (1.0 - gamma).powi(d as i32)
}

/// Quadratic truncation `dγ - d(d-1)γ²/2`.
pub fn ad_offdiagonal_approx(d: u32, gamma: f64) -> f64 {
    let d = d as f64;
    d * gamma - d * (d - 1.0) / 2.0 * gamma * gamma
}

/// `(4,1)` entry of `(Λ_P · Λ_AD)^d`: `f_z γ Σ_{k<d} (f_z(1-γ))^k`.
pub fn pauli_ad_offdiagonal_exact(d: u32, gamma: f64, f_z: f64) -> f64 {
    let r = f_z * (1.0 - gamma);
    let mut acc = 0.0;
    let mut pow = 1.0;
    for _ in 0..d {
        acc += pow;
        pow *= r;
    }
    f_z * gamma * acc
}

/// `(Σ_{k=1}^d f_z^k) γ - (Σ_{k=1}^d (k-1) f_z^k) γ²`.
pub fn pauli_ad_offdiagonal_approx(d: u32, gamma: f64, f_z: f64) -> f64 {
    let mut lin = 0.0;
    let mut quad = 0.0;
    let mut pow = 1.0;
    for k in 1..=d {
        pow *= f_z;
        lin += pow;
        quad += (k as f64 - 1.0) * pow;
    }
    lin * gamma - quad * gamma * gamma
}

/// Whether a single-qubit channel commutes with conjugation by Z.
pub fn commutes_with_z(channel: &LocalSuperoperator) -> bool {
    if channel.arity() != 1 {
        return false;
    }
    let ad_z = LocalSuperoperator::diagonal([1.0, -1.0, -1.0, 1.0], channel.targets()[0]);
    let left = channel.compose(&ad_z).expect("same target");
    let right = ad_z.compose(channel).expect("same target");
    left.max_abs_diff(&right) <= 1e-12
}
