use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count must be at least 1")]
    ZeroQubits,
    #[error("{n} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("local operators act on 1 or 2 qubits, got {0}")]
    UnsupportedArity(usize),
    #[error("generator must be a non-identity Pauli string")]
    IdentityGenerator,
    #[error("generator acts on {0} qubits; at most 2 are supported")]
    GeneratorTooWide(usize),
    #[error("superoperators act on different targets: {left:?} vs {right:?}")]
    TargetMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("invalid {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("Kraus set violates completeness by {deviation:e}")]
    NotCompletelyPositive { deviation: f64 },
    #[error("layer count must be at least {min}, got {found}")]
    InvalidDepth { min: usize, found: usize },
    #[error("observable terms do not share an eigenbasis")]
    NonCommutingObservable,
    #[error("gate {0} is not generated by a Pauli string")]
    NotPauliGenerated(usize),
    #[error("parameter index {index} out of range for {count} parameters")]
    ParameterOutOfRange { index: usize, count: usize },
    #[error("parameter {0} drives more than one gate")]
    SharedParameter(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {min} values, got {found}")]
    TooFewValues { min: usize, found: usize },
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("duplicate extrapolation scale {0}")]
    DuplicateScale(f64),
    #[error("invalid noise schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid dataset request: {0}")]
    InvalidDataset(String),
    #[error("invalid training config: {0}")]
    InvalidTrainConfig(String),
    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
