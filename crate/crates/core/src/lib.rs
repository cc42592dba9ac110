//! Noisy simulation of equivariant quantum neural networks in the
//! Pauli-transfer-matrix picture.

pub mod channels;
pub mod circuit;
pub mod dense;
pub mod error;
pub mod metrics;
pub mod pauli;
pub mod ptm;
pub mod simulator;
pub mod stats;
pub mod symmetry;
pub mod toy;
pub mod trainer;
pub mod zne;

pub use channels::{NoiseChannel, NoiseKind, NoiseSpec};
pub use circuit::{Circuit, HweObservable, ModelKind};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use ptm::{LocalSuperoperator, PtmVector};
pub use simulator::{EvalRequest, EvalResult, Simulator};
