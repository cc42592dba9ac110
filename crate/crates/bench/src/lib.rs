//! Fixtures shared by the benchmarks.

use eqnn_noise_core::circuit::Circuit;
use eqnn_noise_core::trainer::initial_parameters;
use eqnn_noise_core::{NoiseKind, NoiseSpec, Simulator};

/// Compiled simulator, parameters and one input for `circuit` under
/// amplitude damping `gamma`.
pub fn fixture(circuit: &Circuit, gamma: f64) -> (Simulator, Vec<f64>, [f64; 2]) {
    let noise = if gamma == 0.0 {
        NoiseSpec::noiseless()
    } else {
        NoiseKind::AmplitudeDamping.spec(gamma).expect("valid gamma")
    };
    let sim = Simulator::new(circuit, &noise).expect("valid circuit");
    let params = initial_parameters(circuit.num_params(), 1);
    (sim, params, [0.7, -1.2])
}
