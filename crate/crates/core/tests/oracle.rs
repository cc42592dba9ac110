mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqnn_noise_core::channels::{kraus_to_ptm, NoiseChannel, NoiseSpec};
use eqnn_noise_core::circuit::*;
use eqnn_noise_core::pauli::{PauliString, PauliSum};
use eqnn_noise_core::ptm::{adjoint_pauli_string_rotation, plus_state, PtmVector};
use eqnn_noise_core::simulator::Simulator;
use eqnn_noise_core::toy::{simulate_toy, toy_ad, ToyConfig};

fn random_circuit(n: usize, slices: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let letters = ["X", "Y", "Z"];
    let mut out = Vec::new();
    let mut param = 0;
    for _ in 0..slices {
        let mut free: Vec<usize> = (0..n).collect();
        let mut slice = Vec::new();
        while !free.is_empty() {
            let q = free.remove(rng.gen_range(0..free.len()));
            let pick = rng.gen_range(0..6);
            if pick >= 4 && !free.is_empty() {
                let r = free.remove(rng.gen_range(0..free.len()));
                if pick == 4 {
                    slice.push(GateSpec::cnot(q, r));
                } else {
                    let g = format!("{}{}", letters[rng.gen_range(0..3)], letters[rng.gen_range(0..3)]);
                    slice.push(GateSpec::rotation(&g, vec![q, r], AngleSource::Parameter(param)));
                    param += 1;
                }
            } else if pick >= 3 {
                slice.push(GateSpec::hadamard(q));
            } else {
                let angle = if rng.gen_bool(0.5) {
                    AngleSource::Feature(rng.gen_range(0..2))
                } else {
                    param += 1;
                    AngleSource::Parameter(param - 1)
                };
                slice.push(GateSpec::rotation(letters[pick], vec![q], angle));
            }
        }
        out.push(slice);
    }
    let obs: PauliString = (0..n).map(|q| ["X", "Y", "Z"][q % 3]).collect::<String>().parse().unwrap();
    Circuit::new(
        "random",
        n,
        1,
        InitialState::Zero,
        out,
        Representation::new(PauliString::identity(n)),
        PauliSum::new(n, vec![(0.7, obs), (-0.3, PauliString::identity(n))]).unwrap(),
    )
    .unwrap()
}

fn noise_sets() -> Vec<Vec<NoiseChannel>> {
    vec![
        vec![],
        vec![NoiseChannel::amplitude_damping(0.07).unwrap()],
        vec![NoiseChannel::depolarizing(0.05).unwrap()],
        vec![
            NoiseChannel::amplitude_damping(0.03).unwrap(),
            NoiseChannel::pauli(0.01, 0.02, 0.03).unwrap(),
            NoiseChannel::bit_flip(0.02).unwrap(),
            NoiseChannel::phase_flip(0.04).unwrap(),
        ],
    ]
}

#[test]
fn random_circuits_match_dense_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..24 {
        let n = 2 + trial % 2;
        let c = random_circuit(n, 6, &mut rng);
        let params: Vec<f64> = (0..c.num_params()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let datum = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        for chans in noise_sets() {
            let sim = Simulator::new(&c, &NoiseSpec::uniform(chans.clone())).unwrap();
            let got = sim.expectation(&params, &datum).unwrap();
            let want = run(&c, &chans, &params, &datum);
            assert!((got - want).abs() < 1e-10, "trial {trial}: {got} vs {want}");
        }
    }
}

#[test]
fn model_circuits_match_dense_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let circuits = [
        build_eqnn_z(2).unwrap(),
        build_eqnn_z_native(2).unwrap(),
        build_eqnn_xy(2).unwrap(),
        build_bel(2, BelObservable::Z).unwrap(),
        build_bel(2, BelObservable::Xy).unwrap(),
        build_eqnn_hwe(3, 1, HweObservable::Xyz, false).unwrap(),
        build_eqnn_hwe(4, 1, HweObservable::Xy, true).unwrap(),
    ];
    for c in &circuits {
        let params: Vec<f64> = (0..c.num_params()).map(|_| rng.gen_range(0.0..6.28)).collect();
        let datum = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        for chans in noise_sets() {
            let sim = Simulator::new(c, &NoiseSpec::uniform(chans.clone())).unwrap();
            let got = sim.expectation(&params, &datum).unwrap();
            let want = run(c, &chans, &params, &datum);
            assert!((got - want).abs() < 1e-10, "{}: {got} vs {want}", c.name());
        }
    }
}

#[test]
fn final_state_coefficients_are_pauli_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = random_circuit(2, 5, &mut rng);
    let params: Vec<f64> = (0..c.num_params()).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let chans = vec![NoiseChannel::amplitude_damping(0.2).unwrap()];
    let state = Simulator::new(&c, &NoiseSpec::uniform(chans.clone()))
        .unwrap()
        .final_state(&params, &[0.3, -0.2])
        .unwrap();
    // rebuild ρ from the coefficients and compare against the dense run on Z-type observables
    let mut rho = Mat::zeros(4);
    for idx in 0..16 {
        let p = PauliString::from_index(idx, 2).to_string();
        rho = rho.add(&pauli(&p).scale(num_complex::Complex64::new(state.coeffs()[idx], 0.0)));
    }
    assert!((rho.trace().re - 1.0).abs() < 1e-12);
    for idx in 0..16 {
        let p = PauliString::from_index(idx, 2);
        let obs = PauliSum::from_string(p.clone());
        let dense_circuit = c.with_observable(obs).unwrap();
        let want = run(&dense_circuit, &chans, &params, &[0.3, -0.2]);
        let got = pauli(&p.to_string()).mul(&rho).trace().re;
        assert!((got - want).abs() < 1e-10, "{p}");
    }
}

#[test]
fn channel_ptms_match_kraus_definitions() {
    for ch in noise_sets().into_iter().flatten() {
        let ks = kraus(&ch);
        let ptm = ch.ptm();
        for b in 0..4 {
            let pb = pauli(&PauliString::from_index(b, 1).to_string());
            let image = apply_kraus(&pb, &ks);
            for a in 0..4 {
                let pa = pauli(&PauliString::from_index(a, 1).to_string());
                let want = pa.mul(&image).trace().re / 2.0;
                assert!((ptm.entry(a, b) - want).abs() < 1e-14, "{}", ch.name());
            }
        }
    }
    let ad = kraus(&NoiseChannel::amplitude_damping(0.3).unwrap());
    let dense: Vec<eqnn_noise_core::dense::CMatrix> = ad
        .iter()
        .map(|m| eqnn_noise_core::dense::CMatrix { dim: 2, data: m.a.clone() })
        .collect();
    let via_core = kraus_to_ptm(&dense).unwrap();
    assert!(via_core.max_abs_diff(&NoiseChannel::amplitude_damping(0.3).unwrap().ptm()) < 1e-14);
}

#[test]
fn decomposed_xx_matches_native_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..50 {
        let theta = if k == 0 { 0.0 } else if k == 1 { std::f64::consts::PI } else { rng.gen_range(-6.3..6.3) };
        let slices = decompose_xx(AngleSource::Constant(theta), 0, 1);
        let c = Circuit::new(
            "xx",
            2,
            1,
            InitialState::Zero,
            slices,
            Representation::new("ZZ".parse().unwrap()),
            PauliSum::zero(2),
        )
        .unwrap();
        let native = adjoint_pauli_string_rotation(&"XX".parse().unwrap(), theta).unwrap();
        for col in 0..16 {
            let mut v = vec![0.0; 16];
            v[col] = 1.0;
            // push each basis coefficient vector through the compiled slices
            let mut a = PtmVector::from_coeffs(2, v.clone()).unwrap();
            let mut b = a.clone();
            b.apply(&native).unwrap();
            for step in c.slices() {
                for g in step {
                    let one = Circuit::new(
                        "g",
                        2,
                        1,
                        InitialState::Zero,
                        vec![vec![g.clone()]],
                        Representation::new("ZZ".parse().unwrap()),
                        PauliSum::zero(2),
                    )
                    .unwrap();
                    apply_gate(&one, &mut a);
                }
            }
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert!((x - y).abs() < 1e-12, "θ = {theta}");
            }
        }
    }
}

/// Applies a single-gate noiseless circuit to an arbitrary coefficient vector
/// by linearity: the map is read off from the dense oracle.
fn apply_gate(one: &Circuit, a: &mut PtmVector) {
    let mut out = vec![0.0; 16];
    for (src, &w) in a.coeffs().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let p_src = PauliString::from_index(src, 2).to_string();
        let u = match &one.slices()[0][0].op {
            GateOp::Hadamard => on_qubit(&single('H'), one.slices()[0][0].targets[0], 2),
            GateOp::Cnot => cnot(one.slices()[0][0].targets[0], one.slices()[0][0].targets[1], 2),
            GateOp::Rotation { generator, angle } => {
                let AngleSource::Constant(t) = *angle else { unreachable!() };
                let mut letters = ['I'; 2];
                for (k, &q) in one.slices()[0][0].targets.iter().enumerate() {
                    letters[q] = generator.letters()[k].as_char();
                }
                exp_pauli(&letters.iter().collect::<String>(), t)
            }
        };
        let image = conj(&pauli(&p_src), &u);
        for (dst, slot) in out.iter_mut().enumerate() {
            let p_dst = pauli(&PauliString::from_index(dst, 2).to_string());
            *slot += w * p_dst.mul(&image).trace().re / 4.0;
        }
    }
    *a = PtmVector::from_coeffs(2, out).unwrap();
}

#[test]
fn toy_pipeline_matches_dense_and_closed_form() {
    // dense: |+⟩, conjugation by exp(+iθY/2) (the toy convention), AD per block
    for &(x, theta, d, g) in &[(0.3, 0.5, 6u32, 0.05), (-1.2, 1.9, 3, 0.1), (2.2, -0.4, 11, 0.02)] {
        let cfg = ToyConfig::new(x, theta, d).with_damping(g).unwrap();
        let mut rho = Mat { dim: 2, a: vec![num_complex::Complex64::new(0.5, 0.0); 4] };
        rho = conj(&rho, &exp_pauli("Y", -x));
        let ks = kraus(&NoiseChannel::amplitude_damping(g).unwrap());
        for _ in 0..d {
            rho = conj(&rho, &exp_pauli("Y", -theta));
            rho = apply_kraus(&rho, &ks);
            rho = conj(&rho, &exp_pauli("Y", theta));
        }
        let a_x = pauli("X").mul(&rho).trace().re / 2.0;
        assert!((simulate_toy(&cfg).unwrap() - a_x).abs() < 1e-12);
        assert!((toy_ad(&cfg) - a_x).abs() < 1e-12);
    }
    assert_eq!(plus_state(1).unwrap().coeffs()[1], 0.5);
}

#[test]
fn parameter_shift_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for chans in [vec![], vec![NoiseChannel::amplitude_damping(0.05).unwrap()]] {
        let c = random_circuit(2, 6, &mut rng);
        let sim = Simulator::new(&c, &NoiseSpec::uniform(chans)).unwrap();
        let params: Vec<f64> = (0..c.num_params()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let datum = [0.4, 1.3];
        let h = 1e-5;
        for i in 0..params.len() {
            let mut a = params.clone();
            a[i] += h;
            let mut b = params.clone();
            b[i] -= h;
            let fd = (sim.expectation(&a, &datum).unwrap() - sim.expectation(&b, &datum).unwrap()) / (2.0 * h);
            let ps = sim.parameter_shift(&params, &datum, i).unwrap();
            assert!((fd - ps).abs() < 1e-6);
        }
    }
}

#[test]
fn shot_sampling_matches_exact_expectation() {
    let c = build_eqnn_xy(2).unwrap();
    let noise = NoiseSpec::single(NoiseChannel::amplitude_damping(0.05).unwrap());
    let sim = Simulator::new(&c, &noise).unwrap();
    let params = [0.1, 0.9, 1.7, 2.5, 3.3, 4.1];
    let state = sim.final_state(&params, &[0.8, -0.6]).unwrap();
    let exact = state.expectation(c.observable()).unwrap();
    let shots = 1_000_000;
    let est = eqnn_noise_core::simulator::sample_shots(&state, c.observable(), shots, 99).unwrap();
    let se = ((1.0 - exact * exact) / shots as f64).sqrt();
    assert!((est - exact).abs() < 5.0 * se, "{est} vs {exact}");
}
