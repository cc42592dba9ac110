//! Dense density-matrix reference simulator, written against the textbook
//! definitions only (Kraus sums, matrix exponentials of Pauli strings).
#![allow(dead_code)]

use num_complex::Complex64 as C;

use eqnn_noise_core::channels::NoiseChannel;
use eqnn_noise_core::circuit::{AngleSource, Circuit, GateOp, InitialState};
use eqnn_noise_core::pauli::PauliSum;

#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub a: Vec<C>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, a: vec![C::new(0.0, 0.0); dim * dim] }
    }

    pub fn eye(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i * dim + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.a[r * self.dim + c]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let x = self.get(i, k);
                if x.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.a[i * d + j] += x * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn adj(&self) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.a[j * d + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat { dim: self.dim, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat { dim: self.dim, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> C {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_diff(&self, o: &Mat) -> f64 {
        self.a.iter().zip(&o.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// `self ⊗ o` with `o` on the low bits.
    pub fn kron(&self, o: &Mat) -> Mat {
        let d = self.dim * o.dim;
        let mut out = Mat::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..o.dim {
                    for l in 0..o.dim {
                        out.a[(i * o.dim + k) * d + j * o.dim + l] = self.get(i, j) * o.get(k, l);
                    }
                }
            }
        }
        out
    }
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn single(ch: char) -> Mat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let a = match ch {
        'I' => vec![l, o, o, l],
        'X' => vec![o, l, l, o],
        'Y' => vec![o, -i, i, o],
        'Z' => vec![l, o, o, -l],
        'H' => {
            let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            vec![h, h, h, -h]
        }
        _ => panic!("unknown single-qubit matrix {ch}"),
    };
    Mat { dim: 2, a }
}

/// Operator acting as `m` on qubit `q` of `n` (qubit 0 = least-significant bit).
pub fn on_qubit(m: &Mat, q: usize, n: usize) -> Mat {
    let mut out = Mat::eye(1);
    for k in (0..n).rev() {
        let f = if k == q { m.clone() } else { Mat::eye(2) };
        out = out.kron(&f);
    }
    out
}

/// Full Pauli string matrix; `s[q]` acts on qubit `q`.
pub fn pauli(s: &str) -> Mat {
    let letters: Vec<char> = s.chars().collect();
    let mut out = Mat::eye(1);
    for &ch in letters.iter().rev() {
        out = out.kron(&single(ch));
    }
    out
}

/// `exp(-iθP/2) = cos(θ/2) I - i sin(θ/2) P` for a Pauli string `P`.
pub fn exp_pauli(p: &str, theta: f64) -> Mat {
    let m = pauli(p);
    Mat::eye(m.dim)
        .scale(c((theta / 2.0).cos(), 0.0))
        .add(&m.scale(c(0.0, -(theta / 2.0).sin())))
}

pub fn cnot(control: usize, target: usize, n: usize) -> Mat {
    let d = 1 << n;
    let mut m = Mat::zeros(d);
    for b in 0..d {
        let out = if b >> control & 1 == 1 { b ^ (1 << target) } else { b };
        m.a[out * d + b] = c(1.0, 0.0);
    }
    m
}

pub fn kraus(ch: &NoiseChannel) -> Vec<Mat> {
    let s = |w: f64, p: char| single(p).scale(c(w.sqrt(), 0.0));
    match *ch {
        NoiseChannel::BitFlip(p) => vec![s(1.0 - p, 'I'), s(p, 'X')],
        NoiseChannel::PhaseFlip(p) => vec![s(1.0 - p, 'I'), s(p, 'Z')],
        NoiseChannel::Depolarizing(p) => {
            vec![s(1.0 - p, 'I'), s(p / 3.0, 'X'), s(p / 3.0, 'Y'), s(p / 3.0, 'Z')]
        }
        NoiseChannel::Pauli(q) => vec![
            s(1.0 - q.p_x() - q.p_y() - q.p_z(), 'I'),
            s(q.p_x(), 'X'),
            s(q.p_y(), 'Y'),
            s(q.p_z(), 'Z'),
        ],
        NoiseChannel::AmplitudeDamping(a) => {
            let g = a.gamma();
            vec![
                Mat { dim: 2, a: vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - g).sqrt(), 0.0)] },
                Mat { dim: 2, a: vec![c(0.0, 0.0), c(g.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)] },
            ]
        }
    }
}

pub fn conj(rho: &Mat, u: &Mat) -> Mat {
    u.mul(rho).mul(&u.adj())
}

pub fn apply_kraus(rho: &Mat, ks: &[Mat]) -> Mat {
    let mut out = Mat::zeros(rho.dim);
    for k in ks {
        out = out.add(&conj(rho, k));
    }
    out
}

pub fn apply_channel_on(rho: &Mat, ch: &NoiseChannel, q: usize, n: usize) -> Mat {
    let ks: Vec<Mat> = kraus(ch).iter().map(|k| on_qubit(k, q, n)).collect();
    apply_kraus(rho, &ks)
}

pub fn expectation(rho: &Mat, obs: &PauliSum) -> f64 {
    obs.terms()
        .iter()
        .map(|(w, p)| w * pauli(&p.to_string()).mul(rho).trace().re)
        .sum()
}

pub fn initial(circuit: &Circuit) -> Mat {
    let n = circuit.num_qubits();
    let d = 1 << n;
    match circuit.initial_state() {
        InitialState::Zero => {
            let mut m = Mat::zeros(d);
            m.a[0] = c(1.0, 0.0);
            m
        }
        InitialState::Plus => Mat { dim: d, a: vec![c(1.0 / d as f64, 0.0); d * d] },
    }
}

/// Runs `circuit` with `channels` applied to every qubit after every slice.
pub fn run(circuit: &Circuit, channels: &[NoiseChannel], params: &[f64], datum: &[f64]) -> f64 {
    let n = circuit.num_qubits();
    let mut rho = initial(circuit);
    for slice in circuit.slices() {
        for gate in slice {
            let u = match &gate.op {
                GateOp::Rotation { generator, angle } => {
                    let theta = match *angle {
                        AngleSource::Feature(i) => datum[i],
                        AngleSource::Parameter(i) => params[i],
                        AngleSource::Constant(v) => v,
                    };
                    let mut letters = vec!['I'; n];
                    for (k, &t) in gate.targets.iter().enumerate() {
                        letters[t] = generator.letters()[k].as_char();
                    }
                    exp_pauli(&letters.iter().collect::<String>(), theta)
                }
                GateOp::Hadamard => on_qubit(&single('H'), gate.targets[0], n),
                GateOp::Cnot => cnot(gate.targets[0], gate.targets[1], n),
            };
            rho = conj(&rho, &u);
        }
        for q in 0..n {
            for ch in channels {
                rho = apply_channel_on(&rho, ch, q, n);
            }
        }
    }
    expectation(&rho, circuit.observable())
}
