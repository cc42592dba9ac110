//! Small dense complex matrices (at most 4×4) used to build superoperators
//! from unitaries and Kraus sets. Local two-qubit matrices index basis states
//! as `b0 + 2·b1`, matching the little-endian Pauli convention.

use num_complex::Complex64;

use crate::pauli::Pauli;

pub type C = Complex64;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub dim: usize,
    pub data: Vec<C>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix must be square");
            data.extend_from_slice(r);
        }
        Self { dim, data }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C {
        self.data[r * self.dim + c]
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.at(i, j).conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn pauli_matrix(p: Pauli) -> CMatrix {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    match p {
        Pauli::I => CMatrix::from_rows(&[&[l, o], &[o, l]]),
        Pauli::X => CMatrix::from_rows(&[&[o, l], &[l, o]]),
        Pauli::Y => CMatrix::from_rows(&[&[o, -i], &[i, o]]),
        Pauli::Z => CMatrix::from_rows(&[&[l, o], &[o, -l]]),
    }
}

/// Dense matrix of a local Pauli string, `letters[0]` on the least-significant bit.
pub fn local_pauli_matrix(letters: &[Pauli]) -> CMatrix {
    let k = letters.len();
    let dim = 1usize << k;
    let factors: Vec<CMatrix> = letters.iter().map(|&p| pauli_matrix(p)).collect();
    let mut out = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut v = C::new(1.0, 0.0);
            for (q, f) in factors.iter().enumerate() {
                v *= f.at((r >> q) & 1, (c >> q) & 1);
            }
            out.data[r * dim + c] = v;
        }
    }
    out
}

/// Real superoperator `R[a][b] = Tr(P_a Σ K P_b K†) / 2^k` over the local
/// Pauli basis. `k` is inferred from the matrix dimension.
pub fn kraus_superoperator(kraus: &[CMatrix]) -> Vec<f64> {
    let dim = kraus[0].dim;
    let k = dim.trailing_zeros() as usize;
    let basis_len = 1usize << (2 * k);
    let basis: Vec<CMatrix> = (0..basis_len)
        .map(|idx| {
            let letters: Vec<Pauli> = (0..k).map(|q| Pauli::from_index(idx >> (2 * q))).collect();
            local_pauli_matrix(&letters)
        })
        .collect();
    let norm = dim as f64;
    let mut out = vec![0.0; basis_len * basis_len];
    for (b, pb) in basis.iter().enumerate() {
        let mut image = CMatrix::zeros(dim);
        for kr in kraus {
            image.add_assign(&kr.matmul(pb).matmul(&kr.dagger()));
        }
        for (a, pa) in basis.iter().enumerate() {
            out[a * basis_len + b] = pa.matmul(&image).trace().re / norm;
        }
    }
    out
}

pub fn hadamard() -> CMatrix {
    let h = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_rows(&[&[h, h], &[h, -h]])
}

/// CNOT with the control on local bit 0 and the target on local bit 1.
pub fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4);
    for b in 0..4usize {
        let b0 = b & 1;
        let b1 = (b >> 1) & 1;
        let out = b0 | ((b1 ^ b0) << 1);
        m.data[out * 4 + b] = C::new(1.0, 0.0);
    }
    m
}
