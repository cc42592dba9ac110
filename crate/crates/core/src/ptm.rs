//! States and superoperators in the Pauli-transfer-matrix picture.
//!
//! A density operator is stored by the coefficients `a_P` of its
//! *unnormalized* Pauli expansion `ρ = Σ_P a_P P`, so every valid state has
//! `a_I = 1/2ⁿ` and the physical expectation of a Pauli string is
//! `Tr(ρP) = 2ⁿ·a_P`. Coefficients are laid out by [`PauliString::index`]
//! (base-4, qubit 0 least significant).
//!
//! Local superoperators act on one or two qubits and are applied by strided
//! contraction over the touched tensor factors; the full `4ⁿ × 4ⁿ` matrix is
//! never formed.

use crate::dense;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};

#[derive(Clone, Debug, PartialEq)]
pub struct PtmVector {
    n: usize,
    coeffs: Vec<f64>,
}

impl PtmVector {
    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        let len = 1usize << (2 * n);
        if coeffs.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    /// Product state whose every factor has coefficients `single`.
    pub fn product(n: usize, single: [f64; 4]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroQubits);
        }
        let mut coeffs = vec![1.0];
        for _ in 0..n {
            let mut next = vec![0.0; coeffs.len() * 4];
            for (digit, &s) in single.iter().enumerate() {
                if s == 0.0 {
                    continue;
                }
                for (lo, &c) in coeffs.iter().enumerate() {
                    next[digit * coeffs.len() + lo] = c * s;
                }
            }
            coeffs = next;
        }
        Ok(Self { n, coeffs })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn identity_coefficient(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw expansion coefficient `a_P`. This is the quantity the closed-form
    /// toy expressions produce (`a_X = ⟨X⟩/2` on one qubit).
    pub fn coefficient(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        Ok(self.coeffs[p.index()])
    }

    /// Physical `Tr(ρP)`.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        Ok(self.coefficient(p)? * (1u64 << self.n) as f64)
    }

    /// Physical `Tr(ρO)` for a weighted Pauli sum.
    pub fn expectation(&self, obs: &PauliSum) -> Result<f64> {
        if obs.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: obs.num_qubits(),
            });
        }
        let scale = (1u64 << self.n) as f64;
        Ok(obs
            .terms()
            .iter()
            .map(|(w, p)| w * self.coeffs[p.index()])
            .sum::<f64>()
            * scale)
    }

    /// Applies `op` in place.
    pub fn apply(&mut self, op: &LocalSuperoperator) -> Result<()> {
        check_targets(op.targets(), self.n)?;
        let offsets = factor_offsets(op.targets());
        let m = &op.matrix;
        match op.arity() {
            1 => for_each_base(self.n, op.targets(), |base| {
                let c = &mut self.coeffs;
                let v = [
                    c[base],
                    c[base + offsets[1]],
                    c[base + offsets[2]],
                    c[base + offsets[3]],
                ];
                for r in 0..4 {
                    let row = &m[r * 4..r * 4 + 4];
                    c[base + offsets[r]] =
                        row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                }
            }),
            _ => for_each_base(self.n, op.targets(), |base| {
                let c = &mut self.coeffs;
                let mut v = [0.0; 16];
                for (j, slot) in v.iter_mut().enumerate() {
                    *slot = c[base + offsets[j]];
                }
                for r in 0..16 {
                    let row = &m[r * 16..r * 16 + 16];
                    c[base + offsets[r]] = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                }
            }),
        }
        Ok(())
    }

    /// Applies the rotation `exp(-iθG/2)` directly on coefficient pairs.
    pub fn apply_rotation(&mut self, rot: &PauliRotation, theta: f64) -> Result<()> {
        check_targets(&rot.targets, self.n)?;
        let (s, c) = theta.sin_cos();
        let offsets = factor_offsets(&rot.targets);
        for_each_base(self.n, &rot.targets, |base| {
            for &(q, p, sigma) in &rot.pairs {
                let iq = base + offsets[q];
                let ip = base + offsets[p];
                let aq = self.coeffs[iq];
                let ap = self.coeffs[ip];
                self.coeffs[iq] = c * aq - sigma * s * ap;
                self.coeffs[ip] = c * ap + sigma * s * aq;
            }
        });
        Ok(())
    }

    /// `⟨λ, R'(θ) a⟩` for the derivative of a rotation, computed on pairs.
    pub fn rotation_derivative_dot(
        &self,
        rot: &PauliRotation,
        theta: f64,
        lambda: &[f64],
    ) -> Result<f64> {
        check_targets(&rot.targets, self.n)?;
        if lambda.len() != self.coeffs.len() {
            return Err(Error::LengthMismatch {
                expected: self.coeffs.len(),
                found: lambda.len(),
            });
        }
        let (s, c) = theta.sin_cos();
        let offsets = factor_offsets(&rot.targets);
        let mut acc = 0.0;
        for_each_base(self.n, &rot.targets, |base| {
            for &(q, p, sigma) in &rot.pairs {
                let iq = base + offsets[q];
                let ip = base + offsets[p];
                let aq = self.coeffs[iq];
                let ap = self.coeffs[ip];
                acc += lambda[iq] * (-s * aq - sigma * c * ap) + lambda[ip] * (-s * ap + sigma * c * aq);
            }
        });
        Ok(acc)
    }

    /// Inner product of coefficient vectors.
    pub fn dot(&self, other: &PtmVector) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Coefficient vector of `|+⟩⟨+|^⊗n`.
pub fn plus_state(n: usize) -> Result<PtmVector> {
    PtmVector::product(n, [0.5, 0.5, 0.0, 0.0])
}

/// Coefficient vector of `|0⟩⟨0|^⊗n`.
pub fn zero_state(n: usize) -> Result<PtmVector> {
    PtmVector::product(n, [0.5, 0.0, 0.0, 0.5])
}

fn check_targets(targets: &[usize], n: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::QubitOutOfRange { qubit: t, n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Offset of each local basis index (`i0 + 4·i1`) within the global vector.
fn factor_offsets(targets: &[usize]) -> [usize; 16] {
    let mut out = [0usize; 16];
    let dim = 1usize << (2 * targets.len());
    for (local, slot) in out.iter_mut().enumerate().take(dim) {
        *slot = targets
            .iter()
            .enumerate()
            .map(|(j, &t)| ((local >> (2 * j)) & 3) << (2 * t))
            .sum();
    }
    out
}

/// Calls `f` on every global index whose digits at `targets` are all zero.
fn for_each_base(n: usize, targets: &[usize], mut f: impl FnMut(usize)) {
    let len = 1usize << (2 * n);
    match *targets {
        [t] => {
            let s = 1usize << (2 * t);
            for hi in (0..len).step_by(4 * s) {
                for lo in 0..s {
                    f(hi + lo);
                }
            }
        }
        [a, b] => {
            let (lo_q, hi_q) = if a < b { (a, b) } else { (b, a) };
            let sl = 1usize << (2 * lo_q);
            let sh = 1usize << (2 * hi_q);
            for x in (0..len).step_by(4 * sh) {
                for y in (x..x + sh).step_by(4 * sl) {
                    for z in y..y + sl {
                        f(z);
                    }
                }
            }
        }
        _ => unreachable!("arity checked at construction"),
    }
}

/// Real `4ᵏ × 4ᵏ` superoperator (k ∈ {1, 2}) with the qubits it acts on.
/// Local basis index is `i0 + 4·i1` where `i_j` is the letter on `targets[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSuperoperator {
    matrix: Vec<f64>,
    targets: Vec<usize>,
}

impl LocalSuperoperator {
    pub fn new(matrix: Vec<f64>, targets: Vec<usize>) -> Result<Self> {
        let k = targets.len();
        if !(1..=2).contains(&k) {
            return Err(Error::UnsupportedArity(k));
        }
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        let dim = 1usize << (2 * k);
        if matrix.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        Ok(Self { matrix, targets })
    }

    pub fn single(rows: [[f64; 4]; 4], target: usize) -> Self {
        Self {
            matrix: rows.iter().flatten().copied().collect(),
            targets: vec![target],
        }
    }

    pub fn identity(targets: Vec<usize>) -> Result<Self> {
        let dim = 1usize << (2 * targets.len());
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1.0;
        }
        Self::new(m, targets)
    }

    pub fn diagonal(diag: [f64; 4], target: usize) -> Self {
        let mut rows = [[0.0; 4]; 4];
        for i in 0..4 {
            rows[i][i] = diag[i];
        }
        Self::single(rows, target)
    }

    /// Same matrix acting on different qubits.
    pub fn on(&self, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != self.targets.len() {
            return Err(Error::TargetMismatch {
                left: self.targets.clone(),
                right: targets,
            });
        }
        Self::new(self.matrix.clone(), targets)
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn dim(&self) -> usize {
        1 << (2 * self.arity())
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Entry at (row, col), zero-based.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.matrix[r * self.dim() + c]
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for r in 0..d {
            for c in 0..d {
                m[c * d + r] = self.matrix[r * d + c];
            }
        }
        Self {
            matrix: m,
            targets: self.targets.clone(),
        }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &LocalSuperoperator) -> Result<Self> {
        if self.targets != other.targets {
            return Err(Error::TargetMismatch {
                left: self.targets.clone(),
                right: other.targets.clone(),
            });
        }
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.matrix[i * d + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    m[i * d + j] += a * other.matrix[k * d + j];
                }
            }
        }
        Ok(Self {
            matrix: m,
            targets: self.targets.clone(),
        })
    }

    /// Two single-qubit maps as one two-qubit map on `[a.target, b.target]`.
    pub fn kron(a: &LocalSuperoperator, b: &LocalSuperoperator) -> Result<Self> {
        if a.arity() != 1 || b.arity() != 1 {
            return Err(Error::UnsupportedArity(a.arity() + b.arity()));
        }
        let mut m = vec![0.0; 256];
        for r in 0..16 {
            for c in 0..16 {
                m[r * 16 + c] = a.entry(r & 3, c & 3) * b.entry(r >> 2, c >> 2);
            }
        }
        Self::new(m, vec![a.targets[0], b.targets[0]])
    }

    pub fn max_abs_diff(&self, other: &LocalSuperoperator) -> f64 {
        self.matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let d = self.dim();
        (self.matrix[0] - 1.0).abs() <= tol && self.matrix[1..d].iter().all(|v| v.abs() <= tol)
    }
}

/// Applies `op` to a copy of `state`.
pub fn embed_and_apply(op: &LocalSuperoperator, state: &PtmVector) -> Result<PtmVector> {
    let mut out = state.clone();
    out.apply(op)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

/// Single-qubit rotation matrix in the toy-model convention: for the Y axis
/// the X row is `(0, cos θ, 0, -sin θ)` and the Z row `(0, sin θ, 0, cos θ)`.
/// This equals conjugation by `exp(+iθσ/2)`, i.e.
/// `pauli_rotation(σ, -θ)`; the X and Z axes are the cyclic analogues.
pub fn adjoint_rotation(axis: Axis, theta: f64) -> LocalSuperoperator {
    let (s, c) = theta.sin_cos();
    // (first, second) rotate as first' = c·first - s·second
    let (a, b) = match axis {
        Axis::X => (3, 2),
        Axis::Y => (1, 3),
        Axis::Z => (2, 1),
    };
    let mut rows = [[0.0; 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    rows[a][a] = c;
    rows[b][b] = c;
    rows[a][b] = -s;
    rows[b][a] = s;
    LocalSuperoperator::single(rows, 0)
}

/// Precomputed action of `exp(-iθG/2)` for a local Pauli generator `G`.
///
/// Basis strings commuting with `G` are fixed; each anticommuting pair
/// `(Q, Q')` with `GQ = ±i Q'` rotates in its own plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliRotation {
    generator: PauliString,
    targets: Vec<usize>,
    /// `(q, q', σ)`: `Q ↦ cos θ·Q + σ sin θ·Q'`.
    pairs: Vec<(usize, usize, f64)>,
}

impl PauliRotation {
    /// `local` holds one letter per entry of `targets`.
    pub fn new(local: &PauliString, targets: Vec<usize>) -> Result<Self> {
        let k = targets.len();
        if local.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: local.len(),
            });
        }
        if local.is_identity() {
            return Err(Error::IdentityGenerator);
        }
        if k > 2 {
            return Err(Error::GeneratorTooWide(k));
        }
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        let mut pairs = Vec::new();
        for q in 0..(1usize << (2 * k)) {
            let basis = PauliString::from_index(q, k);
            if basis.commutes_with(local) {
                continue;
            }
            let (phase, image) = local.mul(&basis)?;
            let p = image.index();
            if q < p {
                // -i·i^phase is real for anticommuting pairs
                let sigma = if phase == 1 { 1.0 } else { -1.0 };
                pairs.push((q, p, sigma));
            }
        }
        Ok(Self {
            generator: local.clone(),
            targets,
            pairs,
        })
    }

    /// Rotation generated by a full-length string; its support becomes the
    /// target list.
    pub fn from_global(generator: &PauliString) -> Result<Self> {
        let support = generator.support();
        if support.is_empty() {
            return Err(Error::IdentityGenerator);
        }
        if support.len() > 2 {
            return Err(Error::GeneratorTooWide(support.len()));
        }
        Self::new(&generator.restrict(&support), support)
    }

    pub fn generator(&self) -> &PauliString {
        &self.generator
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn superoperator(&self, theta: f64) -> LocalSuperoperator {
        let k = self.targets.len();
        let d = 1usize << (2 * k);
        let (s, c) = theta.sin_cos();
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            m[i * d + i] = 1.0;
        }
        for &(q, p, sigma) in &self.pairs {
            m[q * d + q] = c;
            m[p * d + p] = c;
            m[p * d + q] = sigma * s;
            m[q * d + p] = -sigma * s;
        }
        LocalSuperoperator {
            matrix: m,
            targets: self.targets.clone(),
        }
    }

    /// `d/dθ` of [`Self::superoperator`].
    pub fn derivative(&self, theta: f64) -> LocalSuperoperator {
        let k = self.targets.len();
        let d = 1usize << (2 * k);
        let (s, c) = theta.sin_cos();
        let mut m = vec![0.0; d * d];
        for &(q, p, sigma) in &self.pairs {
            m[q * d + q] = -s;
            m[p * d + p] = -s;
            m[p * d + q] = sigma * c;
            m[q * d + p] = -sigma * c;
        }
        LocalSuperoperator {
            matrix: m,
            targets: self.targets.clone(),
        }
    }
}

/// Superoperator of conjugation by `exp(-iθG/2)` for a full-length generator
/// acting on at most two qubits.
pub fn adjoint_pauli_string_rotation(
    generator: &PauliString,
    theta: f64,
) -> Result<LocalSuperoperator> {
    Ok(PauliRotation::from_global(generator)?.superoperator(theta))
}

/// Superoperator of a one- or two-qubit unitary given as a dense matrix.
pub fn unitary_superoperator(u: &dense::CMatrix, targets: Vec<usize>) -> Result<LocalSuperoperator> {
    LocalSuperoperator::new(dense::kraus_superoperator(std::slice::from_ref(u)), targets)
}

pub fn hadamard_ptm(target: usize) -> LocalSuperoperator {
    unitary_superoperator(&dense::hadamard(), vec![target]).expect("single target")
}

pub fn cnot_ptm(control: usize, target: usize) -> Result<LocalSuperoperator> {
    unitary_superoperator(&dense::cnot(), vec![control, target])
}
