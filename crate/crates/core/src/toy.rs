//! Closed forms for the one-qubit toy model: `|+⟩` encoded with `R_Y(x)`,
//! followed by `d` decomposed identities `R_Y(θ)·Λ·R_Y(-θ)`, read out on X.
//!
//! All evaluators return the raw coefficient `a_X = ⟨X⟩/2`. Rotations use
//! [`adjoint_rotation`], whose sign convention fixes the sign of the `sin θ`
//! shift term.
//!
//! Three variant expressions for this model disagree with the PTM algebra
//! and are kept only as `*_printed` evaluators:
//! * the Pauli-channel form carries `f_y` where the X/Z-plane rotation only
//!   ever touches `f_z`;
//! * one restatement of the damping form swaps the sign of the
//!   `(1-γ)^{d/2}` vs `(1-γ)^d` combination in the `cos(x+2θ)` term;
//! * the gap form has `sin θ` where the difference of cosines gives `sin 2θ`.

use crate::channels::{
    ad_offdiagonal_approx, ad_offdiagonal_exact, pauli_ad_offdiagonal_approx,
    pauli_ad_offdiagonal_exact, ptm_amplitude_damping, ptm_pauli, AmplitudeDampingParams,
    PauliChannelParams,
};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::ptm::{adjoint_rotation, plus_state, Axis};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyConfig {
    pub x: f64,
    pub theta: f64,
    pub d: u32,
    pub pauli: Option<PauliChannelParams>,
    pub damping: Option<AmplitudeDampingParams>,
}

impl ToyConfig {
    pub fn new(x: f64, theta: f64, d: u32) -> Self {
        Self {
            x,
            theta,
            d,
            pauli: None,
            damping: None,
        }
    }

    pub fn with_pauli(mut self, params: PauliChannelParams) -> Self {
        self.pauli = Some(params);
        self
    }

    pub fn with_damping(mut self, gamma: f64) -> Result<Self> {
        self.damping = Some(AmplitudeDampingParams::new(gamma)?);
        Ok(self)
    }

    pub fn negated(&self) -> Self {
        Self { x: -self.x, ..*self }
    }

    pub fn fidelities(&self) -> (f64, f64, f64) {
        self.pauli.map_or((1.0, 1.0, 1.0), |p| p.fidelities())
    }

    pub fn gamma(&self) -> f64 {
        self.damping.map_or(0.0, |p| p.gamma())
    }
}

fn powi(v: f64, d: u32) -> f64 {
    v.powi(d as i32)
}

/// Pauli channel only: `((f_x^d + f_z^d) cos x + (f_x^d - f_z^d) cos(x+2θ))/4`.
pub fn toy_pauli(cfg: &ToyConfig) -> f64 {
    let (fx, _, fz) = cfg.fidelities();
    let (a, c) = (powi(fx, cfg.d), powi(fz, cfg.d));
    ((a + c) * cfg.x.cos() + (a - c) * (cfg.x + 2.0 * cfg.theta).cos()) / 4.0
}

/// Variant Pauli-channel expression with `f_y` in the second term.
pub fn toy_pauli_printed(cfg: &ToyConfig) -> f64 {
    let (fx, fy, fz) = cfg.fidelities();
    let (a, b, c) = (powi(fx, cfg.d), powi(fy, cfg.d), powi(fz, cfg.d));
    ((a + c) * cfg.x.cos() + (a - b) * (cfg.x + 2.0 * cfg.theta).cos()) / 4.0
}

fn damping_form(cfg: &ToyConfig, offdiag: f64) -> f64 {
    let g = cfg.gamma();
    let half = (1.0 - g).powf(cfg.d as f64 / 2.0);
    let full = powi(1.0 - g, cfg.d);
    (half + full) * cfg.x.cos() / 4.0
        + (half - full) * (cfg.x + 2.0 * cfg.theta).cos() / 4.0
        + offdiag * cfg.theta.sin() / 2.0
}

/// Amplitude damping only, with the exact `(4,1)` entry of `Λ_AD^d`.
pub fn toy_ad(cfg: &ToyConfig) -> f64 {
    damping_form(cfg, ad_offdiagonal_exact(cfg.d, cfg.gamma()))
}

/// [`toy_ad`] with the quadratic truncation of the off-diagonal entry.
pub fn toy_ad_approx(cfg: &ToyConfig) -> f64 {
    damping_form(cfg, ad_offdiagonal_approx(cfg.d, cfg.gamma()))
}

/// Restated damping form with the swapped `cos(x+2θ)` combination.
pub fn toy_ad_swapped_printed(cfg: &ToyConfig) -> f64 {
    let g = cfg.gamma();
    let half = (1.0 - g).powf(cfg.d as f64 / 2.0);
    let full = powi(1.0 - g, cfg.d);
    (full + half) * cfg.x.cos() / 4.0
        + (full - half) * (cfg.x + 2.0 * cfg.theta).cos() / 4.0
        + ad_offdiagonal_exact(cfg.d, g) * cfg.theta.sin() / 2.0
}

fn pauli_damping_form(cfg: &ToyConfig, offdiag: f64) -> f64 {
    let (fx, _, fz) = cfg.fidelities();
    let g = cfg.gamma();
    let xs = powi(fx, cfg.d) * (1.0 - g).powf(cfg.d as f64 / 2.0);
    let zs = powi(fz, cfg.d) * powi(1.0 - g, cfg.d);
    (xs + zs) * cfg.x.cos() / 4.0
        + (xs - zs) * (cfg.x + 2.0 * cfg.theta).cos() / 4.0
        + offdiag * cfg.theta.sin() / 2.0
}

/// Damping followed by a Pauli channel in every layer, exact off-diagonal.
pub fn toy_pauli_ad(cfg: &ToyConfig) -> f64 {
    let (_, _, fz) = cfg.fidelities();
    pauli_damping_form(cfg, pauli_ad_offdiagonal_exact(cfg.d, cfg.gamma(), fz))
}

pub fn toy_pauli_ad_approx(cfg: &ToyConfig) -> f64 {
    let (_, _, fz) = cfg.fidelities();
    pauli_damping_form(cfg, pauli_ad_offdiagonal_approx(cfg.d, cfg.gamma(), fz))
}

/// `ŷ(x) - ŷ(-x)` from [`toy_pauli_ad`].
pub fn symmetry_gap(cfg: &ToyConfig) -> f64 {
    toy_pauli_ad(cfg) - toy_pauli_ad(&cfg.negated())
}

fn gap_amplitude(cfg: &ToyConfig) -> f64 {
    let (fx, _, fz) = cfg.fidelities();
    let g = cfg.gamma();
    powi(fx, cfg.d) * (1.0 - g).powf(cfg.d as f64 / 2.0) - powi(fz, cfg.d) * powi(1.0 - g, cfg.d)
}

/// `-(f_x^d(1-γ)^{d/2} - f_z^d(1-γ)^d)·sin 2θ·sin x/2`.
pub fn symmetry_gap_closed(cfg: &ToyConfig) -> f64 {
    -gap_amplitude(cfg) * (2.0 * cfg.theta).sin() * cfg.x.sin() / 2.0
}

/// Variant gap expression with `sin θ`.
pub fn symmetry_gap_printed(cfg: &ToyConfig) -> f64 {
    -gap_amplitude(cfg) * cfg.theta.sin() * cfg.x.sin() / 2.0
}

/// Runs the toy circuit through the PTM pipeline (every `R_Y(θ)·Λ·R_Y(-θ)`
/// block applied explicitly, damping before the Pauli channel) and returns
/// `a_X`.
pub fn simulate_toy(cfg: &ToyConfig) -> Result<f64> {
    let mut state = plus_state(1)?;
    state.apply(&adjoint_rotation(Axis::Y, cfg.x))?;
    let forward = adjoint_rotation(Axis::Y, cfg.theta);
    let backward = adjoint_rotation(Axis::Y, -cfg.theta);
    let damping = cfg.damping.map(|p| ptm_amplitude_damping(&p));
    let pauli = cfg.pauli.map(|p| ptm_pauli(&p));
    for _ in 0..cfg.d {
        state.apply(&forward)?;
        if let Some(m) = &damping {
            state.apply(m)?;
        }
        if let Some(m) = &pauli {
            state.apply(m)?;
        }
        state.apply(&backward)?;
    }
    let x: PauliString = "X".parse().map_err(|_| Error::Parse("X".into()))?;
    state.coefficient(&x)
}
