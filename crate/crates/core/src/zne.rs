//! Zero-noise extrapolation over the amplitude-damping strength.

use crate::channels::NoiseSpec;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::simulator::{sample_shots, Simulator};

#[derive(Clone, Debug, PartialEq)]
pub struct ZneSchedule {
    base_gamma: f64,
    scale_factors: Vec<f64>,
}

impl ZneSchedule {
    pub fn new(base_gamma: f64, scale_factors: Vec<f64>) -> Result<Self> {
        if scale_factors.len() < 2 {
            return Err(Error::TooFewValues {
                min: 2,
                found: scale_factors.len(),
            });
        }
        if scale_factors[0] != 1.0 {
            return Err(Error::InvalidSchedule(format!(
                "scale factors must start at 1, got {}",
                scale_factors[0]
            )));
        }
        if scale_factors.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSchedule("scale factors must be strictly increasing".into()));
        }
        let top = base_gamma * scale_factors[scale_factors.len() - 1];
        if !(0.0..=1.0).contains(&base_gamma) || !(top <= 1.0) {
            return Err(Error::InvalidSchedule(format!(
                "base gamma {base_gamma} scaled to {top} leaves [0, 1]"
            )));
        }
        Ok(Self {
            base_gamma,
            scale_factors,
        })
    }

    pub fn base_gamma(&self) -> f64 {
        self.base_gamma
    }

    pub fn scale_factors(&self) -> &[f64] {
        &self.scale_factors
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.scale_factors.iter().map(|s| s * self.base_gamma).collect()
    }
}

impl Default for ZneSchedule {
    /// `γ = 0.01` scaled by `{1, 1.5, 2, 2.5, 3}`.
    fn default() -> Self {
        Self::new(0.01, vec![1.0, 1.5, 2.0, 2.5, 3.0]).expect("valid default")
    }
}

/// Value at scale 0 of the interpolating polynomial through `points`.
pub fn richardson_extrapolate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewValues {
            min: 2,
            found: points.len(),
        });
    }
    for (i, &(a, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|&(b, _)| b == a) {
            return Err(Error::DuplicateScale(a));
        }
    }
    let mut total = 0.0;
    for (i, &(si, vi)) in points.iter().enumerate() {
        let mut weight = 1.0;
        for (j, &(sj, _)) in points.iter().enumerate() {
            if i != j {
                weight *= sj / (sj - si);
            }
        }
        total += weight * vi;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZneResult {
    /// `(scale, value)` for every scale factor.
    pub points: Vec<(f64, f64)>,
    pub mitigated: f64,
}

impl ZneResult {
    /// Value at scale 1.
    pub fn unmitigated(&self) -> f64 {
        self.points[0].1
    }
}

/// One compiled simulator per scale factor, with every damping channel of
/// `base_noise` multiplied by the factor.
#[derive(Clone, Debug)]
pub struct ZneEvaluator {
    scales: Vec<f64>,
    sims: Vec<Simulator>,
}

impl ZneEvaluator {
    pub fn new(circuit: &Circuit, base_noise: &NoiseSpec, scale_factors: &[f64]) -> Result<Self> {
        let sims = scale_factors
            .iter()
            .map(|&s| Simulator::new(circuit, &base_noise.scale_damping(s)?))
            .collect::<Result<_>>()?;
        Ok(Self {
            scales: scale_factors.to_vec(),
            sims,
        })
    }

    /// Damping-only noise `AD(base_gamma)` on every qubit.
    pub fn from_schedule(circuit: &Circuit, schedule: &ZneSchedule) -> Result<Self> {
        let base = NoiseSpec::single(crate::channels::NoiseChannel::amplitude_damping(
            schedule.base_gamma,
        )?);
        Self::new(circuit, &base, &schedule.scale_factors)
    }

    pub fn evaluate(
        &self,
        params: &[f64],
        datum: &[f64],
        shots: Option<u64>,
        seed: u64,
    ) -> Result<ZneResult> {
        let points = self
            .scales
            .iter()
            .zip(&self.sims)
            .enumerate()
            .map(|(k, (&s, sim))| {
                let v = match shots {
                    None => sim.expectation(params, datum)?,
                    Some(n) => {
                        let state = sim.final_state(params, datum)?;
                        let stream = seed.wrapping_mul(31).wrapping_add(k as u64);
                        sample_shots(&state, sim.circuit().observable(), n, stream)?
                    }
                };
                Ok((s, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ZneResult {
            mitigated: richardson_extrapolate(&points)?,
            points,
        })
    }
}

/// Evaluates `circuit` at every scaled damping strength and extrapolates.
pub fn zne_pipeline(
    circuit: &Circuit,
    datum: &[f64],
    params: &[f64],
    schedule: &ZneSchedule,
    shots: Option<u64>,
    seed: u64,
) -> Result<ZneResult> {
    ZneEvaluator::from_schedule(circuit, schedule)?.evaluate(params, datum, shots, seed)
}
