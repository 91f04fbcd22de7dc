//! Noise parameters and noisy-gate composition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::channels::{amplitude_phase_damping, depolarizing_1q, depolarizing_2q, measurement_flip, KrausChannel, Superop};
use super::DensityError;
use crate::circuit::GateKind;
use crate::unitary::{self, Local};

/// Per-qubit override of the single-qubit characteristics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitNoise {
    pub t1: f64,
    pub t2: f64,
    pub p1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseParams {
    /// Seconds.
    pub t1: f64,
    pub t2: f64,
    /// Single-gate duration.
    pub tg: f64,
    pub p1: f64,
    pub p2: f64,
    pub pm: f64,
    /// Two-qubit slice duration in units of `tg`.
    pub tau_factor: f64,
    /// Also apply the measurement flip after every gate and idle, as the
    /// gate-noise compositions are written.  Off by default: a 2% bit flip
    /// per slice swamps every other channel.  Measurements always get it.
    pub measurement_flip_on_gates: bool,
    /// Keyed by physical slot.
    pub per_slot: BTreeMap<usize, QubitNoise>,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::reference(0.001)
    }
}

impl NoiseParams {
    /// The reference single-qubit characteristics with a chosen `p2`.
    pub fn reference(p2: f64) -> Self {
        Self {
            t1: 78.11e-6,
            t2: 114.09e-6,
            tg: 35.55e-9,
            p1: 0.000276,
            p2,
            pm: 0.02,
            tau_factor: 13.0,
            measurement_flip_on_gates: false,
            per_slot: BTreeMap::new(),
        }
    }

    /// All error probabilities zero and effectively infinite coherence.
    pub fn noiseless() -> Self {
        Self {
            t1: f64::INFINITY,
            t2: f64::INFINITY,
            p1: 0.0,
            p2: 0.0,
            pm: 0.0,
            ..Self::reference(0.0)
        }
    }

    /// Hard errors for invalid values; soft warnings (for `T2 > 2·T1`) in the Ok list.
    pub fn validate(&self) -> Result<Vec<String>, DensityError> {
        let mut warnings = Vec::new();
        let mut check = |label: String, t1: f64, t2: f64, p1: f64| -> Result<(), DensityError> {
            if !(t1 > 0.0 && t2 > 0.0) {
                return Err(DensityError::Parameter(format!("{label}: T1 and T2 must be positive")));
            }
            if !(0.0..=1.0).contains(&p1) {
                return Err(DensityError::Parameter(format!("{label}: p1 outside [0, 1]")));
            }
            if t2 > 2.0 * t1 {
                warnings.push(format!("{label}: T2 = {t2} exceeds 2·T1 = {}; dephasing clamped to zero", 2.0 * t1));
            }
            Ok(())
        };
        check("default".into(), self.t1, self.t2, self.p1)?;
        for (slot, q) in &self.per_slot {
            check(format!("slot {slot}"), q.t1, q.t2, q.p1)?;
        }
        if !(self.tg > 0.0) || !(self.tau_factor > 0.0) {
            return Err(DensityError::Parameter("Tg and tau_factor must be positive".into()));
        }
        for (name, p) in [("p2", self.p2), ("pm", self.pm)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(DensityError::Parameter(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(warnings)
    }

    pub fn qubit(&self, slot: usize) -> QubitNoise {
        self.per_slot.get(&slot).copied().unwrap_or(QubitNoise {
            t1: self.t1,
            t2: self.t2,
            p1: self.p1,
        })
    }

    /// Duration of a slice.
    pub fn slice_duration(&self, has_two_qubit_gate: bool) -> f64 {
        if has_two_qubit_gate {
            self.tau_factor * self.tg
        } else {
            self.tg
        }
    }

    fn damping(&self, slot: usize, t: f64) -> Result<KrausChannel, DensityError> {
        let q = self.qubit(slot);
        amplitude_phase_damping(t, q.t1, q.t2)
    }
}

/// The fused noisy version of one gate over a slice of duration `tau`.
#[derive(Clone, Debug, PartialEq)]
pub enum NoisyGate {
    Unitary(Superop),
    /// Superop before the projective readout, superop after it.
    Measure { before: Superop, after: Superop },
    Reset,
}

/// Compose the noise model around a gate on `slots`, read right to left:
/// damping(τ/2), depolarizing (per qubit, plus the two-qubit channel),
/// the unitary, damping(τ/2), then the measurement flip when enabled.
pub fn noisy_gate(kind: &GateKind, slots: &[usize], tau: f64, params: &NoiseParams) -> Result<NoisyGate, DensityError> {
    let half = tau / 2.0;
    match kind {
        GateKind::ResetToZero => Ok(NoisyGate::Reset),
        GateKind::MeasureZ { .. } => {
            let flip = measurement_flip(params.pm)?;
            let ap = params.damping(slots[0], half)?;
            Ok(NoisyGate::Measure {
                before: flip.after(&ap).superoperator(),
                after: ap.superoperator(),
            })
        }
        _ => {
            let local = unitary::gate_matrix(kind).ok_or_else(|| DensityError::Unsupported(kind.name().into()))?;
            let flip = measurement_flip(if params.measurement_flip_on_gates { params.pm } else { 0.0 })?;
            match local {
                Local::One(u) => {
                    let s = slots[0];
                    let ap = params.damping(s, half)?.superoperator();
                    let d1 = depolarizing_1q(params.qubit(s).p1)?.superoperator();
                    let gate = if matches!(kind, GateKind::Id { .. }) {
                        Superop::identity(1)
                    } else {
                        KrausChannel::unitary1(&u).superoperator()
                    };
                    let sup = flip.superoperator().after(&ap).after(&gate).after(&d1).after(&ap);
                    Ok(NoisyGate::Unitary(sup))
                }
                Local::Two(u) => {
                    let (a, b) = (slots[0], slots[1]);
                    let ap = params.damping(a, half)?.tensor(&params.damping(b, half)?).superoperator();
                    let d1 = depolarizing_1q(params.qubit(a).p1)?
                        .tensor(&depolarizing_1q(params.qubit(b).p1)?)
                        .superoperator();
                    let d2 = depolarizing_2q(params.p2)?.superoperator();
                    let gate = KrausChannel::unitary2(&u).superoperator();
                    let flips = flip.tensor(&flip).superoperator();
                    let sup = flips.after(&ap).after(&gate).after(&d2).after(&d1).after(&ap);
                    Ok(NoisyGate::Unitary(sup))
                }
            }
        }
    }
}
