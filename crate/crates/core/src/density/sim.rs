//! Shot-by-shot trajectory simulation of a circuit.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::noise::{noisy_gate, NoiseParams, NoisyGate};
use super::{DensityError, DensityMatrix, KrausChannel, Superop, MAX_QUBITS};
use crate::circuit::{Circuit, GateKind, Targets};
use crate::decoder::SyndromeRecord;
use crate::tableau::Injection;
use crate::unitary;

/// Data-qubit input state in logical order (qubit 0 most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct InitialState {
    pub psi: Vec<Complex64>,
}

impl InitialState {
    pub fn basis(bits: &[bool]) -> Self {
        let idx = bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        let mut psi = vec![Complex64::new(0.0, 0.0); 1 << bits.len()];
        psi[idx] = Complex64::new(1.0, 0.0);
        Self { psi }
    }

    pub fn all_ones(n: usize) -> Self {
        Self::basis(&vec![true; n])
    }

    pub fn n(&self) -> usize {
        self.psi.len().trailing_zeros() as usize
    }
}

/// The 5-qubit codeword used for the memory experiments.
pub fn laflamme5_psi0() -> Vec<Complex64> {
    const V: [i8; 32] = [
        1, 0, 0, 1, 0, -1, 1, 0, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1, -1, 0, -1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1, 0,
    ];
    V.iter().map(|&v| Complex64::new(v as f64 / 4.0, 0.0)).collect()
}

#[derive(Clone, Debug)]
enum Op {
    Apply { sup: usize, slots: [usize; 2] },
    Measure { slot: usize, record: usize, before: usize, after: usize },
    Reset { slot: usize },
    Inject { slice: usize },
    EndSlice,
    Snapshot { keep: Vec<usize> },
}

/// A circuit with every noisy gate fused into a superoperator.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    slots: usize,
    n_data: usize,
    records: usize,
    place: Vec<usize>,
    superops: Vec<Superop>,
    ops: Vec<Op>,
    record_template: SyndromeRecord,
}

pub fn compile(circuit: &Circuit, params: &NoiseParams) -> Result<CompiledCircuit, DensityError> {
    let slots = circuit.slot_count();
    if slots > MAX_QUBITS {
        return Err(DensityError::TooLarge(slots, MAX_QUBITS));
    }
    params.validate()?;
    let maps = circuit.position_maps();
    let mut superops = Vec::new();
    let mut cache: HashMap<String, usize> = HashMap::new();
    let mut intern = |s: Superop, key: String| -> usize {
        *cache.entry(key).or_insert_with(|| {
            superops.push(s);
            superops.len() - 1
        })
    };
    let mut ops = Vec::new();
    let mut ends = circuit.cycle_ends.clone();
    if ends.is_empty() {
        ends.push(circuit.slices.len());
    }
    for (i, slice) in circuit.slices.iter().enumerate() {
        ops.push(Op::Inject { slice: i });
        let long = slice.iter().any(|g| g.kind.is_two_qubit());
        let tau = params.slice_duration(long);
        for g in slice {
            let sl: Vec<usize> = g.targets.slots().collect();
            let key = format!("{:?}|{:?}|{}", g.kind, sl, long);
            let key = match g.kind {
                GateKind::MeasureZ { .. } => format!("MZ|{:?}|{}", sl, long),
                _ => key,
            };
            match noisy_gate(&g.kind, &sl, tau, params)? {
                NoisyGate::Unitary(s) => {
                    let sup = intern(s, key);
                    let slots = match g.targets {
                        Targets::One(a) => [a, usize::MAX],
                        Targets::Two(a, b) => [a, b],
                    };
                    ops.push(Op::Apply { sup, slots });
                }
                NoisyGate::Measure { before, after } => {
                    let GateKind::MeasureZ { record } = g.kind else { unreachable!() };
                    let b = intern(before, format!("{key}|before"));
                    let a = intern(after, format!("{key}|after"));
                    ops.push(Op::Measure {
                        slot: sl[0],
                        record,
                        before: b,
                        after: a,
                    });
                }
                NoisyGate::Reset => ops.push(Op::Reset { slot: sl[0] }),
            }
        }
        ops.push(Op::EndSlice);
        if ends.contains(&(i + 1)) {
            ops.push(Op::Snapshot {
                keep: Circuit::data_slots(&maps[i + 1], circuit.n_data),
            });
        }
    }
    ops.push(Op::Inject {
        slice: circuit.slices.len(),
    });
    Ok(CompiledCircuit {
        slots,
        n_data: circuit.n_data,
        records: circuit.schedule.len(),
        place: Circuit::data_slots(&circuit.initial, circuit.n_data),
        superops,
        ops,
        record_template: SyndromeRecord::from_outcomes(circuit, &vec![false; circuit.schedule.len()]),
    })
}

impl CompiledCircuit {
    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn prepare(&self, initial: &InitialState) -> Result<DensityMatrix, DensityError> {
        if initial.n() != self.n_data {
            return Err(DensityError::Dimension(format!(
                "initial state has {} qubits, circuit has {} data qubits",
                initial.n(),
                self.n_data
            )));
        }
        DensityMatrix::from_pure(&initial.psi)?.embed(self.slots, &self.place)
    }
}

#[derive(Clone, Debug)]
pub struct ShotResult {
    /// Raw MeasureZ outcomes by record.
    pub raw: Vec<bool>,
    pub syndrome: SyndromeRecord,
    /// Data-qubit reduced state in logical order at each cycle end.
    pub snapshots: Vec<DensityMatrix>,
}

/// Per-shot generator: the master seed selects the key, the shot index the stream.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

pub fn run_shot(
    compiled: &CompiledCircuit,
    initial: &DensityMatrix,
    injections: &[Injection],
    rng: &mut ChaCha8Rng,
) -> Result<ShotResult, DensityError> {
    let mut rho = initial.clone();
    let mut raw = vec![false; compiled.records];
    let mut snapshots = Vec::new();
    for op in &compiled.ops {
        match op {
            Op::Apply { sup, slots } => {
                let s = &compiled.superops[*sup];
                rho.apply_superop(s, &slots[..s.arity]);
            }
            Op::Measure {
                slot,
                record,
                before,
                after,
            } => {
                rho.apply_superop(&compiled.superops[*before], &[*slot]);
                raw[*record] = rho.sample_measure(*slot, rng)?;
                rho.apply_superop(&compiled.superops[*after], &[*slot]);
            }
            Op::Reset { slot } => rho.reset(*slot),
            Op::Inject { slice } => {
                for inj in injections.iter().filter(|j| j.slice == *slice) {
                    let u = unitary::pauli_matrix(inj.pauli);
                    rho.apply_channel(&KrausChannel::unitary1(&u), &[inj.slot]);
                }
            }
            Op::EndSlice => rho.renormalize(),
            Op::Snapshot { keep } => snapshots.push(rho.reduced(keep)),
        }
    }
    let mut syndrome = compiled.record_template.clone();
    syndrome.fill(&raw);
    Ok(ShotResult {
        raw,
        syndrome,
        snapshots,
    })
}

/// Run `shots` independent trajectories and map each through `f`, in shot order.
pub fn run_shots_with<T, F>(
    circuit: &Circuit,
    initial: &InitialState,
    params: &NoiseParams,
    shots: usize,
    seed: u64,
    injections: &[Injection],
    f: F,
) -> Result<Vec<T>, DensityError>
where
    T: Send,
    F: Fn(usize, ShotResult) -> T + Sync,
{
    let compiled = compile(circuit, params)?;
    let rho0 = compiled.prepare(initial)?;
    (0..shots)
        .into_par_iter()
        .map(|s| {
            let mut rng = shot_rng(seed, s as u64);
            run_shot(&compiled, &rho0, injections, &mut rng).map(|r| f(s, r))
        })
        .collect()
}

pub fn run_shots(
    circuit: &Circuit,
    initial: &InitialState,
    params: &NoiseParams,
    shots: usize,
    seed: u64,
) -> Result<Vec<ShotResult>, DensityError> {
    run_shots_with(circuit, initial, params, shots, seed, &[], |_, r| r)
}

/// Fidelity of |1⟩ kept in one qubit under idle noise for the wall-clock
/// duration of the first `cycles` cycles of `reference`.
pub fn single_qubit_memory(params: &NoiseParams, reference: &Circuit, cycles: usize) -> Result<f64, DensityError> {
    let one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let mut rho = DensityMatrix::from_pure(&one)?;
    if cycles == 0 {
        return rho.fidelity(&one);
    }
    let end = if reference.cycle_ends.is_empty() {
        reference.slices.len()
    } else {
        reference.cycle_ends[cycles.min(reference.cycle_ends.len()) - 1]
    };
    let idle = |long: bool| -> Result<Superop, DensityError> {
        match noisy_gate(&GateKind::Id { long }, &[0], params.slice_duration(long), params)? {
            NoisyGate::Unitary(s) => Ok(s),
            _ => unreachable!("idle is unitary"),
        }
    };
    let (short, long) = (idle(false)?, idle(true)?);
    for slice in &reference.slices[..end] {
        let s = if slice.iter().any(|g| g.kind.is_two_qubit()) { &long } else { &short };
        rho.apply_superop(s, &[0]);
    }
    rho.fidelity(&one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::AncillaMode;
    use crate::pauli::{Pauli, StabilizerCode};
    use crate::synth::{synthesize, Scheme};
    use crate::tableau::{prepare_circuit_state, run_circuit, logical_operators};

    fn rep3(cycles: usize) -> Circuit {
        synthesize(&StabilizerCode::rep3(), Scheme::ForwardBackward, AncillaMode::Qnd, cycles).unwrap()
    }

    #[test]
    fn psi0_is_a_codeword() {
        let psi = laflamme5_psi0();
        let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        for g in StabilizerCode::laflamme5().generators() {
            // ⟨ψ|g|ψ⟩ = 1 iff g|ψ⟩ = |ψ⟩ for unit ψ
            let mut gpsi = psi.clone();
            apply_pauli_vec(&mut gpsi, g.letters());
            let overlap: Complex64 = psi.iter().zip(&gpsi).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap - 1.0).norm() < 1e-12, "{g}");
        }
    }

    fn apply_pauli_vec(psi: &mut [Complex64], letters: &[Pauli]) {
        let n = letters.len();
        for (q, &l) in letters.iter().enumerate() {
            let b = 1 << (n - 1 - q);
            let u = unitary::pauli_matrix(l);
            for i in (0..psi.len()).filter(|i| i & b == 0) {
                let (a0, a1) = (psi[i], psi[i + b]);
                psi[i] = u[0][0] * a0 + u[0][1] * a1;
                psi[i + b] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    #[test]
    fn zero_noise_rep3_keeps_state() {
        let c = rep3(2);
        let shots = run_shots(&c, &InitialState::all_ones(3), &NoiseParams::noiseless(), 4, 9).unwrap();
        for s in shots {
            assert!(s.raw.iter().all(|&b| !b));
            assert_eq!(s.snapshots.len(), 2);
            for snap in &s.snapshots {
                assert!((snap.fidelity(&InitialState::all_ones(3).psi).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn injected_flip_matches_tableau_syndrome() {
        let c = rep3(2);
        let (slice, slot) = c.injection_point(1, 2).unwrap();
        let inj = [Injection { slice, slot, pauli: Pauli::X }];
        let got = run_shots_with(&c, &InitialState::all_ones(3), &NoiseParams::noiseless(), 1, 3, &inj, |_, r| r.raw)
            .unwrap()
            .remove(0);
        let code = StabilizerCode::rep3();
        let mut t = prepare_circuit_state(&c, &code, &logical_operators(&code)[..1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let want: Vec<bool> = run_circuit(&c, &mut t, &inj, &mut rng).unwrap().iter().map(|o| o.0).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn noisy_states_stay_physical() {
        let c = rep3(1);
        let compiled = compile(&c, &NoiseParams::reference(0.05)).unwrap();
        let rho0 = compiled.prepare(&InitialState::all_ones(3)).unwrap();
        let mut rng = shot_rng(5, 0);
        let r = run_shot(&compiled, &rho0, &[], &mut rng).unwrap();
        assert!(r.snapshots[0].is_valid(1e-9));
    }

    #[test]
    fn memory_baseline_behaviour() {
        let c = rep3(3);
        let quiet = NoiseParams::noiseless();
        assert!((single_qubit_memory(&quiet, &c, 3).unwrap() - 1.0).abs() < 1e-12);
        let p = NoiseParams::reference(0.0);
        assert_eq!(single_qubit_memory(&p, &c, 0).unwrap(), 1.0);
        let mut ad = NoiseParams::noiseless();
        ad.t1 = 78.11e-6;
        ad.t2 = 2.0 * ad.t1;
        let f: Vec<f64> = (0..=3).map(|k| single_qubit_memory(&ad, &c, k).unwrap()).collect();
        assert!(f.windows(2).all(|w| w[1] <= w[0]));
        let duration: f64 = c.slices[..c.cycle_ends[0]]
            .iter()
            .map(|s| ad.slice_duration(s.iter().any(|g| g.kind.is_two_qubit())))
            .sum();
        assert!((f[1] - (-duration / ad.t1).exp().sqrt()).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_outcomes() {
        let c = rep3(1);
        let p = NoiseParams::reference(0.01);
        let a = run_shots_with(&c, &InitialState::all_ones(3), &p, 16, 77, &[], |_, r| r.raw).unwrap();
        let b = run_shots_with(&c, &InitialState::all_ones(3), &p, 16, 77, &[], |_, r| r.raw).unwrap();
        assert_eq!(a, b);
    }
}
