//! Dense density-matrix simulation of noisy circuits.
//!
//! Slot 0 is the most significant bit of a basis index.

pub mod channels;
pub mod noise;
mod sim;

use std::io::{Read, Write};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

pub use channels::{
    amplitude_damping, amplitude_phase_damping, depolarizing_1q, depolarizing_2q, gamma_a, gamma_p, measurement_flip,
    phase_damping, KrausChannel, Superop,
};
pub use noise::{noisy_gate, NoiseParams, NoisyGate, QubitNoise};
pub use sim::{
    compile, laflamme5_psi0, run_shot, run_shots, run_shots_with, shot_rng, single_qubit_memory, CompiledCircuit,
    InitialState, ShotResult,
};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("invalid noise parameter: {0}")]
    Parameter(String),
    #[error("unsupported gate {0}")]
    Unsupported(String),
    #[error("{0} qubits exceed the dense limit of {1}")]
    TooLarge(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("measurement probability {0} out of range")]
    Probability(f64),
    #[error("snapshot format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const MAX_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const SNAPSHOT_MAGIC: &[u8; 8] = b"RQECRHO1";

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    /// Row-major `2^n × 2^n`.
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero_state(n: usize) -> Result<Self, DensityError> {
        if n > MAX_QUBITS {
            return Err(DensityError::TooLarge(n, MAX_QUBITS));
        }
        let d = 1 << n;
        let mut data = vec![ZERO; d * d];
        data[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, data })
    }

    pub fn from_pure(psi: &[Complex64]) -> Result<Self, DensityError> {
        let n = psi.len().trailing_zeros() as usize;
        if psi.len() != 1 << n || n > MAX_QUBITS {
            return Err(DensityError::Dimension(format!("state vector of length {}", psi.len())));
        }
        let d = psi.len();
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] = psi[i] * psi[j].conj();
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_raw(n: usize, data: Vec<Complex64>) -> Result<Self, DensityError> {
        if data.len() != 1 << (2 * n) {
            return Err(DensityError::Dimension(format!("{} entries for {n} qubits", data.len())));
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dim();
        let m = nalgebra::DMatrix::from_fn(d, d, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5);
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trace 1, Hermitian and PSD within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        (self.trace() - 1.0).norm() < tol && self.hermiticity_error() < tol && self.min_eigenvalue() > -tol
    }

    fn bit(&self, slot: usize) -> usize {
        1 << (self.n - 1 - slot)
    }

    /// Apply a 1- or 2-qubit superoperator to `slots`.
    pub fn apply_superop(&mut self, s: &Superop, slots: &[usize]) {
        let d = self.dim();
        match s.arity {
            1 => {
                let b = self.bit(slots[0]);
                let m = &s.m;
                for r in (0..d).filter(|r| r & b == 0) {
                    for c in (0..d).filter(|c| c & b == 0) {
                        let idx = [r * d + c, r * d + c + b, (r + b) * d + c, (r + b) * d + c + b];
                        let v = idx.map(|k| self.data[k]);
                        for (row, &k) in idx.iter().enumerate() {
                            let mr = &m[row * 4..row * 4 + 4];
                            self.data[k] = mr[0] * v[0] + mr[1] * v[1] + mr[2] * v[2] + mr[3] * v[3];
                        }
                    }
                }
            }
            2 => {
                let (ba, bb) = (self.bit(slots[0]), self.bit(slots[1]));
                let offs = [0, bb, ba, ba + bb];
                let m = &s.m;
                let mut v = [ZERO; 16];
                let mut idx = [0usize; 16];
                for r in (0..d).filter(|r| r & (ba | bb) == 0) {
                    for c in (0..d).filter(|c| c & (ba | bb) == 0) {
                        for i in 0..4 {
                            for j in 0..4 {
                                let k = (r + offs[i]) * d + c + offs[j];
                                idx[i * 4 + j] = k;
                                v[i * 4 + j] = self.data[k];
                            }
                        }
                        for row in 0..16 {
                            let mr = &m[row * 16..row * 16 + 16];
                            let mut acc = ZERO;
                            for col in 0..16 {
                                acc += mr[col] * v[col];
                            }
                            self.data[idx[row]] = acc;
                        }
                    }
                }
            }
            a => panic!("superoperator arity {a}"),
        }
    }

    pub fn apply_channel(&mut self, ch: &KrausChannel, slots: &[usize]) {
        self.apply_superop(&ch.superoperator(), slots);
    }

    /// Probability of reading 0 on `slot`.
    pub fn prob_zero(&self, slot: usize) -> f64 {
        let b = self.bit(slot);
        (0..self.dim()).filter(|i| i & b == 0).map(|i| self.get(i, i).re).sum()
    }

    /// Force outcome `bit` on `slot` and renormalize; returns its probability.
    pub fn project(&mut self, slot: usize, bit: bool) -> Result<f64, DensityError> {
        let p0 = self.prob_zero(slot);
        let p = if bit { 1.0 - p0 } else { p0 };
        if p <= 0.0 {
            return Err(DensityError::Probability(p));
        }
        let d = self.dim();
        let b = self.bit(slot);
        let keep = |i: usize| (i & b != 0) == bit;
        for i in 0..d {
            for j in 0..d {
                let k = i * d + j;
                self.data[k] = if keep(i) && keep(j) { self.data[k] / p } else { ZERO };
            }
        }
        Ok(p)
    }

    /// Sample a Z measurement of `slot`, collapsing the state.
    pub fn sample_measure<R: Rng + ?Sized>(&mut self, slot: usize, rng: &mut R) -> Result<bool, DensityError> {
        let p0 = self.prob_zero(slot);
        if !(-1e-9..=1.0 + 1e-9).contains(&p0) {
            return Err(DensityError::Probability(p0));
        }
        let bit = rng.random::<f64>() >= p0;
        self.project(slot, bit)?;
        Ok(bit)
    }

    /// Reset `slot` to |0⟩ (trace it out and re-prepare).
    pub fn reset(&mut self, slot: usize) {
        let d = self.dim();
        let b = self.bit(slot);
        for i in (0..d).filter(|i| i & b == 0) {
            for j in (0..d).filter(|j| j & b == 0) {
                let moved = self.data[(i + b) * d + j + b];
                self.data[i * d + j] += moved;
            }
        }
        for i in 0..d {
            for j in 0..d {
                if i & b != 0 || j & b != 0 {
                    self.data[i * d + j] = ZERO;
                }
            }
        }
    }

    /// Rescale to unit trace.
    pub fn renormalize(&mut self) {
        let t = self.trace().re;
        if (t - 1.0).abs() > 1e-12 && t > 0.0 {
            for v in &mut self.data {
                *v /= t;
            }
        }
    }

    /// Reduced state on `keep` (in that order, first = most significant),
    /// tracing out every other slot.
    pub fn reduced(&self, keep: &[usize]) -> DensityMatrix {
        let k = keep.len();
        let dk = 1 << k;
        let d = self.dim();
        let keep_mask: usize = keep.iter().map(|&s| self.bit(s)).sum();
        let compress = |i: usize| -> usize {
            keep.iter()
                .enumerate()
                .map(|(pos, &s)| if i & self.bit(s) != 0 { 1 << (k - 1 - pos) } else { 0 })
                .sum()
        };
        let local: Vec<usize> = (0..d).map(compress).collect();
        let mut out = vec![ZERO; dk * dk];
        for i in 0..d {
            for j in 0..d {
                if i & !keep_mask == j & !keep_mask {
                    out[local[i] * dk + local[j]] += self.data[i * d + j];
                }
            }
        }
        DensityMatrix { n: k, data: out }
    }

    /// Tensor with |0⟩⟨0| on extra slots and permute: output slot
    /// `place[q]` receives qubit `q` of `self`.
    pub fn embed(&self, total: usize, place: &[usize]) -> Result<DensityMatrix, DensityError> {
        if total > MAX_QUBITS {
            return Err(DensityError::TooLarge(total, MAX_QUBITS));
        }
        let d = self.dim();
        let dt = 1 << total;
        let spread = |i: usize| -> usize {
            (0..self.n)
                .filter(|q| i & (1 << (self.n - 1 - q)) != 0)
                .map(|q| 1 << (total - 1 - place[q]))
                .sum()
        };
        let map: Vec<usize> = (0..d).map(spread).collect();
        let mut data = vec![ZERO; dt * dt];
        for i in 0..d {
            for j in 0..d {
                data[map[i] * dt + map[j]] = self.data[i * d + j];
            }
        }
        Ok(DensityMatrix { n: total, data })
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &[Complex64]) -> Result<f64, DensityError> {
        let d = self.dim();
        if psi.len() != d {
            return Err(DensityError::Dimension(format!("state of length {} vs dim {d}", psi.len())));
        }
        let mut acc = ZERO;
        for i in 0..d {
            if psi[i] == ZERO {
                continue;
            }
            for j in 0..d {
                acc += psi[i].conj() * self.data[i * d + j] * psi[j];
            }
        }
        Ok(acc.re)
    }

    /// `√⟨ψ|ρ|ψ⟩`.
    pub fn fidelity(&self, psi: &[Complex64]) -> Result<f64, DensityError> {
        Ok(self.expectation(psi)?.clamp(0.0, 1.0).sqrt())
    }

    /// Binary snapshot: 8-byte magic, u64 qubit count, then `re, im` f64
    /// pairs in row-major order, all little-endian.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<(), DensityError> {
        w.write_all(SNAPSHOT_MAGIC)?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for v in &self.data {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self, DensityError> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[..8] != SNAPSHOT_MAGIC {
            return Err(DensityError::Format("bad magic".into()));
        }
        let n = u64::from_le_bytes(header[8..].try_into().expect("8 bytes")) as usize;
        if n > MAX_QUBITS {
            return Err(DensityError::TooLarge(n, MAX_QUBITS));
        }
        let count = 1usize << (2 * n);
        let mut data = Vec::with_capacity(count);
        let mut buf = [0u8; 16];
        for _ in 0..count {
            r.read_exact(&mut buf)?;
            data.push(Complex64::new(
                f64::from_le_bytes(buf[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(buf[8..].try_into().expect("8 bytes")),
            ));
        }
        Ok(Self { n, data })
    }
}

/// Apply a Pauli string (one letter per slot of `rho`) as `PρP†`.
pub fn conjugate_by_pauli(rho: &mut DensityMatrix, p: &crate::pauli::PauliString) {
    use crate::pauli::Pauli;
    for (slot, &l) in p.letters().iter().enumerate() {
        if l != Pauli::I {
            rho.apply_channel(&KrausChannel::unitary1(&crate::unitary::pauli_matrix(l)), &[slot]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn measurement_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rho = DensityMatrix::zero_state(1).unwrap();
        assert!(!rho.sample_measure(0, &mut rng).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::from_pure(&[c(h), c(h)]).unwrap();
        assert!((plus.prob_zero(0) - 0.5).abs() < 1e-15);
        let mut m = plus.clone();
        let b = m.sample_measure(0, &mut rng).unwrap();
        let before = m.clone();
        assert_eq!(m.sample_measure(0, &mut rng).unwrap(), b);
        assert_eq!(m, before);
    }

    #[test]
    fn fidelity_cases() {
        let one = [c(0.0), c(1.0)];
        assert!((DensityMatrix::from_pure(&one).unwrap().fidelity(&one).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(DensityMatrix::zero_state(1).unwrap().fidelity(&one).unwrap(), 0.0);
        let mixed = DensityMatrix::from_raw(1, vec![c(0.5), c(0.0), c(0.0), c(0.5)]).unwrap();
        assert!((mixed.fidelity(&one).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(mixed.fidelity(&[c(1.0)]).is_err());
    }

    #[test]
    fn reduce_and_embed_round_trip() {
        // |01⟩ on logical qubits placed at slots 2 and 0 of three
        let psi = [c(0.0), c(1.0), c(0.0), c(0.0)];
        let small = DensityMatrix::from_pure(&psi).unwrap();
        let big = small.embed(3, &[2, 0]).unwrap();
        assert!((big.get(0b100, 0b100) - 1.0).norm() < 1e-15);
        assert_eq!(big.reduced(&[2, 0]), small);
    }

    #[test]
    fn superop_matches_channel_on_slots() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi: Vec<Complex64> = (0..8).map(|_| Complex64::new(rng.random(), rng.random())).collect();
        let norm = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = psi.iter().map(|v| v / norm).collect();
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        let ch = depolarizing_2q(0.3).unwrap().after(&KrausChannel::unitary2(&crate::unitary::cns()));
        rho.apply_channel(&ch, &[2, 0]);
        assert!(rho.is_valid(1e-9));
        // compare with the unitary applied to the state vector then noise by hand
        let mut rho2 = DensityMatrix::from_pure(&psi).unwrap();
        rho2.apply_channel(&KrausChannel::unitary2(&crate::unitary::cns()), &[2, 0]);
        rho2.apply_channel(&depolarizing_2q(0.3).unwrap(), &[2, 0]);
        let diff = rho.data().iter().zip(rho2.data()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-14);
    }

    #[test]
    fn reset_returns_to_zero() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut rho = DensityMatrix::from_pure(&[c(0.0), c(h), c(0.0), c(h)]).unwrap();
        rho.reset(1);
        assert!((rho.get(0, 0) - 0.5).norm() < 1e-15 && (rho.get(2, 2) - 0.5).norm() < 1e-15);
        assert!(rho.is_valid(1e-12));
    }

    #[test]
    fn snapshot_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data: Vec<Complex64> = (0..16).map(|_| Complex64::new(rng.random(), rng.random())).collect();
        let rho = DensityMatrix::from_raw(2, data).unwrap();
        let mut buf = Vec::new();
        rho.write_snapshot(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 16 * 16);
        assert_eq!(DensityMatrix::read_snapshot(&buf[..]).unwrap(), rho);
        buf[0] = b'x';
        assert!(DensityMatrix::read_snapshot(&buf[..]).is_err());
    }
}
