//! Kraus channels and their superoperators.

use num_complex::Complex64;

use super::DensityError;
use crate::unitary::{self, M2, M4};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Kraus operators on `arity` qubits, each a row-major `2^arity` square.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    pub arity: usize,
    pub ops: Vec<Vec<Complex64>>,
}

fn flat2(m: &M2) -> Vec<Complex64> {
    m.iter().flatten().copied().collect()
}

fn flat4(m: &M4) -> Vec<Complex64> {
    m.iter().flatten().copied().collect()
}

fn matmul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

fn kron_flat(a: &[Complex64], b: &[Complex64], da: usize, db: usize) -> Vec<Complex64> {
    let d = da * db;
    let mut out = vec![ZERO; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = a[(i / db) * da + j / db] * b[(i % db) * db + j % db];
        }
    }
    out
}

fn check_prob(name: &str, p: f64) -> Result<(), DensityError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(DensityError::Parameter(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `1 − e^{−Tg/T1}`.
pub fn gamma_a(tg: f64, t1: f64) -> Result<f64, DensityError> {
    if t1 <= 0.0 || tg < 0.0 {
        return Err(DensityError::Parameter(format!("need T1 > 0 and Tg ≥ 0, got T1={t1}, Tg={tg}")));
    }
    Ok(-(-tg / t1).exp_m1())
}

/// `1 − e^{−2Tg(1/T2 − 1/(2T1))}`.  Negative when `T2 > 2·T1`.
pub fn gamma_p(tg: f64, t1: f64, t2: f64) -> Result<f64, DensityError> {
    if t1 <= 0.0 || t2 <= 0.0 || tg < 0.0 {
        return Err(DensityError::Parameter(format!(
            "need T1, T2 > 0 and Tg ≥ 0, got T1={t1}, T2={t2}, Tg={tg}"
        )));
    }
    Ok(-(-2.0 * tg * (1.0 / t2 - 1.0 / (2.0 * t1))).exp_m1())
}

pub fn amplitude_damping(tg: f64, t1: f64) -> Result<KrausChannel, DensityError> {
    let g = gamma_a(tg, t1)?;
    Ok(KrausChannel {
        arity: 1,
        ops: vec![
            vec![ONE, ZERO, ZERO, Complex64::new((1.0 - g).sqrt(), 0.0)],
            vec![ZERO, Complex64::new(g.sqrt(), 0.0), ZERO, ZERO],
        ],
    })
}

/// Phase damping; a negative γp (T2 > 2·T1) is clamped to zero.
pub fn phase_damping(tg: f64, t1: f64, t2: f64) -> Result<KrausChannel, DensityError> {
    let g = gamma_p(tg, t1, t2)?.max(0.0);
    Ok(KrausChannel {
        arity: 1,
        ops: vec![
            vec![ONE, ZERO, ZERO, Complex64::new((1.0 - g).sqrt(), 0.0)],
            vec![ZERO, ZERO, ZERO, Complex64::new(g.sqrt(), 0.0)],
        ],
    })
}

/// Amplitude damping followed by phase damping over duration `t`.
pub fn amplitude_phase_damping(t: f64, t1: f64, t2: f64) -> Result<KrausChannel, DensityError> {
    Ok(phase_damping(t, t1, t2)?.after(&amplitude_damping(t, t1)?))
}

pub fn depolarizing_1q(p: f64) -> Result<KrausChannel, DensityError> {
    check_prob("p1", p)?;
    let rest = Complex64::new((p / 4.0).sqrt(), 0.0);
    Ok(KrausChannel {
        arity: 1,
        ops: vec![
            flat2(&unitary::identity2()).iter().map(|&c| c * (1.0 - 0.75 * p).sqrt()).collect(),
            flat2(&unitary::pauli_x()).iter().map(|&c| c * rest).collect(),
            flat2(&unitary::pauli_y()).iter().map(|&c| c * rest).collect(),
            flat2(&unitary::pauli_z()).iter().map(|&c| c * rest).collect(),
        ],
    })
}

pub fn depolarizing_2q(p: f64) -> Result<KrausChannel, DensityError> {
    check_prob("p2", p)?;
    let paulis = [
        unitary::identity2(),
        unitary::pauli_x(),
        unitary::pauli_y(),
        unitary::pauli_z(),
    ];
    let mut ops = Vec::with_capacity(16);
    for (i, a) in paulis.iter().enumerate() {
        for (j, b) in paulis.iter().enumerate() {
            let c = if i == 0 && j == 0 {
                (1.0 - 15.0 / 16.0 * p).sqrt()
            } else {
                (p / 16.0).sqrt()
            };
            ops.push(flat4(&unitary::kron(a, b)).iter().map(|&x| x * c).collect());
        }
    }
    Ok(KrausChannel { arity: 2, ops })
}

pub fn measurement_flip(pm: f64) -> Result<KrausChannel, DensityError> {
    check_prob("pm", pm)?;
    Ok(KrausChannel {
        arity: 1,
        ops: vec![
            flat2(&unitary::identity2()).iter().map(|&c| c * (1.0 - pm).sqrt()).collect(),
            flat2(&unitary::pauli_x()).iter().map(|&c| c * pm.sqrt()).collect(),
        ],
    })
}

impl KrausChannel {
    pub fn identity(arity: usize) -> Self {
        let d = 1 << arity;
        let mut m = vec![ZERO; d * d];
        for i in 0..d {
            m[i * d + i] = ONE;
        }
        Self { arity, ops: vec![m] }
    }

    pub fn unitary1(u: &M2) -> Self {
        Self {
            arity: 1,
            ops: vec![flat2(u)],
        }
    }

    pub fn unitary2(u: &M4) -> Self {
        Self {
            arity: 2,
            ops: vec![flat4(u)],
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &KrausChannel) -> KrausChannel {
        assert_eq!(self.arity, first.arity);
        let d = self.dim();
        let ops = self
            .ops
            .iter()
            .flat_map(|a| first.ops.iter().map(move |b| matmul(a, b, d)))
            .collect();
        KrausChannel { arity: self.arity, ops }
    }

    /// `self ⊗ other`, with `self` on the first qubit.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        assert!(self.arity == 1 && other.arity == 1);
        let ops = self
            .ops
            .iter()
            .flat_map(|a| other.ops.iter().map(move |b| kron_flat(a, b, 2, 2)))
            .collect();
        KrausChannel { arity: 2, ops }
    }

    /// max-entry deviation of `Σ K†K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = ZERO;
                for k in &self.ops {
                    for r in 0..d {
                        s += k[r * d + i].conj() * k[r * d + j];
                    }
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    pub fn superoperator(&self) -> Superop {
        let d = self.dim();
        let dd = d * d;
        let mut m = vec![ZERO; dd * dd];
        for k in &self.ops {
            for i2 in 0..d {
                for j2 in 0..d {
                    for i in 0..d {
                        let ki = k[i2 * d + i];
                        if ki == ZERO {
                            continue;
                        }
                        for j in 0..d {
                            m[(i2 * d + j2) * dd + i * d + j] += ki * k[j2 * d + j].conj();
                        }
                    }
                }
            }
        }
        Superop { arity: self.arity, m }
    }

    /// Apply the channel to a `2^arity` density matrix (row-major).
    pub fn apply(&self, rho: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for k in &self.ops {
            let kr = matmul(k, rho, d);
            for i in 0..d {
                for j in 0..d {
                    let mut s = ZERO;
                    for l in 0..d {
                        s += kr[i * d + l] * k[j * d + l].conj();
                    }
                    out[i * d + j] += s;
                }
            }
        }
        out
    }
}

/// Superoperator on 1 or 2 qubits acting on pair indices `i·d + j` of the
/// local density block.
#[derive(Clone, Debug, PartialEq)]
pub struct Superop {
    pub arity: usize,
    /// Row-major `d² × d²`.
    pub m: Vec<Complex64>,
}

impl Superop {
    pub fn identity(arity: usize) -> Self {
        KrausChannel::identity(arity).superoperator()
    }

    pub fn size(&self) -> usize {
        1 << (2 * self.arity)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Superop) -> Superop {
        assert_eq!(self.arity, first.arity);
        Superop {
            arity: self.arity,
            m: matmul(&self.m, &first.m, self.size()),
        }
    }

    /// Largest deviation of `Tr(S(|i⟩⟨j|))` from `δ_ij`.
    pub fn trace_error(&self) -> f64 {
        let d = 1 << self.arity;
        let dd = d * d;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let col = i * d + j;
                let tr: Complex64 = (0..d).map(|k| self.m[(k * d + k) * dd + col]).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((tr - target).norm());
            }
        }
        worst
    }

    pub fn max_distance(&self, other: &Superop) -> f64 {
        self.m
            .iter()
            .zip(&other.m)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
