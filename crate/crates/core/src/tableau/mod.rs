//! Stabilizer tableau with destabilizers (Aaronson–Gottesman update rules).

mod verify;

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, Occupant, Targets};
use crate::gf2::{self, BitRow, Eliminator};
use crate::pauli::{Pauli, PauliString, StabilizerCode};

pub use verify::{
    verify_circuit, verify_measurement_circuit, InjectionCheck, VerificationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableauError {
    #[error("gate {0} is not a Clifford operation")]
    NonClifford(String),
    #[error("state underdetermined: {got} independent stabilizers for {n} qubits")]
    Incomplete { got: usize, n: usize },
    #[error("inconsistent stabilizer set: {0}")]
    Inconsistent(String),
    #[error("qubit {0} out of range")]
    OutOfRange(usize),
}

/// `2n` rows: destabilizers `0..n`, stabilizers `n..2n`, plus one scratch row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

#[inline]
fn bit(v: &[u64], row: usize, words: usize, q: usize) -> bool {
    (v[row * words + q / 64] >> (q % 64)) & 1 == 1
}

impl Tableau {
    /// The state |0…0⟩.
    pub fn zero_state(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Self {
            n,
            words,
            x: vec![0; rows * words],
            z: vec![0; rows * words],
            r: vec![false; rows],
        };
        for q in 0..n {
            t.set_x(q, q, true);
            t.set_z(n + q, q, true);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn xb(&self, row: usize, q: usize) -> bool {
        bit(&self.x, row, self.words, q)
    }

    #[inline]
    fn zb(&self, row: usize, q: usize) -> bool {
        bit(&self.z, row, self.words, q)
    }

    fn set_x(&mut self, row: usize, q: usize, v: bool) {
        let idx = row * self.words + q / 64;
        let m = 1u64 << (q % 64);
        if v {
            self.x[idx] |= m
        } else {
            self.x[idx] &= !m
        }
    }

    fn set_z(&mut self, row: usize, q: usize, v: bool) {
        let idx = row * self.words + q / 64;
        let m = 1u64 << (q % 64);
        if v {
            self.z[idx] |= m
        } else {
            self.z[idx] &= !m
        }
    }

    fn rows(&self) -> usize {
        2 * self.n
    }

    fn row_pauli(&self, row: usize) -> PauliString {
        let letters = (0..self.n)
            .map(|q| Pauli::from_bits(self.xb(row, q), self.zb(row, q)))
            .collect();
        PauliString::with_phase(letters, if self.r[row] { 2 } else { 0 })
    }

    fn set_row(&mut self, row: usize, p: &PauliString) {
        for q in 0..self.n {
            let l = p.letter(q);
            self.set_x(row, q, l.x_bit());
            self.set_z(row, q, l.z_bit());
        }
        self.r[row] = p.phase() == 2;
    }

    /// Current stabilizer generators with signs.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|i| self.row_pauli(i)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.row_pauli(i)).collect()
    }

    /// Tableau stabilized by exactly `stabs` (Hermitian, commuting, independent, `n` of them).
    pub fn from_stabilizers(stabs: &[PauliString]) -> Result<Self, TableauError> {
        let n = stabs.first().map_or(0, PauliString::n);
        if stabs.iter().any(|s| s.n() != n) {
            return Err(TableauError::Inconsistent("length mismatch".into()));
        }
        for s in stabs {
            if s.phase() % 2 == 1 {
                return Err(TableauError::Inconsistent(format!("{s} is not Hermitian")));
            }
        }
        for i in 0..stabs.len() {
            for j in i + 1..stabs.len() {
                if !stabs[i].commutes(&stabs[j]).expect("lengths checked") {
                    return Err(TableauError::Inconsistent(format!(
                        "{} and {} anticommute",
                        stabs[i], stabs[j]
                    )));
                }
            }
        }
        let rows: Vec<BitRow> = stabs.iter().map(PauliString::symplectic).collect();
        let elim = Eliminator::new(&rows);
        if !elim.dependencies().is_empty() {
            return Err(TableauError::Inconsistent("stabilizers are not independent".into()));
        }
        if stabs.len() < n {
            return Err(TableauError::Incomplete {
                got: stabs.len(),
                n,
            });
        }
        // destabilizer d_i: symplectic product with s_j equals delta_ij
        let swapped: Vec<BitRow> = stabs.iter().map(|s| swap_halves(&s.symplectic(), n)).collect();
        let mut destab: Vec<BitRow> = Vec::with_capacity(n);
        for i in 0..n {
            let d = solve_system(&swapped, i, 2 * n).ok_or_else(|| {
                TableauError::Inconsistent("no destabilizer solution".into())
            })?;
            destab.push(d);
        }
        for i in 0..n {
            for j in 0..i {
                if symp(&destab[i], &destab[j], n) {
                    let s = stabs[j].symplectic();
                    destab[i].xor_assign(&s);
                }
            }
        }
        let mut t = Self::zero_state(n);
        for i in 0..n {
            let d = &destab[i];
            for q in 0..n {
                t.set_x(i, q, d.get(q));
                t.set_z(i, q, d.get(n + q));
            }
            t.r[i] = false;
            t.set_row(n + i, &stabs[i]);
        }
        Ok(t)
    }

    pub fn h(&mut self, a: usize) {
        for i in 0..self.rows() {
            let (x, z) = (self.xb(i, a), self.zb(i, a));
            self.r[i] ^= x & z;
            self.set_x(i, a, z);
            self.set_z(i, a, x);
        }
    }

    pub fn s(&mut self, a: usize) {
        for i in 0..self.rows() {
            let (x, z) = (self.xb(i, a), self.zb(i, a));
            self.r[i] ^= x & z;
            self.set_z(i, a, z ^ x);
        }
    }

    pub fn cnot(&mut self, a: usize, b: usize) {
        for i in 0..self.rows() {
            let (xa, za, xb, zb) = (self.xb(i, a), self.zb(i, a), self.xb(i, b), self.zb(i, b));
            self.r[i] ^= xa & zb & !(xb ^ za);
            self.set_x(i, b, xb ^ xa);
            self.set_z(i, a, za ^ zb);
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        for i in 0..self.rows() {
            let (xa, za, xb, zb) = (self.xb(i, a), self.zb(i, a), self.xb(i, b), self.zb(i, b));
            self.set_x(i, a, xb);
            self.set_z(i, a, zb);
            self.set_x(i, b, xa);
            self.set_z(i, b, za);
        }
    }

    /// iSWAP as a direct conjugation table on the two local Pauli letters.
    pub fn iswap(&mut self, a: usize, b: usize) {
        let table = iswap_table();
        for i in 0..self.rows() {
            let key = (self.xb(i, a) as usize)
                | (self.zb(i, a) as usize) << 1
                | (self.xb(i, b) as usize) << 2
                | (self.zb(i, b) as usize) << 3;
            let (img, flip) = table[key];
            self.set_x(i, a, img & 1 != 0);
            self.set_z(i, a, img & 2 != 0);
            self.set_x(i, b, img & 4 != 0);
            self.set_z(i, b, img & 8 != 0);
            self.r[i] ^= flip;
        }
    }

    /// Apply a Pauli operator to qubit `a` (flips the signs of anticommuting rows).
    pub fn apply_pauli(&mut self, a: usize, p: Pauli) {
        for i in 0..self.rows() {
            let flip = match p {
                Pauli::I => false,
                Pauli::X => self.zb(i, a),
                Pauli::Z => self.xb(i, a),
                Pauli::Y => self.xb(i, a) ^ self.zb(i, a),
            };
            self.r[i] ^= flip;
        }
    }

    fn quarter_turns(theta: f64, name: &str) -> Result<usize, TableauError> {
        let k = (theta / FRAC_PI_2).round();
        if (theta - k * FRAC_PI_2).abs() > 1e-9 {
            return Err(TableauError::NonClifford(format!("{name}({theta})")));
        }
        Ok(k.rem_euclid(4.0) as usize)
    }

    /// Apply a unitary circuit gate. Measurement and reset are handled by
    /// [`Self::measure_z`] and [`Self::reset`].
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), TableauError> {
        for s in gate.targets.slots() {
            if s >= self.n {
                return Err(TableauError::OutOfRange(s));
            }
        }
        match (gate.kind, gate.targets) {
            (GateKind::H, Targets::One(a)) => self.h(a),
            (GateKind::Rz(t), Targets::One(a)) => {
                for _ in 0..Self::quarter_turns(t, "RZ")? {
                    self.s(a);
                }
            }
            (GateKind::Rx(t), Targets::One(a)) => {
                let k = Self::quarter_turns(t, "RX")?;
                if k > 0 {
                    self.h(a);
                    for _ in 0..k {
                        self.s(a);
                    }
                    self.h(a);
                }
            }
            (GateKind::Id { .. }, _) => {}
            (GateKind::Cnot, Targets::Two(a, b)) => self.cnot(a, b),
            (GateKind::Swap, Targets::Two(a, b)) => self.swap(a, b),
            (GateKind::Cns, Targets::Two(a, b)) => {
                self.cnot(a, b);
                self.swap(a, b);
            }
            (GateKind::ISwap, Targets::Two(a, b)) => self.iswap(a, b),
            (kind, _) => {
                return Err(TableauError::NonClifford(format!("{} as unitary", kind.name())))
            }
        }
        Ok(())
    }

    /// Measure qubit `a` in the Z basis.  Returns `(outcome, deterministic)`.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, a: usize, rng: &mut R) -> (bool, bool) {
        let n = self.n;
        let p = (n..2 * n).find(|&i| self.xb(i, a));
        match p {
            Some(p) => {
                for i in 0..2 * n {
                    if i != p && self.xb(i, a) {
                        self.rowsum(i, p);
                    }
                }
                self.copy_row(p - n, p);
                for q in 0..n {
                    self.set_x(p, q, false);
                    self.set_z(p, q, false);
                }
                self.set_z(p, a, true);
                let outcome: bool = rng.random();
                self.r[p] = outcome;
                (outcome, false)
            }
            None => {
                let scratch = 2 * n;
                for q in 0..n {
                    self.set_x(scratch, q, false);
                    self.set_z(scratch, q, false);
                }
                self.r[scratch] = false;
                for i in 0..n {
                    if self.xb(i, a) {
                        self.rowsum(scratch, i + n);
                    }
                }
                (self.r[scratch], true)
            }
        }
    }

    /// Reset qubit `a` to |0⟩.
    pub fn reset<R: Rng + ?Sized>(&mut self, a: usize, rng: &mut R) {
        let (outcome, _) = self.measure_z(a, rng);
        if outcome {
            self.apply_pauli(a, Pauli::X);
        }
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for k in 0..w {
            self.x[dst * w + k] = self.x[src * w + k];
            self.z[dst * w + k] = self.z[src * w + k];
        }
        self.r[dst] = self.r[src];
    }

    /// Row h ← row h · row i with exact sign tracking.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut phase: i32 = 2 * (self.r[h] as i32) + 2 * (self.r[i] as i32);
        for q in 0..self.n {
            phase += g_phase(self.xb(i, q), self.zb(i, q), self.xb(h, q), self.zb(h, q));
        }
        self.r[h] = phase.rem_euclid(4) == 2;
        let w = self.words;
        for k in 0..w {
            self.x[h * w + k] ^= self.x[i * w + k];
            self.z[h * w + k] ^= self.z[i * w + k];
        }
    }

    /// Is `p` (with sign) in the stabilizer group of the current state?
    /// Returns `Some(sign_is_plus)` when ±p is stabilized, `None` otherwise.
    pub fn expectation(&self, p: &PauliString) -> Option<bool> {
        let n = self.n;
        // p stabilized iff it commutes with all stabilizers; then it is the
        // product of stabilizers whose destabilizers anticommute with p
        for i in n..2 * n {
            if !self.row_pauli(i).commutes(p).expect("same length") {
                return None;
            }
        }
        let mut acc = PauliString::identity(n);
        for i in 0..n {
            if !self.row_pauli(i).commutes(p).expect("same length") {
                acc = acc.multiply(&self.row_pauli(i + n)).expect("same length");
            }
        }
        if acc.letters() != p.letters() {
            return None;
        }
        let rel = (p.phase() + 4 - acc.phase()) % 4;
        Some(rel == 0)
    }
}

fn g_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => (z2 as i32) * (2 * (x2 as i32) - 1),
        (false, true) => (x2 as i32) * (1 - 2 * (z2 as i32)),
    }
}

fn swap_halves(v: &BitRow, n: usize) -> BitRow {
    let mut out = BitRow::zeros(2 * n);
    for q in 0..n {
        out.set(q, v.get(n + q));
        out.set(n + q, v.get(q));
    }
    out
}

fn symp(a: &BitRow, b: &BitRow, n: usize) -> bool {
    let mut acc = false;
    for q in 0..n {
        acc ^= (a.get(q) & b.get(n + q)) ^ (a.get(n + q) & b.get(q));
    }
    acc
}

/// Find `d` with `rows[j] · d = δ_{ij}`.
fn solve_system(rows: &[BitRow], i: usize, width: usize) -> Option<BitRow> {
    // particular solution via the transpose: augment each row with its RHS bit
    let m = rows.len();
    let mut aug: Vec<BitRow> = rows
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let mut a = BitRow::zeros(width + 1);
            for c in 0..width {
                a.set(c, r.get(c));
            }
            a.set(width, j == i);
            a
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..width {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&k| aug[k].get(col)) else {
            continue;
        };
        aug.swap(row, p);
        for k in 0..m {
            if k != row && aug[k].get(col) {
                let pr = aug[row].clone();
                aug[k].xor_assign(&pr);
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..m).any(|k| aug[k].get(width)) {
        return None;
    }
    let mut d = BitRow::zeros(width);
    for (k, &c) in pivots.iter().enumerate() {
        d.set(c, aug[k].get(width));
    }
    Some(d)
}

/// Conjugation table for iSWAP on local bits `(xa, za, xb, zb)` packed as
/// `xa | za<<1 | xb<<2 | zb<<3`.  Built from the images
/// XI→ZY, IX→YZ, ZI→IZ, IZ→ZI.
fn iswap_table() -> &'static [(u8, bool); 16] {
    static TABLE: OnceLock<[(u8, bool); 16]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let img = |s: &str| s.parse::<PauliString>().expect("static");
        let xa = img("ZY");
        let xb = img("YZ");
        let za = img("IZ");
        let zb = img("ZI");
        let mut table = [(0u8, false); 16];
        for (key, slot) in table.iter_mut().enumerate() {
            let bits = [key & 1 != 0, key & 2 != 0, key & 4 != 0, key & 8 != 0];
            // P = i^{xa za + xb zb} X_a^xa Z_a^za X_b^xb Z_b^zb
            let mut acc = PauliString::with_phase(
                vec![Pauli::I; 2],
                ((bits[0] & bits[1]) as u8) + ((bits[2] & bits[3]) as u8),
            );
            for (on, factor) in bits.iter().zip([&xa, &za, &xb, &zb]) {
                if *on {
                    acc = acc.multiply(factor).expect("two qubits");
                }
            }
            debug_assert!(acc.phase() % 2 == 0);
            let l = acc.letters();
            let packed = (l[0].x_bit() as u8)
                | (l[0].z_bit() as u8) << 1
                | (l[1].x_bit() as u8) << 2
                | (l[1].z_bit() as u8) << 3;
            *slot = (packed, acc.phase() == 2);
        }
        table
    })
}

/// Logical operators completing `code` to a maximal commuting set: returns
/// `k` operators that commute with the code and each other and are
/// independent of the generators.
pub fn logical_operators(code: &StabilizerCode) -> Vec<PauliString> {
    let n = code.n();
    let gens: Vec<BitRow> = code.generators().iter().map(PauliString::symplectic).collect();
    let swapped: Vec<BitRow> = gens.iter().map(|g| swap_halves(g, n)).collect();
    let normalizer = gf2::kernel(&swapped, 2 * n);
    let mut chosen: Vec<BitRow> = Vec::new();
    let mut span = gens.clone();
    // prefer Z-type candidates so default codewords are computational-basis-like;
    // small normalizers are enumerated in full
    let mut candidates = if normalizer.len() <= 16 {
        (1u32..1 << normalizer.len())
            .map(|mask| {
                let mut v = BitRow::zeros(2 * n);
                for (b, basis) in normalizer.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        v.xor_assign(basis);
                    }
                }
                v
            })
            .collect()
    } else {
        normalizer
    };
    candidates.sort_by_key(|v| {
        let x_weight = (0..n).filter(|&q| v.get(q)).count();
        (x_weight, v.count_ones())
    });
    for v in candidates {
        if chosen.len() == code.k() {
            break;
        }
        if chosen.iter().any(|c| symp(c, &v, n)) {
            continue;
        }
        let mut trial = span.clone();
        trial.push(v.clone());
        if gf2::rank(&trial) == trial.len() {
            span = trial;
            chosen.push(v);
        }
    }
    chosen
        .iter()
        .map(|v| {
            let x = BitRow::from_bools(&(0..n).map(|q| v.get(q)).collect::<Vec<_>>());
            let z = BitRow::from_bools(&(0..n).map(|q| v.get(n + q)).collect::<Vec<_>>());
            PauliString::from_bits(&x, &z)
        })
        .collect()
}

/// Codeword of `code` fixed additionally by `fixing` (signed Pauli strings).
pub fn prepare_codeword(code: &StabilizerCode, fixing: &[PauliString]) -> Result<Tableau, TableauError> {
    let mut stabs: Vec<PauliString> = code.generators().to_vec();
    stabs.extend(fixing.iter().cloned());
    Tableau::from_stabilizers(&stabs)
}

/// Physical-slot tableau for a circuit: the codeword on the data slots of the
/// circuit's initial arrangement and |0⟩ on every ancilla.
pub fn prepare_circuit_state(
    circuit: &Circuit,
    code: &StabilizerCode,
    fixing: &[PauliString],
) -> Result<Tableau, TableauError> {
    let slots = circuit.slot_count();
    let perm = Circuit::data_slots(&circuit.initial, circuit.n_data);
    let lift = |p: &PauliString| {
        let mut letters = vec![Pauli::I; slots];
        for q in 0..p.n() {
            letters[perm[q]] = p.letter(q);
        }
        PauliString::with_phase(letters, p.phase())
    };
    let mut stabs: Vec<PauliString> = code.generators().iter().map(lift).collect();
    stabs.extend(fixing.iter().map(lift));
    for (s, o) in circuit.initial.iter().enumerate() {
        if let Occupant::Ancilla(_) = o {
            stabs.push(PauliString::single(slots, s, Pauli::Z));
        }
    }
    Tableau::from_stabilizers(&stabs)
}

/// One Pauli applied immediately before slice `slice` on `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Injection {
    pub slice: usize,
    pub slot: usize,
    pub pauli: Pauli,
}

/// Outcome of one MeasureZ: `(bit, deterministic)` indexed by record.
pub type Outcomes = Vec<(bool, bool)>;

/// Run a circuit on a tableau.
pub fn run_circuit<R: Rng + ?Sized>(
    circuit: &Circuit,
    state: &mut Tableau,
    injections: &[Injection],
    rng: &mut R,
) -> Result<Outcomes, TableauError> {
    let mut out = vec![(false, false); circuit.schedule.len()];
    for (i, slice) in circuit.slices.iter().enumerate() {
        for inj in injections.iter().filter(|j| j.slice == i) {
            state.apply_pauli(inj.slot, inj.pauli);
        }
        for g in slice {
            match g.kind {
                GateKind::MeasureZ { record } => out[record] = state.measure_z(g.targets.first(), rng),
                GateKind::ResetToZero => state.reset(g.targets.first(), rng),
                _ => state.apply_gate(g)?,
            }
        }
    }
    for inj in injections.iter().filter(|j| j.slice >= circuit.slices.len()) {
        state.apply_pauli(inj.slot, inj.pauli);
    }
    Ok(out)
}

/// Syndrome bits λ: the outcome flip attributable to each measurement.
/// QND: XOR with the previous outcome of the same ancilla; reinit: raw.
pub fn syndrome_bits(circuit: &Circuit, raw: &[bool]) -> Vec<bool> {
    use crate::circuit::AncillaMode;
    let mut last: std::collections::HashMap<usize, bool> = std::collections::HashMap::new();
    circuit
        .schedule
        .iter()
        .map(|e| {
            let m = raw[e.record];
            match circuit.mode {
                AncillaMode::Reinit => m,
                AncillaMode::Qnd => {
                    let prev = last.insert(e.ancilla, m).unwrap_or(false);
                    m ^ prev
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::ps;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(p: &str) -> Tableau {
        Tableau::from_stabilizers(&[ps(p)]).unwrap()
    }

    #[test]
    fn hadamard_maps_z_to_x() {
        let mut t = single("Z");
        t.h(0);
        assert_eq!(t.stabilizers(), vec![ps("X")]);
    }

    #[test]
    fn cns_moves_z_from_control() {
        let mut t = Tableau::from_stabilizers(&[ps("ZI"), ps("IX")]).unwrap();
        t.apply_gate(&Gate::two(GateKind::Cns, 0, 1, 0)).unwrap();
        // Z on the control becomes Z on the second slot
        assert_eq!(t.expectation(&ps("IZ")), Some(true));
    }

    #[test]
    fn swap_twice_is_identity() {
        let t0 = Tableau::from_stabilizers(&[ps("XZ"), ps("ZY")]).unwrap();
        let mut t = t0.clone();
        t.swap(0, 1);
        t.swap(0, 1);
        assert_eq!(t, t0);
    }

    #[test]
    fn iswap_table_matches_decomposition() {
        // compare native update with S⊗S, CZ, SWAP on random states
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut t = Tableau::zero_state(3);
            for _ in 0..10 {
                let a = rng.random_range(0..3);
                match rng.random_range(0..3) {
                    0 => t.h(a),
                    1 => t.s(a),
                    _ => t.cnot(a, (a + 1) % 3),
                }
            }
            let mut native = t.clone();
            native.iswap(0, 1);
            let mut dec = t.clone();
            dec.s(0);
            dec.s(1);
            dec.h(1);
            dec.cnot(0, 1);
            dec.h(1);
            dec.swap(0, 1);
            for s in native.stabilizers() {
                assert_eq!(dec.expectation(&s), Some(true));
            }
        }
    }

    #[test]
    fn measurement_behaviour() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = Tableau::zero_state(1);
        assert_eq!(t.measure_z(0, &mut rng), (false, true));
        let mut t = single("-Z");
        assert_eq!(t.measure_z(0, &mut rng), (true, true));
        let mut t = single("X");
        let (b, det) = t.measure_z(0, &mut rng);
        assert!(!det);
        assert_eq!(t.measure_z(0, &mut rng), (b, true));
    }

    #[test]
    fn random_outcomes_are_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ones = (0..2000)
            .filter(|_| single("X").measure_z(0, &mut rng).0)
            .count();
        assert!((900..1100).contains(&ones), "{ones}");
    }

    #[test]
    fn codeword_preparation() {
        let rep3 = StabilizerCode::rep3();
        let t = prepare_codeword(&rep3, &[ps("-ZZZ")]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for q in 0..3 {
            assert_eq!(t.clone().measure_z(q, &mut rng), (true, true));
        }
        assert!(matches!(
            prepare_codeword(&rep3, &[]),
            Err(TableauError::Incomplete { got: 2, n: 3 })
        ));
        assert!(matches!(
            prepare_codeword(&rep3, &[ps("XXI")]),
            Err(TableauError::Inconsistent(_))
        ));

        let five = StabilizerCode::laflamme5();
        let t = prepare_codeword(&five, &[ps("ZZZZZ")]).unwrap();
        for g in five.generators() {
            assert_eq!(t.expectation(g), Some(true));
        }
    }

    #[test]
    fn destabilizers_pair_with_stabilizers() {
        let t = prepare_codeword(&StabilizerCode::shor9(), &logical_operators(&StabilizerCode::shor9())).unwrap();
        let s = t.stabilizers();
        let d = t.destabilizers();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(!d[i].commutes(&s[j]).unwrap(), i == j);
                assert!(d[i].commutes(&d[j]).unwrap());
            }
        }
    }

    #[test]
    fn logical_operators_complete_codes() {
        for code in [StabilizerCode::rep3(), StabilizerCode::laflamme5(), StabilizerCode::shor9()] {
            let l = logical_operators(&code);
            assert_eq!(l.len(), 1);
            assert!(prepare_codeword(&code, &l).is_ok());
        }
        assert_eq!(logical_operators(&StabilizerCode::laflamme5()), vec![ps("ZZZZZ")]);
    }

    #[test]
    fn non_clifford_rotation_rejected() {
        let mut t = Tableau::zero_state(1);
        assert!(t.apply_gate(&Gate::one(GateKind::Rz(0.3), 0, 0)).is_err());
        assert!(t.apply_gate(&Gate::one(GateKind::Rz(-FRAC_PI_2), 0, 0)).is_ok());
    }
}
