//! Time-sliced circuits over physical slots with ancilla-position tracking.
//!
//! Physical slots are 0-based.  Data qubits are stored 0-based and printed
//! 1-based (`q1..qn`); ancillas are printed `a1..`.

mod builder;
mod format;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::pauli::PauliString;

pub use builder::CircuitBuilder;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("slots {0} and {1} are not adjacent in the topology")]
    NotAdjacent(usize, usize),
    #[error("slot {0} out of range")]
    SlotOutOfRange(usize),
    #[error("{0} not present in the circuit")]
    MissingOccupant(Occupant),
    #[error("riffle geometry: {0}")]
    Geometry(String),
    #[error("circuit repetition: {0}")]
    Repeat(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Pauli(#[from] crate::pauli::PauliError),
}

/// What sits in a physical slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Occupant {
    /// 0-based logical data qubit.
    Data(usize),
    /// Ancilla id (0-based).
    Ancilla(usize),
}

impl fmt::Display for Occupant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Occupant::Data(q) => write!(f, "q{}", q + 1),
            Occupant::Ancilla(a) => write!(f, "a{}", a + 1),
        }
    }
}

/// Physical connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    Ring(usize),
    Graph { slots: usize, edges: Vec<(usize, usize)> },
}

impl Topology {
    pub fn path(slots: usize) -> Self {
        Topology::Graph {
            slots,
            edges: (0..slots.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    /// A ring with the link between `a` and `b` removed.
    pub fn ring_without(slots: usize, a: usize, b: usize) -> Self {
        let edges = (0..slots)
            .map(|i| (i, (i + 1) % slots))
            .filter(|&(x, y)| !((x == a && y == b) || (x == b && y == a)))
            .map(|(x, y)| (x.min(y), x.max(y)))
            .collect();
        Topology::Graph { slots, edges }
    }

    pub fn slots(&self) -> usize {
        match self {
            Topology::Ring(n) => *n,
            Topology::Graph { slots, .. } => *slots,
        }
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        match self {
            Topology::Ring(n) => (a + 1) % n == b || (b + 1) % n == a,
            Topology::Graph { edges, .. } => edges
                .iter()
                .any(|&(x, y)| (x == a && y == b) || (x == b && y == a)),
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            Topology::Ring(n) => (0..*n)
                .map(|i| {
                    let j = (i + 1) % n;
                    (i.min(j), i.max(j))
                })
                .collect(),
            Topology::Graph { edges, .. } => edges.clone(),
        }
    }
}

/// Gate kinds.  Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    Rx(f64),
    Rz(f64),
    /// Idle; `long` when the slice holds a two-qubit gate.
    Id { long: bool },
    /// Control is the first target.
    Cnot,
    Swap,
    /// CNOT (control = first target) followed by SWAP.
    Cns,
    ISwap,
    MeasureZ { record: usize },
    ResetToZero,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap | GateKind::Cns | GateKind::ISwap => 2,
            _ => 1,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.arity() == 2
    }

    /// Does the gate exchange the contents of its two slots?
    pub fn moves_contents(&self) -> bool {
        matches!(self, GateKind::Swap | GateKind::Cns | GateKind::ISwap)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::Rx(_) => "RX",
            GateKind::Rz(_) => "RZ",
            GateKind::Id { long: false } => "ID",
            GateKind::Id { long: true } => "IDL",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::Cns => "CNS",
            GateKind::ISwap => "ISWAP",
            GateKind::MeasureZ { .. } => "MZ",
            GateKind::ResetToZero => "RESET",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Targets {
    One(usize),
    Two(usize, usize),
}

impl Targets {
    pub fn slots(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Targets::One(a) => (a, None),
            Targets::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn first(&self) -> usize {
        match *self {
            Targets::One(a) | Targets::Two(a, _) => a,
        }
    }

    pub fn touches(&self, slot: usize) -> bool {
        self.slots().any(|s| s == slot)
    }
}

/// One gate in a slice.  `step` is the measurement step the gate serves
/// (1-based; 0 for idles and untagged gates).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Targets,
    pub step: usize,
}

impl Gate {
    pub fn one(kind: GateKind, slot: usize, step: usize) -> Self {
        Self {
            kind,
            targets: Targets::One(slot),
            step,
        }
    }

    pub fn two(kind: GateKind, a: usize, b: usize, step: usize) -> Self {
        Self {
            kind,
            targets: Targets::Two(a, b),
            step,
        }
    }

    pub fn is_idle(&self) -> bool {
        matches!(self.kind, GateKind::Id { .. })
    }
}

/// Ancilla treatment between measurements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AncillaMode {
    /// No reset between measurements.
    #[default]
    Qnd,
    /// Reset to |0⟩ after each measurement.
    Reinit,
}

impl fmt::Display for AncillaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AncillaMode::Qnd => "qnd",
            AncillaMode::Reinit => "reinit",
        })
    }
}

/// One ancilla measurement of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub record: usize,
    /// 1-based measurement step.
    pub step: usize,
    /// Index into [`Circuit::generators`].
    pub generator: usize,
    pub slot: usize,
    pub ancilla: usize,
    /// Slice holding the MeasureZ gate.
    pub slice: usize,
}

/// A complete circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub name: String,
    pub topology: Topology,
    pub mode: AncillaMode,
    pub n_data: usize,
    pub initial: Vec<Occupant>,
    /// Distinct logical generators measured, in logical labels.
    pub generators: Vec<PauliString>,
    pub schedule: Vec<ScheduleEntry>,
    pub slices: Vec<Vec<Gate>>,
    /// Slice counts at the end of each cycle (empty when not cycle-structured).
    pub cycle_ends: Vec<usize>,
}

impl Circuit {
    pub fn slot_count(&self) -> usize {
        self.initial.len()
    }

    pub fn ancilla_count(&self) -> usize {
        self.initial
            .iter()
            .filter(|o| matches!(o, Occupant::Ancilla(_)))
            .count()
    }

    pub fn cycles(&self) -> usize {
        self.cycle_ends.len()
    }

    pub fn steps(&self) -> usize {
        self.schedule.iter().map(|e| e.step).max().unwrap_or(0)
    }

    pub fn steps_per_cycle(&self) -> usize {
        if self.cycle_ends.is_empty() {
            self.steps()
        } else {
            self.schedule
                .iter()
                .filter(|e| e.slice < self.cycle_ends[0])
                .count()
        }
    }

    /// Arrangement before each slice plus the final one (`slices.len() + 1` entries).
    pub fn position_maps(&self) -> Vec<Vec<Occupant>> {
        let mut maps = Vec::with_capacity(self.slices.len() + 1);
        let mut cur = self.initial.clone();
        maps.push(cur.clone());
        for slice in &self.slices {
            for g in slice {
                if let Targets::Two(a, b) = g.targets {
                    if g.kind.moves_contents() {
                        cur.swap(a, b);
                    }
                }
            }
            maps.push(cur.clone());
        }
        maps
    }

    pub fn final_arrangement(&self) -> Vec<Occupant> {
        self.position_maps().pop().expect("at least the initial map")
    }

    /// Where each data qubit sits (`perm[q] = slot`) for an arrangement.
    pub fn data_slots(arrangement: &[Occupant], n_data: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n_data];
        for (s, o) in arrangement.iter().enumerate() {
            if let Occupant::Data(q) = o {
                out[*q] = s;
            }
        }
        out
    }

    /// Slice range of cycle `c` (0-based).
    pub fn cycle_slices(&self, c: usize) -> std::ops::Range<usize> {
        let start = if c == 0 { 0 } else { self.cycle_ends[c - 1] };
        start..self.cycle_ends[c]
    }

    /// Number of schedule entries completed by the end of cycle `c` (0-based).
    pub fn records_through_cycle(&self, c: usize) -> usize {
        let end = self.cycle_ends[c];
        self.schedule.iter().filter(|e| e.slice < end).count()
    }

    /// Location `(slice, slot)` immediately before the first non-idle gate
    /// with step ≥ `step` acting on data qubit `q`.  `None` when no such
    /// gate exists.
    pub fn injection_point(&self, q: usize, step: usize) -> Option<(usize, usize)> {
        let maps = self.position_maps();
        for (i, slice) in self.slices.iter().enumerate() {
            let slot = maps[i].iter().position(|&o| o == Occupant::Data(q))?;
            if slice
                .iter()
                .any(|g| !g.is_idle() && g.step >= step && g.step > 0 && g.targets.touches(slot))
            {
                return Some((i, slot));
            }
        }
        None
    }

    /// Location immediately before the MeasureZ of schedule entry `record`.
    pub fn measurement_point(&self, record: usize) -> (usize, usize) {
        let e = self.schedule[record];
        (e.slice, e.slot)
    }

    pub fn gate_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for g in self.slices.iter().flatten() {
            *counts.entry(g.kind.name()).or_insert(0) += 1;
        }
        counts
    }

    pub fn count(&self, name: &str) -> usize {
        self.gate_counts().get(name).copied().unwrap_or(0)
    }

    /// Structural checks; returns a list of violations.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let slots = self.slot_count();
        if self.topology.slots() != slots {
            problems.push(format!(
                "topology has {} slots, circuit {slots}",
                self.topology.slots()
            ));
        }
        let maps = self.position_maps();
        for (i, slice) in self.slices.iter().enumerate() {
            let mut used = vec![false; slots];
            for g in slice {
                if g.targets.slots().count() != g.kind.arity() {
                    problems.push(format!("slice {i}: {} has wrong arity", g.kind.name()));
                }
                for s in g.targets.slots() {
                    if s >= slots {
                        problems.push(format!("slice {i}: slot {s} out of range"));
                        continue;
                    }
                    if used[s] {
                        problems.push(format!("slice {i}: slot {s} used twice"));
                    }
                    used[s] = true;
                }
                if let Targets::Two(a, b) = g.targets {
                    if !self.topology.adjacent(a, b) {
                        problems.push(format!("slice {i}: {} on non-adjacent {a},{b}", g.kind.name()));
                    }
                }
                if let GateKind::MeasureZ { .. } = g.kind {
                    let s = g.targets.first();
                    if !matches!(maps[i].get(s), Some(Occupant::Ancilla(_))) {
                        problems.push(format!("slice {i}: MZ on slot {s} which holds no ancilla"));
                    }
                }
            }
        }
        for m in &maps {
            let mut seen: Vec<Occupant> = m.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != m.len() {
                problems.push("position map is not a bijection".into());
                break;
            }
        }
        for e in &self.schedule {
            let ok = self.slices.get(e.slice).is_some_and(|s| {
                s.iter().any(|g| {
                    g.kind == GateKind::MeasureZ { record: e.record } && g.targets.first() == e.slot
                })
            });
            if !ok {
                problems.push(format!("schedule r{} has no matching MZ", e.record));
            }
        }
        problems
    }

    /// Concatenate `k` copies of a one-cycle circuit.  Data qubits may end the
    /// cycle permuted; later copies then measure the relabeled generators.
    pub fn repeat(&self, k: usize) -> Result<Circuit, CircuitError> {
        if self.cycle_ends.len() != 1 || self.cycle_ends[0] != self.slices.len() {
            return Err(CircuitError::Repeat("expected a single-cycle circuit".into()));
        }
        let end = self.final_arrangement();
        let mut tau = vec![usize::MAX; self.n_data];
        for (s, (&from, &to)) in self.initial.iter().zip(&end).enumerate() {
            match (from, to) {
                (Occupant::Data(a), Occupant::Data(b)) => tau[a] = b,
                (Occupant::Ancilla(a), Occupant::Ancilla(b)) if a == b => {}
                _ => {
                    return Err(CircuitError::Repeat(format!(
                        "slot {s} holds {from} at start but {to} at end"
                    )))
                }
            }
        }
        // label q in cycle 0 corresponds to tau^c(q) in cycle c
        let relabel = |g: &PauliString, c: usize| {
            let mut perm: Vec<usize> = (0..self.n_data).collect();
            for _ in 0..c {
                perm = perm.iter().map(|&q| tau[q]).collect();
            }
            g.permuted(&perm)
        };
        let steps = self.steps();
        let records = self.schedule.len();
        let cycle_len = self.slices.len();
        let mut out = Circuit {
            name: self.name.clone(),
            topology: self.topology.clone(),
            mode: self.mode,
            n_data: self.n_data,
            initial: self.initial.clone(),
            generators: Vec::new(),
            schedule: Vec::new(),
            slices: Vec::new(),
            cycle_ends: Vec::new(),
        };
        for c in 0..k {
            for slice in &self.slices {
                let shifted = slice
                    .iter()
                    .map(|g| {
                        let mut g = *g;
                        if g.step > 0 {
                            g.step += c * steps;
                        }
                        if let GateKind::MeasureZ { record } = g.kind {
                            g.kind = GateKind::MeasureZ {
                                record: record + c * records,
                            };
                        }
                        g
                    })
                    .collect();
                out.slices.push(shifted);
            }
            for e in &self.schedule {
                let g = relabel(&self.generators[e.generator], c);
                let id = match out.generators.iter().position(|x| *x == g) {
                    Some(id) => id,
                    None => {
                        out.generators.push(g);
                        out.generators.len() - 1
                    }
                };
                out.schedule.push(ScheduleEntry {
                    record: e.record + c * records,
                    step: e.step + c * steps,
                    generator: id,
                    slot: e.slot,
                    ancilla: e.ancilla,
                    slice: e.slice + c * cycle_len,
                });
            }
            out.cycle_ends.push((c + 1) * cycle_len);
        }
        Ok(out)
    }

    /// Generator measured at schedule entry `record`, as a Pauli string.
    pub fn measured(&self, record: usize) -> &PauliString {
        &self.generators[self.schedule[record].generator]
    }

    pub fn to_text(&self) -> String {
        format::write_circuit(self)
    }

    pub fn parse_text(text: &str) -> Result<Circuit, CircuitError> {
        format::parse_circuit(text)
    }
}
