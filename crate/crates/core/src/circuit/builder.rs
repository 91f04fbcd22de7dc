use super::{AncillaMode, Circuit, CircuitError, Gate, GateKind, Occupant, ScheduleEntry, Targets, Topology};
use crate::pauli::PauliString;

/// Builds a [`Circuit`] gate by gate with as-soon-as-possible packing.
///
/// Each gate lands in the earliest slice after the last gate on any of its
/// slots.  Because contents only move through gates that touch them, the
/// per-slot occupancy tracked here is always the occupancy at that slot's
/// current frontier.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    name: String,
    topology: Topology,
    mode: AncillaMode,
    initial: Vec<Occupant>,
    current: Vec<Occupant>,
    ready: Vec<usize>,
    slices: Vec<Vec<Gate>>,
    generators: Vec<PauliString>,
    schedule: Vec<ScheduleEntry>,
    cycle_ends: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new(name: &str, topology: Topology, initial: Vec<Occupant>, mode: AncillaMode) -> Self {
        let slots = initial.len();
        Self {
            name: name.to_string(),
            topology,
            mode,
            current: initial.clone(),
            initial,
            ready: vec![0; slots],
            slices: Vec::new(),
            generators: Vec::new(),
            schedule: Vec::new(),
            cycle_ends: Vec::new(),
        }
    }

    /// Ring of `n + 1` slots: ancilla in slot 0, data qubit `q` in slot `q + 1`.
    pub fn ring_single_ancilla(name: &str, n: usize, mode: AncillaMode) -> Self {
        let mut initial = vec![Occupant::Ancilla(0)];
        initial.extend((0..n).map(Occupant::Data));
        Self::new(name, Topology::Ring(n + 1), initial, mode)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn mode(&self) -> AncillaMode {
        self.mode
    }

    pub fn slot_of(&self, o: Occupant) -> Result<usize, CircuitError> {
        self.current
            .iter()
            .position(|&x| x == o)
            .ok_or(CircuitError::MissingOccupant(o))
    }

    pub fn occupant(&self, slot: usize) -> Occupant {
        self.current[slot]
    }

    pub fn arrangement(&self) -> &[Occupant] {
        &self.current
    }

    pub fn next_step(&self) -> usize {
        self.schedule.len() + 1
    }

    fn place(&mut self, gate: Gate) -> usize {
        let at = gate.targets.slots().map(|s| self.ready[s]).max().unwrap_or(0);
        while self.slices.len() <= at {
            self.slices.push(Vec::new());
        }
        self.slices[at].push(gate);
        for s in gate.targets.slots() {
            self.ready[s] = at + 1;
        }
        at
    }

    pub fn gate1(&mut self, kind: GateKind, slot: usize, step: usize) -> Result<usize, CircuitError> {
        if slot >= self.current.len() {
            return Err(CircuitError::SlotOutOfRange(slot));
        }
        Ok(self.place(Gate::one(kind, slot, step)))
    }

    /// Two-qubit gate; `a` is the control for CNOT and CNS.
    pub fn gate2(&mut self, kind: GateKind, a: usize, b: usize, step: usize) -> Result<usize, CircuitError> {
        let slots = self.current.len();
        if a >= slots {
            return Err(CircuitError::SlotOutOfRange(a));
        }
        if b >= slots {
            return Err(CircuitError::SlotOutOfRange(b));
        }
        if !self.topology.adjacent(a, b) {
            return Err(CircuitError::NotAdjacent(a, b));
        }
        let at = self.place(Gate::two(kind, a, b, step));
        if kind.moves_contents() {
            self.current.swap(a, b);
        }
        Ok(at)
    }

    fn generator_id(&mut self, g: &PauliString) -> usize {
        match self.generators.iter().position(|x| x == g) {
            Some(id) => id,
            None => {
                self.generators.push(g.clone());
                self.generators.len() - 1
            }
        }
    }

    /// Measure ancilla `a` as the outcome of `generator`; returns the record index.
    /// In reinit mode a reset follows.
    pub fn measure(&mut self, a: usize, generator: &PauliString, step: usize) -> Result<usize, CircuitError> {
        let slot = self.slot_of(Occupant::Ancilla(a))?;
        let record = self.schedule.len();
        let slice = self.place(Gate::one(GateKind::MeasureZ { record }, slot, step));
        let id = self.generator_id(generator);
        self.schedule.push(ScheduleEntry {
            record,
            step,
            generator: id,
            slot,
            ancilla: a,
            slice,
        });
        if self.mode == AncillaMode::Reinit {
            self.place(Gate::one(GateKind::ResetToZero, slot, step));
        }
        Ok(record)
    }

    /// Align every slot to the latest frontier.
    pub fn fence(&mut self) {
        let top = self.slices.len();
        for r in self.ready.iter_mut() {
            *r = top;
        }
    }

    pub fn end_cycle(&mut self) {
        self.fence();
        self.cycle_ends.push(self.slices.len());
    }

    /// Pad idle slots with Id gates and produce the circuit.
    pub fn finish(self) -> Circuit {
        let slots = self.initial.len();
        let n_data = self
            .initial
            .iter()
            .filter(|o| matches!(o, Occupant::Data(_)))
            .count();
        let slices = self
            .slices
            .into_iter()
            .map(|mut slice| {
                let long = slice.iter().any(|g| g.kind.is_two_qubit());
                let mut used = vec![false; slots];
                for g in &slice {
                    for s in g.targets.slots() {
                        used[s] = true;
                    }
                }
                for (s, u) in used.iter().enumerate() {
                    if !u {
                        slice.push(Gate {
                            kind: GateKind::Id { long },
                            targets: Targets::One(s),
                            step: 0,
                        });
                    }
                }
                slice.sort_by_key(|g| g.targets.first());
                slice
            })
            .collect();
        Circuit {
            name: self.name,
            topology: self.topology,
            mode: self.mode,
            n_data,
            initial: self.initial,
            generators: self.generators,
            schedule: self.schedule,
            slices,
            cycle_ends: self.cycle_ends,
        }
    }
}
