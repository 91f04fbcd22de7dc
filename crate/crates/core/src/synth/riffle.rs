//! Riffle blocks: one ancilla-mediated measurement of a block generator while
//! the ancilla walks along the ring.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{CircuitBuilder, CircuitError, GateKind, Occupant};
use crate::pauli::{block_extent, Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Visit the block from L to R.
    Forward,
    /// Visit the block from R to L.
    Reverse,
}

/// The named riffle variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RiffleVariant {
    Plain,
    Reverse,
    CnotFirst,
    CnotLast,
    CnotBoth,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiffleSpec {
    /// Generator in logical data labels.
    pub generator: PauliString,
    pub direction: Direction,
    pub cnot_first: bool,
    pub cnot_last: bool,
    pub ancilla: usize,
    /// When set, the ancilla must sit in this slot when the block starts.
    pub entry_slot: Option<usize>,
}

impl RiffleSpec {
    pub fn new(generator: PauliString, variant: RiffleVariant) -> Self {
        let (direction, cnot_first, cnot_last) = match variant {
            RiffleVariant::Plain => (Direction::Forward, false, false),
            RiffleVariant::Reverse => (Direction::Reverse, false, false),
            RiffleVariant::CnotFirst => (Direction::Forward, true, false),
            RiffleVariant::CnotLast => (Direction::Forward, false, true),
            RiffleVariant::CnotBoth => (Direction::Forward, true, true),
        };
        Self {
            generator,
            direction,
            cnot_first,
            cnot_last,
            ancilla: 0,
            entry_slot: None,
        }
    }

    pub fn reversed(mut self) -> Self {
        self.direction = match self.direction {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        };
        self
    }
}

/// Single-qubit basis change that maps a letter's eigenbasis onto Z.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementTemplate {
    pub letter: Pauli,
    /// Gates on the data qubit before the coupling, in time order.
    pub pre: Vec<GateKind>,
    pub coupling: GateKind,
    /// Gates on the data qubit after the coupling, in time order.
    pub post: Vec<GateKind>,
}

/// Ancilla-coupled template for measuring `letter` on one data qubit.  The
/// data qubit controls the coupling and the ancilla is the target; ancilla
/// outcome 0 reads as eigenvalue +1.
pub fn measurement_primitive(letter: Pauli, coupling: GateKind) -> MeasurementTemplate {
    let (pre, post) = basis_change(letter);
    MeasurementTemplate {
        letter,
        pre,
        coupling,
        post,
    }
}

fn basis_change(letter: Pauli) -> (Vec<GateKind>, Vec<GateKind>) {
    match letter {
        Pauli::I | Pauli::Z => (vec![], vec![]),
        Pauli::X => (vec![GateKind::H], vec![GateKind::H]),
        // H·S† carries Y onto Z
        Pauli::Y => (
            vec![GateKind::Rz(-FRAC_PI_2), GateKind::H],
            vec![GateKind::H, GateKind::Rz(FRAC_PI_2)],
        ),
    }
}

/// Append one riffle block at measurement step `step`; returns the record index.
pub fn build_riffle(b: &mut CircuitBuilder, spec: &RiffleSpec, step: usize) -> Result<usize, CircuitError> {
    let extent = block_extent(&spec.generator)?;
    let mut order = extent.positions();
    if spec.direction == Direction::Reverse {
        order.reverse();
    }
    let anc = Occupant::Ancilla(spec.ancilla);
    if let Some(entry) = spec.entry_slot {
        let at = b.slot_of(anc)?;
        if at != entry {
            return Err(CircuitError::Geometry(format!(
                "ancilla enters at slot {at}, spec expects {entry}"
            )));
        }
    }
    let last = order.len() - 1;
    for (k, &q) in order.iter().enumerate() {
        let letter = spec.generator.letter(q);
        let s = b.slot_of(Occupant::Data(q))?;
        let a = b.slot_of(anc)?;
        if !b.topology().adjacent(s, a) {
            return Err(CircuitError::Geometry(format!(
                "{} of {} sits at slot {s}, ancilla at {a}",
                Occupant::Data(q),
                spec.generator
            )));
        }
        let use_cnot = (k == 0 && spec.cnot_first) || (k == last && spec.cnot_last);
        let coupling = if use_cnot { GateKind::Cnot } else { GateKind::Cns };
        let t = measurement_primitive(letter, coupling);
        for g in &t.pre {
            b.gate1(*g, s, step)?;
        }
        b.gate2(coupling, s, a, step)?;
        let landed = if coupling.moves_contents() { a } else { s };
        for g in &t.post {
            b.gate1(*g, landed, step)?;
        }
    }
    b.measure(spec.ancilla, &spec.generator, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::AncillaMode;
    use crate::pauli::{ps, StabilizerCode};
    use crate::tableau::verify_circuit;

    fn single_riffle(g: &str, variant: RiffleVariant, n: usize) -> crate::circuit::Circuit {
        let mut b = CircuitBuilder::ring_single_ancilla("riffle", n, AncillaMode::Qnd);
        let spec = RiffleSpec::new(ps(g), variant);
        build_riffle(&mut b, &spec, 1).unwrap();
        b.end_cycle();
        b.finish()
    }

    #[test]
    fn plain_riffle_moves_ancilla_across_block() {
        let c = single_riffle("ZZI", RiffleVariant::Plain, 3);
        let end = c.final_arrangement();
        assert_eq!(end[2], Occupant::Ancilla(0));
        assert_eq!(c.count("CNS"), 2);
        let r = verify_circuit(&c, &StabilizerCode::rep3()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn reverse_riffle_measures_same_operator() {
        let mut b = CircuitBuilder::ring_single_ancilla("there-and-back", 3, AncillaMode::Qnd);
        let spec = RiffleSpec::new(ps("ZZI"), RiffleVariant::Plain);
        build_riffle(&mut b, &spec, 1).unwrap();
        build_riffle(&mut b, &spec.clone().reversed(), 2).unwrap();
        b.end_cycle();
        let c = b.finish();
        assert_eq!(c.final_arrangement(), c.initial);
        assert_eq!(c.generators, vec![ps("ZZI")]);
        let r = verify_circuit(&c, &StabilizerCode::rep3()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn x_entries_are_hadamard_wrapped() {
        let c = single_riffle("ZXXZI", RiffleVariant::Plain, 5);
        assert_eq!(c.count("H"), 4);
        assert_eq!(c.count("CNS"), 4);
        let r = verify_circuit(&c, &StabilizerCode::laflamme5()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn cnot_last_leaves_ancilla_beside_final_qubit() {
        let c = single_riffle("ZZI", RiffleVariant::CnotLast, 3);
        assert_eq!(c.final_arrangement()[1], Occupant::Ancilla(0));
        assert_eq!(c.count("CNOT"), 1);
        let r = verify_circuit(&c, &StabilizerCode::rep3()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn geometry_errors_are_reported() {
        let mut b = CircuitBuilder::ring_single_ancilla("bad", 5, AncillaMode::Qnd);
        let spec = RiffleSpec::new(ps("IIZZI"), RiffleVariant::Plain);
        assert!(matches!(build_riffle(&mut b, &spec, 1), Err(CircuitError::Geometry(_))));
        let mut spec = RiffleSpec::new(ps("ZZIII"), RiffleVariant::Plain);
        spec.entry_slot = Some(3);
        assert!(matches!(build_riffle(&mut b, &spec, 1), Err(CircuitError::Geometry(_))));
    }

    #[test]
    fn primitive_readout_convention() {
        let z = measurement_primitive(Pauli::Z, GateKind::Cnot);
        assert!(z.pre.is_empty() && z.post.is_empty());
        let x = measurement_primitive(Pauli::X, GateKind::Cnot);
        assert_eq!(x.pre, vec![GateKind::H]);
    }
}
