//! Measurement-circuit synthesis for neighboring-blocks codes.

mod cns;
mod riffle;
pub mod surface;

use crate::circuit::{AncillaMode, Circuit, CircuitBuilder, CircuitError, GateKind, Occupant, Topology};
use crate::pauli::{
    block_extent, classify_with, stabilizer_membership, Condition, NeighborClassification, OrderPreference,
    StabilizerCode,
};

pub use cns::{cns_decomposition, cns_decomposition_unitary, cns_unitary};
pub use riffle::{build_riffle, measurement_primitive, Direction, MeasurementTemplate, RiffleSpec, RiffleVariant};

/// Repetition strategy for a cycle of generator measurements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Generators in order, then in reverse order with reverse riffles.
    ForwardBackward,
    /// One series per cycle; the data arrangement rotates between cycles.
    HalfCycle,
    /// Repetition codes on a ring with one link removed.
    ReducedConnectivity,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "forward-backward" => Ok(Scheme::ForwardBackward),
            "half-cycle" => Ok(Scheme::HalfCycle),
            "reduced-connectivity" => Ok(Scheme::ReducedConnectivity),
            other => Err(format!("unknown scheme {other:?}")),
        }
    }
}

/// Riffle specs for one series, in traversal order.
fn series_specs(
    code: &StabilizerCode,
    order: &[usize],
    conditions: &[Condition],
    direction: Direction,
) -> Vec<RiffleSpec> {
    let (gens, junctions): (Vec<usize>, Vec<Condition>) = match direction {
        Direction::Forward => (order.to_vec(), conditions.to_vec()),
        Direction::Reverse => (
            order.iter().rev().copied().collect(),
            conditions.iter().rev().copied().collect(),
        ),
    };
    let mut specs: Vec<RiffleSpec> = gens
        .iter()
        .map(|&g| RiffleSpec {
            generator: code.generator(g).clone(),
            direction,
            cnot_first: false,
            cnot_last: false,
            ancilla: 0,
            entry_slot: None,
        })
        .collect();
    for (k, c) in junctions.iter().enumerate() {
        match c {
            Condition::Adjacent => {}
            Condition::Overlap1 => specs[k].cnot_last = true,
            Condition::Overlap2 => {
                specs[k].cnot_last = true;
                specs[k + 1].cnot_first = true;
            }
        }
    }
    specs
}

/// Initial ring arrangement: ancilla in slot 0, then data starting at the
/// first block's left edge so the ancilla sits just before it.
fn ring_start(code: &StabilizerCode, first: usize, topology: Topology, mode: AncillaMode, name: &str) -> Result<CircuitBuilder, CircuitError> {
    let n = code.n();
    let l = block_extent(code.generator(first))?.l - 1;
    let mut initial = vec![Occupant::Ancilla(0)];
    initial.extend((0..n).map(|j| Occupant::Data((l + j) % n)));
    Ok(CircuitBuilder::new(name, topology, initial, mode))
}

fn accepted(classification: &NeighborClassification) -> Result<(&[usize], &[Condition]), CircuitError> {
    match classification {
        NeighborClassification::Accepted {
            order, conditions, ..
        } => Ok((order, conditions)),
        NeighborClassification::Rejected { reason } => {
            Err(CircuitError::Unsupported(format!("unclassifiable code: {reason}")))
        }
    }
}

fn is_repetition_like(code: &StabilizerCode) -> bool {
    code.generators().iter().all(|g| {
        g.weight() == 2 && g.letters().iter().all(|p| matches!(p, crate::pauli::Pauli::I | crate::pauli::Pauli::Z))
    })
}

/// One cycle of syndrome measurements.
pub fn synthesize_cycle(
    code: &StabilizerCode,
    classification: &NeighborClassification,
    scheme: Scheme,
    mode: AncillaMode,
) -> Result<Circuit, CircuitError> {
    let n = code.n();
    match scheme {
        Scheme::ForwardBackward | Scheme::HalfCycle => {
            let (order, conditions) = accepted(classification)?;
            let label = match scheme {
                Scheme::ForwardBackward => "forward-backward",
                _ => "half-cycle",
            };
            let name = format!("{}-{label}", code.name());
            let mut b = ring_start(code, order[0], Topology::Ring(n + 1), mode, &name)?;
            let mut step = 1;
            for spec in series_specs(code, order, conditions, Direction::Forward) {
                build_riffle(&mut b, &spec, step)?;
                step += 1;
            }
            if scheme == Scheme::ForwardBackward {
                for spec in series_specs(code, order, conditions, Direction::Reverse) {
                    build_riffle(&mut b, &spec, step)?;
                    step += 1;
                }
            }
            b.end_cycle();
            let c = b.finish();
            let end = c.final_arrangement();
            match scheme {
                Scheme::ForwardBackward if end != c.initial => Err(CircuitError::Geometry(
                    "forward-backward cycle does not restore the arrangement".into(),
                )),
                Scheme::HalfCycle if end.iter().position(|o| matches!(o, Occupant::Ancilla(_))) != Some(0) => {
                    Err(CircuitError::Unsupported(
                        "half-cycle needs the ancilla back at its start slot".into(),
                    ))
                }
                _ => Ok(c),
            }
        }
        Scheme::ReducedConnectivity => {
            if !is_repetition_like(code) {
                return Err(CircuitError::Unsupported(format!(
                    "reduced connectivity applies to repetition codes, not {}",
                    code.name()
                )));
            }
            let chain = StabilizerCode::repetition_chain(n);
            for g in chain.generators() {
                if stabilizer_membership(code, g).is_none() {
                    return Err(CircuitError::Unsupported(format!(
                        "{} does not contain the chain generator {g}",
                        code.name()
                    )));
                }
            }
            let class = classify_with(&chain, OrderPreference::FirstFound);
            let (order, conditions) = accepted(&class)?;
            let topology = Topology::ring_without(n + 1, n, 0);
            let name = format!("{}-reduced-connectivity", code.name());
            let mut b = ring_start(&chain, order[0], topology, mode, &name)?;
            let mut step = 1;
            for dir in [Direction::Forward, Direction::Reverse] {
                for spec in series_specs(&chain, order, conditions, dir) {
                    build_riffle(&mut b, &spec, step)?;
                    step += 1;
                }
            }
            b.end_cycle();
            Ok(b.finish())
        }
    }
}

/// Classify with the ordering preference used for synthesis: fewest forced
/// CNOTs for repetition-type codes, first found otherwise.
pub fn classify_for_synthesis(code: &StabilizerCode) -> NeighborClassification {
    let pref = if is_repetition_like(code) {
        OrderPreference::FewestCnots
    } else {
        OrderPreference::FirstFound
    };
    classify_with(code, pref)
}

/// `cycles` consecutive cycles of a scheme.
pub fn synthesize(
    code: &StabilizerCode,
    scheme: Scheme,
    mode: AncillaMode,
    cycles: usize,
) -> Result<Circuit, CircuitError> {
    let class = classify_for_synthesis(code);
    synthesize_cycle(code, &class, scheme, mode)?.repeat(cycles)
}

/// Forward-backward cycle for Shor's nine-qubit code on a ten-slot ring.
pub fn synthesize_nine_qubit() -> Result<Circuit, CircuitError> {
    let code = StabilizerCode::shor9();
    let class = classify_for_synthesis(&code);
    synthesize_cycle(&code, &class, Scheme::ForwardBackward, AncillaMode::Qnd)
}

/// Conventional two-ancilla scheme for the 3-qubit repetition code on the path
/// q1 – a1 – q2 – a2 – q3, two rounds per cycle.
pub fn synthesize_benchmark_two_ancilla(mode: AncillaMode) -> Result<Circuit, CircuitError> {
    let initial = vec![
        Occupant::Data(0),
        Occupant::Ancilla(0),
        Occupant::Data(1),
        Occupant::Ancilla(1),
        Occupant::Data(2),
    ];
    let mut b = CircuitBuilder::new("benchmark-2anc", Topology::path(5), initial, mode);
    let zzi = "ZZI".parse()?;
    let izz = "IZZ".parse()?;
    let mut step = 1;
    for _round in 0..2 {
        b.gate2(GateKind::Cnot, 0, 1, step)?;
        b.gate2(GateKind::Cnot, 2, 1, step)?;
        b.measure(0, &zzi, step)?;
        b.gate2(GateKind::Cnot, 4, 3, step + 1)?;
        b.gate2(GateKind::Cnot, 2, 3, step + 1)?;
        b.measure(1, &izz, step + 1)?;
        step += 2;
    }
    b.end_cycle();
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{ps, PauliString};
    use crate::tableau::verify_circuit;

    fn fb(code: &StabilizerCode) -> Circuit {
        synthesize(code, Scheme::ForwardBackward, AncillaMode::Qnd, 1).unwrap()
    }

    fn schedule(c: &Circuit) -> Vec<String> {
        c.schedule.iter().map(|e| c.generators[e.generator].to_string()).collect()
    }

    #[test]
    fn rep3_forward_backward_schedule() {
        let c = fb(&StabilizerCode::rep3());
        assert_eq!(schedule(&c), ["ZZI", "ZIZ", "ZIZ", "ZZI"]);
        assert_eq!(c.count("CNOT"), 0);
        assert_eq!(c.final_arrangement(), c.initial);
        assert!(verify_circuit(&c, &StabilizerCode::rep3()).unwrap().passed());
    }

    #[test]
    fn laflamme_forward_backward_schedule() {
        let code = StabilizerCode::laflamme5();
        let c = fb(&code);
        assert_eq!(
            schedule(&c),
            ["ZXXZI", "XXZIZ", "XZIZX", "ZIZXX", "ZIZXX", "XZIZX", "XXZIZ", "ZXXZI"]
        );
        assert_eq!(c.count("CNOT"), 0);
        let r = verify_circuit(&c, &code).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn rep5_is_cns_only() {
        let code = StabilizerCode::rep5();
        let c = fb(&code);
        assert_eq!(c.count("CNOT"), 0);
        let r = verify_circuit(&c, &code).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn half_cycle_rotates_generators() {
        let code = StabilizerCode::rep3();
        let c = synthesize(&code, Scheme::HalfCycle, AncillaMode::Qnd, 2).unwrap();
        let s = schedule(&c);
        assert_eq!(&s[..2], ["ZZI", "ZIZ"]);
        let mut second: Vec<String> = s[2..].to_vec();
        second.sort();
        assert_eq!(second, ["IZZ", "ZZI"]);
        let r = verify_circuit(&c, &code).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn half_cycle_permutation_has_finite_order() {
        let code = StabilizerCode::rep3();
        let one = synthesize(&code, Scheme::HalfCycle, AncillaMode::Qnd, 1).unwrap();
        let n = code.n();
        let mut k = 1;
        loop {
            let c = one.repeat(k).unwrap();
            if c.final_arrangement() == c.initial {
                break;
            }
            k += 1;
            assert!(k <= n, "order exceeds n");
        }
    }

    #[test]
    fn reduced_connectivity_avoids_one_link() {
        let code = StabilizerCode::rep3();
        let c = synthesize(&code, Scheme::ReducedConnectivity, AncillaMode::Qnd, 1).unwrap();
        for g in c.slices.iter().flatten() {
            if let crate::circuit::Targets::Two(a, b) = g.targets {
                assert!(!(a.min(b) == 0 && a.max(b) == 3));
            }
        }
        assert!(c.count("CNOT") > 0);
        let r = verify_circuit(&c, &code).unwrap();
        assert!(r.passed(), "{r}");
        assert!(synthesize(&StabilizerCode::laflamme5(), Scheme::ReducedConnectivity, AncillaMode::Qnd, 1).is_err());
    }

    #[test]
    fn nine_qubit_cycle_verifies() {
        let c = synthesize_nine_qubit().unwrap();
        assert_eq!(c.slot_count(), 10);
        let code = StabilizerCode::shor9();
        let mut gens: Vec<PauliString> = c.generators.clone();
        gens.sort_by_key(|g| g.to_string());
        let mut expected = code.generators().to_vec();
        expected.sort_by_key(|g| g.to_string());
        assert_eq!(gens, expected);
        let r = verify_circuit(&c, &code).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn benchmark_scheme() {
        let c = synthesize_benchmark_two_ancilla(AncillaMode::Qnd).unwrap();
        assert_eq!(c.schedule.len(), 4);
        let code = StabilizerCode::from_strs("rep3", &["ZZI", "IZZ"]).unwrap();
        let r = verify_circuit(&c, &code).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(c.generators, vec![ps("ZZI"), ps("IZZ")]);
    }

    #[test]
    fn reinit_mode_verifies() {
        let code = StabilizerCode::laflamme5();
        let c = synthesize(&code, Scheme::ForwardBackward, AncillaMode::Reinit, 2).unwrap();
        assert_eq!(c.count("RESET"), 16);
        assert!(verify_circuit(&c, &code).unwrap().passed());
    }

    #[test]
    fn text_round_trip_is_exact() {
        for c in [
            fb(&StabilizerCode::laflamme5()),
            synthesize(&StabilizerCode::rep3(), Scheme::ReducedConnectivity, AncillaMode::Reinit, 2).unwrap(),
            synthesize_benchmark_two_ancilla(AncillaMode::Qnd).unwrap(),
        ] {
            let text = c.to_text();
            let back = Circuit::parse_text(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_text(), text);
        }
    }
}
