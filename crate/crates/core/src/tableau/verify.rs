//! Tableau-level checks of synthesized measurement circuits.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{logical_operators, prepare_circuit_state, run_circuit, syndrome_bits, Injection, TableauError};
use crate::circuit::Circuit;
use crate::pauli::{stabilizer_membership, Pauli, PauliString, StabilizerCode};

/// A single failed injection prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectionCheck {
    /// 0-based logical data qubit.
    pub qubit: usize,
    pub pauli: Pauli,
    /// Injection precedes measurement step `step`.
    pub step: usize,
    pub expected: Vec<bool>,
    pub observed: Vec<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub circuit: String,
    pub structure: Vec<String>,
    /// Generators measured that are not in the code's stabilizer group.
    pub foreign_generators: Vec<String>,
    pub nondeterministic: Vec<usize>,
    pub nonzero: Vec<usize>,
    pub injections_checked: usize,
    pub injection_failures: Vec<InjectionCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.structure.is_empty()
            && self.foreign_generators.is_empty()
            && self.nondeterministic.is_empty()
            && self.nonzero.is_empty()
            && self.injection_failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} ({} injections checked)",
            self.circuit,
            if self.passed() { "pass" } else { "FAIL" },
            self.injections_checked
        )?;
        for s in &self.structure {
            writeln!(f, "  structure: {s}")?;
        }
        for g in &self.foreign_generators {
            writeln!(f, "  measured {g} is outside the stabilizer group")?;
        }
        if !self.nondeterministic.is_empty() {
            writeln!(f, "  random outcomes at records {:?}", self.nondeterministic)?;
        }
        if !self.nonzero.is_empty() {
            writeln!(f, "  nonzero syndrome on codeword at records {:?}", self.nonzero)?;
        }
        for c in self.injection_failures.iter().take(10) {
            writeln!(
                f,
                "  {}{} before step {}: expected {:?} observed {:?}",
                c.pauli,
                c.qubit + 1,
                c.step,
                c.expected,
                c.observed
            )?;
        }
        Ok(())
    }
}

/// Full check with the default logical fixing.
pub fn verify_circuit(circuit: &Circuit, code: &StabilizerCode) -> Result<VerificationReport, TableauError> {
    verify_measurement_circuit(circuit, code, &logical_operators(code))
}

/// (a) On a codeword every measurement is deterministic with zero syndrome.
/// (b) Each single-qubit Pauli on each data qubit, injected before every
/// measurement step, flips exactly the later measurements whose generator
/// anticommutes with it at that qubit.
pub fn verify_measurement_circuit(
    circuit: &Circuit,
    code: &StabilizerCode,
    fixing: &[PauliString],
) -> Result<VerificationReport, TableauError> {
    let mut report = VerificationReport {
        circuit: circuit.name.clone(),
        structure: circuit.check(),
        ..Default::default()
    };
    for g in &circuit.generators {
        if stabilizer_membership(code, g).is_none() {
            report.foreign_generators.push(g.to_string());
        }
    }
    let base = prepare_circuit_state(circuit, code, fixing)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut state = base.clone();
    let outcomes = run_circuit(circuit, &mut state, &[], &mut rng)?;
    let raw: Vec<bool> = outcomes.iter().map(|o| o.0).collect();
    for (r, (_, det)) in outcomes.iter().enumerate() {
        if !det {
            report.nondeterministic.push(r);
        }
    }
    let baseline = syndrome_bits(circuit, &raw);
    for (r, &b) in baseline.iter().enumerate() {
        if b {
            report.nonzero.push(r);
        }
    }

    let steps: Vec<usize> = circuit.schedule.iter().map(|e| e.step).collect();
    let mut distinct_steps = steps.clone();
    distinct_steps.dedup();
    for q in 0..circuit.n_data {
        for p in Pauli::NONTRIVIAL {
            for &k in &distinct_steps {
                let expected: Vec<bool> = circuit
                    .schedule
                    .iter()
                    .map(|e| e.step >= k && circuit.generators[e.generator].letter(q).anticommutes(p))
                    .collect();
                let injections: Vec<Injection> = circuit
                    .injection_point(q, k)
                    .map(|(slice, slot)| Injection { slice, slot, pauli: p })
                    .into_iter()
                    .collect();
                let mut state = base.clone();
                let out = run_circuit(circuit, &mut state, &injections, &mut rng)?;
                let raw: Vec<bool> = out.iter().map(|o| o.0).collect();
                let observed: Vec<bool> = syndrome_bits(circuit, &raw)
                    .iter()
                    .zip(&baseline)
                    .map(|(a, b)| a ^ b)
                    .collect();
                report.injections_checked += 1;
                if observed != expected || out.iter().any(|o| !o.1) {
                    report.injection_failures.push(InjectionCheck {
                        qubit: q,
                        pauli: p,
                        step: k,
                        expected,
                        observed,
                    });
                }
            }
        }
    }
    Ok(report)
}
