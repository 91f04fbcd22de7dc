//! Syndrome records and detection events.

use std::collections::HashMap;

use super::DecodeError;
use crate::circuit::{AncillaMode, Circuit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyndromeEntry {
    /// 1-based measurement step.
    pub t: usize,
    /// Index into the circuit's generator list.
    pub generator: usize,
    pub ancilla: usize,
    pub m: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeRecord {
    pub mode: AncillaMode,
    pub entries: Vec<SyndromeEntry>,
}

impl SyndromeRecord {
    /// Entries in schedule order with raw outcomes indexed by record.
    pub fn from_outcomes(circuit: &Circuit, raw: &[bool]) -> Self {
        Self {
            mode: circuit.mode,
            entries: circuit
                .schedule
                .iter()
                .map(|e| SyndromeEntry {
                    t: e.step,
                    generator: e.generator,
                    ancilla: e.ancilla,
                    m: raw[e.record],
                })
                .collect(),
        }
    }

    /// Overwrite the outcome bits from raw outcomes in schedule order.
    pub fn fill(&mut self, raw: &[bool]) {
        for (e, &m) in self.entries.iter_mut().zip(raw) {
            e.m = m;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The first `k` entries.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            mode: self.mode,
            entries: self.entries[..k.min(self.entries.len())].to_vec(),
        }
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        for w in self.entries.windows(2) {
            if w[1].t <= w[0].t {
                return Err(DecodeError::Malformed(format!(
                    "steps not strictly increasing: {} then {}",
                    w[0].t, w[1].t
                )));
            }
        }
        Ok(())
    }

    /// Flip indicators λ: XOR with the previous outcome of the same ancilla
    /// (QND) or the raw outcome (reinit).
    pub fn lambdas(&self) -> Vec<bool> {
        let mut last: HashMap<usize, bool> = HashMap::new();
        self.entries
            .iter()
            .map(|e| match self.mode {
                AncillaMode::Reinit => e.m,
                AncillaMode::Qnd => e.m ^ last.insert(e.ancilla, e.m).unwrap_or(false),
            })
            .collect()
    }
}

/// Detection events `d^t = λ^t ⊕ λ^{t'}`, `t'` the previous step measuring the
/// same generator (initial value 0).  Returns entry indices with `d = 1`.
pub fn detection_events(s: &SyndromeRecord) -> Result<Vec<usize>, DecodeError> {
    s.validate()?;
    let lambda = s.lambdas();
    let mut last: HashMap<usize, bool> = HashMap::new();
    let mut out = Vec::new();
    for (i, e) in s.entries.iter().enumerate() {
        let prev = last.insert(e.generator, lambda[i]).unwrap_or(false);
        if lambda[i] ^ prev {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(gens: &[usize], bits: &[u8], mode: AncillaMode) -> SyndromeRecord {
        SyndromeRecord {
            mode,
            entries: gens
                .iter()
                .zip(bits)
                .enumerate()
                .map(|(i, (&g, &b))| SyndromeEntry {
                    t: i + 1,
                    generator: g,
                    ancilla: 0,
                    m: b == 1,
                })
                .collect(),
        }
    }

    // forward-backward order of the 3-qubit code: ZZI ZIZ ZIZ ZZI, repeated
    const FB: [usize; 8] = [0, 1, 1, 0, 0, 1, 1, 0];

    #[test]
    fn quiet_record_has_no_events() {
        assert!(detection_events(&record(&FB, &[0; 8], AncillaMode::Qnd)).unwrap().is_empty());
    }

    #[test]
    fn ancilla_flip_gives_pair_or_boundary() {
        // ancilla state flipped before step 3 (0-based entry 2): every later m flips
        let bits = [0, 0, 1, 1, 1, 1, 1, 1];
        assert_eq!(detection_events(&record(&FB, &bits, AncillaMode::Qnd)).unwrap(), vec![2, 5]);
        // at the last step only one detection remains
        let bits = [0, 0, 0, 0, 0, 0, 0, 1];
        assert_eq!(detection_events(&record(&FB, &bits, AncillaMode::Qnd)).unwrap(), vec![7]);
    }

    #[test]
    fn worked_example_data_then_ancilla() {
        // q1 flipped before step 2 flips λ at every later step; the ancilla
        // flip before step 3 cancels λ^3 once more
        let lam = [0, 1, 0, 1, 1, 1, 1, 1];
        let mut m = Vec::new();
        let mut cur = 0u8;
        for l in lam {
            cur ^= l;
            m.push(cur);
        }
        let got = detection_events(&record(&FB, &m, AncillaMode::Qnd)).unwrap();
        // d^2 (ZIZ first seen), d^3 = λ^3⊕λ^2, d^4 (ZZI first flip), d^6 = λ^6⊕λ^3
        assert_eq!(got, vec![1, 2, 3, 5]);
    }

    #[test]
    fn reinit_uses_raw_bits() {
        let bits = [0, 1, 1, 1, 1, 1, 1, 1];
        let r = record(&FB, &bits, AncillaMode::Reinit);
        assert_eq!(r.lambdas(), bits.map(|b| b == 1).to_vec());
        assert_eq!(detection_events(&r).unwrap(), vec![1, 3]);
    }

    #[test]
    fn malformed_steps_rejected() {
        let mut r = record(&FB, &[0; 8], AncillaMode::Qnd);
        r.entries[3].t = 2;
        assert!(detection_events(&r).is_err());
    }
}
