//! Decoding graphs for consecutive single-ancilla measurements.
//!
//! Nodes are measurements.  Every single-fault hypothesis is enumerated and
//! mapped to the set of detection events it would trigger: an error on a
//! data qubit just before step `t` flips, for each anticommuting generator,
//! the first measurement of that generator at or after `t`; an ancilla flip
//! during measurement `t` flips `t` and the next measurement of the same
//! generator.  Hypotheses with equal node sets and correction merge, and
//! their step counts add up to the span `k` with probability `k·p`.
//! Signatures of size 1 become boundary edges, size 2 ordinary edges,
//! size 3 and 4 hyperedges.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::DecodeError;
use crate::circuit::Circuit;
use crate::pauli::{Pauli, PauliString, StabilizerCode};

/// Largest per-edge probability, keeping weights positive.
pub const PROBABILITY_CAP: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorSource {
    Data { qubit: usize, pauli: Pauli },
    Ancilla { ancilla: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorHypothesis {
    pub source: ErrorSource,
    /// First step before which the error may have occurred.
    pub first_step: usize,
    /// Number of steps merged into this hypothesis.
    pub span: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphNode {
    pub t: usize,
    pub generator: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    /// `None` for a boundary edge.
    pub b: Option<usize>,
    pub hypothesis: ErrorHypothesis,
    pub p: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperedge {
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    pub hypothesis: ErrorHypothesis,
    pub p: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodingGraph {
    pub n_data: usize,
    pub generators: Vec<PauliString>,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<Edge>,
    pub hyperedges: Vec<Hyperedge>,
}

/// `−log p`, strictly decreasing on (0, 1).
pub fn weight_of(p: f64) -> Result<f64, DecodeError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DecodeError::Probability(p));
    }
    Ok(-p.ln())
}

/// Error letters worth enumerating: one letter suffices for single-type codes.
fn letters_for(generators: &[PauliString]) -> Vec<Pauli> {
    let all_z = generators
        .iter()
        .all(|g| g.letters().iter().all(|&l| matches!(l, Pauli::I | Pauli::Z)));
    let all_x = generators
        .iter()
        .all(|g| g.letters().iter().all(|&l| matches!(l, Pauli::I | Pauli::X)));
    match (all_z, all_x) {
        (true, _) => vec![Pauli::X],
        (_, true) => vec![Pauli::Z],
        _ => vec![Pauli::X, Pauli::Z, Pauli::Y],
    }
}

impl DecodingGraph {
    /// Graph over the given measurement nodes.  `p` is the per-step
    /// single-fault probability.
    pub fn build(nodes: Vec<GraphNode>, generators: Vec<PauliString>, p: f64, with_ancilla: bool) -> Result<Self, DecodeError> {
        weight_of(p)?;
        let n_data = generators.first().map_or(0, |g| g.n());
        let steps: Vec<usize> = nodes.iter().map(|n| n.t).collect();
        let next_same = |i: usize| (i + 1..nodes.len()).find(|&j| nodes[j].generator == nodes[i].generator);
        // (signature, source) -> (first step, count)
        let mut merged: BTreeMap<(Vec<usize>, ErrorSource), (usize, usize)> = BTreeMap::new();
        let mut order: Vec<(Vec<usize>, ErrorSource)> = Vec::new();
        let mut add = |sig: Vec<usize>, src: ErrorSource, t: usize| {
            if sig.is_empty() {
                return;
            }
            let key = (sig, src);
            match merged.get_mut(&key) {
                Some(v) => v.1 += 1,
                None => {
                    merged.insert(key.clone(), (t, 1));
                    order.push(key);
                }
            }
        };
        let letters = letters_for(&generators);
        for q in 0..n_data {
            for &pauli in &letters {
                for (start, &t) in steps.iter().enumerate() {
                    let mut sig: Vec<usize> = Vec::new();
                    for (gi, g) in generators.iter().enumerate() {
                        if !g.letter(q).anticommutes(pauli) {
                            continue;
                        }
                        if let Some(j) = (start..nodes.len()).find(|&j| nodes[j].generator == gi) {
                            sig.push(j);
                        }
                    }
                    sig.sort();
                    add(sig, ErrorSource::Data { qubit: q, pauli }, t);
                }
            }
        }
        if with_ancilla {
            for (i, node) in nodes.iter().enumerate() {
                let mut sig = vec![i];
                sig.extend(next_same(i));
                add(sig, ErrorSource::Ancilla { ancilla: 0 }, node.t);
            }
        }
        let mut edges: Vec<Edge> = Vec::new();
        let mut hyperedges: Vec<Hyperedge> = Vec::new();
        let mut best_pair: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
        for key in order {
            let (first_step, span) = merged[&key];
            let (sig, source) = key;
            let prob = (span as f64 * p).min(PROBABILITY_CAP);
            let hypothesis = ErrorHypothesis {
                source,
                first_step,
                span,
            };
            let weight = weight_of(prob)?;
            if sig.len() <= 2 {
                let pair = (sig[0], sig.get(1).copied());
                let edge = Edge {
                    a: pair.0,
                    b: pair.1,
                    hypothesis,
                    p: prob,
                    weight,
                };
                match best_pair.get(&pair) {
                    Some(&id) if edges[id].p >= prob => {}
                    Some(&id) => edges[id] = edge,
                    None => {
                        best_pair.insert(pair, edges.len());
                        edges.push(edge);
                    }
                }
            } else {
                hyperedges.push(Hyperedge {
                    nodes: sig,
                    hypothesis,
                    p: prob,
                    weight,
                });
            }
        }
        Ok(Self {
            n_data,
            generators,
            nodes,
            edges,
            hyperedges,
        })
    }

    /// Graph for the first `records` measurements of a circuit.
    pub fn for_circuit(circuit: &Circuit, records: usize, p: f64) -> Result<Self, DecodeError> {
        let nodes = circuit.schedule[..records.min(circuit.schedule.len())]
            .iter()
            .map(|e| GraphNode {
                t: e.step,
                generator: e.generator,
            })
            .collect();
        Self::build(nodes, circuit.generators.clone(), p, true)
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.b.is_none())
    }

    /// Text dump: one line per edge and hyperedge.
    pub fn to_debug_text(&self) -> String {
        let mut out = String::new();
        let node = |i: usize| format!("{}@t{}", self.generators[self.nodes[i].generator], self.nodes[i].t);
        let src = |h: &ErrorHypothesis| match h.source {
            ErrorSource::Data { qubit, pauli } => format!("{pauli}{}", qubit + 1),
            ErrorSource::Ancilla { ancilla } => format!("a{}", ancilla + 1),
        };
        for (k, e) in self.edges.iter().enumerate() {
            let b = e.b.map_or("boundary".to_string(), node);
            let _ = writeln!(
                out,
                "e{k} {} -- {b} {} from t{} x{} p={:.6} w={:.6}",
                node(e.a),
                src(&e.hypothesis),
                e.hypothesis.first_step,
                e.hypothesis.span,
                e.p,
                e.weight
            );
        }
        for (k, h) in self.hyperedges.iter().enumerate() {
            let ns: Vec<String> = h.nodes.iter().map(|&i| node(i)).collect();
            let _ = writeln!(out, "h{k} {{{}}} {} p={:.6} w={:.6}", ns.join(", "), src(&h.hypothesis), h.p, h.weight);
        }
        out
    }
}

/// Graph for a repetition code circuit; `n` must be odd and match the circuit.
pub fn build_graph_repetition(circuit: &Circuit, records: usize, p: f64) -> Result<DecodingGraph, DecodeError> {
    let n = circuit.n_data;
    if n % 2 == 0 {
        return Err(DecodeError::Schedule(format!("repetition code needs odd n, got {n}")));
    }
    let z_only = circuit
        .generators
        .iter()
        .all(|g| g.n() == n && g.weight() == 2 && g.letters().iter().all(|&l| matches!(l, Pauli::I | Pauli::Z)));
    if !z_only {
        return Err(DecodeError::Schedule("generators are not ZZ checks".into()));
    }
    DecodingGraph::for_circuit(circuit, records, p)
}

/// Graph for the 5-qubit code's forward-backward circuit.
pub fn build_graph_5q(circuit: &Circuit, records: usize, p: f64) -> Result<DecodingGraph, DecodeError> {
    let code = StabilizerCode::laflamme5();
    let mut want: Vec<String> = code.generators().iter().map(|g| g.to_string()).collect();
    let mut got: Vec<String> = circuit.generators.iter().map(|g| g.to_string()).collect();
    want.sort();
    got.sort();
    if want != got {
        return Err(DecodeError::Schedule(format!("not the 5-qubit generating set: {got:?}")));
    }
    DecodingGraph::for_circuit(circuit, records, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::AncillaMode;
    use crate::synth::{synthesize, Scheme};

    fn fb(code: &StabilizerCode, cycles: usize) -> Circuit {
        synthesize(code, Scheme::ForwardBackward, AncillaMode::Qnd, cycles).unwrap()
    }

    fn gen_index(c: &Circuit, s: &str) -> usize {
        c.generators.iter().position(|g| g.to_string() == s).unwrap()
    }

    #[test]
    fn weights() {
        assert!((weight_of(1.0 / std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!((weight_of(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(weight_of(0.0).is_err() && weight_of(1.0).is_err());
    }

    #[test]
    fn rep3_graph_structure() {
        let c = fb(&StabilizerCode::rep3(), 2);
        let g = build_graph_repetition(&c, c.schedule.len(), 0.01).unwrap();
        assert_eq!(g.nodes.len(), 8);
        assert!(g.hyperedges.is_empty());
        // q2 sits only in ZZI: its error before steps 2..4 is seen first at
        // step 4, a three-step boundary edge
        let e = g
            .edges
            .iter()
            .find(|e| e.a == 3 && e.b.is_none() && e.hypothesis.source == ErrorSource::Data { qubit: 1, pauli: Pauli::X })
            .unwrap();
        assert_eq!(e.hypothesis.span, 3);
        assert!((e.p - 0.03).abs() < 1e-15);
        // ancilla flip at step 3 pairs with the next ZIZ at step 6
        assert!(g.edges.iter().any(|e| e.a == 2 && e.b == Some(5) && matches!(e.hypothesis.source, ErrorSource::Ancilla { .. })));
        // q1 error before step 2 connects the ZIZ at 2 with the ZZI at 4
        assert!(g.edges.iter().any(|e| e.a == 1 && e.b == Some(3) && e.hypothesis.source == ErrorSource::Data { qubit: 0, pauli: Pauli::X }));
        assert!(!g.to_debug_text().is_empty());
    }

    #[test]
    fn rep5_graph_has_boundaries_at_both_ends() {
        let c = fb(&StabilizerCode::rep5(), 1);
        let g = build_graph_repetition(&c, c.schedule.len(), 0.01).unwrap();
        let boundary_qubits: std::collections::BTreeSet<usize> = g
            .boundary_edges()
            .filter_map(|e| match e.hypothesis.source {
                ErrorSource::Data { qubit, .. } => Some(qubit),
                _ => None,
            })
            .collect();
        assert!(boundary_qubits.len() >= 2);
        assert!(build_graph_repetition(&fb(&StabilizerCode::laflamme5(), 1), 8, 0.01).is_err());
    }

    #[test]
    fn five_qubit_patterns() {
        let c = fb(&StabilizerCode::laflamme5(), 2);
        let g = build_graph_5q(&c, c.schedule.len(), 0.01).unwrap();
        let gens = |h: &Hyperedge| -> Vec<String> {
            let mut v: Vec<String> = h.nodes.iter().map(|&i| c.generators[g.nodes[i].generator].to_string()).collect();
            v.sort();
            v
        };
        let y = |q: usize| {
            g.hyperedges
                .iter()
                .find(|h| h.hypothesis.source == ErrorSource::Data { qubit: q, pauli: Pauli::Y } && h.hypothesis.first_step == 1)
                .unwrap()
        };
        assert_eq!(y(0).nodes.len(), 4);
        assert_eq!(gens(y(2)), ["XXZIZ", "ZIZXX", "ZXXZI"]);
        for q in 1..5 {
            assert_eq!(y(q).nodes.len(), 3);
        }
        // X1 anticommutes with the Z entries: the ZXXZI and ZIZXX nodes
        let x1 = g
            .edges
            .iter()
            .find(|e| e.hypothesis.source == ErrorSource::Data { qubit: 0, pauli: Pauli::X } && e.hypothesis.first_step == 1)
            .unwrap();
        let pair = [g.nodes[x1.a].generator, g.nodes[x1.b.unwrap()].generator];
        let mut want = [gen_index(&c, "ZXXZI"), gen_index(&c, "ZIZXX")];
        want.sort();
        let mut pair = pair;
        pair.sort();
        assert_eq!(pair, want);
        assert!(build_graph_5q(&fb(&StabilizerCode::rep3(), 1), 4, 0.01).is_err());
    }
}
