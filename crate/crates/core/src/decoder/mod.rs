//! Decoding of consecutive single-ancilla syndrome records.

mod blossom;
mod events;
mod graph;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::io::{Read, Write};

use thiserror::Error;

use crate::circuit::Circuit;
use crate::pauli::{Pauli, PauliString};

pub use blossom::{max_weight_matching, min_weight_perfect_matching};
pub use events::{detection_events, SyndromeEntry, SyndromeRecord};
pub use graph::{
    build_graph_5q, build_graph_repetition, weight_of, DecodingGraph, Edge, ErrorHypothesis, ErrorSource, GraphNode,
    Hyperedge, PROBABILITY_CAP,
};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed syndrome record: {0}")]
    Malformed(String),
    #[error("schedule mismatch: {0}")]
    Schedule(String),
    #[error("probability {0} outside (0, 1)")]
    Probability(f64),
    #[error("no perfect matching: detection {0} cannot reach a partner or the boundary")]
    Infeasible(usize),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Weights are compared as integers: `round(w · WEIGHT_SCALE)`.
pub const WEIGHT_SCALE: f64 = 1e6;

/// Default per-step single-fault probability used for edge weights.
pub const DEFAULT_P: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedEvent {
    pub source: ErrorSource,
    pub first_step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    /// Product of all data-qubit events, in logical labels (phase dropped).
    pub pauli: PauliString,
    pub events: Vec<DecodedEvent>,
}

impl Correction {
    pub fn identity(n: usize) -> Self {
        Self {
            pauli: PauliString::identity(n),
            events: Vec::new(),
        }
    }

    /// Nontrivial `(qubit, letter)` entries.
    pub fn letters(&self) -> Vec<(usize, Pauli)> {
        self.pauli
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != Pauli::I)
            .map(|(q, &l)| (q, l))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub detections: Vec<usize>,
    /// Hyperedges consumed by the Y pre-pass.
    pub y_hyperedges: Vec<usize>,
    /// Edges on the matched shortest paths.
    pub edges: Vec<usize>,
    pub matching_weight: i64,
    pub correction: Correction,
}

const BOUNDARY: usize = usize::MAX;

/// A graph with precomputed shortest paths.
#[derive(Clone, Debug)]
pub struct Decoder {
    graph: DecodingGraph,
    /// `dist[i][j]`, index `nodes.len()` is the boundary.
    dist: Vec<Vec<i64>>,
    /// Edge used to enter each vertex on the shortest path tree from `i`.
    pred: Vec<Vec<Option<usize>>>,
}

fn quantize(w: f64) -> i64 {
    (w * WEIGHT_SCALE).round() as i64
}

impl Decoder {
    pub fn new(graph: DecodingGraph) -> Self {
        let n = graph.nodes.len();
        let b = n;
        let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n + 1];
        for (k, e) in graph.edges.iter().enumerate() {
            let other = e.b.unwrap_or(b);
            let w = quantize(e.weight);
            adj[e.a].push((other, k, w));
            adj[other].push((e.a, k, w));
        }
        let mut dist = Vec::with_capacity(n + 1);
        let mut pred = Vec::with_capacity(n + 1);
        for s in 0..=n {
            let mut d = vec![i64::MAX; n + 1];
            let mut p = vec![None; n + 1];
            d[s] = 0;
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((du, u))) = heap.pop() {
                if du > d[u] {
                    continue;
                }
                // the boundary is an endpoint only, never a relay
                if u == b && s != b {
                    continue;
                }
                for &(v, k, w) in &adj[u] {
                    let nd = du + w;
                    if nd < d[v] {
                        d[v] = nd;
                        p[v] = Some(k);
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            dist.push(d);
            pred.push(p);
        }
        Self { graph, dist, pred }
    }

    pub fn for_circuit(circuit: &Circuit, records: usize, p: f64) -> Result<Self, DecodeError> {
        Ok(Self::new(DecodingGraph::for_circuit(circuit, records, p)?))
    }

    pub fn graph(&self) -> &DecodingGraph {
        &self.graph
    }

    fn index(&self, v: usize) -> usize {
        if v == BOUNDARY {
            self.graph.nodes.len()
        } else {
            v
        }
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<i64> {
        let d = self.dist[self.index(a)][self.index(b)];
        (d != i64::MAX).then_some(d)
    }

    /// Edge ids of the shortest path from `a` to `b` (`BOUNDARY` allowed).
    fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let (s, mut v) = (self.index(a), self.index(b));
        let n = self.graph.nodes.len();
        let mut out = Vec::new();
        while v != s {
            let k = self.pred[s][v].expect("reachable");
            out.push(k);
            let e = &self.graph.edges[k];
            let (x, y) = (e.a, e.b.unwrap_or(n));
            v = if x == v { y } else { x };
        }
        out
    }

    /// Y pre-pass: consume 4-node then 3-node hyperedges whose nodes are all
    /// active, earliest first.  Returns consumed ids and the residual set.
    pub fn y_prepass(&self, detections: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut active: std::collections::BTreeSet<usize> = detections.iter().copied().collect();
        let mut consumed = Vec::new();
        for size in [4, 3] {
            let mut cands: Vec<usize> = (0..self.graph.hyperedges.len())
                .filter(|&h| self.graph.hyperedges[h].nodes.len() == size)
                .collect();
            let key = |h: usize| {
                let he = &self.graph.hyperedges[h];
                let mut gens: Vec<usize> = he.nodes.iter().map(|&i| self.graph.nodes[i].generator).collect();
                gens.sort();
                (he.nodes[0], gens, he.nodes.clone())
            };
            cands.sort_by_key(|&h| key(h));
            for h in cands {
                let nodes = &self.graph.hyperedges[h].nodes;
                if nodes.iter().all(|n| active.contains(n)) {
                    for n in nodes {
                        active.remove(n);
                    }
                    consumed.push(h);
                }
            }
        }
        (consumed, active.into_iter().collect())
    }

    /// Exact minimum-weight matching of detections (with boundary twins).
    /// Equal-weight optima are resolved by the smallest sum of pair ids in
    /// lexicographic pair order.
    pub fn mwpm(&self, detections: &[usize]) -> Result<(i64, Vec<(usize, usize)>), DecodeError> {
        let m = detections.len();
        if m == 0 {
            return Ok((0, Vec::new()));
        }
        let mut raw: Vec<(usize, usize, i64)> = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if let Some(d) = self.distance(detections[i], detections[j]) {
                    raw.push((i, j, d));
                }
            }
            if let Some(d) = self.distance(detections[i], BOUNDARY) {
                raw.push((i, m + i, d));
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                raw.push((m + i, m + j, 0));
            }
        }
        raw.sort_by_key(|e| (e.0, e.1));
        let ids = raw.len() as i64;
        let k = ids * m as i64 + 1;
        let tiebroken: Vec<(usize, usize, i64)> =
            raw.iter().enumerate().map(|(id, &(i, j, w))| (i, j, w * k + id as i64)).collect();
        let (_, pairs) = min_weight_perfect_matching(2 * m, &tiebroken).ok_or_else(|| {
            let lonely = (0..m)
                .find(|&i| (0..m).all(|j| j == i || self.distance(detections[i], detections[j]).is_none())
                    && self.distance(detections[i], BOUNDARY).is_none())
                .unwrap_or(0);
            DecodeError::Infeasible(detections[lonely])
        })?;
        let mut out = Vec::new();
        let mut total = 0;
        for (i, j) in pairs {
            if i >= m {
                continue;
            }
            let b = if j >= m { BOUNDARY } else { detections[j] };
            total += self.distance(detections[i], b).expect("matched pair is connected");
            out.push((detections[i], b));
        }
        Ok((total, out))
    }

    pub fn decode(&self, record: &SyndromeRecord) -> Result<Decoded, DecodeError> {
        if record.len() != self.graph.nodes.len() {
            return Err(DecodeError::Schedule(format!(
                "record has {} entries, graph has {} nodes",
                record.len(),
                self.graph.nodes.len()
            )));
        }
        for (e, n) in record.entries.iter().zip(&self.graph.nodes) {
            if e.t != n.t || e.generator != n.generator {
                return Err(DecodeError::Schedule(format!(
                    "entry (t={}, g={}) does not match node (t={}, g={})",
                    e.t, e.generator, n.t, n.generator
                )));
            }
        }
        let detections = detection_events(record)?;
        let (y_hyperedges, residual) = self.y_prepass(&detections);
        let (matching_weight, pairs) = self.mwpm(&residual)?;
        let mut edges = Vec::new();
        for (a, b) in pairs {
            edges.extend(self.path(a, b));
        }
        let correction = self.correction(&y_hyperedges, &edges);
        Ok(Decoded {
            detections,
            y_hyperedges,
            edges,
            matching_weight,
            correction,
        })
    }

    /// Accumulate data-qubit events into one Pauli; ancilla events add nothing.
    pub fn correction(&self, y_hyperedges: &[usize], edges: &[usize]) -> Correction {
        let mut letters = vec![Pauli::I; self.graph.n_data];
        let mut events = Vec::new();
        let hyps = y_hyperedges
            .iter()
            .map(|&h| self.graph.hyperedges[h].hypothesis)
            .chain(edges.iter().map(|&k| self.graph.edges[k].hypothesis));
        for h in hyps {
            if let ErrorSource::Data { qubit, pauli } = h.source {
                letters[qubit] = Pauli::product(letters[qubit], pauli).0;
            }
            events.push(DecodedEvent {
                source: h.source,
                first_step: h.first_step,
            });
        }
        events.sort_by_key(|e| (e.first_step, e.source));
        Correction {
            pauli: PauliString::new(letters),
            events,
        }
    }
}

/// Read `shot,t,generator,bit` rows; entries of each shot must follow the
/// template's schedule order (a prefix is allowed).
pub fn read_syndrome_csv<R: Read>(reader: R, template: &SyndromeRecord) -> Result<Vec<(u64, SyndromeRecord)>, DecodeError> {
    #[derive(serde::Deserialize)]
    struct Row {
        shot: u64,
        t: usize,
        generator: usize,
        bit: u8,
    }
    let mut by_shot: BTreeMap<u64, Vec<Row>> = BTreeMap::new();
    for row in csv::Reader::from_reader(reader).deserialize() {
        let row: Row = row?;
        by_shot.entry(row.shot).or_default().push(row);
    }
    let mut out = Vec::new();
    for (shot, mut rows) in by_shot {
        rows.sort_by_key(|r| r.t);
        if rows.len() > template.len() {
            return Err(DecodeError::Schedule(format!("shot {shot} has more rows than the schedule")));
        }
        let mut rec = template.truncated(rows.len());
        for (e, r) in rec.entries.iter_mut().zip(&rows) {
            if e.t != r.t || e.generator != r.generator || r.bit > 1 {
                return Err(DecodeError::Schedule(format!(
                    "shot {shot}: row (t={}, generator={}, bit={}) does not fit the schedule (t={}, generator={})",
                    r.t, r.generator, r.bit, e.t, e.generator
                )));
            }
            e.m = r.bit == 1;
        }
        out.push((shot, rec));
    }
    Ok(out)
}

pub fn write_syndrome_csv<W: Write>(writer: W, shots: &[(u64, SyndromeRecord)]) -> Result<(), DecodeError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["shot", "t", "generator", "bit"])?;
    for (shot, rec) in shots {
        for e in &rec.entries {
            w.write_record([shot.to_string(), e.t.to_string(), e.generator.to_string(), (e.m as u8).to_string()])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Write `shot,qubit,pauli` rows, one per nontrivial letter (0-based qubits).
pub fn write_correction_csv<W: Write>(writer: W, rows: &[(u64, Correction)]) -> Result<(), DecodeError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["shot", "qubit", "pauli"])?;
    for (shot, c) in rows {
        for (q, l) in c.letters() {
            w.write_record([shot.to_string(), q.to_string(), l.to_string()])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
