//! Sequential single-ancilla schedule for a planar surface code.
//!
//! Sites live on a diagonal lattice: data qubits at `(r, c)` with `r + c`
//! even, couplings between diagonal neighbours.  X faces are centred on
//! `(even, odd)` points and Z faces on `(odd, even)` points.  One extra site
//! outside the patch holds the ancilla at the start.
//!
//! The scheduler measures one face at a time.  For each face it searches
//! (A*) over ancilla moves: CNS or CNOT coupling with an uncoupled face qubit,
//! or SWAP transport through any neighbour.  Faces are taken greedily by
//! cheapest plan.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::circuit::{AncillaMode, Circuit, CircuitBuilder, CircuitError, GateKind, Occupant, Topology};
use crate::pauli::{validate_generating_set, Pauli, PauliString, StabilizerCode};
use crate::tableau::{verify_circuit, VerificationReport};

use super::measurement_primitive;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceKind {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub kind: FaceKind,
    pub center: (i32, i32),
    /// 0-based logical data qubits.
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLayout {
    /// Lattice coordinates of every site; site index = circuit slot.
    pub sites: Vec<(i32, i32)>,
    /// Site of each data qubit at the start.
    pub data_sites: Vec<usize>,
    pub ancilla_site: usize,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<Face>,
}

impl SurfaceLayout {
    /// Planar code with `rows × cols` data qubits on the long rows
    /// (`rows = 3, cols = 5` gives 23 data qubits and 22 faces).
    pub fn planar(rows: usize, cols: usize) -> Self {
        let rmax = 2 * (rows as i32 - 1);
        let cmax = 2 * (cols as i32 - 1);
        let mut sites = Vec::new();
        for r in 0..=rmax {
            for c in 0..=cmax {
                if (r + c) % 2 == 0 {
                    sites.push((r, c));
                }
            }
        }
        let data_sites: Vec<usize> = (0..sites.len()).collect();
        let ancilla_site = sites.len();
        sites.push((-1, 1));
        let index: HashMap<(i32, i32), usize> = sites.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut edges = Vec::new();
        for (i, &(r, c)) in sites.iter().enumerate() {
            for (dr, dc) in [(1, 1), (1, -1)] {
                if let Some(&j) = index.get(&(r + dr, c + dc)) {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        edges.sort();
        let mut faces = Vec::new();
        for (kind, rpar) in [(FaceKind::X, 0), (FaceKind::Z, 1)] {
            for r in 0..=rmax {
                for c in 0..=cmax {
                    if r % 2 != rpar || (r + c) % 2 == 0 {
                        continue;
                    }
                    let qubits: Vec<usize> = [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)]
                        .iter()
                        .filter(|p| p.0 >= 0)
                        .filter_map(|p| index.get(p).copied())
                        .filter(|&s| s != ancilla_site)
                        .collect();
                    faces.push(Face {
                        kind,
                        center: (r, c),
                        qubits,
                    });
                }
            }
        }
        Self {
            sites,
            data_sites,
            ancilla_site,
            edges,
            faces,
        }
    }

    pub fn n_data(&self) -> usize {
        self.data_sites.len()
    }

    pub fn topology(&self) -> Topology {
        Topology::Graph {
            slots: self.sites.len(),
            edges: self.edges.clone(),
        }
    }

    pub fn code(&self) -> Result<StabilizerCode, CircuitError> {
        let n = self.n_data();
        let gens = self
            .faces
            .iter()
            .map(|f| {
                let mut l = vec![Pauli::I; n];
                let p = match f.kind {
                    FaceKind::X => Pauli::X,
                    FaceKind::Z => Pauli::Z,
                };
                for &q in &f.qubits {
                    l[q] = p;
                }
                PauliString::new(l)
            })
            .collect();
        Ok(StabilizerCode::new("surface", gens)?)
    }

    /// Every face's qubits must be pairwise reachable through face-local
    /// diagonal links and the lattice must be connected.
    pub fn check_planar(&self) -> Result<(), CircuitError> {
        let topo = self.topology();
        for f in &self.faces {
            let sites: Vec<usize> = f.qubits.iter().map(|&q| self.data_sites[q]).collect();
            let mut seen = vec![false; sites.len()];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(i) = queue.pop_front() {
                for j in 0..sites.len() {
                    if !seen[j] && topo.adjacent(sites[i], sites[j]) {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(CircuitError::Geometry(format!(
                    "face at {:?} is not made of adjacent sites",
                    f.center
                )));
            }
        }
        let dist = all_pairs(&self.sites.len(), &self.edges);
        if dist[0].iter().any(|&d| d == usize::MAX) {
            return Err(CircuitError::Geometry("layout is disconnected".into()));
        }
        Ok(())
    }
}

fn all_pairs(n: &usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let n = *n;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

/// Costs of the scheduler's moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveCosts {
    pub cns: u32,
    pub cnot: u32,
    pub swap: u32,
}

impl Default for MoveCosts {
    fn default() -> Self {
        Self {
            cns: 2,
            cnot: 3,
            swap: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Cns(usize),
    Cnot(usize),
    Swap(usize),
}

const NO_OCC: u8 = u8::MAX;

struct Plan {
    cost: u32,
    moves: Vec<Move>,
}

/// A* search for the cheapest move sequence coupling every qubit of `face`.
fn plan_face(
    arrangement: &[u8],
    face: &[usize],
    adj: &[Vec<usize>],
    dist: &[Vec<usize>],
    costs: MoveCosts,
    state_cap: usize,
) -> Option<Plan> {
    let full: u8 = ((1u16 << face.len()) - 1) as u8;
    let member = |occ: u8| face.iter().position(|&q| q as u8 == occ);
    let min_step = costs.cns.min(costs.cnot).min(costs.swap);
    let heuristic = |arr: &[u8], mask: u8| -> u32 {
        let anc = arr.iter().position(|&o| o == NO_OCC).expect("ancilla present");
        let mut uncoupled = 0;
        let mut nearest = usize::MAX;
        for (k, &q) in face.iter().enumerate() {
            if mask >> k & 1 == 0 {
                uncoupled += 1;
                let site = arr.iter().position(|&o| o == q as u8).expect("qubit present");
                nearest = nearest.min(dist[anc][site]);
            }
        }
        if uncoupled == 0 {
            0
        } else {
            min_step * ((nearest - 1) as u32 + uncoupled)
        }
    };
    struct Node {
        arr: Vec<u8>,
        mask: u8,
        g: u32,
        parent: usize,
        mv: Option<Move>,
    }
    let mut nodes = vec![Node {
        arr: arrangement.to_vec(),
        mask: 0,
        g: 0,
        parent: usize::MAX,
        mv: None,
    }];
    let mut best: HashMap<(Vec<u8>, u8), u32> = HashMap::new();
    best.insert((arrangement.to_vec(), 0), 0);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((heuristic(arrangement, 0), 0u32, 0usize)));
    while let Some(Reverse((_, g, id))) = heap.pop() {
        if nodes[id].g != g {
            continue;
        }
        let (arr, mask) = (nodes[id].arr.clone(), nodes[id].mask);
        if best.get(&(arr.clone(), mask)).is_some_and(|&b| b < g) {
            continue;
        }
        if mask == full {
            let mut moves = Vec::new();
            let mut cur = id;
            while let Some(mv) = nodes[cur].mv {
                moves.push(mv);
                cur = nodes[cur].parent;
            }
            moves.reverse();
            return Some(Plan { cost: g, moves });
        }
        if nodes.len() > state_cap {
            return None;
        }
        let anc = arr.iter().position(|&o| o == NO_OCC).expect("ancilla present");
        for &s in &adj[anc] {
            let occ = arr[s];
            let mut options = vec![(Move::Swap(s), costs.swap, mask, true)];
            if let Some(k) = member(occ) {
                if mask >> k & 1 == 0 {
                    let m = mask | 1 << k;
                    options.push((Move::Cns(s), costs.cns, m, true));
                    options.push((Move::Cnot(s), costs.cnot, m, false));
                }
            }
            for (mv, c, m, moves_anc) in options {
                let mut next = arr.clone();
                if moves_anc {
                    next.swap(anc, s);
                }
                let ng = g + c;
                let key = (next.clone(), m);
                if best.get(&key).is_some_and(|&b| b <= ng) {
                    continue;
                }
                best.insert(key, ng);
                let h = heuristic(&next, m);
                nodes.push(Node {
                    arr: next,
                    mask: m,
                    g: ng,
                    parent: id,
                    mv: Some(mv),
                });
                heap.push(Reverse((ng + h, ng, nodes.len() - 1)));
            }
        }
    }
    None
}

/// Output of [`synthesize_surface_schedule`].
#[derive(Clone, Debug)]
pub struct SurfaceSchedule {
    pub layout: SurfaceLayout,
    pub code: StabilizerCode,
    pub circuit: Circuit,
    /// `coverage[c][f]`: times face `f` was measured in cycle `c`.
    pub coverage: Vec<Vec<usize>>,
    /// Face index measured at each schedule entry.
    pub face_order: Vec<usize>,
    pub verification: VerificationReport,
}

impl SurfaceSchedule {
    pub fn measurements_per_cycle(&self) -> Vec<usize> {
        self.coverage.iter().map(|c| c.iter().sum()).collect()
    }

    pub fn covers_every_face_once(&self) -> bool {
        self.coverage.iter().all(|c| c.iter().all(|&k| k == 1))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SurfaceOptions {
    pub cycles: usize,
    pub costs: MoveCosts,
    pub state_cap: usize,
    pub mode: AncillaMode,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self {
            cycles: 1,
            costs: MoveCosts::default(),
            state_cap: 400_000,
            mode: AncillaMode::Qnd,
        }
    }
}

pub fn synthesize_surface_schedule(layout: &SurfaceLayout, opts: SurfaceOptions) -> Result<SurfaceSchedule, CircuitError> {
    layout.check_planar()?;
    let code = layout.code()?;
    if !validate_generating_set(&code).is_valid() {
        return Err(CircuitError::Geometry("faces do not form a valid generating set".into()));
    }
    let slots = layout.sites.len();
    let mut adj = vec![Vec::new(); slots];
    for &(a, b) in &layout.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in adj.iter_mut() {
        list.sort();
    }
    let dist = all_pairs(&slots, &layout.edges);
    let mut initial = vec![Occupant::Ancilla(0); slots];
    for (q, &s) in layout.data_sites.iter().enumerate() {
        initial[s] = Occupant::Data(q);
    }
    let mut b = CircuitBuilder::new("surface", layout.topology(), initial, opts.mode);
    let encode = |arr: &[Occupant]| -> Vec<u8> {
        arr.iter()
            .map(|o| match o {
                Occupant::Data(q) => *q as u8,
                Occupant::Ancilla(_) => NO_OCC,
            })
            .collect()
    };
    let mut coverage = Vec::new();
    let mut face_order = Vec::new();
    let mut step = 1;
    for _cycle in 0..opts.cycles {
        let mut remaining: Vec<usize> = (0..layout.faces.len()).collect();
        let mut counts = vec![0; layout.faces.len()];
        while !remaining.is_empty() {
            let arr = encode(b.arrangement());
            let mut choice: Option<(u32, usize, Plan)> = None;
            for (pos, &f) in remaining.iter().enumerate() {
                let Some(plan) = plan_face(&arr, &layout.faces[f].qubits, &adj, &dist, opts.costs, opts.state_cap) else {
                    continue;
                };
                if choice.as_ref().is_none_or(|(c, _, _)| plan.cost < *c) {
                    choice = Some((plan.cost, pos, plan));
                }
            }
            let (_, pos, plan) = choice.ok_or_else(|| {
                CircuitError::Geometry("no face reachable within the search budget".into())
            })?;
            let f = remaining.remove(pos);
            let face = &layout.faces[f];
            let letter = match face.kind {
                FaceKind::X => Pauli::X,
                FaceKind::Z => Pauli::Z,
            };
            for mv in plan.moves {
                let anc = b.slot_of(Occupant::Ancilla(0))?;
                match mv {
                    Move::Swap(s) => {
                        b.gate2(GateKind::Swap, s, anc, step)?;
                    }
                    Move::Cns(s) | Move::Cnot(s) => {
                        let kind = if matches!(mv, Move::Cns(_)) { GateKind::Cns } else { GateKind::Cnot };
                        let t = measurement_primitive(letter, kind);
                        for g in &t.pre {
                            b.gate1(*g, s, step)?;
                        }
                        b.gate2(kind, s, anc, step)?;
                        let landed = if kind.moves_contents() { anc } else { s };
                        for g in &t.post {
                            b.gate1(*g, landed, step)?;
                        }
                    }
                }
            }
            b.measure(0, code.generator(f), step)?;
            counts[f] += 1;
            face_order.push(f);
            step += 1;
        }
        b.end_cycle();
        coverage.push(counts);
    }
    let circuit = b.finish();
    let verification = verify_circuit(&circuit, &code)
        .map_err(|e| CircuitError::Geometry(format!("tableau verification: {e}")))?;
    if !verification.passed() {
        return Err(CircuitError::Geometry(format!("coverage verification failed:\n{verification}")));
    }
    Ok(SurfaceSchedule {
        layout: layout.clone(),
        code,
        circuit,
        coverage,
        face_order,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_layout_counts() {
        let l = SurfaceLayout::planar(3, 5);
        assert_eq!(l.n_data(), 23);
        assert_eq!(l.faces.len(), 22);
        assert_eq!(l.faces.iter().filter(|f| f.kind == FaceKind::X).count(), 12);
        let code = l.code().unwrap();
        assert!(validate_generating_set(&code).is_valid());
        assert_eq!(code.k(), 1);
        assert!(l.check_planar().is_ok());
    }

    #[test]
    fn small_patch_schedule_covers_faces() {
        let l = SurfaceLayout::planar(2, 2);
        let s = synthesize_surface_schedule(&l, SurfaceOptions::default()).unwrap();
        assert!(s.covers_every_face_once());
        assert!(s.verification.passed());
    }

    #[test]
    fn full_patch_single_cycle() {
        let l = SurfaceLayout::planar(3, 5);
        let s = synthesize_surface_schedule(&l, SurfaceOptions::default()).unwrap();
        assert_eq!(s.measurements_per_cycle(), vec![22]);
        assert!(s.covers_every_face_once());
        eprintln!("{:?}", s.circuit.gate_counts());
    }
}
