//! Decoding graph and matching for a Y error on the 5-qubit code.

use rand::SeedableRng;

use ringqec::circuit::AncillaMode;
use ringqec::decoder::{write_correction_csv, Decoder, SyndromeRecord, DEFAULT_P};
use ringqec::pauli::{Pauli, StabilizerCode};
use ringqec::synth::{synthesize, Scheme};
use ringqec::tableau::{logical_operators, prepare_circuit_state, run_circuit, Injection};

fn main() {
    let code = StabilizerCode::laflamme5();
    let c = synthesize(&code, Scheme::ForwardBackward, AncillaMode::Qnd, 2).unwrap();
    let dec = Decoder::for_circuit(&c, c.schedule.len(), DEFAULT_P).unwrap();
    println!(
        "{} nodes, {} edges, {} hyperedges",
        dec.graph().nodes.len(),
        dec.graph().edges.len(),
        dec.graph().hyperedges.len()
    );

    // Y on the third qubit before the first measurement
    let (slice, slot) = c.injection_point(2, 1).unwrap();
    let mut t = prepare_circuit_state(&c, &code, &logical_operators(&code)[..1]).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let out = run_circuit(&c, &mut t, &[Injection { slice, slot, pauli: Pauli::Y }], &mut rng).unwrap();
    let raw: Vec<bool> = out.iter().map(|o| o.0).collect();
    let record = SyndromeRecord::from_outcomes(&c, &raw);

    let d = dec.decode(&record).unwrap();
    println!("detections {:?}", d.detections);
    println!("Y pre-pass hyperedges {:?}, matched edges {:?}", d.y_hyperedges, d.edges);
    println!("events {:?}", d.correction.events);
    write_correction_csv(std::io::stdout(), &[(0, d.correction)]).unwrap();
}
