//! Synthesize single-ancilla ring circuits for each scheme and print them.

use ringqec::circuit::AncillaMode;
use ringqec::pauli::StabilizerCode;
use ringqec::synth::{synthesize, synthesize_benchmark_two_ancilla, synthesize_nine_qubit, Scheme};

fn main() {
    let rep3 = StabilizerCode::rep3();
    let fb = synthesize(&rep3, Scheme::ForwardBackward, AncillaMode::Qnd, 1).unwrap();
    println!("{}", fb.to_text());

    for (code, scheme) in [
        (StabilizerCode::rep5(), Scheme::ForwardBackward),
        (StabilizerCode::rep5(), Scheme::ReducedConnectivity),
        (StabilizerCode::laflamme5(), Scheme::ForwardBackward),
        (StabilizerCode::laflamme5(), Scheme::HalfCycle),
    ] {
        match synthesize(&code, scheme, AncillaMode::Qnd, 1) {
            Ok(c) => println!("{:<32} {:>3} slices, gates {:?}", c.name, c.slices.len(), c.gate_counts()),
            Err(e) => println!("{} {scheme:?}: {e}", code.name()),
        }
    }

    let nine = synthesize_nine_qubit().unwrap();
    println!("{:<32} {:>3} slices, gates {:?}", nine.name, nine.slices.len(), nine.gate_counts());
    let bench = synthesize_benchmark_two_ancilla(AncillaMode::Qnd).unwrap();
    println!("{:<32} {:>3} slices, gates {:?}", bench.name, bench.slices.len(), bench.gate_counts());
}
