//! One noisy density-matrix trajectory of the 5-qubit code, and the idle
//! single-qubit memory over the same time.

use ringqec::circuit::AncillaMode;
use ringqec::density::noise::NoiseParams;
use ringqec::density::{laflamme5_psi0, run_shots, single_qubit_memory, InitialState};
use ringqec::pauli::StabilizerCode;
use ringqec::synth::{synthesize, Scheme};

fn main() {
    let code = StabilizerCode::laflamme5();
    let circuit = synthesize(&code, Scheme::ForwardBackward, AncillaMode::Qnd, 3).unwrap();
    let params = NoiseParams::reference(0.001);
    let psi = laflamme5_psi0();
    let shots = run_shots(&circuit, &InitialState { psi: psi.clone() }, &params, 4, 7).unwrap();
    for (i, shot) in shots.iter().enumerate() {
        let bits: String = shot.raw.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let fids: Vec<String> = shot.snapshots.iter().map(|r| format!("{:.4}", r.fidelity(&psi).unwrap())).collect();
        println!("shot {i}: outcomes {bits} fidelity per cycle {fids:?}");
    }
    for c in 1..=3 {
        println!("single qubit after {c} cycles: {:.4}", single_qubit_memory(&params, &circuit, c).unwrap());
    }
}
