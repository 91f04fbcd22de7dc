//! Noise channels at the reference hardware parameters.

use ringqec::circuit::GateKind;
use ringqec::density::channels::{gamma_a, gamma_p};
use ringqec::density::noise::{noisy_gate, NoiseParams, NoisyGate};

fn main() {
    let p = NoiseParams::reference(0.001);
    println!("{p:#?}");
    println!("gamma_a(Tg)     = {:.6e}", gamma_a(p.tg, p.t1).unwrap());
    println!("gamma_p(Tg)     = {:.6e}", gamma_p(p.tg, p.t1, p.t2).unwrap());
    let tau = p.slice_duration(true);
    println!("gamma_a(tau/2)  = {:.6e}", gamma_a(tau / 2.0, p.t1).unwrap());

    for (kind, slots) in [(GateKind::Id { long: true }, vec![0]), (GateKind::H, vec![0]), (GateKind::Cns, vec![0, 1])] {
        if let NoisyGate::Unitary(s) = noisy_gate(&kind, &slots, p.slice_duration(slots.len() == 2), &p).unwrap() {
            println!("{:<6} trace error {:.1e}", kind.name(), s.trace_error());
        }
    }
}
