//! Sequential single-ancilla schedule for a 23-data-qubit planar patch.

use std::time::Instant;

use ringqec::synth::surface::{synthesize_surface_schedule, SurfaceLayout, SurfaceOptions};

fn main() {
    let layout = SurfaceLayout::planar(3, 5);
    let start = Instant::now();
    let s = synthesize_surface_schedule(&layout, SurfaceOptions::default()).unwrap();
    println!(
        "{} data + 1 ancilla, {} faces, {} measurements per cycle, found in {:.2}s",
        layout.n_data(),
        s.code.len(),
        s.measurements_per_cycle()[0],
        start.elapsed().as_secs_f64()
    );
    println!("face order: {:?}", s.face_order);
    println!("gates: {:?}", s.circuit.gate_counts());
    print!("{}", s.verification);
}
