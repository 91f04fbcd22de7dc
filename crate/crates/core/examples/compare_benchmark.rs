//! Single-ancilla ring scheme against the two-ancilla benchmark for the
//! 3-qubit code under the same noise.

use ringqec::harness::{compare_schemes, CodeChoice, CycleRange, ExperimentConfig};

fn main() {
    let ring = ExperimentConfig {
        cycles: CycleRange { from: 1, to: 6 },
        shots: 300,
        p2: vec![0.001, 0.01],
        ..ExperimentConfig::default()
    };
    let bench = ExperimentConfig {
        code: CodeChoice::Benchmark2Anc,
        ..ring.clone()
    };
    println!("{:>6} {:>6} {:>17} {:>17}  within 3σ", "p2", "cycles", "ring", "benchmark");
    for r in compare_schemes(&ring, &bench).unwrap() {
        println!(
            "{:>6} {:>6} {:.4} ± {:.4}   {:.4} ± {:.4}   {}",
            r.p2, r.cycles, r.a_corr, r.a_err, r.b_corr, r.b_err, r.consistent
        );
    }
}
