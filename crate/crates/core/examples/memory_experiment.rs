//! A reduced-shot run of the 3-qubit preset with CSV and SVG output.
//!
//! `cargo run --release --example memory_experiment -- [shots] [out-dir]`

use std::path::PathBuf;

use ringqec::harness::{emit, preset_fig11, run_experiment};

fn main() {
    let mut args = std::env::args().skip(1);
    let shots = args.next().map_or(200, |s| s.parse().expect("shots"));
    let dir = PathBuf::from(args.next().unwrap_or_else(|| std::env::temp_dir().display().to_string()));
    let mut cfg = preset_fig11();
    cfg.shots = shots;
    cfg.output.csv = Some(dir.join("rep3.csv"));
    cfg.output.svg = Some(dir.join("rep3.svg"));
    let report = run_experiment(&cfg).unwrap();
    for r in &report.rows {
        println!(
            "p2={:<7} cycles={} raw {:.4}±{:.4} corrected {:.4}±{:.4}",
            r.p2, r.cycles, r.fid_raw, r.fid_raw_err, r.fid_corr, r.fid_corr_err
        );
    }
    for b in &report.baseline {
        println!("single qubit, cycles={} ({:.0} ns): {:.4}", b.cycles, b.duration_ns, b.fidelity);
    }
    for path in emit(&report).unwrap() {
        println!("wrote {}", path.display());
    }
}
