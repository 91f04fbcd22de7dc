//! Stabilizer-tableau verification of synthesized circuits.

use ringqec::harness::verification_suite;

fn main() {
    for code in ["rep3", "rep5", "laflamme5", "shor9"] {
        for entry in verification_suite(code).unwrap() {
            match &entry.report {
                Ok(r) => print!("{code:<10} {:<30} {r}", entry.label),
                Err(e) => println!("{code:<10} {:<30} error: {e}", entry.label),
            }
        }
    }
}
