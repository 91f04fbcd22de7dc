//! The CNS gate and its compilation from iSWAP plus single-qubit rotations.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Gate, GateKind};
use crate::unitary::{self, Local, M4};

/// SWAP·CNOT with the control on the first slot.
pub fn cns_unitary() -> M4 {
    unitary::cns()
}

/// Gate sequence equal to `CNS(a, b)` up to global phase:
/// `(H⊗I) · iSWAP · (S† ⊗ S†H)` with H and S† written as ±π/2 rotations.
pub fn cns_decomposition(a: usize, b: usize) -> Vec<Gate> {
    vec![
        Gate::one(GateKind::Rz(-FRAC_PI_2), a, 0),
        Gate::one(GateKind::Rz(FRAC_PI_2), b, 0),
        Gate::one(GateKind::Rx(FRAC_PI_2), b, 0),
        Gate::two(GateKind::ISwap, a, b, 0),
        Gate::one(GateKind::Rz(FRAC_PI_2), a, 0),
        Gate::one(GateKind::Rx(FRAC_PI_2), a, 0),
        Gate::one(GateKind::Rz(FRAC_PI_2), a, 0),
    ]
}

/// Product of [`cns_decomposition`] on slots (0, 1).
pub fn cns_decomposition_unitary() -> M4 {
    let mut acc = unitary::identity4();
    for g in cns_decomposition(0, 1) {
        let m = match unitary::gate_matrix(&g.kind).expect("unitary gate") {
            Local::Two(m) => m,
            Local::One(u) => {
                if g.targets.first() == 0 {
                    unitary::kron(&u, &unitary::identity2())
                } else {
                    unitary::kron(&unitary::identity2(), &u)
                }
            }
        };
        acc = unitary::mul4(&m, &acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::distance_up_to_phase;

    #[test]
    fn cns_is_swap_after_cnot() {
        assert_eq!(cns_unitary(), unitary::mul4(&unitary::swap(), &unitary::cnot()));
    }

    #[test]
    fn decomposition_matches_cns() {
        let d = distance_up_to_phase(&cns_decomposition_unitary(), &cns_unitary());
        assert!(d < 1e-12, "{d}");
    }
}
