//! Dense matrices of the circuit gate set.
//!
//! Two-qubit matrices use basis index `2·bit(first target) + bit(second target)`.

use num_complex::Complex64;

use crate::circuit::GateKind;

pub type M2 = [[Complex64; 2]; 2];
pub type M4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Local {
    One(M2),
    Two(M4),
}

pub fn identity2() -> M2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn identity4() -> M4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn hadamard() -> M2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn rx(theta: f64) -> M2 {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

pub fn rz(theta: f64) -> M2 {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn pauli_x() -> M2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_y() -> M2 {
    [[ZERO, -I], [I, ZERO]]
}

pub fn pauli_z() -> M2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub fn pauli_matrix(p: crate::pauli::Pauli) -> M2 {
    use crate::pauli::Pauli;
    match p {
        Pauli::I => identity2(),
        Pauli::X => pauli_x(),
        Pauli::Y => pauli_y(),
        Pauli::Z => pauli_z(),
    }
}

fn perm4(images: [usize; 4]) -> M4 {
    let mut m = [[ZERO; 4]; 4];
    for (col, &row) in images.iter().enumerate() {
        m[row][col] = ONE;
    }
    m
}

pub fn cnot() -> M4 {
    perm4([0, 1, 3, 2])
}

pub fn swap() -> M4 {
    perm4([0, 2, 1, 3])
}

pub fn iswap() -> M4 {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[3][3] = ONE;
    m[1][2] = I;
    m[2][1] = I;
    m
}

pub fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    out
}

/// SWAP·CNOT: CNOT (control = first target) then SWAP.
pub fn cns() -> M4 {
    mul4(&swap(), &cnot())
}

/// Matrix of a unitary gate kind. `None` for measurement and reset.
pub fn gate_matrix(kind: &GateKind) -> Option<Local> {
    Some(match kind {
        GateKind::H => Local::One(hadamard()),
        GateKind::Rx(t) => Local::One(rx(*t)),
        GateKind::Rz(t) => Local::One(rz(*t)),
        GateKind::Id { .. } => Local::One(identity2()),
        GateKind::Cnot => Local::Two(cnot()),
        GateKind::Swap => Local::Two(swap()),
        GateKind::Cns => Local::Two(cns()),
        GateKind::ISwap => Local::Two(iswap()),
        GateKind::MeasureZ { .. } | GateKind::ResetToZero => return None,
    })
}

/// max |a_ij − e^{iφ} b_ij| minimized over the global phase φ, with φ fixed
/// by the largest entry of `b`.
pub fn distance_up_to_phase(a: &M4, b: &M4) -> f64 {
    let (mut bi, mut bj) = (0, 0);
    for i in 0..4 {
        for j in 0..4 {
            if b[i][j].norm() > b[bi][bj].norm() {
                bi = i;
                bj = j;
            }
        }
    }
    let phase = a[bi][bj] / b[bi][bj];
    let phase = phase / phase.norm();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - phase * b[i][j]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(m: &M4, basis: usize) -> Vec<Complex64> {
        (0..4).map(|i| m[i][basis]).collect()
    }

    #[test]
    fn cns_action_on_basis_states() {
        let m = cns();
        // |00> -> |00>, |10> -> |11>, |11> -> |01>
        assert_eq!(apply(&m, 0b00)[0b00], ONE);
        assert_eq!(apply(&m, 0b10)[0b11], ONE);
        assert_eq!(apply(&m, 0b11)[0b01], ONE);
        assert_eq!(apply(&m, 0b01)[0b10], ONE);
    }

    #[test]
    fn iswap_equals_swap_cz_phase_gates() {
        let s = rz(std::f64::consts::FRAC_PI_2);
        let mut cz = identity4();
        cz[3][3] = -ONE;
        let prod = mul4(&swap(), &mul4(&cz, &kron(&s, &s)));
        assert!(distance_up_to_phase(&prod, &iswap()) < 1e-12);
    }
}
