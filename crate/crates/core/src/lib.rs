//! Single-ancilla syndrome measurement on ring connectivity for
//! neighboring-blocks stabilizer codes.

pub mod gf2;
pub mod pauli;
pub mod circuit;
pub mod tableau;
pub mod synth;
pub mod unitary;
pub mod density;
pub mod decoder;
pub mod harness;
