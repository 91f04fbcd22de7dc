//! Pauli algebra, generating-set validation and the neighboring-blocks test.

use ringqec::pauli::{
    classify_neighboring_blocks, correctable_set_check, ps, validate_generating_set, Pauli, PauliString,
    StabilizerCode,
};

fn main() {
    let a = ps("XZZXI");
    let b = ps("IXZZX");
    println!("{a} * {b} = {}", a.multiply(&b).unwrap());
    println!("commute: {}", a.commutes(&b).unwrap());

    for code in [StabilizerCode::rep3(), StabilizerCode::rep5(), StabilizerCode::laflamme5(), StabilizerCode::shor9()] {
        let report = validate_generating_set(&code);
        println!("{} (n={}, k={}): {}", code.name(), code.n(), code.k(), if report.is_valid() { "valid" } else { "invalid" });
        println!("  {}", classify_neighboring_blocks(&code));
    }

    // every single-qubit error on the 5-qubit code is correctable
    let code = StabilizerCode::laflamme5();
    let mut errors = vec![PauliString::identity(5)];
    for q in 0..5 {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            errors.push(PauliString::single(5, q, p));
        }
    }
    match correctable_set_check(&errors, &code).unwrap() {
        None => println!("{} single-qubit errors on {}: correctable", errors.len() - 1, code.name()),
        Some(w) => println!("not correctable: {}", w.product),
    }
}
