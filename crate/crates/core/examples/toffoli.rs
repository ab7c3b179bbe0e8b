//! Toffoli gate on n qubits with one ancilla, checked after projecting the
//! ancilla back onto |0>.
//!
//! ```text
//! cargo run --example toffoli -- 4
//! ```

use mscompile::{build_toffoli_circuit, circuit_unitary, ideal_toffoli, phase_distance, project_ancilla};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).as_deref().unwrap_or("3").parse()?;
    let circuit = build_toffoli_circuit(n)?;
    let u = circuit_unitary(&circuit)?;
    let (block, leakage) = project_ancilla(&u, n, 0)?;
    let d = phase_distance(&block, &ideal_toffoli(n)?)?;
    println!("toffoli on {n} qubits + ancilla {n}");
    println!("  MS pulses       {}", circuit.ms_count());
    println!("  Hadamards       {}", circuit.count("H"));
    println!("  distance        {d:.2e}");
    println!("  ancilla leakage {leakage:.2e}");
    Ok(())
}
