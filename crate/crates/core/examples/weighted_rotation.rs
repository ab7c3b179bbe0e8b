//! X rotation whose angle depends on the Hamming weight of the controls.
//!
//! ```text
//! cargo run --example weighted_rotation -- 0.4,1.1,2.0
//! ```

use mscompile::angle::parse_angle_list;
use mscompile::qsp::SU2Matrix;
use mscompile::sim::block_report;
use mscompile::{build_crot_circuit, circuit_unitary, weighted_angles};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alphas = parse_angle_list(std::env::args().nth(1).as_deref().unwrap_or("0.4,1.1,2.0"))?;
    let n = alphas.len();
    let plan = weighted_angles(n, &alphas)?;
    let circuit = build_crot_circuit(&plan)?;
    let report = block_report(&circuit_unitary(&circuit)?, 0)?;
    println!("{n} qubits, {} MS pulses", circuit.ms_count());
    for (q, a) in alphas.iter().enumerate() {
        let [re, bx, cy, dz] = plan.block(q).quadruple();
        println!("  weight {q}: want RX({a:+.4}), block = {re:+.6} + i({bx:+.6} X {cy:+.6} Y {dz:+.6} Z)");
    }
    let err = report.max_block_error(|q| SU2Matrix::rx(alphas[q]));
    println!("  worst block error {err:.2e}");
    println!("  off-block leakage {:.2e}", report.max_off_block);
    Ok(())
}
