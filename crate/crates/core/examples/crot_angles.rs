//! Compile a multi-controlled Z rotation and check it by simulation.
//!
//! ```text
//! cargo run --example crot_angles -- 5 pi/2
//! ```

use mscompile::angle::parse_angle;
use mscompile::{build_crot_circuit, circuit_unitary, crot_angles, ideal_crot, phase_distance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().as_deref().unwrap_or("4").parse()?;
    let alpha = parse_angle(args.next().as_deref().unwrap_or("pi"))?;

    let plan = crot_angles(n, alpha)?;
    println!("C^{}RZ({alpha:.6}) with tau = {:.6}, h = {:.6}", n - 1, plan.tau, plan.h);
    for (j, phi) in plan.phis.iter().enumerate() {
        println!("  phi[{j:2}] = {phi:+.12}");
    }
    println!("merged slots:");
    for (j, a) in plan.merged_angles().iter().enumerate() {
        println!("  [{j:2}] {a:+.6}");
    }

    let circuit = build_crot_circuit(&plan)?;
    let d = phase_distance(&circuit_unitary(&circuit)?, &ideal_crot(n, alpha)?)?;
    println!("{} MS pulses, {} gates, distance {d:.2e}", circuit.ms_count(), circuit.gates().len());
    Ok(())
}
