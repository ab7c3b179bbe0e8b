//! Merged Z-rotation slots for C^{N-1}RZ(-pi), N = 3..6, and how much
//! accuracy survives rounding them to three decimals.
//!
//! ```text
//! cargo run --example table_replay
//! ```

use std::f64::consts::PI;

use mscompile::{build_from_merged, circuit_unitary, crot_angles, ideal_crot, phase_distance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 3..=6 {
        let plan = crot_angles(n, -PI)?;
        let merged = plan.merged_angles();
        let rounded: Vec<f64> = merged.iter().map(|a| (a * 1e3).round() / 1e3).collect();
        let ideal = ideal_crot(n, -PI)?;
        let dist = |slots: &[f64]| -> mscompile::Result<f64> {
            let c = build_from_merged(n, plan.tau, plan.h, slots)?;
            phase_distance(&circuit_unitary(&c)?, &ideal)
        };
        let cells: Vec<String> = rounded.iter().map(|a| format!("{a:.3}")).collect();
        println!("N = {n}: exact {:.1e}, rounded {:.1e}", dist(&merged)?, dist(&rounded)?);
        println!("  {}", cells.join(" "));
    }
    Ok(())
}
