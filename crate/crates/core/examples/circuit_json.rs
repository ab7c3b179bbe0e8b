//! Export a compiled circuit as JSON and text, read the JSON back and
//! compare unitaries.
//!
//! ```text
//! cargo run --example circuit_json -- /tmp/crot3.json
//! ```

use mscompile::circuit::{from_json, to_json, to_text};
use mscompile::{build_crot_circuit, circuit_unitary, crot_angles, merge_adjacent_rz, phase_distance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("crot3.json"));

    let circuit = merge_adjacent_rz(&build_crot_circuit(&crot_angles(3, std::f64::consts::PI)?)?);
    std::fs::write(&path, to_json(&circuit))?;
    print!("{}", to_text(&circuit));

    let back = from_json(&std::fs::read_to_string(&path)?)?;
    assert_eq!(back, circuit);
    let d = phase_distance(&circuit_unitary(&back)?, &circuit_unitary(&circuit)?)?;
    println!("wrote {} ({} gates), reload distance {d:.1e}", path.display(), back.gates().len());
    Ok(())
}
