//! Compilation of multi-controlled rotations into sequences of identical
//! global Mølmer–Sørensen pulses, with single-qubit rotations only on the
//! target, plus an exact statevector simulator to check the result.
//!
//! ```
//! use mscompile::{build_crot_circuit, circuit_unitary, crot_angles, ideal_crot, phase_distance};
//!
//! let plan = crot_angles(3, std::f64::consts::PI).unwrap();
//! let circuit = build_crot_circuit(&plan).unwrap();
//! assert_eq!(circuit.ms_count(), 6);
//! let u = circuit_unitary(&circuit).unwrap();
//! let ideal = ideal_crot(3, std::f64::consts::PI).unwrap();
//! assert!(phase_distance(&u, &ideal).unwrap() < 1e-6);
//! ```

pub mod angle;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod fit;
pub mod qsp;
pub mod series;
pub mod sim;
pub mod subspace;

pub use circuit::{
    build_crot_circuit, build_crot_circuit_on, build_from_merged, build_toffoli_circuit, merge_adjacent_rz, Circuit,
    Gate,
};
pub use error::{Error, Result};
pub use qsp::{crot_angles, crot_quadruple, invert_plan, weighted_angles, CompilationPlan};
pub use sim::{circuit_unitary, ideal_crot, ideal_toffoli, ideal_weighted, phase_distance, project_ancilla};
