//! Gate-level circuits over global MS pulses and single-qubit rotations.

mod format;

use std::collections::BTreeSet;

pub use format::{from_json, to_json, to_text, FORMAT_VERSION};

use crate::angle::wrap_2pi;
use crate::error::{Error, Result};
use crate::qsp::{crot_angles, require_phase_reset, CompilationPlan};
use crate::subspace::phase_reset_ok;

/// A native gate. `MS` always acts on every qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    MS { tau: f64 },
    RX { qubit: usize, angle: f64 },
    RY { qubit: usize, angle: f64 },
    RZ { qubit: usize, angle: f64 },
    H { qubit: usize },
}

impl Gate {
    /// Qubit of a single-qubit gate, `None` for the global MS pulse.
    pub fn qubit(&self) -> Option<usize> {
        match *self {
            Gate::MS { .. } => None,
            Gate::RX { qubit, .. }
            | Gate::RY { qubit, .. }
            | Gate::RZ { qubit, .. }
            | Gate::H { qubit } => Some(qubit),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubit().is_none_or(|g| g == q)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::MS { .. } => "MS",
            Gate::RX { .. } => "RX",
            Gate::RY { .. } => "RY",
            Gate::RZ { .. } => "RZ",
            Gate::H { .. } => "H",
        }
    }
}

/// An ordered gate list with target / ancilla bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    target_qubit: usize,
    ancilla_qubits: BTreeSet<usize>,
}

impl Circuit {
    /// Empty circuit with qubit 0 as target and no ancillas.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidSize { n: 0, min: 1 });
        }
        Ok(Circuit {
            num_qubits,
            gates: Vec::new(),
            target_qubit: 0,
            ancilla_qubits: BTreeSet::new(),
        })
    }

    fn check(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            Err(Error::QubitOutOfRange {
                index,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    pub fn with_target(mut self, target: usize) -> Result<Self> {
        self.check(target)?;
        self.target_qubit = target;
        Ok(self)
    }

    pub fn with_ancillas(mut self, ancillas: impl IntoIterator<Item = usize>) -> Result<Self> {
        for a in ancillas {
            self.check(a)?;
            self.ancilla_qubits.insert(a);
        }
        Ok(self)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(q) = gate.qubit() {
            self.check(q)?;
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn target_qubit(&self) -> usize {
        self.target_qubit
    }

    pub fn ancilla_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.ancilla_qubits.iter().copied()
    }

    pub fn ms_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::MS { .. }))
            .count()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    fn controls(&self, target: usize) -> impl Iterator<Item = usize> {
        (0..self.num_qubits).filter(move |&q| q != target)
    }
}

/// Emits the controlled-rotation circuit for `plan` with qubit 0 as target.
pub fn build_crot_circuit(plan: &CompilationPlan) -> Result<Circuit> {
    build_crot_circuit_on(plan, 0)
}

/// Emits the circuit for `plan` with `target` as the rotated qubit and every
/// other qubit as a control.
///
/// Each signal step `RZ(-phi_j) RX(theta) RZ(phi_j)` becomes, in time order,
/// `RZ(phi_j)`, `MS(tau)`, `RX(h)`, `RZ(-phi_j)`; step `L` runs first. The
/// controls are Hadamard-conjugated so the pulse's X coupling acts as a Z
/// coupling on them.
pub fn build_crot_circuit_on(plan: &CompilationPlan, target: usize) -> Result<Circuit> {
    require_phase_reset(plan)?;
    let mut c = Circuit::new(plan.n)?.with_target(target)?;
    let controls: Vec<usize> = c.controls(target).collect();
    c.extend(controls.iter().map(|&qubit| Gate::H { qubit }))?;
    for &phi in plan.phis[1..].iter().rev() {
        c.extend([
            Gate::RZ { qubit: target, angle: phi },
            Gate::MS { tau: plan.tau },
            Gate::RX { qubit: target, angle: plan.h },
            Gate::RZ { qubit: target, angle: -phi },
        ])?;
    }
    c.extend(controls.iter().map(|&qubit| Gate::H { qubit }))?;
    c.push(Gate::RZ {
        qubit: target,
        angle: plan.phis[0],
    })?;
    Ok(c)
}

/// Merges runs of `RZ` on the same qubit that are not separated by a gate
/// touching that qubit, and drops the ones that are the identity (angle
/// `0 mod 4 pi`).
pub fn merge_adjacent_rz(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Gate> = Vec::with_capacity(circuit.gates.len());
    let mut pending: Vec<Option<usize>> = vec![None; circuit.num_qubits];
    for gate in &circuit.gates {
        if let Gate::RZ { qubit, angle } = *gate {
            if let Some(i) = pending[qubit] {
                if let Gate::RZ { angle: acc, .. } = &mut out[i] {
                    *acc += angle;
                }
                continue;
            }
            pending[qubit] = Some(out.len());
            out.push(*gate);
            continue;
        }
        for (q, p) in pending.iter_mut().enumerate() {
            if gate.touches(q) {
                *p = None;
            }
        }
        out.push(*gate);
    }
    out.retain(|g| !matches!(g, Gate::RZ { angle, .. } if wrap_2pi(*angle).abs() < 1e-12));
    Circuit {
        gates: out,
        ..circuit.clone()
    }
}

/// Circuit from merged Z-rotation slots (`2N + 1` angles, index 0 applied
/// last, index `2N` first) with qubit 0 as target.
pub fn build_from_merged(n: usize, tau: f64, h: f64, merged: &[f64]) -> Result<Circuit> {
    if merged.len() != 2 * n + 1 {
        return Err(Error::WrongAngleCount {
            expected: 2 * n + 1,
            got: merged.len(),
        });
    }
    let pulses = merged.len() - 1;
    if !phase_reset_ok(pulses, tau) {
        return Err(Error::PhaseReset {
            product: tau * pulses as f64,
        });
    }
    let target = 0;
    let mut c = Circuit::new(n)?;
    let controls: Vec<usize> = c.controls(target).collect();
    c.extend(controls.iter().map(|&qubit| Gate::H { qubit }))?;
    c.push(Gate::RZ {
        qubit: target,
        angle: merged[pulses],
    })?;
    for &angle in merged[..pulses].iter().rev() {
        c.extend([
            Gate::MS { tau },
            Gate::RX { qubit: target, angle: h },
            Gate::RZ { qubit: target, angle },
        ])?;
    }
    c.extend(controls.iter().map(|&qubit| Gate::H { qubit }))?;
    Ok(c)
}

/// Toffoli on `n` qubits (target 0, controls `1..n`) using one ancilla
/// (qubit `n`, prepared and returned in `|0>`).
///
/// The ancilla receives `C^n RZ(2 pi)` from all other qubits, which is a
/// multi-controlled Z on them; Hadamards on qubit 0 turn it into the Toffoli.
pub fn build_toffoli_circuit(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidSize { n, min: 2 });
    }
    let plan = crot_angles(n + 1, 2.0 * std::f64::consts::PI)?;
    let inner = build_crot_circuit_on(&plan, n)?;
    let mut c = Circuit::new(n + 1)?.with_ancillas([n])?;
    c.push(Gate::H { qubit: 0 })?;
    c.extend(inner.gates)?;
    c.push(Gate::H { qubit: 0 })?;
    Ok(c)
}
