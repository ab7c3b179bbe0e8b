//! JSON (read/write) and line-oriented text (write-only) circuit formats.
//!
//! ```json
//! { "version": 1, "num_qubits": 3, "target_qubit": 0, "ancilla_qubits": [],
//!   "gates": [ {"type": "H", "qubit": 1}, {"type": "MS", "tau": 1.0471975511965976e0} ] }
//! ```
//!
//! Angles are written with 17 significant digits so that reading a file back
//! reproduces every `f64` exactly.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::{Map, Value};

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    // finite doubles always format as a valid JSON number
    RawValue::from_string(exact(x)).expect("formatted double is valid JSON")
}

#[derive(Serialize)]
#[serde(tag = "type")]
enum GateDoc {
    MS { tau: Box<RawValue> },
    RX { qubit: usize, angle: Box<RawValue> },
    RY { qubit: usize, angle: Box<RawValue> },
    RZ { qubit: usize, angle: Box<RawValue> },
    H { qubit: usize },
}

#[derive(Serialize)]
struct CircuitDoc {
    version: u64,
    num_qubits: usize,
    target_qubit: usize,
    ancilla_qubits: Vec<usize>,
    gates: Vec<GateDoc>,
}

impl From<&Gate> for GateDoc {
    fn from(g: &Gate) -> Self {
        match *g {
            Gate::MS { tau } => GateDoc::MS { tau: raw(tau) },
            Gate::RX { qubit, angle } => GateDoc::RX { qubit, angle: raw(angle) },
            Gate::RY { qubit, angle } => GateDoc::RY { qubit, angle: raw(angle) },
            Gate::RZ { qubit, angle } => GateDoc::RZ { qubit, angle: raw(angle) },
            Gate::H { qubit } => GateDoc::H { qubit },
        }
    }
}

/// Serializes `circuit` as pretty-printed JSON.
pub fn to_json(circuit: &Circuit) -> String {
    let doc = CircuitDoc {
        version: FORMAT_VERSION,
        num_qubits: circuit.num_qubits(),
        target_qubit: circuit.target_qubit(),
        ancilla_qubits: circuit.ancilla_qubits().collect(),
        gates: circuit.gates().iter().map(GateDoc::from).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("circuit document serializes")
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedJson(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| malformed(format!("{ctx}: missing field {key:?}")))
}

fn uint(obj: &Map<String, Value>, key: &str, ctx: &str) -> Result<u64> {
    field(obj, key, ctx)?
        .as_u64()
        .ok_or_else(|| malformed(format!("{ctx}: field {key:?} must be a non-negative integer")))
}

fn index(obj: &Map<String, Value>, key: &str, ctx: &str) -> Result<usize> {
    let v = uint(obj, key, ctx)?;
    usize::try_from(v).map_err(|_| malformed(format!("{ctx}: field {key:?} too large")))
}

fn real(obj: &Map<String, Value>, key: &str, ctx: &str) -> Result<f64> {
    field(obj, key, ctx)?
        .as_f64()
        .ok_or_else(|| malformed(format!("{ctx}: field {key:?} must be a number")))
}

fn parse_gate(value: &Value, i: usize) -> Result<Gate> {
    let ctx = format!("gate {i}");
    let obj = value
        .as_object()
        .ok_or_else(|| malformed(format!("{ctx}: expected an object")))?;
    let kind = field(obj, "type", &ctx)?
        .as_str()
        .ok_or_else(|| malformed(format!("{ctx}: field \"type\" must be a string")))?;
    Ok(match kind {
        "MS" => Gate::MS {
            tau: real(obj, "tau", &ctx)?,
        },
        "RX" => Gate::RX {
            qubit: index(obj, "qubit", &ctx)?,
            angle: real(obj, "angle", &ctx)?,
        },
        "RY" => Gate::RY {
            qubit: index(obj, "qubit", &ctx)?,
            angle: real(obj, "angle", &ctx)?,
        },
        "RZ" => Gate::RZ {
            qubit: index(obj, "qubit", &ctx)?,
            angle: real(obj, "angle", &ctx)?,
        },
        "H" => Gate::H {
            qubit: index(obj, "qubit", &ctx)?,
        },
        other => return Err(Error::UnknownGate(other.to_string())),
    })
}

/// Parses a circuit document. Syntax and schema problems, unknown gate types,
/// unsupported versions and out-of-range qubit indices are reported as
/// distinct errors.
pub fn from_json(text: &str) -> Result<Circuit> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| malformed("top level must be an object"))?;
    let ctx = "circuit";
    let version = uint(obj, "version", ctx)?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let num_qubits = index(obj, "num_qubits", ctx)?;
    let mut circuit = Circuit::new(num_qubits)?;
    if obj.contains_key("target_qubit") {
        circuit = circuit.with_target(index(obj, "target_qubit", ctx)?)?;
    }
    if let Some(anc) = obj.get("ancilla_qubits") {
        let list = anc
            .as_array()
            .ok_or_else(|| malformed("ancilla_qubits must be an array"))?;
        let ids = list
            .iter()
            .map(|v| {
                v.as_u64()
                    .and_then(|x| usize::try_from(x).ok())
                    .ok_or_else(|| malformed("ancilla_qubits entries must be non-negative integers"))
            })
            .collect::<Result<Vec<_>>>()?;
        circuit = circuit.with_ancillas(ids)?;
    }
    let gates = field(obj, "gates", ctx)?
        .as_array()
        .ok_or_else(|| malformed("gates must be an array"))?;
    for (i, g) in gates.iter().enumerate() {
        circuit.push(parse_gate(g, i)?)?;
    }
    Ok(circuit)
}

/// One gate per line: `ms <tau>`, `rx|ry|rz <qubit> <angle>`, `h <qubit>`,
/// preceded by `#` header lines with the qubit metadata.
pub fn to_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    let ancillas: String = circuit.ancilla_qubits().map(|a| format!(" {a}")).collect();
    let _ = writeln!(out, "# qubits {}", circuit.num_qubits());
    let _ = writeln!(out, "# target {}", circuit.target_qubit());
    let _ = writeln!(out, "# ancillas{ancillas}");
    for g in circuit.gates() {
        let _ = match *g {
            Gate::MS { tau } => writeln!(out, "ms {}", exact(tau)),
            Gate::RX { qubit, angle } => writeln!(out, "rx {qubit} {}", exact(angle)),
            Gate::RY { qubit, angle } => writeln!(out, "ry {qubit} {}", exact(angle)),
            Gate::RZ { qubit, angle } => writeln!(out, "rz {qubit} {}", exact(angle)),
            Gate::H { qubit } => writeln!(out, "h {qubit}"),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        let mut c = Circuit::new(3).unwrap().with_ancillas([2]).unwrap();
        c.extend([
            Gate::H { qubit: 1 },
            Gate::MS { tau: std::f64::consts::PI / 3.0 },
            Gate::RX { qubit: 0, angle: -0.1 },
            Gate::RY { qubit: 2, angle: 1e-300 },
            Gate::RZ { qubit: 0, angle: 0.1 + 0.2 },
        ])
        .unwrap();
        c
    }

    #[test]
    fn round_trip_is_exact() {
        let c = sample();
        assert_eq!(from_json(&to_json(&c)).unwrap(), c);
    }

    #[test]
    fn empty_circuit() {
        let c = from_json(r#"{"version":1,"num_qubits":1,"target_qubit":0,"ancilla_qubits":[],"gates":[]}"#)
            .unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert!(c.gates().is_empty());
    }

    #[test]
    fn distinct_errors() {
        let base = |gates: &str| {
            format!(r#"{{"version":1,"num_qubits":2,"target_qubit":0,"ancilla_qubits":[],"gates":[{gates}]}}"#)
        };
        assert_eq!(
            from_json(&base(r#"{"type":"CZ","qubit":0}"#)),
            Err(Error::UnknownGate("CZ".into()))
        );
        assert_eq!(
            from_json(&base(r#"{"type":"H","qubit":2}"#)),
            Err(Error::QubitOutOfRange {
                index: 2,
                num_qubits: 2
            })
        );
        assert!(matches!(
            from_json(&base(r#"{"type":"RZ","qubit":0}"#)),
            Err(Error::MalformedJson(_))
        ));
        assert!(matches!(from_json("{not json"), Err(Error::MalformedJson(_))));
        assert_eq!(
            from_json(r#"{"version":2,"num_qubits":1,"gates":[]}"#),
            Err(Error::UnsupportedVersion(2))
        );
    }

    #[test]
    fn angles_have_seventeen_digits() {
        let json = to_json(&sample());
        assert!(json.contains("1.0471975511965976e0"), "{json}");
        assert!(json.contains("3.0000000000000004e-1"), "{json}");
    }

    #[test]
    fn text_export() {
        let text = to_text(&sample());
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "h 1");
        assert!(lines[1].starts_with("ms 1.047"));
        assert!(lines[2].starts_with("rx 0 -1.0"));
        assert!(lines[4].starts_with("rz 0 3.0"));
        assert!(text.contains("# ancillas 2"));
    }
}
