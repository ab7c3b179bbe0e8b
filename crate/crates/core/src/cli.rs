//! Command-line front end: `crot-angles`, `compile`, `verify`, `series`,
//! `table`.
//!
//! Exit codes: 0 success, 1 verification failed, 2 synthesis failed,
//! 64 usage error (bad flags, unreadable or malformed input).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::angle::{parse_angle, parse_angle_list};
use crate::circuit::{
    build_crot_circuit, build_from_merged, build_toffoli_circuit, from_json, merge_adjacent_rz, to_json,
    to_text, Circuit,
};
use crate::error::Error;
use crate::qsp::{crot_angles, crot_quadruple, weighted_angles, SU2Matrix};
use crate::sim::{
    block_report, circuit_unitary, ideal_crot, ideal_toffoli, ideal_weighted, phase_distance,
    project_ancilla, UnitaryMatrix,
};
use crate::subspace::SubspaceModel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_SYNTHESIS_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "mscompile", version, about = "Compile multi-controlled rotations into global MS pulse sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the phase list for C^{N-1} RZ(alpha).
    CrotAngles {
        #[arg(long)]
        n: usize,
        /// Rotation angle; accepts multiples of pi such as `pi/2` or `-pi`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Print the 2N+1 merged Z-rotation slots instead of phi_0..phi_L.
        #[arg(long)]
        merged: bool,
        /// Significant digits of printed angles.
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Compile a gate and write the circuit.
    Compile {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        target: TargetArgs,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Merge adjacent Z rotations before writing.
        #[arg(long)]
        merge: bool,
    },
    /// Simulate a circuit file and compare it with the ideal unitary.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, value_enum)]
        target: Kind,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Write the A, B, C, D series of C^{N-1} RZ(alpha) as TSV.
    Series {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Grid intervals over [-pi, pi]; both endpoints are written.
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merged angles of C^{N-1} RZ(-pi) for N = 3..6, rounded to 3 decimals.
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Crot,
    Toffoli,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct TargetArgs {
    /// Qubit count (for toffoli: qubits excluding the ancilla).
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Comma-separated rotation angles, one per control weight 0..N-1.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn synthesis(e: Error) -> Self {
        Failure {
            code: EXIT_SYNTHESIS_FAILED,
            message: format!("synthesis failed: {e}"),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::CrotAngles {
            n,
            alpha,
            merged,
            precision,
        } => cmd_crot_angles(n, &alpha, merged, precision, out),
        Command::Compile {
            kind,
            target,
            out: path,
            format,
            merge,
        } => cmd_compile(kind, &target, path, format, merge, out),
        Command::Verify {
            circuit,
            target,
            alpha,
            alphas,
            tolerance,
        } => cmd_verify(&circuit, target, alpha.as_deref(), alphas.as_deref(), tolerance, out),
        Command::Series {
            n,
            alpha,
            points,
            out: path,
        } => cmd_series(n, &alpha, points, path, out),
        Command::Table => cmd_table(out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// `x` with `digits` significant digits in plain decimal notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn angle_arg(text: &str) -> std::result::Result<f64, Failure> {
    parse_angle(text).map_err(|e| Failure::usage(e.to_string()))
}

fn need_alpha(alpha: Option<&str>) -> std::result::Result<f64, Failure> {
    angle_arg(alpha.ok_or_else(|| Failure::usage("--alpha is required for this target"))?)
}

fn need_alphas(alphas: Option<&str>, n: usize) -> std::result::Result<Vec<f64>, Failure> {
    let text = alphas.ok_or_else(|| Failure::usage("--alphas is required for weighted targets"))?;
    let list = parse_angle_list(text).map_err(|e| Failure::usage(e.to_string()))?;
    if list.len() != n {
        return Err(Failure::usage(format!("expected {n} angles in --alphas, got {}", list.len())));
    }
    Ok(list)
}

fn check_n(n: usize, min: usize) -> std::result::Result<(), Failure> {
    if n < min {
        Err(Failure::usage(format!("--n must be at least {min}")))
    } else {
        Ok(())
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::usage(e.to_string())
}

fn emit(path: Option<PathBuf>, text: &str, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn cmd_crot_angles(n: usize, alpha: &str, merged: bool, precision: usize, out: &mut dyn Write) -> CmdResult {
    check_n(n, 2)?;
    let alpha = angle_arg(alpha)?;
    let plan = crot_angles(n, alpha).map_err(Failure::synthesis)?;
    let mut s = String::new();
    let p = precision.max(1);
    let _ = writeln!(s, "n = {n}");
    let _ = writeln!(s, "tau = {}", format_significant(plan.tau, p));
    let _ = writeln!(s, "h = {}", format_significant(plan.h, p));
    let _ = writeln!(s, "pulses = {}", plan.len());
    if merged {
        for (j, a) in plan.merged_angles().iter().enumerate() {
            let _ = writeln!(s, "merged[{j}] = {}", format_significant(*a, p));
        }
    } else {
        for (j, a) in plan.phis.iter().enumerate() {
            let _ = writeln!(s, "phi[{j}] = {}", format_significant(*a, p));
        }
    }
    out.write_all(s.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn compile_circuit(kind: Kind, target: &TargetArgs) -> std::result::Result<Circuit, Failure> {
    match kind {
        Kind::Crot => {
            check_n(target.n, 2)?;
            let alpha = need_alpha(target.alpha.as_deref())?;
            let plan = crot_angles(target.n, alpha).map_err(Failure::synthesis)?;
            build_crot_circuit(&plan).map_err(Failure::synthesis)
        }
        Kind::Toffoli => {
            check_n(target.n, 2)?;
            build_toffoli_circuit(target.n).map_err(Failure::synthesis)
        }
        Kind::Weighted => {
            check_n(target.n, 2)?;
            let alphas = need_alphas(target.alphas.as_deref(), target.n)?;
            let plan = weighted_angles(target.n, &alphas).map_err(Failure::synthesis)?;
            build_crot_circuit(&plan).map_err(Failure::synthesis)
        }
    }
}

fn cmd_compile(
    kind: Kind,
    target: &TargetArgs,
    path: Option<PathBuf>,
    format: Format,
    merge: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let mut circuit = compile_circuit(kind, target)?;
    if merge {
        circuit = merge_adjacent_rz(&circuit);
    }
    let text = match format {
        Format::Json => to_json(&circuit) + "\n",
        Format::Text => to_text(&circuit),
    };
    let to_stdout = path.is_none();
    emit(path, &text, out)?;
    if !to_stdout {
        writeln!(out, "ms_gates = {}", circuit.ms_count()).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

/// Unitary on the non-ancilla qubits and the worst ancilla leakage.
fn strip_ancillas(circuit: &Circuit, u: UnitaryMatrix) -> std::result::Result<(UnitaryMatrix, Option<f64>), Failure> {
    let mut ancillas: Vec<usize> = circuit.ancilla_qubits().collect();
    if ancillas.is_empty() {
        return Ok((u, None));
    }
    ancillas.sort_unstable_by(|a, b| b.cmp(a));
    let mut u = u;
    let mut leak = 0.0f64;
    for a in ancillas {
        let (p, l) = project_ancilla(&u, a, 0).map_err(|e| Failure::usage(e.to_string()))?;
        u = p;
        leak = leak.max(l);
    }
    Ok((u, Some(leak)))
}

fn cmd_verify(
    path: &PathBuf,
    target: Kind,
    alpha: Option<&str>,
    alphas: Option<&str>,
    tolerance: f64,
    out: &mut dyn Write,
) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let circuit = from_json(&text).map_err(|e| Failure::usage(e.to_string()))?;
    let anc: Vec<usize> = circuit.ancilla_qubits().collect();
    if circuit.target_qubit() != 0 || anc.contains(&0) {
        return Err(Failure::usage("verify expects qubit 0 as the target"));
    }
    let full = circuit_unitary(&circuit).map_err(|e| Failure::usage(e.to_string()))?;
    let (u, leakage) = strip_ancillas(&circuit, full)?;
    let n = circuit.num_qubits() - anc.len();
    if n < 2 {
        return Err(Failure::usage("verify needs at least two non-ancilla qubits"));
    }
    let ideal = match target {
        Kind::Crot => ideal_crot(n, need_alpha(alpha)?),
        Kind::Toffoli => ideal_toffoli(n),
        Kind::Weighted => ideal_weighted(n, &need_alphas(alphas, n)?),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    let distance = phase_distance(&u, &ideal).map_err(|e| Failure::usage(e.to_string()))?;

    let mut s = String::new();
    let _ = writeln!(s, "qubits = {}", circuit.num_qubits());
    let _ = writeln!(s, "ms_gates = {}", circuit.ms_count());
    let _ = writeln!(s, "phase_distance = {distance:.3e}");
    if let Ok(report) = block_report(&u, 0) {
        let _ = writeln!(s, "max_off_block = {:.3e}", report.max_off_block);
        if target == Kind::Crot {
            let _ = writeln!(s, "phase_only_defect = {:.3e}", report.max_phase_only_defect(Some(n - 1)));
        }
    }
    if let Some(l) = leakage {
        let _ = writeln!(s, "ancilla_leakage = {l:.3e}");
    }
    let ok = distance <= tolerance;
    let _ = writeln!(s, "verdict = {}", if ok { "PASS" } else { "FAIL" });
    out.write_all(s.as_bytes()).map_err(io_err)?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_series(n: usize, alpha: &str, points: usize, path: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    check_n(n, 2)?;
    if points == 0 {
        return Err(Failure::usage("--points must be positive"));
    }
    let alpha = angle_arg(alpha)?;
    let quad = crot_quadruple(n, alpha).map_err(Failure::synthesis)?;
    let row = |s: &mut String, lead: &str, theta: f64| {
        let vals: Vec<String> = quad.iter().map(|f| format!("{:.15e}", f.eval(theta))).collect();
        let _ = writeln!(s, "{lead}{theta:.15e}\t{}", vals.join("\t"));
    };
    let mut s = String::from("theta\tA\tB\tC\tD\n");
    let pi = std::f64::consts::PI;
    for i in 0..=points {
        let theta = if i == points {
            pi
        } else {
            -pi + 2.0 * pi * i as f64 / points as f64
        };
        row(&mut s, "", theta);
    }
    s.push('\n');
    s.push_str("q\ttheta\tA\tB\tC\tD\n");
    let model = SubspaceModel::with_defaults(n).map_err(Failure::synthesis)?;
    for q in 0..n {
        let theta = model.canonical_theta(q).map_err(Failure::synthesis)?;
        row(&mut s, &format!("{q}\t"), theta);
    }
    emit(path, &s, out)?;
    Ok(EXIT_OK)
}

fn cmd_table(out: &mut dyn Write) -> CmdResult {
    let alpha = -std::f64::consts::PI;
    let mut s = String::new();
    let _ = writeln!(s, "N\tdistance\tdistance_rounded\tmerged angles (3 decimals)");
    for n in 3..=6 {
        let plan = crot_angles(n, alpha).map_err(Failure::synthesis)?;
        let merged = plan.merged_angles();
        let rounded: Vec<f64> = merged.iter().map(|a| (a * 1000.0).round() / 1000.0).collect();
        let ideal = ideal_crot(n, alpha).map_err(Failure::synthesis)?;
        let distance_of = |angles: &[f64]| -> std::result::Result<f64, Failure> {
            let c = build_from_merged(n, plan.tau, plan.h, angles).map_err(Failure::synthesis)?;
            let u = circuit_unitary(&c).map_err(Failure::synthesis)?;
            phase_distance(&u, &ideal).map_err(Failure::synthesis)
        };
        let d = distance_of(&merged)?;
        let dr = distance_of(&rounded)?;
        let cells: Vec<String> = rounded.iter().map(|a| format!("{a:.3}")).collect();
        let _ = writeln!(s, "{n}\t{d:.1e}\t{dr:.1e}\t{}", cells.join("\t"));
    }
    out.write_all(s.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

/// Target block of `u` for control bitstring `controls` (target qubit 0).
pub fn target_block(u: &UnitaryMatrix, controls: usize) -> SU2Matrix {
    let mut m = SU2Matrix::ZERO;
    for r in 0..2 {
        for k in 0..2 {
            m.0[r][k] = u[(2 * controls + r, 2 * controls + k)];
        }
    }
    m
}
