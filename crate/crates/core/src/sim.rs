//! Dense statevector simulation and the ideal target unitaries.
//!
//! Qubit `k` is bit `k` of the basis-state index.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::qsp::SU2Matrix;

/// Largest register [`circuit_unitary`] will build.
pub const MAX_QUBITS: usize = 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense unitary, column `j` holding the image of basis state `j`.
pub type UnitaryMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(dim, dim.next_power_of_two()));
        }
        Ok(StateVector {
            n: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn kernel(&mut self, q: usize, m: &SU2Matrix) {
        let stride = 1 << q;
        let [[m00, m01], [m10, m11]] = m.0;
        for base in (0..self.amps.len()).step_by(2 * stride) {
            for i in base..base + stride {
                let (a, b) = (self.amps[i], self.amps[i + stride]);
                self.amps[i] = m00 * a + m01 * b;
                self.amps[i + stride] = m10 * a + m11 * b;
            }
        }
    }

    fn hadamard_all(&mut self) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for q in 0..self.n {
            let stride = 1 << q;
            for base in (0..self.amps.len()).step_by(2 * stride) {
                for i in base..base + stride {
                    let (a, b) = (self.amps[i], self.amps[i + stride]);
                    self.amps[i] = (a + b) * s;
                    self.amps[i + stride] = (a - b) * s;
                }
            }
        }
    }

    /// `exp(-i tau/4 (sum_j X_j)^2)`, diagonal in the X basis.
    fn ms(&mut self, tau: f64) {
        let n = self.n as i64;
        let phases: Vec<Complex64> = (0..=n)
            .map(|m| {
                let s = (n - 2 * m) as f64;
                Complex64::from_polar(1.0, -tau * s * s / 4.0)
            })
            .collect();
        self.hadamard_all();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phases[i.count_ones() as usize];
        }
        self.hadamard_all();
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        if let Some(q) = gate.qubit() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits: self.n,
                });
            }
        }
        match *gate {
            Gate::MS { tau } => self.ms(tau),
            Gate::RX { qubit, angle } => self.kernel(qubit, &SU2Matrix::rx(angle)),
            Gate::RY { qubit, angle } => self.kernel(qubit, &SU2Matrix::ry(angle)),
            Gate::RZ { qubit, angle } => self.kernel(qubit, &SU2Matrix::rz(angle)),
            Gate::H { qubit } => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.kernel(qubit, &SU2Matrix([[s, s], [s, -s]]))
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(circuit.num_qubits(), self.n));
        }
        circuit.gates().iter().try_for_each(|g| self.apply(g))
    }
}

/// Applies `gate` to `state` in place.
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    state.apply(gate)
}

/// Full unitary of `circuit`, one simulated basis state per column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<UnitaryMatrix> {
    let n = circuit.num_qubits();
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    let dim = 1usize << n;
    let columns = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut s = StateVector::basis(n, j);
            s.apply_circuit(circuit)?;
            Ok(s.into_amplitudes())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_iterator(dim, dim, columns.into_iter().flatten()))
}

fn check_size(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::InvalidSize { n, min })
    } else if n > MAX_QUBITS {
        Err(Error::TooManyQubits(n))
    } else {
        Ok(())
    }
}

/// Block-diagonal unitary with target qubit 0: the 2x2 block for control
/// bits `c` (bits 1.. of the index) is `block(c)`.
fn controlled_blocks(n: usize, block: impl Fn(usize) -> SU2Matrix) -> UnitaryMatrix {
    let dim = 1usize << n;
    let mut u = DMatrix::from_element(dim, dim, ZERO);
    for c in 0..dim / 2 {
        let m = block(c);
        for r in 0..2 {
            for k in 0..2 {
                u[(2 * c + r, 2 * c + k)] = m.0[r][k];
            }
        }
    }
    u
}

/// `C^{N-1} RZ(alpha)` with target qubit 0 and controls `1..N`.
pub fn ideal_crot(n: usize, alpha: f64) -> Result<UnitaryMatrix> {
    check_size(n, 1)?;
    let all = (1usize << (n - 1)) - 1;
    Ok(controlled_blocks(n, |c| {
        if c == all {
            SU2Matrix::rz(alpha)
        } else {
            SU2Matrix::IDENTITY
        }
    }))
}

/// Toffoli on `n` qubits: X on qubit 0 iff qubits `1..n` are all `1`.
pub fn ideal_toffoli(n: usize) -> Result<UnitaryMatrix> {
    check_size(n, 2)?;
    let all = (1usize << (n - 1)) - 1;
    Ok(controlled_blocks(n, |c| {
        if c == all {
            SU2Matrix::X
        } else {
            SU2Matrix::IDENTITY
        }
    }))
}

/// `RX(alphas[q])` on qubit 0 whenever `q` of the other qubits are `1`.
pub fn ideal_weighted(n: usize, alphas: &[f64]) -> Result<UnitaryMatrix> {
    check_size(n, 2)?;
    if alphas.len() != n {
        return Err(Error::WrongAngleCount {
            expected: n,
            got: alphas.len(),
        });
    }
    Ok(controlled_blocks(n, |c| {
        SU2Matrix::rx(alphas[c.count_ones() as usize])
    }))
}

/// `1 - |tr(U^dagger V)| / dim`; zero iff the two agree up to global phase.
pub fn phase_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch(u.nrows(), v.nrows()));
    }
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok((1.0 - tr.norm() / u.nrows() as f64).max(0.0))
}

fn insert_bit(x: usize, pos: usize, bit: usize) -> usize {
    let low = x & ((1 << pos) - 1);
    ((x >> pos) << (pos + 1)) | (bit << pos) | low
}

/// Block of `u` with qubit `ancilla` fixed to `bit` on input and output, and
/// the largest column-norm deficit of that block.
pub fn project_ancilla(u: &UnitaryMatrix, ancilla: usize, bit: usize) -> Result<(UnitaryMatrix, f64)> {
    let dim = u.nrows();
    if dim < 2 || !dim.is_power_of_two() || u.ncols() != dim {
        return Err(Error::DimensionMismatch(dim, u.ncols()));
    }
    let n = dim.trailing_zeros() as usize;
    if ancilla >= n {
        return Err(Error::QubitOutOfRange {
            index: ancilla,
            num_qubits: n,
        });
    }
    let half = dim / 2;
    let b = bit & 1;
    let block = DMatrix::from_fn(half, half, |r, c| {
        u[(insert_bit(r, ancilla, b), insert_bit(c, ancilla, b))]
    });
    let leakage = block
        .column_iter()
        .map(|col| 1.0 - col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    Ok((block, leakage))
}

/// Control-block structure of a unitary that should only act on `target`
/// conditioned on the other qubits.
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub num_qubits: usize,
    pub target: usize,
    /// Largest element coupling different control bitstrings.
    pub max_off_block: f64,
    /// Target blocks indexed by control bitstring (target bit removed).
    pub blocks: Vec<SU2Matrix>,
}

impl BlockReport {
    pub fn weight(&self, controls: usize) -> usize {
        controls.count_ones() as usize
    }

    /// Largest departure from `e^{i phi} * I` over blocks whose Hamming
    /// weight differs from `skip_weight`: off-diagonal magnitude or the gap
    /// between the two diagonal entries.
    pub fn max_phase_only_defect(&self, skip_weight: Option<usize>) -> f64 {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(c, _)| Some(self.weight(*c)) != skip_weight)
            .map(|(_, m)| {
                let off = m.0[0][1].norm().max(m.0[1][0].norm());
                off.max((m.0[0][0] - m.0[1][1]).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of any block from `want(weight)`, after removing the
    /// global phase taken from the all-zero control block's overlap.
    pub fn max_block_error(&self, want: impl Fn(usize) -> SU2Matrix) -> f64 {
        let overlap = |m: &SU2Matrix, w: &SU2Matrix| {
            let t = (w.adjoint() * *m).0;
            t[0][0] + t[1][1]
        };
        let ov = overlap(&self.blocks[0], &want(0));
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
        self.blocks
            .iter()
            .enumerate()
            .map(|(c, m)| m.scale(phase.conj()).sub(&want(self.weight(c))).op_norm())
            .fold(0.0, f64::max)
    }
}

pub fn block_report(u: &UnitaryMatrix, target: usize) -> Result<BlockReport> {
    let dim = u.nrows();
    if !dim.is_power_of_two() || dim < 2 || u.ncols() != dim {
        return Err(Error::DimensionMismatch(dim, u.ncols()));
    }
    let n = dim.trailing_zeros() as usize;
    if target >= n {
        return Err(Error::QubitOutOfRange {
            index: target,
            num_qubits: n,
        });
    }
    let mask = !(1usize << target);
    let mut max_off_block = 0.0f64;
    for c in 0..dim {
        for r in 0..dim {
            if (r & mask) != (c & mask) {
                max_off_block = max_off_block.max(u[(r, c)].norm());
            }
        }
    }
    let blocks = (0..dim / 2)
        .map(|ctl| {
            let idx = |b| insert_bit(ctl, target, b);
            let mut m = SU2Matrix::ZERO;
            for r in 0..2 {
                for k in 0..2 {
                    m.0[r][k] = u[(idx(r), idx(k))];
                }
            }
            m
        })
        .collect();
    Ok(BlockReport {
        num_qubits: n,
        target,
        max_off_block,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1);
        s.apply(&Gate::H { qubit: 0 }).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ms_single_qubit_is_phase() {
        let mut s = StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        s.apply(&Gate::MS { tau: 0.9 }).unwrap();
        let ph = Complex64::from_polar(1.0, -0.9 / 4.0);
        assert!((s.amplitudes()[0] - ph * 0.6).norm() < 1e-15);
        assert!((s.amplitudes()[1] - ph * c(0.0, 0.8)).norm() < 1e-15);
    }

    #[test]
    fn ms_two_qubits_closed_form() {
        let tau = 0.7;
        let mut circ = Circuit::new(2).unwrap();
        circ.push(Gate::MS { tau }).unwrap();
        let u = circuit_unitary(&circ).unwrap();
        let g = Complex64::from_polar(1.0, -tau / 2.0);
        let (cs, sn) = ((tau / 2.0).cos(), (tau / 2.0).sin());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j {
                    g * cs
                } else if i == 3 - j {
                    g * c(0.0, -sn)
                } else {
                    ZERO
                };
                assert!((u[(i, j)] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = circuit_unitary(&Circuit::new(3).unwrap()).unwrap();
        assert_eq!(u, DMatrix::identity(8, 8));
        let big = Circuit::new(MAX_QUBITS + 1).unwrap();
        assert_eq!(circuit_unitary(&big), Err(Error::TooManyQubits(15)));
    }

    #[test]
    fn ideal_examples() {
        let u = ideal_crot(2, 2.0 * PI).unwrap();
        for (i, want) in [1.0, 1.0, -1.0, -1.0].iter().enumerate() {
            assert!((u[(i, i)] - c(*want, 0.0)).norm() < 1e-15);
        }
        assert!(phase_distance(&ideal_crot(4, 0.0).unwrap(), &DMatrix::identity(16, 16)).unwrap() < 1e-15);

        let u = ideal_crot(3, PI).unwrap();
        assert!((u[(6, 6)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(7, 7)] - c(0.0, 1.0)).norm() < 1e-15);

        let t = ideal_toffoli(3).unwrap();
        for i in 0..8 {
            let j = match i {
                6 => 7,
                7 => 6,
                _ => i,
            };
            assert_eq!(t[(j, i)], ONE);
        }
        for n in 2..=5 {
            let t = ideal_toffoli(n).unwrap();
            assert_eq!(&t * &t, DMatrix::identity(1 << n, 1 << n));
        }
        let cnot = ideal_toffoli(2).unwrap();
        assert_eq!(cnot[(3, 2)], ONE);
        assert_eq!(cnot[(1, 1)], ONE);
    }

    #[test]
    fn phase_distance_examples() {
        let i2: UnitaryMatrix = DMatrix::identity(2, 2);
        let z = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, -ONE]));
        assert!((phase_distance(&i2, &z).unwrap() - 1.0).abs() < 1e-15);
        let ph = &i2 * Complex64::from_polar(1.0, 0.77);
        assert!(phase_distance(&i2, &ph).unwrap() < 1e-15);
        assert!(phase_distance(&i2, &DMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn ancilla_projection() {
        let (p, leak) = project_ancilla(&DMatrix::identity(8, 8), 2, 0).unwrap();
        assert_eq!(p, DMatrix::identity(4, 4));
        assert_eq!(leak, 0.0);

        let mut x = Circuit::new(2).unwrap();
        x.push(Gate::RX { qubit: 1, angle: PI }).unwrap();
        let (_, leak) = project_ancilla(&circuit_unitary(&x).unwrap(), 1, 0).unwrap();
        assert!((leak - 1.0).abs() < 1e-15);
    }

    #[test]
    fn insert_bit_positions() {
        assert_eq!(insert_bit(0b11, 0, 0), 0b110);
        assert_eq!(insert_bit(0b11, 2, 1), 0b111);
        assert_eq!(insert_bit(0b101, 1, 1), 0b1011);
    }

    #[test]
    fn block_report_on_ideal() {
        let r = block_report(&ideal_crot(3, 1.0).unwrap(), 0).unwrap();
        assert_eq!(r.max_off_block, 0.0);
        assert_eq!(r.max_phase_only_defect(Some(2)), 0.0);
        assert!(r.max_phase_only_defect(None) > 0.5);
        let err = r.max_block_error(|q| if q == 2 { SU2Matrix::rz(1.0) } else { SU2Matrix::IDENTITY });
        assert!(err < 1e-15);
    }

    #[test]
    fn norm_preserved() {
        let mut s = StateVector::basis(4, 5);
        for g in [
            Gate::H { qubit: 1 },
            Gate::MS { tau: 0.3 },
            Gate::RY { qubit: 3, angle: 1.1 },
            Gate::RX { qubit: 0, angle: -2.0 },
            Gate::MS { tau: 2.5 },
            Gate::RZ { qubit: 2, angle: 0.4 },
        ] {
            s.apply(&g).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }
}
