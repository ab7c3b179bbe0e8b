//! Independent oracles shared by the integration tests. Nothing here calls
//! into the simulator's fast paths.

#![allow(dead_code)]

use mscompile::qsp::SU2Matrix;
use mscompile::sim::UnitaryMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub const PI: f64 = std::f64::consts::PI;

/// Published merged rotation slots for `C^{N-1} RZ(-pi)`, 3-decimal rounded,
/// with `tau = pi/N`, `h = -pi/N`. The last row omits its trailing zero.
pub fn published_rows() -> Vec<(usize, Vec<f64>)> {
    vec![
        (3, vec![-1.855, -2.118, -0.525, -2.118, -1.855, -PI, 0.0]),
        (4, vec![-2.366, -1.564, 1.577, 1.55, 1.577, -1.564, -2.366, -PI, 0.0]),
        (
            5,
            vec![-2.61, -1.098, 1.417, -1.116, -2.041, -1.116, 1.417, -1.098, -2.61, -PI, 0.0],
        ),
        (
            6,
            vec![-2.745, -0.79, 1.146, -1.155, 0.81, 2.312, 0.81, -1.155, 1.146, -0.79, -2.745, -PI],
        ),
    ]
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Single-qubit operator `m` on qubit `q` of `n`, qubit `k` being bit `k` of
/// the basis index (so qubit 0 is the rightmost Kronecker factor).
pub fn embed(m: &DMatrix<Complex64>, q: usize, n: usize) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let mut out = DMatrix::<Complex64>::identity(1, 1);
    for k in (0..n).rev() {
        out = kron(&out, if k == q { m } else { &id });
    }
    out
}

/// `sum_{j,k} X_j X_k`, diagonal terms included.
pub fn ms_generator(n: usize) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    let xs: Vec<_> = (0..n).map(|q| embed(&pauli_x(), q, n)).collect();
    for a in &xs {
        for b in &xs {
            g += a * b;
        }
    }
    g
}

/// `exp(m)` by scaling and squaring with a Taylor series.
pub fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm: f64 = m.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm.log2().ceil().max(0.0) as u32) + 4;
    let scaled = m / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let dim = m.nrows();
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i tau/4 sum_{j,k} X_j X_k)` as a dense matrix.
pub fn dense_ms(n: usize, tau: f64) -> DMatrix<Complex64> {
    expm(&(ms_generator(n) * c(0.0, -tau / 4.0)))
}

/// `1 - |tr(U^dagger V)| / dim`, computed with matrix products.
pub fn trace_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> f64 {
    let tr = (u.adjoint() * v).trace();
    1.0 - tr.norm() / u.nrows() as f64
}

/// Ideal controlled operation built by brute force: `block` acts on qubit 0
/// when every other qubit is `1`.
pub fn brute_force_controlled(n: usize, block: &SU2Matrix) -> UnitaryMatrix {
    let dim = 1usize << n;
    let all = dim - 2;
    DMatrix::from_fn(dim, dim, |r, col| {
        if r & !1 != col & !1 {
            c(0.0, 0.0)
        } else if r & !1 == all {
            block.0[r & 1][col & 1]
        } else if r == col {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn max_entry_gap(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
