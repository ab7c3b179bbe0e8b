use std::ops::Mul;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2x2 complex matrix, row-major. Used for SU(2) elements but also for the
/// intermediate coefficient matrices of matrix-valued Laurent polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Matrix(pub [[Complex64; 2]; 2]);

impl SU2Matrix {
    pub const IDENTITY: SU2Matrix = SU2Matrix([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: SU2Matrix = SU2Matrix([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const X: SU2Matrix = SU2Matrix([[ZERO, ONE], [ONE, ZERO]]);
    pub const Y: SU2Matrix = SU2Matrix([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
    pub const Z: SU2Matrix = SU2Matrix([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

    /// `exp(-i Z a/2)`
    pub fn rz(angle: f64) -> Self {
        let h = angle / 2.0;
        SU2Matrix([
            [Complex64::from_polar(1.0, -h), ZERO],
            [ZERO, Complex64::from_polar(1.0, h)],
        ])
    }

    /// `exp(-i X a/2)`
    pub fn rx(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        SU2Matrix([
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ])
    }

    /// `exp(-i Y a/2)`
    pub fn ry(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        SU2Matrix([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    /// `A 1 + i B X + i C Y + i D Z`
    pub fn from_quadruple(a: f64, b: f64, c: f64, d: f64) -> Self {
        SU2Matrix([
            [Complex64::new(a, d), Complex64::new(c, b)],
            [Complex64::new(-c, b), Complex64::new(a, -d)],
        ])
    }

    /// Inverse of [`SU2Matrix::from_quadruple`]; for matrices outside SU(2)
    /// the real parts of the projections are returned.
    pub fn quadruple(&self) -> [f64; 4] {
        let m = &self.0;
        let a = (m[0][0] + m[1][1]) / 2.0;
        let d = (m[0][0] - m[1][1]) / (2.0 * I);
        let b = (m[0][1] + m[1][0]) / (2.0 * I);
        let c = (m[0][1] - m[1][0]) / 2.0;
        [a.re, b.re, c.re, d.re]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        SU2Matrix([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        let g = self.adjoint() * *self;
        let (a, d) = (g.0[0][0].re, g.0[1][1].re);
        let b = g.0[0][1].norm();
        let lambda = (a + d) / 2.0 + (((a - d) / 2.0).powi(2) + b * b).sqrt();
        lambda.max(0.0).sqrt()
    }
}

impl Mul for SU2Matrix {
    type Output = SU2Matrix;

    fn mul(self, rhs: SU2Matrix) -> SU2Matrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        SU2Matrix(out)
    }
}

/// One signal step `RZ(-phi) RX(theta) RZ(phi)`.
pub fn signal_step(phi: f64, theta: f64) -> SU2Matrix {
    SU2Matrix::rz(-phi) * SU2Matrix::rx(theta) * SU2Matrix::rz(phi)
}

/// `RZ(phi_0) * prod_{j=1..L} RZ(-phi_j) RX(theta) RZ(phi_j)`, with `j = 1`
/// leftmost.
pub fn evaluate_plan(phis: &[f64], theta: f64) -> SU2Matrix {
    let Some((&phi0, rest)) = phis.split_first() else {
        return SU2Matrix::IDENTITY;
    };
    rest.iter()
        .fold(SU2Matrix::rz(phi0), |acc, &phi| acc * signal_step(phi, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: &SU2Matrix, b: &SU2Matrix, tol: f64) -> bool {
        a.sub(b).op_norm() <= tol
    }

    #[test]
    fn evaluate_examples() {
        let m = evaluate_plan(&[0.0, 0.0, 0.0], PI);
        assert!(close(&m, &SU2Matrix::IDENTITY.scale(-ONE), 1e-15));
        assert!(close(&evaluate_plan(&[0.7], 1.3), &SU2Matrix::rz(0.7), 0.0));
        let phis = [0.3, -1.2, 2.2, 0.5, -0.9];
        assert!(close(&evaluate_plan(&phis, 0.0), &SU2Matrix::rz(0.3), 1e-15));
    }

    #[test]
    fn quadruple_round_trip() {
        let m = SU2Matrix::from_quadruple(0.5, 0.5, -0.5, 0.5);
        assert_eq!(m.quadruple(), [0.5, 0.5, -0.5, 0.5]);
        assert!((m.det() - ONE).norm() < 1e-15);
        let [a, b, c, d] = SU2Matrix::rx(1.0).quadruple();
        assert!((a - 0.5f64.cos()).abs() < 1e-15);
        assert!((b + 0.5f64.sin()).abs() < 1e-15);
        assert_eq!((c, d), (0.0, 0.0));
    }

    #[test]
    fn op_norm_of_pauli() {
        assert!((SU2Matrix::Z.op_norm() - 1.0).abs() < 1e-15);
        assert!((SU2Matrix::X.scale(Complex64::new(3.0, 0.0)).op_norm() - 3.0).abs() < 1e-15);
        let rank_one = SU2Matrix([[ONE, ONE], [ZERO, ZERO]]);
        assert!((rank_one.op_norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    fn phis() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-PI..PI, 1..12)
    }

    proptest! {
        #[test]
        fn plan_is_special_unitary(phis in phis(), theta in -PI..PI) {
            let m = evaluate_plan(&phis, theta);
            prop_assert!((m.det() - ONE).norm() < 1e-12);
            prop_assert!(close(&(m.adjoint() * m), &SU2Matrix::IDENTITY, 1e-12));
        }

        #[test]
        fn plan_parity(phis in phis(), theta in -PI..PI) {
            let [a1, b1, c1, d1] = evaluate_plan(&phis, theta).quadruple();
            let [a2, b2, c2, d2] = evaluate_plan(&phis, -theta).quadruple();
            prop_assert!((a1 - a2).abs() < 1e-12);
            prop_assert!((d1 - d2).abs() < 1e-12);
            prop_assert!((b1 + b2).abs() < 1e-12);
            prop_assert!((c1 + c2).abs() < 1e-12);
        }
    }
}
