//! Finite cosine / sine series on the circle and their Laurent-polynomial form.
//!
//! A [`TrigSeries`] is either an even series `sum c_k cos(k theta)` or an odd
//! series `sum c_k sin(k theta)`. Substituting `z = e^{i theta}` turns either
//! into a [`LaurentPoly`] in `z`, which is the representation the spectral
//! factorization works in.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Symmetry of a series under `theta -> -theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A 2 pi periodic cosine (even) or sine (odd) series.
///
/// Coefficients are stored densely from `k = 0`; trailing zeros are allowed so
/// the nominal degree can exceed the effective one.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    parity: Parity,
    coeffs: Vec<f64>,
}

impl TrigSeries {
    /// Builds a series from raw coefficients. For odd series the `k = 0`
    /// entry is forced to zero; an empty list is the zero series of degree 0.
    pub fn new(parity: Parity, coeffs: Vec<f64>) -> Self {
        let mut coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        if parity == Parity::Odd {
            coeffs[0] = 0.0;
        }
        TrigSeries { parity, coeffs }
    }

    pub fn even(coeffs: Vec<f64>) -> Self {
        Self::new(Parity::Even, coeffs)
    }

    pub fn odd(coeffs: Vec<f64>) -> Self {
        Self::new(Parity::Odd, coeffs)
    }

    pub fn zero(parity: Parity, degree: usize) -> Self {
        Self::new(parity, vec![0.0; degree + 1])
    }

    pub fn constant(value: f64) -> Self {
        Self::even(vec![value])
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nominal degree `M` (`coeffs.len() - 1`).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest `k` whose coefficient exceeds `tol` in magnitude.
    pub fn effective_degree(&self, tol: f64) -> usize {
        self.coeffs.iter().rposition(|c| c.abs() > tol).unwrap_or(0)
    }

    /// Returns a copy zero-padded (or truncated) to the given degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, 0.0);
        Self::new(self.parity, coeffs)
    }

    pub fn negated(&self) -> Self {
        Self::new(self.parity, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let basis: fn(f64) -> f64 = match self.parity {
            Parity::Even => f64::cos,
            Parity::Odd => f64::sin,
        };
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * basis(k as f64 * theta))
            .sum()
    }

    /// Exact termwise derivative with respect to `theta`.
    pub fn eval_derivative(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let k = k as f64;
                match self.parity {
                    Parity::Even => -k * c * (k * theta).sin(),
                    Parity::Odd => k * c * (k * theta).cos(),
                }
            })
            .sum()
    }

    /// `cos k theta -> (z^k + z^-k)/2`, `sin k theta -> (z^k - z^-k)/(2i)`.
    pub fn to_laurent(&self) -> LaurentPoly {
        let m = self.degree();
        let mut p = LaurentPoly::zero(m);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k == 0 {
                if self.parity == Parity::Even {
                    p.coeffs[m] = Complex64::new(c, 0.0);
                }
                continue;
            }
            let (pos, neg) = match self.parity {
                Parity::Even => (Complex64::new(c / 2.0, 0.0), Complex64::new(c / 2.0, 0.0)),
                Parity::Odd => (Complex64::new(0.0, -c / 2.0), Complex64::new(0.0, c / 2.0)),
            };
            p.coeffs[m + k] = pos;
            p.coeffs[m - k] = neg;
        }
        p
    }

    /// Inverse of [`TrigSeries::to_laurent`]. Fails when `p` is not
    /// real on the circle with the requested symmetry.
    pub fn from_laurent(p: &LaurentPoly, parity: Parity) -> Result<Self> {
        let m = p.degree();
        let scale = p.max_abs().max(1.0);
        let tol = 1e-12 * scale;
        let mut coeffs = vec![0.0; m + 1];
        match parity {
            Parity::Even => {
                let c0 = p.coeff(0);
                if c0.im.abs() > tol {
                    return Err(Error::ParityMismatch(format!(
                        "constant term {c0} is not real"
                    )));
                }
                coeffs[0] = c0.re;
            }
            Parity::Odd => {
                if p.coeff(0).norm() > tol {
                    return Err(Error::ParityMismatch(
                        "odd series must have zero constant term".into(),
                    ));
                }
            }
        }
        for k in 1..=m {
            let (pos, neg) = (p.coeff(k as i64), p.coeff(-(k as i64)));
            let (value, bad) = match parity {
                // c_k = c_-k, both real
                Parity::Even => (
                    (pos + neg).re,
                    (pos - neg).norm() > tol || (pos + neg).im.abs() > tol,
                ),
                // c_k = -c_-k, both imaginary; sin coefficient = 2 i c_k
                Parity::Odd => (
                    -(pos - neg).im,
                    (pos + neg).norm() > tol || (pos - neg).re.abs() > tol,
                ),
            };
            if bad {
                return Err(Error::ParityMismatch(format!(
                    "coefficients at z^{k} and z^-{k} ({pos}, {neg}) do not form a {parity:?} real series"
                )));
            }
            coeffs[k] = value;
        }
        Ok(Self::new(parity, coeffs))
    }
}

/// Laurent polynomial `sum_{k=-M..M} c_k z^k` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    /// `coeffs[k + M]` holds the coefficient of `z^k`.
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn zero(degree: usize) -> Self {
        LaurentPoly {
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * degree + 1],
        }
    }

    /// Builds from coefficients ordered `z^-M .. z^M`; the length must be odd.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(coeffs.len() % 2 == 1, "Laurent coefficient list must have odd length");
        LaurentPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Coefficients ordered from `z^-M` to `z^M`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let m = self.degree() as i64;
        if k.abs() > m {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + m) as usize]
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let m = self.degree() as i32;
        // Horner on z^M p(z), then divide out z^M
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(-m)
    }

    pub fn eval_on_circle(&self, theta: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, theta))
    }

    /// True when `c_k = conj(c_-k)` for all `k`, i.e. the polynomial is real
    /// valued on `|z| = 1`.
    pub fn is_real_on_circle(&self, tol: f64) -> bool {
        let m = self.degree() as i64;
        (0..=m).all(|k| (self.coeff(k) - self.coeff(-k).conj()).norm() <= tol)
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let m = self.degree().max(other.degree());
        let mut out = LaurentPoly::zero(m);
        for k in -(m as i64)..=(m as i64) {
            out.coeffs[(k + m as i64) as usize] = self.coeff(k) + other.coeff(k);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let (ma, mb) = (self.degree(), other.degree());
        let mut out = LaurentPoly::zero(ma + mb);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Drops outer coefficient pairs whose magnitude is below `tol`.
    pub fn trimmed(&self, tol: f64) -> LaurentPoly {
        let mut m = self.degree();
        while m > 0 && self.coeff(m as i64).norm() <= tol && self.coeff(-(m as i64)).norm() <= tol
        {
            m -= 1;
        }
        let off = self.degree() - m;
        LaurentPoly {
            coeffs: self.coeffs[off..off + 2 * m + 1].to_vec(),
        }
    }
}
