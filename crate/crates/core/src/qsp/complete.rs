//! Completion of `(A, B)` to a normalized quadruple `(A, B, C, D)`.
//!
//! `P = 1 - A^2 - B^2` is a real, non-negative trigonometric polynomial. It is
//! factored as `P(z) = g(z) g(1/z)` with `g` a real-coefficient Laurent
//! polynomial; on the circle `|g|^2 = P`, and splitting `g` into its even and
//! odd parts gives `D + i C = g`, hence `C^2 + D^2 = P`.
//!
//! The roots of `z^m P(z)` come in reciprocal pairs `(r, 1/conj(r))`. Off the
//! circle `g` takes the root inside the disk; roots on the circle always have
//! even multiplicity and `g` takes one copy of each double root.

use std::f64::consts::PI;

use log::debug;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{LaurentPoly, TrigSeries};

/// Roots with `|1 - |r|| below this are treated as lying on the circle.
const ON_CIRCLE_TOL: f64 = 1e-6;
/// Allowed deviation of `A^2 + B^2 + C^2 + D^2` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Requested sign of `D(pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Number of grid points used to verify a quadruple of degree `m`.
pub fn check_points(m: usize) -> usize {
    (4 * m).max(1024)
}

/// Largest `|A^2 + B^2 + C^2 + D^2 - 1|` over `points` samples of the circle.
pub fn normalization_residual(quad: [&TrigSeries; 4], points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let t = -PI + 2.0 * PI * i as f64 / points as f64;
            let s: f64 = quad.iter().map(|f| f.eval(t).powi(2)).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Finds `C` (odd) and `D` (even) with `A^2 + B^2 + C^2 + D^2 = 1`.
///
/// Both outputs have the degree of the inputs. When `|D(pi)|` is non-zero its
/// sign is made to match `d_sign_at_pi` by negating both `C` and `D`.
pub fn complete(a: &TrigSeries, b: &TrigSeries, d_sign_at_pi: Sign) -> Result<(TrigSeries, TrigSeries)> {
    let m = a.degree().max(b.degree());
    let (al, bl) = (a.to_laurent(), b.to_laurent());
    let one = LaurentPoly::from_coeffs(vec![Complex64::new(1.0, 0.0)]);
    let p_full = one
        .add(&al.mul(&al).scale(Complex64::new(-1.0, 0.0)))
        .add(&bl.mul(&bl).scale(Complex64::new(-1.0, 0.0)));

    // precondition: P >= 0 on the circle
    let points = check_points(m);
    let min_p = (0..points)
        .map(|i| p_full.eval_on_circle(-PI + 2.0 * PI * i as f64 / points as f64).re)
        .fold(f64::INFINITY, f64::min);
    if min_p < -1e-9 {
        return Err(Error::CompletionFailed { residual: -min_p });
    }

    // coefficients of P are real and symmetric
    let p = p_full.trimmed(1e-14);
    let pk: Vec<f64> = p.coeffs().iter().map(|c| c.re).collect();
    let deg = p.degree();

    let g = if pk.iter().all(|c| c.abs() <= 1e-14) {
        vec![0.0]
    } else if deg == 0 {
        vec![pk[0].max(0.0).sqrt()]
    } else {
        let g = factor(&pk)?;
        refine(g, &pk)
    };

    // g holds coefficients for z^{-s} .. z^{-s + deg} with s = deg / 2
    let shift = (deg / 2) as i64;
    let coeff = |k: i64| -> f64 {
        let idx = k + shift;
        if idx < 0 || idx as usize >= g.len() {
            0.0
        } else {
            g[idx as usize]
        }
    };
    let mut c = vec![0.0; m + 1];
    let mut d = vec![0.0; m + 1];
    d[0] = coeff(0);
    for k in 1..=m as i64 {
        d[k as usize] = coeff(k) + coeff(-k);
        c[k as usize] = coeff(k) - coeff(-k);
    }
    let mut c = TrigSeries::odd(c);
    let mut d = TrigSeries::even(d);

    let d_pi = d.eval(PI);
    if d_pi.abs() > 1e-9 && Sign::of(d_pi) != d_sign_at_pi {
        c = c.negated();
        d = d.negated();
    }

    let residual = normalization_residual([a, b, &c, &d], points);
    debug!("completion degree {m}: normalization residual {residual:e}");
    if !(residual <= NORMALIZATION_TOL) {
        return Err(Error::CompletionFailed { residual });
    }
    Ok((c, d))
}

/// Spectral factor of the symmetric Laurent polynomial with coefficients
/// `pk` (`z^-m .. z^m`). Returns `deg + 1` real coefficients.
fn factor(pk: &[f64]) -> Result<Vec<f64>> {
    let deg = (pk.len() - 1) / 2;
    // z^deg P(z) as an ordinary polynomial, ascending powers
    let roots = polynomial_roots(pk)?;

    let mut inside = Vec::new();
    let mut on_circle = Vec::new();
    for r in roots {
        let dist = 1.0 - r.norm();
        if dist.abs() < ON_CIRCLE_TOL {
            on_circle.push(r);
        } else if dist > 0.0 {
            inside.push(r);
        }
    }
    let mut chosen = inside;
    chosen.extend(pair_circle_roots(on_circle)?);
    if chosen.len() != deg {
        debug!("spectral factor found {} roots, expected {deg}", chosen.len());
        return Err(Error::CompletionFailed {
            residual: (chosen.len() as f64 - deg as f64).abs(),
        });
    }

    // monic product of (z - r), ascending coefficients
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in &chosen {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        poly = next;
    }
    let poly: Vec<f64> = poly.iter().map(|c| c.re).collect();

    // scale from least squares of |poly|^2 against P on a grid
    let points = (8 * deg).max(64);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..points {
        let z = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / points as f64);
        let pz: f64 = pk
            .iter()
            .enumerate()
            .map(|(k, c)| c * z.powi(k as i32 - deg as i32))
            .sum::<Complex64>()
            .re;
        let gz = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        let g2 = gz.norm_sqr();
        num += pz * g2;
        den += g2 * g2;
    }
    if !(den > 0.0) || num < 0.0 {
        return Err(Error::CompletionFailed { residual: f64::NAN });
    }
    let scale = (num / den).sqrt();
    Ok(poly.into_iter().map(|c| c * scale).collect())
}

/// Roots of `sum_k coeffs[k] z^k` via the eigenvalues of the companion
/// matrix, each polished by a few Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    let eig = match nalgebra::linalg::Schur::try_new(comp, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues(),
        None => rotated_eigenvalues(coeffs)?,
    };

    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    Ok(eig
        .iter()
        .map(|&z0| {
            let mut z = z0;
            let mut best = eval(z).0.norm();
            for _ in 0..8 {
                let (p, dp) = eval(z);
                if dp.norm() == 0.0 {
                    break;
                }
                let cand = z - p / dp;
                let val = eval(cand).0.norm();
                if !(val < best) {
                    break;
                }
                z = cand;
                best = val;
            }
            z
        })
        .collect())
}

/// Companion eigenvalues of `p(w z)` for a fixed unit `w`, mapped back by
/// `w`. Highly symmetric root sets such as `(z^2 - 1)^2` can stall the real
/// QR iteration; the rotation breaks that symmetry.
fn rotated_eigenvalues(coeffs: &[f64]) -> Result<DVector<Complex64>> {
    let n = coeffs.len() - 1;
    let w = Complex64::from_polar(1.0, 0.4123);
    let rc: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * w.powi(k as i32))
        .collect();
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -rc[i] / rc[n];
    }
    let schur = nalgebra::linalg::Schur::try_new(comp, f64::EPSILON, 10_000)
        .ok_or(Error::CompletionFailed { residual: f64::NAN })?;
    Ok(schur.eigenvalues().map(|e| e * w).unwrap_or_else(|| {
        let (_, t) = schur.unpack();
        t.diagonal().map(|e| e * w)
    }))
}

/// Splits the on-circle roots into coincident pairs and returns one unit
/// modulus representative per pair.
fn pair_circle_roots(mut roots: Vec<Complex64>) -> Result<Vec<Complex64>> {
    if roots.is_empty() {
        return Ok(roots);
    }
    if roots.len() % 2 == 1 {
        return Err(Error::CompletionFailed {
            residual: roots.len() as f64,
        });
    }
    roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let n = roots.len();
    let gap = |i: usize, j: usize| (roots[i % n] - roots[j % n]).norm();
    // pairing (0,1),(2,3),... or the cyclic shift (1,2),...,(n-1,0)
    let cost = |offset: usize| -> f64 {
        (0..n / 2)
            .map(|p| gap(2 * p + offset, 2 * p + offset + 1))
            .sum()
    };
    let offset = if cost(1) < cost(0) { 1 } else { 0 };
    Ok((0..n / 2)
        .map(|p| {
            let mid = (roots[(2 * p + offset) % n] + roots[(2 * p + offset + 1) % n]) / 2.0;
            mid / mid.norm()
        })
        .collect())
}

fn autocorrelation(g: &[f64], lag: usize) -> f64 {
    (0..g.len().saturating_sub(lag))
        .map(|j| g[j] * g[j + lag])
        .sum()
}

/// Gauss-Newton polish of `g` against `sum_j g_j g_{j+k} = p_k`.
fn refine(mut g: Vec<f64>, pk: &[f64]) -> Vec<f64> {
    let deg = g.len() - 1;
    let target: Vec<f64> = (0..=deg).map(|k| pk[deg + k]).collect();
    let residual = |g: &[f64]| -> DVector<f64> {
        DVector::from_iterator(
            deg + 1,
            (0..=deg).map(|k| autocorrelation(g, k) - target[k]),
        )
    };
    let mut r = residual(&g);
    for _ in 0..10 {
        let norm = r.amax();
        if norm < 1e-15 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(deg + 1, deg + 1);
        for k in 0..=deg {
            for m in 0..=deg {
                let mut v = 0.0;
                if m + k <= deg {
                    v += g[m + k];
                }
                if m >= k {
                    v += g[m - k];
                }
                jac[(k, m)] = v;
            }
        }
        let Ok(step) = jac.svd(true, true).solve(&r, 1e-12) else {
            break;
        };
        let cand: Vec<f64> = g.iter().zip(step.iter()).map(|(x, s)| x - s).collect();
        let rc = residual(&cand);
        if rc.amax() < norm {
            g = cand;
            r = rc;
        } else {
            break;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_crot;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_completes_to_zero() {
        let a = TrigSeries::constant(1.0).with_degree(3);
        let b = TrigSeries::zero(crate::series::Parity::Odd, 3);
        let (c, d) = complete(&a, &b, Sign::Plus).unwrap();
        assert!(c.coeffs().iter().all(|x| x.abs() < 1e-12));
        assert!(d.coeffs().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn n2_pi_gives_unit_d_at_pi() {
        let a = TrigSeries::even(vec![0.5, 0.5]);
        let b = TrigSeries::odd(vec![0.0, 0.0]);
        for sign in [Sign::Plus, Sign::Minus] {
            let (c, d) = complete(&a, &b, sign).unwrap();
            let dpi = d.eval(PI);
            assert!((dpi.abs() - 1.0).abs() < 1e-10);
            assert_eq!(Sign::of(dpi), sign);
            assert!(normalization_residual([&a, &b, &c, &d], 1024) < 1e-10);
        }
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z - 2)(z + 0.5)(z^2 + 1) = z^4 - 1.5 z^3 + 0 z^2 - 1.5 z - 1
        let roots = polynomial_roots(&[-1.0, -1.5, 0.0, -1.5, 1.0]).unwrap();
        for expect in [
            Complex64::new(2.0, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ] {
            assert!(roots.iter().any(|r| (r - expect).norm() < 1e-12), "{roots:?}");
        }
    }

    #[test]
    fn crot_fits_complete() {
        for n in 2..=12 {
            for &alpha in &[0.3, PI / 2.0, PI, 2.0 * PI, -PI] {
                let a = fit_crot(n, alpha).unwrap();
                let b = TrigSeries::zero(crate::series::Parity::Odd, a.degree());
                let want = Sign::of(-(alpha / 2.0).sin());
                let (c, d) = complete(&a, &b, want)
                    .unwrap_or_else(|e| panic!("n={n} alpha={alpha}: {e}"));
                assert!(c.degree() < n && d.degree() < n);
                let dpi = d.eval(PI);
                assert!((dpi + (alpha / 2.0).sin()).abs() < 1e-9, "n={n} alpha={alpha}");
            }
        }
    }

    /// Random admissible A: squash a random cosine series into [-1, 1] by
    /// scaling with its grid maximum.
    #[test]
    fn random_admissible_inputs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..40 {
            let deg = rng.gen_range(1..=8);
            let raw: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a0 = TrigSeries::even(raw);
            let braw: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b0 = TrigSeries::odd(braw);
            let max = (0..4096)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / 4096.0;
                    (a0.eval(t).powi(2) + b0.eval(t).powi(2)).sqrt()
                })
                .fold(0.0, f64::max);
            let s = 0.98 / max;
            let a = TrigSeries::even(a0.coeffs().iter().map(|c| c * s).collect());
            let b = TrigSeries::odd(b0.coeffs().iter().map(|c| c * s).collect());
            let (c, d) = complete(&a, &b, Sign::Plus).unwrap();
            // direct grid evaluation oracle
            let worst = (0..1024)
                .map(|i| {
                    let t = -PI + 2.0 * PI * i as f64 / 1024.0;
                    (a.eval(t).powi(2) + b.eval(t).powi(2) + c.eval(t).powi(2)
                        + d.eval(t).powi(2)
                        - 1.0)
                        .abs()
                })
                .fold(0.0, f64::max);
            assert!(worst <= 1e-10, "residual {worst}");
        }
    }

    #[test]
    fn rejects_unnormalizable_input() {
        let a = TrigSeries::even(vec![0.0, 1.5]);
        let b = TrigSeries::odd(vec![0.0]);
        assert!(matches!(
            complete(&a, &b, Sign::Plus),
            Err(Error::CompletionFailed { .. })
        ));
    }
}
