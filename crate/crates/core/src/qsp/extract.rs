//! Recovering the phase list from a normalized quadruple.
//!
//! With `w = e^{i theta/2}` one signal step is
//! `RZ(-phi) RX(theta) RZ(phi) = w Q + w^-1 (1 - Q)` where
//! `Q = (1 - cos(phi) X + sin(phi) Y) / 2` is a rank-one projector. The target
//! `F(theta)` is therefore a matrix-valued Laurent polynomial in `w`. Its
//! outermost coefficients are `RZ(phi_0) Q_1 ... Q_L` and
//! `RZ(phi_0) (1 - Q_1) ... (1 - Q_L)`, whose row space fixes `Q_L`.
//! Multiplying by the inverse step lowers the degree by one; repeating down to
//! a constant leaves `RZ(phi_0)`.

use std::f64::consts::PI;

use log::debug;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::su2::{evaluate_plan, SU2Matrix};
use crate::angle::{wrap_2pi, wrap_pi};
use crate::error::{Error, Result};
use crate::series::TrigSeries;

/// Largest operator-norm deviation accepted after extraction.
pub const EXTRACTION_TOL: f64 = 1e-9;
/// Deviation above which the least-squares polish runs.
const POLISH_THRESHOLD: f64 = 1e-12;
const DEGREE_TOL: f64 = 1e-11;

/// A normalized quadruple `F = A + iBX + iCY + iDZ`.
#[derive(Debug, Clone, Copy)]
pub struct Quadruple<'a> {
    pub a: &'a TrigSeries,
    pub b: &'a TrigSeries,
    pub c: &'a TrigSeries,
    pub d: &'a TrigSeries,
}

impl Quadruple<'_> {
    pub fn eval(&self, theta: f64) -> SU2Matrix {
        SU2Matrix::from_quadruple(
            self.a.eval(theta),
            self.b.eval(theta),
            self.c.eval(theta),
            self.d.eval(theta),
        )
    }

    fn effective_degree(&self) -> usize {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|s| s.effective_degree(DEGREE_TOL))
            .max()
            .unwrap_or(0)
    }
}

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| -PI + 2.0 * PI * i as f64 / points as f64)
}

/// Largest operator-norm gap between `evaluate_plan(phis, .)` and the target
/// on `points` samples.
pub fn plan_deviation(phis: &[f64], target: &Quadruple<'_>, points: usize) -> f64 {
    grid(points)
        .map(|t| evaluate_plan(phis, t).sub(&target.eval(t)).op_norm())
        .fold(0.0, f64::max)
}

/// Signal-step projector `Q` for the phase `phi`.
fn projector(phi: f64) -> SU2Matrix {
    let e = Complex64::from_polar(0.5, phi);
    SU2Matrix([
        [Complex64::new(0.5, 0.0), -e],
        [-e.conj(), Complex64::new(0.5, 0.0)],
    ])
}

/// `(Re tr(M^dagger M X), Re tr(M^dagger M Y))`.
fn bloch_weight(m: &SU2Matrix) -> (f64, f64) {
    let g = m.adjoint() * *m;
    let x = (g * SU2Matrix::X).0;
    let y = (g * SU2Matrix::Y).0;
    ((x[0][0] + x[1][1]).re, (y[0][0] + y[1][1]).re)
}

/// Phase whose projector best removes both outer coefficients: minimizes
/// `|top (1 - Q)|^2 + |bottom Q|^2`, which is linear in the Bloch vector
/// `(-cos phi, sin phi)` of `Q`.
fn peel_phase(top: &SU2Matrix, bottom: &SU2Matrix) -> f64 {
    let (tx, ty) = bloch_weight(top);
    let (bx, by) = bloch_weight(bottom);
    let (nx, ny) = (tx - bx, ty - by);
    if nx.hypot(ny) < 1e-26 {
        return 0.0;
    }
    ny.atan2(-nx)
}

/// Extracts `phis` (length `2 * degree + 1`) with
/// `evaluate_plan(phis, theta) = A + iBX + iCY + iDZ`.
///
/// If the quadruple's effective degree is below `degree`, identity pairs
/// `(0, pi)` fill the remaining steps.
pub fn extract_angles(target: &Quadruple<'_>, degree: usize) -> Result<Vec<f64>> {
    let eff = target.effective_degree();
    if eff > degree {
        return Err(Error::ExtractionFailed {
            residual: eff as f64 - degree as f64,
        });
    }

    // coefficient list in powers of w: index i <-> w^{-len + 2 i}
    let mut len = 2 * eff;
    let mut coeffs = vec![SU2Matrix::ZERO; len + 1];
    let half = |x: f64| Complex64::new(x / 2.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for k in 0..=eff {
        let (a, b, c, d) = (
            target.a.coeffs().get(k).copied().unwrap_or(0.0),
            target.b.coeffs().get(k).copied().unwrap_or(0.0),
            target.c.coeffs().get(k).copied().unwrap_or(0.0),
            target.d.coeffs().get(k).copied().unwrap_or(0.0),
        );
        if k == 0 {
            coeffs[eff] = SU2Matrix::IDENTITY
                .scale(Complex64::new(a, 0.0))
                .add(&SU2Matrix::Z.scale(i * d));
            continue;
        }
        // cos -> (z^k + z^-k)/2, i sin -> (z^k - z^-k)/2
        let sym = SU2Matrix::IDENTITY
            .scale(half(a))
            .add(&SU2Matrix::Z.scale(i * half(d)));
        let anti = SU2Matrix::X.scale(half(b)).add(&SU2Matrix::Y.scale(half(c)));
        coeffs[eff + k] = sym.add(&anti);
        coeffs[eff - k] = sym.sub(&anti);
    }

    let mut peeled = Vec::with_capacity(len);
    while len > 0 {
        let phi = peel_phase(&coeffs[len], &coeffs[0]);
        let q = projector(phi);
        let q_bar = SU2Matrix::IDENTITY.sub(&q);
        coeffs = (0..len)
            .map(|j| (coeffs[j + 1] * q).add(&(coeffs[j] * q_bar)))
            .collect();
        len -= 1;
        peeled.push(wrap_pi(phi));
    }
    let phi0 = wrap_2pi(2.0 * coeffs[0].0[1][1].arg());

    // peeled runs phi_L, phi_{L-1}, ..., phi_1
    let mut phis = Vec::with_capacity(2 * degree + 1);
    phis.push(phi0);
    phis.extend(peeled.iter().rev());
    while phis.len() < 2 * degree + 1 {
        phis.extend([0.0, PI]);
    }

    let points = (8 * degree).max(64);
    let mut dev = plan_deviation(&phis, target, points);
    debug!("peeling degree {degree}: deviation {dev:e}");
    if dev > POLISH_THRESHOLD {
        let polished = polish(&phis, target, points);
        let pdev = plan_deviation(&polished, target, points);
        debug!("polished deviation {pdev:e}");
        if pdev < dev {
            phis = polished;
            dev = pdev;
        }
    }
    if dev > EXTRACTION_TOL {
        // small outer coefficients make the recursive peel lose digits
        let mut careful = reprojected_peel(target, eff);
        while careful.len() < 2 * degree + 1 {
            careful.extend([0.0, PI]);
        }
        let careful = polish(&careful, target, points);
        let cdev = plan_deviation(&careful, target, points);
        debug!("re-projected peel deviation {cdev:e}");
        if cdev < dev {
            phis = careful;
            dev = cdev;
        }
    }
    if !(dev <= EXTRACTION_TOL) {
        return Err(Error::ExtractionFailed { residual: dev });
    }
    Ok(phis)
}

fn stacked_residual(phis: &[f64], target: &Quadruple<'_>, thetas: &[f64]) -> DVector<f64> {
    let mut out = DVector::zeros(8 * thetas.len());
    for (n, &t) in thetas.iter().enumerate() {
        let diff = evaluate_plan(phis, t).sub(&target.eval(t));
        for (k, z) in diff.0.iter().flatten().enumerate() {
            out[8 * n + 2 * k] = z.re;
            out[8 * n + 2 * k + 1] = z.im;
        }
    }
    out
}

/// Levenberg-Marquardt on the full phase vector against the target sampled
/// on a grid; central-difference Jacobian.
pub fn polish(phis: &[f64], target: &Quadruple<'_>, points: usize) -> Vec<f64> {
    let thetas: Vec<f64> = grid(points).collect();
    let x = levenberg_marquardt(phis.to_vec(), 60, |p| stacked_residual(p, target, &thetas));
    let mut out: Vec<f64> = x.iter().map(|&p| wrap_pi(p)).collect();
    out[0] = wrap_2pi(x[0]);
    out
}

fn levenberg_marquardt(
    mut x: Vec<f64>,
    iterations: usize,
    residual: impl Fn(&[f64]) -> DVector<f64>,
) -> Vec<f64> {
    let mut r = residual(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let h = 1e-7;
    for _ in 0..iterations {
        if cost < 1e-28 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(r.len(), x.len());
        for j in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let col = (residual(&xp) - residual(&xm)) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        // Marquardt scaling; the floor keeps flat directions from going singular
        let floor = 1e-14 * jtj.diagonal().max();
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for d in 0..x.len() {
                a[(d, d)] += lambda * jtj[(d, d)].max(floor);
            }
            let Some(step) = a.lu().solve(&g) else {
                lambda *= 10.0;
                continue;
            };
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
            let rc = residual(&cand);
            let cc = rc.norm_squared();
            if cc < cost {
                x = cand;
                r = rc;
                cost = cc;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Inverse signal step `w^-1 Q + w (1 - Q)`.
fn inverse_step(phi: f64, w: Complex64) -> SU2Matrix {
    let q = projector(phi);
    q.scale(w.inv()).add(&SU2Matrix::IDENTITY.sub(&q).scale(w))
}

/// Peeling that recomputes each remainder from the target itself instead of
/// from the previous remainder.
///
/// After `k` steps the remainder `F S_L^-1 ... S_{L-k+1}^-1` is sampled on a
/// grid in `w` and transformed; its coefficients beyond degree `L - k` vanish
/// only for the exact phases, so the phases found so far are first adjusted
/// to cancel them. Errors then stay at the conditioning of each step rather
/// than compounding.
fn reprojected_peel(target: &Quadruple<'_>, eff: usize) -> Vec<f64> {
    let steps = 2 * eff;
    let m = 4 * steps + 8;
    let ws: Vec<Complex64> = (0..m)
        .map(|s| Complex64::from_polar(1.0, 2.0 * PI * s as f64 / m as f64))
        .collect();
    let fw: Vec<SU2Matrix> = ws.iter().map(|w| target.eval(2.0 * w.arg())).collect();

    let remainder = |found: &[f64]| -> Vec<SU2Matrix> {
        fw.iter()
            .zip(&ws)
            .map(|(f, &w)| found.iter().fold(*f, |acc, &p| acc * inverse_step(p, w)))
            .collect()
    };
    let coefficient = |g: &[SU2Matrix], power: i64| -> SU2Matrix {
        let sum = g.iter().zip(&ws).fold(SU2Matrix::ZERO, |acc, (v, w)| {
            acc.add(&v.scale(w.powi(-power as i32)))
        });
        sum.scale(Complex64::new(1.0 / m as f64, 0.0))
    };
    let leak = |found: &[f64]| -> DVector<f64> {
        let g = remainder(found);
        let (k, l) = (found.len() as i64, steps as i64);
        let powers: Vec<i64> = (-(l + k)..=(l + k)).filter(|p| p.abs() > l - k).collect();
        let mut out = DVector::zeros(8 * powers.len());
        for (i, &p) in powers.iter().enumerate() {
            for (j, z) in coefficient(&g, p).0.iter().flatten().enumerate() {
                out[8 * i + 2 * j] = z.re;
                out[8 * i + 2 * j + 1] = z.im;
            }
        }
        out
    };

    let mut found: Vec<f64> = Vec::with_capacity(steps);
    for k in 0..steps {
        if !found.is_empty() && leak(&found).amax() > 1e-14 {
            found = levenberg_marquardt(found, 30, leak);
        }
        let g = remainder(&found);
        let e = (steps - k) as i64;
        found.push(peel_phase(&coefficient(&g, e), &coefficient(&g, -e)));
    }
    if leak(&found).amax() > 1e-14 {
        found = levenberg_marquardt(found, 30, leak);
    }
    let g = remainder(&found);
    let phi0 = wrap_2pi(2.0 * coefficient(&g, 0).0[1][1].arg());

    let mut phis = Vec::with_capacity(steps + 1);
    phis.push(phi0);
    phis.extend(found.iter().rev().map(|&p| wrap_pi(p)));
    phis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Parity;

    fn q<'a>(s: &'a [TrigSeries; 4]) -> Quadruple<'a> {
        Quadruple {
            a: &s[0],
            b: &s[1],
            c: &s[2],
            d: &s[3],
        }
    }

    #[test]
    fn constant_identity() {
        let s = [
            TrigSeries::constant(1.0),
            TrigSeries::zero(Parity::Odd, 0),
            TrigSeries::zero(Parity::Odd, 0),
            TrigSeries::zero(Parity::Even, 0),
        ];
        assert_eq!(extract_angles(&q(&s), 0).unwrap(), vec![0.0]);
    }

    #[test]
    fn double_x_rotation() {
        // A = cos(theta), B = -sin(theta): RX(2 theta)
        let s = [
            TrigSeries::even(vec![0.0, 1.0]),
            TrigSeries::odd(vec![0.0, -1.0]),
            TrigSeries::zero(Parity::Odd, 1),
            TrigSeries::zero(Parity::Even, 1),
        ];
        let phis = extract_angles(&q(&s), 1).unwrap();
        assert_eq!(phis.len(), 3);
        for p in phis {
            assert!(p.abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn pads_low_degree_quadruple() {
        let s = [
            TrigSeries::constant(1.0).with_degree(3),
            TrigSeries::zero(Parity::Odd, 3),
            TrigSeries::zero(Parity::Odd, 3),
            TrigSeries::zero(Parity::Even, 3),
        ];
        let phis = extract_angles(&q(&s), 3).unwrap();
        assert_eq!(phis.len(), 7);
        assert!(plan_deviation(&phis, &q(&s), 64) < 1e-14);
    }

    #[test]
    fn recovers_random_plans() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let m = rng.gen_range(1..=8);
            let phis: Vec<f64> = (0..=2 * m).map(|_| rng.gen_range(-PI..PI)).collect();
            // decompose the plan on a grid into cosine/sine series by quadrature
            let points = 8 * m + 8;
            let mut quad = [
                vec![0.0; m + 1],
                vec![0.0; m + 1],
                vec![0.0; m + 1],
                vec![0.0; m + 1],
            ];
            for i in 0..points {
                let t = 2.0 * PI * i as f64 / points as f64;
                let v = evaluate_plan(&phis, t).quadruple();
                for k in 0..=m {
                    let w = if k == 0 { 1.0 } else { 2.0 } / points as f64;
                    let (c, s) = ((k as f64 * t).cos(), (k as f64 * t).sin());
                    quad[0][k] += w * v[0] * c;
                    quad[1][k] += w * v[1] * s;
                    quad[2][k] += w * v[2] * s;
                    quad[3][k] += w * v[3] * c;
                }
            }
            let s = [
                TrigSeries::even(quad[0].clone()),
                TrigSeries::odd(quad[1].clone()),
                TrigSeries::odd(quad[2].clone()),
                TrigSeries::even(quad[3].clone()),
            ];
            let got = extract_angles(&q(&s), m).unwrap();
            assert!(plan_deviation(&got, &q(&s), 256) < 1e-9);
            let direct = (0..256)
                .map(|i| {
                    let t = -PI + 2.0 * PI * i as f64 / 256.0;
                    evaluate_plan(&got, t).sub(&evaluate_plan(&phis, t)).op_norm()
                })
                .fold(0.0, f64::max);
            assert!(direct < 1e-9);
        }
    }

    #[test]
    fn degree_too_small_is_an_error() {
        let s = [
            TrigSeries::even(vec![0.0, 1.0]),
            TrigSeries::odd(vec![0.0, -1.0]),
            TrigSeries::zero(Parity::Odd, 1),
            TrigSeries::zero(Parity::Even, 1),
        ];
        assert!(matches!(
            extract_angles(&q(&s), 0),
            Err(Error::ExtractionFailed { .. })
        ));
    }

    #[test]
    fn polish_repairs_perturbed_angles() {
        let phis = vec![0.4, 1.0, -0.3, 2.0, 0.7];
        let points = 64;
        let mut quad = [vec![0.0; 3], vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]];
        for i in 0..points {
            let t = 2.0 * PI * i as f64 / points as f64;
            let v = evaluate_plan(&phis, t).quadruple();
            for k in 0..=2 {
                let w = if k == 0 { 1.0 } else { 2.0 } / points as f64;
                let (c, s) = ((k as f64 * t).cos(), (k as f64 * t).sin());
                quad[0][k] += w * v[0] * c;
                quad[1][k] += w * v[1] * s;
                quad[2][k] += w * v[2] * s;
                quad[3][k] += w * v[3] * c;
            }
        }
        let s = [
            TrigSeries::even(quad[0].clone()),
            TrigSeries::odd(quad[1].clone()),
            TrigSeries::odd(quad[2].clone()),
            TrigSeries::even(quad[3].clone()),
        ];
        let noisy: Vec<f64> = phis.iter().map(|p| p + 1e-4).collect();
        assert!(plan_deviation(&noisy, &q(&s), 64) > 1e-5);
        let fixed = polish(&noisy, &q(&s), 64);
        assert!(plan_deviation(&fixed, &q(&s), 64) < 1e-11);
    }
}
