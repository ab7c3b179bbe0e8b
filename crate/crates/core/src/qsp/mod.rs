//! Composite-rotation synthesis: completion of `(A, B)`, phase extraction,
//! and the end-to-end `crot_angles` pipeline.

mod complete;
mod extract;
mod su2;

use std::f64::consts::PI;

pub use complete::{check_points, complete, normalization_residual, polynomial_roots, Sign, NORMALIZATION_TOL};
pub use extract::{extract_angles, plan_deviation, polish, Quadruple, EXTRACTION_TOL};
pub use su2::{evaluate_plan, signal_step, SU2Matrix};

use crate::angle::{wrap_2pi, wrap_pi};
use crate::error::{Error, Result};
use crate::fit::{fit_crot, fit_weight_dependent, weighted_params};
use crate::series::{Parity, TrigSeries};
use crate::subspace::{default_params, phase_reset_ok};

/// A compiled phase program: `phis[0]` is the final Z rotation and
/// `phis[1..]` drive the `L` signal steps, one MS pulse each.
#[derive(Debug, Clone, PartialEq)]
pub struct CompilationPlan {
    pub n: usize,
    pub tau: f64,
    pub h: f64,
    pub phis: Vec<f64>,
}

impl CompilationPlan {
    /// Number of signal steps (MS pulses).
    pub fn len(&self) -> usize {
        self.phis.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phase_reset_ok(&self) -> bool {
        phase_reset_ok(self.len(), self.tau)
    }

    /// Target block for control weight `q`, up to the global phase from the
    /// pulses.
    pub fn block(&self, q: usize) -> SU2Matrix {
        let theta = (self.n as f64 - 1.0 - 2.0 * q as f64) * self.tau + self.h;
        evaluate_plan(&self.phis, theta)
    }

    /// Z-rotation slots between consecutive pulses once adjacent rotations
    /// are merged: `L + 1` angles, index 0 applied last (it absorbs
    /// `phi_0`) and index `L` applied first. Slots are reduced to
    /// `(-pi, pi]`; each `2 pi` shift only flips the global sign.
    pub fn merged_angles(&self) -> Vec<f64> {
        let l = self.len();
        let p = &self.phis;
        if l == 0 {
            return vec![wrap_pi(p[0])];
        }
        let mut out = Vec::with_capacity(l + 1);
        out.push(wrap_pi(p[0] - p[1]));
        for j in 1..l {
            out.push(wrap_pi(p[j] - p[j + 1]));
        }
        out.push(wrap_pi(p[l]));
        out
    }
}

/// Appends identity pairs `(0, pi)` until `tau * L` is a multiple of `2 pi`.
///
/// Each pair contributes `RZ(0)RX(t)RZ(0) * RZ(-pi)RX(t)RZ(pi) = 1` on the
/// target. Plans whose `tau` never resets are returned unchanged.
pub fn pad_for_phase_reset(plan: &CompilationPlan) -> CompilationPlan {
    let mut out = plan.clone();
    let limit = out.len() + 2 * 100_000;
    let mut l = out.len();
    while l <= limit {
        if phase_reset_ok(l, out.tau) {
            while out.len() < l {
                out.phis.extend([0.0, PI]);
            }
            return out;
        }
        l += 2;
    }
    out
}

/// The completed quadruple `[A, B, C, D]` for `C^{N-1} RZ(alpha)`: `A` from
/// the constrained fit, `B = 0`, and `(C, D)` from completion with the sign
/// of `D(pi)` chosen so the all-ones block is `RZ(alpha)`.
pub fn crot_quadruple(n: usize, alpha: f64) -> Result<[TrigSeries; 4]> {
    let alpha = wrap_2pi(alpha);
    let a = fit_crot(n, alpha)?;
    let b = TrigSeries::zero(Parity::Odd, a.degree());
    // all-ones block is A(pi) + i D(pi) Z, which must equal RZ(alpha)
    let (c, d) = complete(&a, &b, Sign::of(-(alpha / 2.0).sin()))?;
    Ok([a, b, c, d])
}

/// Phase list for `C^{N-1} RZ(alpha)` with `L = 2N` MS pulses.
pub fn crot_angles(n: usize, alpha: f64) -> Result<CompilationPlan> {
    let (tau, h) = default_params(n)?;
    if wrap_2pi(alpha) == 0.0 {
        // RX(2N theta_q) is the same multiple of the identity on every block
        return Ok(CompilationPlan {
            n,
            tau,
            h,
            phis: vec![0.0; 2 * n + 1],
        });
    }
    let [a, b, c, d] = crot_quadruple(n, alpha)?;
    let phis = extract_angles(
        &Quadruple {
            a: &a,
            b: &b,
            c: &c,
            d: &d,
        },
        a.degree(),
    )?;
    Ok(pad_for_phase_reset(&CompilationPlan { n, tau, h, phis }))
}

/// Phase list realizing `RX(alphas[q])` on the target for control weight
/// `q`, with `L = 4N` pulses.
pub fn weighted_angles(n: usize, alphas: &[f64]) -> Result<CompilationPlan> {
    let (a, b) = fit_weight_dependent(n, alphas)?;
    let (tau, h) = weighted_params(n)?;
    let degree = a.degree().max(b.degree());
    let (c, d) = complete(&a, &b, Sign::Plus)?;
    let phis = extract_angles(
        &Quadruple {
            a: &a,
            b: &b,
            c: &c,
            d: &d,
        },
        degree,
    )?;
    Ok(pad_for_phase_reset(&CompilationPlan { n, tau, h, phis }))
}

/// Plan whose target blocks are the inverses of `plan`'s.
///
/// Reverses the signal steps and shifts each by `pi` (which inverts the X
/// rotation); the final `RZ(phi_0)` moves to the front as `RZ(-phi_0)` and is
/// commuted back through the steps.
pub fn invert_plan(plan: &CompilationPlan) -> CompilationPlan {
    let phi0 = plan.phis[0];
    let mut phis = Vec::with_capacity(plan.phis.len());
    phis.push(wrap_2pi(-phi0));
    phis.extend(plan.phis[1..].iter().rev().map(|&p| wrap_pi(p + PI - phi0)));
    CompilationPlan { phis, ..plan.clone() }
}

/// Convenience check used by the circuit builders.
pub(crate) fn require_phase_reset(plan: &CompilationPlan) -> Result<()> {
    if plan.phase_reset_ok() {
        Ok(())
    } else {
        Err(Error::PhaseReset {
            product: plan.tau * plan.len() as f64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_dev(a: &[f64], b: &[f64]) -> f64 {
        (0..128)
            .map(|i| {
                let t = -PI + 2.0 * PI * i as f64 / 128.0;
                evaluate_plan(a, t).sub(&evaluate_plan(b, t)).op_norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn pad_examples() {
        let (tau, h) = default_params(3).unwrap();
        let plan = CompilationPlan {
            n: 3,
            tau,
            h,
            phis: vec![0.1, 0.2, 0.3, 0.4, 0.5],
        };
        let padded = pad_for_phase_reset(&plan);
        assert_eq!(padded.len(), 6);
        assert_eq!(&padded.phis[5..], &[0.0, PI]);
        assert!(padded.phase_reset_ok());
        assert!(max_dev(&plan.phis, &padded.phis) < 1e-14);

        assert_eq!(pad_for_phase_reset(&padded), padded);

        let long = CompilationPlan {
            phis: vec![0.3, 1.0, -1.0, 2.0, 0.1, 0.5, -0.4, 0.9, 1.1],
            ..plan
        };
        let padded = pad_for_phase_reset(&long);
        assert_eq!(padded.len(), 12);
        assert_eq!(&padded.phis[9..], &[0.0, PI, 0.0, PI]);
        assert!(max_dev(&long.phis, &padded.phis) < 1e-13);
    }

    #[test]
    fn crot_lengths() {
        for n in 2..=8 {
            let plan = crot_angles(n, PI).unwrap();
            assert_eq!(plan.len(), 2 * n);
            assert!(plan.phase_reset_ok());
        }
        assert_eq!(crot_angles(7, PI).unwrap().len(), 14);
    }

    #[test]
    fn crot_identity() {
        for n in 2..=7 {
            let plan = crot_angles(n, 0.0).unwrap();
            assert!(plan.phis.iter().all(|&p| p == 0.0));
            let sign = plan.block(0).0[0][0].re.signum();
            for q in 0..n {
                let want = SU2Matrix::IDENTITY.scale(num_complex::Complex64::new(sign, 0.0));
                assert!(plan.block(q).sub(&want).op_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn crot_blocks() {
        for n in 2..=8 {
            for &alpha in &[0.3, PI / 2.0, PI, 2.0 * PI, -PI] {
                let plan = crot_angles(n, alpha).unwrap();
                for q in 0..n {
                    let want = if q == n - 1 {
                        SU2Matrix::rz(alpha)
                    } else {
                        SU2Matrix::IDENTITY
                    };
                    let dev = plan.block(q).sub(&want).op_norm();
                    assert!(dev < 1e-9, "n={n} alpha={alpha} q={q} dev={dev}");
                }
            }
        }
    }

    #[test]
    fn weighted_blocks() {
        let alphas = [0.4, 1.1, 2.0];
        let plan = weighted_angles(3, &alphas).unwrap();
        assert_eq!(plan.len(), 12);
        assert!(plan.phase_reset_ok());
        for (q, &alpha) in alphas.iter().enumerate() {
            let dev = plan.block(q).sub(&SU2Matrix::rx(alpha)).op_norm();
            assert!(dev < 1e-9, "q={q} dev={dev}");
        }
    }

    #[test]
    fn inversion() {
        let plan = crot_angles(4, 1.3).unwrap();
        let inv = invert_plan(&plan);
        for i in 0..64 {
            let t = -PI + 2.0 * PI * i as f64 / 64.0;
            let prod = evaluate_plan(&inv.phis, t) * evaluate_plan(&plan.phis, t);
            assert!(prod.sub(&SU2Matrix::IDENTITY).op_norm() < 1e-12);
        }
        let back = invert_plan(&inv);
        assert!(max_dev(&back.phis, &plan.phis) < 1e-12);
    }

    #[test]
    fn merged_angles_count() {
        let plan = crot_angles(3, -PI).unwrap();
        let merged = plan.merged_angles();
        assert_eq!(merged.len(), 7);
        // the padding pair (0, pi) leaves (-pi, pi) in the first-applied slots
        assert!((merged[6] - PI).abs() < 1e-12);
        assert!(crate::angle::circle_distance(merged[5], -PI) < 1e-12);
        assert!(merged.iter().all(|a| a.abs() <= PI));
    }

    #[test]
    fn phase_reset_required() {
        let plan = CompilationPlan {
            n: 3,
            tau: PI / 3.0,
            h: -PI / 3.0,
            phis: vec![0.0, 0.0, 0.0],
        };
        assert!(require_phase_reset(&plan).is_err());
    }
}
