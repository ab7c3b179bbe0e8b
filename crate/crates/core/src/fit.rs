//! Pinning the identity component `A` (and the X component `B`) of the
//! composite rotation at the effective angles `theta_q`, and solving for the
//! lowest-degree series that meets the pins.
//!
//! For a controlled rotation only `A` is fitted (`B = 0`): `A = 1` at every
//! weight except the all-ones one, where `A = cos(alpha/2)`. Each pin with
//! `A = 1` also gets `A' = 0`, which keeps `|A| <= 1` around it and makes the
//! gate insensitive to first order in pulse-area errors. Because `A` is even,
//! pins only need enforcing at the distinct points of `|theta_q|`, and the
//! derivative of a cosine series is automatically zero at `0` and `pi`.

use std::f64::consts::PI;

use log::debug;
use nalgebra::{DMatrix, DVector};

use crate::angle::{wrap_2pi, wrap_pi};
use crate::error::{Error, Result};
use crate::series::{Parity, TrigSeries};
use crate::subspace::SubspaceModel;

/// Grid used to check `|A| <= 1` (or `A^2 + B^2 <= 1`) after a fit.
pub const NORM_GRID: usize = 2048;
/// Slack allowed above 1 on [`NORM_GRID`].
pub const NORM_SLACK: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;
const FOLD_TOL: f64 = 1e-9;

/// A gate to be synthesized.
#[derive(Debug, Clone, PartialEq)]
pub enum GateTarget {
    /// `RZ(alpha)` on the target iff all `n - 1` controls are `|1>`.
    ControlledRz { n: usize, alpha: f64 },
    /// `RX(alphas[q])` on the target when the controls have weight `q`.
    WeightDependentX { n: usize, alphas: Vec<f64> },
}

impl GateTarget {
    /// Validates sizes and reduces angles into `(-2 pi, 2 pi]` (rotations
    /// have period 4 pi, so `2 pi` is kept distinct from `0`).
    pub fn normalized(self) -> Result<Self> {
        match self {
            GateTarget::ControlledRz { n, alpha } => {
                if n < 2 {
                    return Err(Error::InvalidSize { n, min: 2 });
                }
                Ok(GateTarget::ControlledRz {
                    n,
                    alpha: wrap_2pi(alpha),
                })
            }
            GateTarget::WeightDependentX { n, alphas } => {
                if n < 2 {
                    return Err(Error::InvalidSize { n, min: 2 });
                }
                if alphas.len() != n {
                    return Err(Error::WrongAngleCount {
                        expected: n,
                        got: alphas.len(),
                    });
                }
                Ok(GateTarget::WeightDependentX {
                    n,
                    alphas: alphas.into_iter().map(wrap_2pi).collect(),
                })
            }
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            GateTarget::ControlledRz { n, .. } | GateTarget::WeightDependentX { n, .. } => *n,
        }
    }
}

/// One pinned point: `f(theta) = value`, and `f'(theta) = 0` if requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub theta: f64,
    pub value: f64,
    pub pin_derivative: bool,
}

/// Pins for one series plus the degree that makes the system square.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    pub constraints: Vec<Constraint>,
    pub degree: usize,
}

impl ConstraintSet {
    /// Total scalar equations (values plus pinned derivatives).
    pub fn scalar_count(&self) -> usize {
        self.constraints
            .iter()
            .map(|c| 1 + c.pin_derivative as usize)
            .sum()
    }

    pub fn value_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.constraints.iter().map(|c| c.theta)
    }

    pub fn derivative_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.constraints
            .iter()
            .filter(|c| c.pin_derivative)
            .map(|c| c.theta)
    }

    /// Solves for the series of the given parity meeting every pin.
    ///
    /// Even series have `degree + 1` unknowns (`k = 0..=degree`), odd ones
    /// `degree` (`k = 1..=degree`); the scalar count must match.
    pub fn solve(&self, parity: Parity) -> Result<TrigSeries> {
        let first_k = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        let unknowns = self.degree + 1 - first_k;
        let rows = self.scalar_count();
        if rows != unknowns {
            return Err(Error::FittingFailed(format!(
                "{rows} constraints for {unknowns} unknown coefficients"
            )));
        }
        let mut m = DMatrix::<f64>::zeros(rows, unknowns);
        let mut rhs = DVector::<f64>::zeros(rows);
        let mut r = 0;
        for c in &self.constraints {
            for col in 0..unknowns {
                let k = (col + first_k) as f64;
                m[(r, col)] = match parity {
                    Parity::Even => (k * c.theta).cos(),
                    Parity::Odd => (k * c.theta).sin(),
                };
            }
            rhs[r] = c.value;
            r += 1;
            if c.pin_derivative {
                for col in 0..unknowns {
                    let k = (col + first_k) as f64;
                    m[(r, col)] = match parity {
                        Parity::Even => -k * (k * c.theta).sin(),
                        Parity::Odd => k * (k * c.theta).cos(),
                    };
                }
                r += 1;
            }
        }

        if log::log_enabled!(log::Level::Debug) {
            let sv = m.clone().singular_values();
            let cond = sv.max() / sv.min();
            debug!("fit {parity:?} degree {}: condition number {cond:.3e}", self.degree);
        }

        let x = m
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::FittingFailed("singular constraint matrix".into()))?;
        let residual = (&m * &x - &rhs).amax();
        if !residual.is_finite() || residual > RESIDUAL_TOL {
            return Err(Error::FittingFailed(format!(
                "linear residual {residual:e} above {RESIDUAL_TOL:e}"
            )));
        }
        let mut coeffs = vec![0.0; self.degree + 1];
        for (col, v) in x.iter().enumerate() {
            coeffs[col + first_k] = *v;
        }
        Ok(TrigSeries::new(parity, coeffs))
    }

    /// Largest deviation of `series` from the pins.
    pub fn residual(&self, series: &TrigSeries) -> f64 {
        self.constraints
            .iter()
            .map(|c| {
                let v = (series.eval(c.theta) - c.value).abs();
                if c.pin_derivative {
                    v.max(series.eval_derivative(c.theta).abs())
                } else {
                    v
                }
            })
            .fold(0.0, f64::max)
    }
}

fn is_endpoint(t: f64) -> bool {
    t < FOLD_TOL || (PI - t) < FOLD_TOL
}

/// Pins on `A` for `C^{N-1} RZ(alpha)` with the default `(tau, h)`.
pub fn constraint_set_crot(n: usize, alpha: f64) -> Result<ConstraintSet> {
    constraint_set_crot_for(&SubspaceModel::with_defaults(n)?, alpha)
}

/// Pins on `A` for a controlled rotation on an arbitrary subspace model.
///
/// The all-ones angle must fold onto `0` or `pi` (where every odd series
/// vanishes), and no other weight may fold onto the same point.
pub fn constraint_set_crot_for(model: &SubspaceModel, alpha: f64) -> Result<ConstraintSet> {
    let n = model.num_qubits();
    let mut constraints: Vec<Constraint> = Vec::with_capacity(n);
    for q in 0..n {
        let theta = wrap_pi(model.theta(q)?).abs();
        let value = if q == n - 1 { (alpha / 2.0).cos() } else { 1.0 };
        if q == n - 1 && !is_endpoint(theta) {
            return Err(Error::FittingFailed(format!(
                "all-ones angle {theta} is not at 0 or pi"
            )));
        }
        if let Some(existing) = constraints
            .iter()
            .find(|c| (c.theta - theta).abs() < FOLD_TOL)
        {
            if (existing.value - value).abs() > FOLD_TOL {
                return Err(Error::FittingFailed(format!(
                    "conflicting pins at theta = {theta}"
                )));
            }
            continue;
        }
        constraints.push(Constraint {
            theta,
            value,
            pin_derivative: !is_endpoint(theta),
        });
    }
    constraints.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut set = ConstraintSet {
        constraints,
        degree: 0,
    };
    set.degree = set.scalar_count() - 1;
    Ok(set)
}

/// Grid maximum of `f(theta)` over `points` samples of `[-pi, pi)`, with the
/// argmax.
pub fn grid_max(points: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    (0..points)
        .map(|i| {
            let t = -PI + 2.0 * PI * i as f64 / points as f64;
            (t, f(t))
        })
        .fold((0.0, f64::NEG_INFINITY), |acc, (t, v)| {
            if v > acc.1 {
                (t, v)
            } else {
                acc
            }
        })
}

/// Even series of degree `N - 1` for `C^{N-1} RZ(alpha)`.
pub fn fit_crot(n: usize, alpha: f64) -> Result<TrigSeries> {
    let set = constraint_set_crot(n, wrap_2pi(alpha))?;
    let a = set.solve(Parity::Even)?;
    let (theta, value) = grid_max(NORM_GRID, |t| a.eval(t).abs());
    if value > 1.0 + NORM_SLACK {
        return Err(Error::Infeasible { theta, value });
    }
    Ok(a)
}

/// `(tau, h) = (pi/(2N), pi/2)` for weight-dependent gates.
///
/// This places every `theta_q` strictly inside `(0, pi)`, so no weight shares
/// a folded point with another and `B` is free at every pin. With `L = 4N`
/// the phase reset `tau * L = 2 pi` holds.
pub fn weighted_params(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidSize { n, min: 2 });
    }
    Ok((PI / (2.0 * n as f64), PI / 2.0))
}

pub fn weighted_model(n: usize) -> Result<SubspaceModel> {
    let (tau, h) = weighted_params(n)?;
    SubspaceModel::new(n, tau, h)
}

/// Fits `A` (even, degree `2N - 1`) and `B` (odd, degree `2N`) so that the
/// weight-`q` block is `RX(alphas[q])`: `A = cos(alpha_q/2)`,
/// `B = -sin(alpha_q/2)`, both with zero derivative at every `theta_q`.
pub fn fit_weight_dependent(n: usize, alphas: &[f64]) -> Result<(TrigSeries, TrigSeries)> {
    let target = GateTarget::WeightDependentX {
        n,
        alphas: alphas.to_vec(),
    }
    .normalized()?;
    let GateTarget::WeightDependentX { alphas, .. } = target else {
        unreachable!()
    };
    let model = weighted_model(n)?;
    let pins = |value: &dyn Fn(f64) -> f64, degree: usize| ConstraintSet {
        constraints: model
            .thetas()
            .iter()
            .zip(&alphas)
            .map(|(&theta, &alpha)| Constraint {
                theta,
                value: value(alpha),
                pin_derivative: true,
            })
            .collect(),
        degree,
    };
    let a = pins(&|alpha| (alpha / 2.0).cos(), 2 * n - 1).solve(Parity::Even)?;
    let b = pins(&|alpha| -(alpha / 2.0).sin(), 2 * n).solve(Parity::Odd)?;
    let (theta, value) = grid_max(NORM_GRID, |t| a.eval(t).powi(2) + b.eval(t).powi(2));
    if value > 1.0 + NORM_SLACK {
        return Err(Error::Infeasible { theta, value });
    }
    Ok((a.with_degree(2 * n), b))
}
