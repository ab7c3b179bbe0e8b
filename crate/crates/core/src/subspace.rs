//! Reduction of the global MS dynamics to one effective X rotation per
//! Hamming weight of the controls.
//!
//! With the target qubit fixed and the controls in a computational basis
//! state of weight `q`, one `MS(tau)` pulse followed by `RX(h)` on the target
//! acts on the target as `RX(theta_q)` up to a phase, where
//! `theta_q = (N - 1 - 2q) tau + h`. The residual control-dependent phases
//! cancel once `tau * L` is a multiple of `2 pi`.
//!
//! The coupling energy scale `J` is fixed to 1.

use std::f64::consts::PI;

use crate::angle::wrap_pi;
use crate::error::{Error, Result};

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidSize { n, min: 2 })
    } else {
        Ok(())
    }
}

/// `(tau, h) = (pi/N, -pi/N)`: spreads the `theta_q` evenly over the circle
/// with the all-ones weight landing on `pi`.
pub fn default_params(n: usize) -> Result<(f64, f64)> {
    check_size(n)?;
    let tau = PI / n as f64;
    Ok((tau, -tau))
}

/// Gap `E_0 - E_1` of the target-qubit levels for control weight `q`.
pub fn energy_gap(n: usize, q: usize) -> Result<f64> {
    if q >= n {
        return Err(Error::WeightOutOfRange { q, n });
    }
    Ok(n as f64 - 1.0 - 2.0 * q as f64)
}

/// `theta_q = (N - 1 - 2q) tau + h` for `q = 0..N`, unreduced.
pub fn compute_thetas(n: usize, tau: f64, h: f64) -> Vec<f64> {
    (0..n)
        .map(|q| (n as f64 - 1.0 - 2.0 * q as f64) * tau + h)
        .collect()
}

/// Whether `tau * L` is a multiple of `2 pi` (to 1e-12).
pub fn phase_reset_ok(l: usize, tau: f64) -> bool {
    let turns = tau * l as f64 / (2.0 * PI);
    (turns - turns.round()).abs() < 1e-12
}

/// One level of the star-coupled Ising Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarLevel {
    /// State of the target qubit.
    pub target_bit: u8,
    /// Hamming weight of the controls.
    pub weight: usize,
    pub energy: f64,
    /// Number of control bitstrings with this weight.
    pub degeneracy: u64,
}

/// Eigensystem of `1/2 sum_k Z_0 Z_k` (every control coupled to the target
/// only), grouped by target bit and control weight.
pub fn star_spectrum(n: usize) -> Result<Vec<StarLevel>> {
    check_size(n)?;
    let controls = n - 1;
    let mut out = Vec::with_capacity(2 * n);
    for target_bit in 0..2u8 {
        let sign = if target_bit == 0 { 1.0 } else { -1.0 };
        for weight in 0..n {
            out.push(StarLevel {
                target_bit,
                weight,
                energy: sign * ((n as f64 - 1.0) / 2.0 - weight as f64),
                degeneracy: binomial(controls as u64, weight as u64),
            });
        }
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Effective per-weight rotation data for a fixed `(N, tau, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceModel {
    n: usize,
    tau: f64,
    h: f64,
    thetas: Vec<f64>,
}

impl SubspaceModel {
    pub fn new(n: usize, tau: f64, h: f64) -> Result<Self> {
        check_size(n)?;
        Ok(SubspaceModel {
            n,
            tau,
            h,
            thetas: compute_thetas(n, tau, h),
        })
    }

    /// Model with [`default_params`].
    pub fn with_defaults(n: usize) -> Result<Self> {
        let (tau, h) = default_params(n)?;
        Self::new(n, tau, h)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, q: usize) -> Result<f64> {
        self.thetas
            .get(q)
            .copied()
            .ok_or(Error::WeightOutOfRange { q, n: self.n })
    }

    /// `theta_q` canonicalized to `(-pi, pi]`.
    pub fn canonical_theta(&self, q: usize) -> Result<f64> {
        // -pi computed with rounding error lands on the wrong side of the cut
        self.theta(q).map(|t| {
            let w = wrap_pi(t);
            if (w + PI).abs() < 1e-12 {
                PI
            } else {
                w
            }
        })
    }

    /// Smallest sequence length `L >= min_len` that resets the control phases,
    /// if one exists within `max_len`.
    pub fn reset_length(&self, min_len: usize, max_len: usize) -> Option<usize> {
        (min_len..=max_len).find(|&l| phase_reset_ok(l, self.tau))
    }
}
