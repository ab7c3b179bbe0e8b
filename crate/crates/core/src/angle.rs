//! Angle canonicalization and parsing of `pi`-multiples.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * PI;

/// Reduces into `(-period/2, period/2]`.
fn reduce(angle: f64, period: f64) -> f64 {
    let half = period / 2.0;
    let mut r = angle.rem_euclid(period);
    if r > half {
        r -= period;
    }
    r
}

/// Canonical representative in `(-pi, pi]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let r = reduce(angle, TAU);
    // rem_euclid can land on -pi after the shift by rounding
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Canonical representative in `(-2 pi, 2 pi]`; keeps the 4 pi period of
/// single-qubit rotations.
pub fn wrap_2pi(angle: f64) -> f64 {
    let r = reduce(angle, 2.0 * TAU);
    if r <= -TAU {
        r + 2.0 * TAU
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}

/// Parses `0.3`, `pi`, `-pi/2`, `3pi/4`, `3*pi/4`, `2 pi`, `π`, ...
///
/// Rational multiples of pi are evaluated as `num * pi / den` so special
/// points like `pi` and `2pi` come out exact.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::BadAngle(text.to_string());
    let s: String = text
        .trim()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace('π', "pi")
        .to_lowercase();
    if s.is_empty() {
        return Err(bad());
    }
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let num = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(num * PI / den)
}

/// Parses a comma separated list of angles.
pub fn parse_angle_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_angle).collect()
}
