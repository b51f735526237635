//! Minimal real 3-vector helpers on plain `[f64; 3]`.

use crate::{limits, Error};

/// Real 3-vector in reduced units.
pub type Vec3 = [f64; 3];

/// The zero vector.
pub const ZERO: Vec3 = [0.0; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Returns `a / |a|`, or [`Error::Singularity`] for a vanishing vector.
pub fn unit(a: Vec3) -> Result<Vec3, Error> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Singularity);
    }
    Ok(scale(a, 1.0 / n))
}

/// Checks `|a| = 1` within [`limits::UNIT_TOL`].
pub fn is_unit(a: Vec3) -> bool {
    (norm(a) - 1.0).abs() <= limits::UNIT_TOL
}

/// Validates a caller-supplied direction, returning it unchanged.
pub fn require_unit(a: Vec3) -> Result<Vec3, Error> {
    if is_unit(a) {
        Ok(a)
    } else {
        Err(Error::NonUnitVector(norm(a)))
    }
}

/// Any unit vector orthogonal to the given unit vector.
///
/// Used to complete a local frame when the transverse velocity vanishes
/// and no preferred transverse direction exists.
pub fn any_orthonormal(n: Vec3) -> Vec3 {
    // Pick the seed axis least aligned with n to keep the cross product
    // well conditioned.
    let seed = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
        [1.0, 0.0, 0.0]
    } else if n[1].abs() <= n[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    unit(cross(n, seed)).expect("seed axis is never parallel to n")
}
