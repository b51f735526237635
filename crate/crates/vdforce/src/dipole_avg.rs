//! Dipole orientation handling: the signed coupling strength, isotropic
//! and fixed-orientation tensor contractions, and the three projector
//! contraction scalars the energy formulas are built from.

use num_complex::Complex64;

use crate::dyadic::Dyadic3C;
use crate::greens::projectors;
use crate::vec3::{self, Vec3};
use crate::Error;

/// Signed dipole coupling strength in reduced units.
///
/// The sign is tied to the detuning: a quasi-resonant excited atom pulls
/// the coupling sign along with `1 - rho`, so the constructor takes the
/// positive magnitude and the wavenumber ratio and fixes the sign itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingU {
    /// Signed value, `sign * magnitude`.
    pub value: f64,
    /// `+1` when `rho < 1`, `-1` when `rho > 1`.
    pub sign: i8,
}

impl CouplingU {
    pub fn new(magnitude: f64, rho: f64) -> Result<Self, Error> {
        if !(magnitude.is_finite() && magnitude > 0.0) {
            return Err(Error::InvalidInput(format!(
                "coupling magnitude must be positive and finite, got {magnitude}"
            )));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidInput(format!(
                "wavenumber ratio must be positive and finite, got {rho}"
            )));
        }
        if rho == 1.0 {
            return Err(Error::InvalidInput(
                "wavenumber ratio 1 leaves the coupling sign undefined".into(),
            ));
        }
        let sign: i8 = if rho < 1.0 { 1 } else { -1 };
        Ok(Self {
            value: f64::from(sign) * magnitude,
            sign,
        })
    }
}

/// How the two dipole orientations are treated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orientation {
    /// Independent isotropic average over both dipole directions.
    Isotropic,
    /// Both dipoles pinned to fixed laboratory directions.
    Fixed { mu_a: Vec3, mu_b: Vec3 },
}

/// Isotropic orientation average of `(muA . X . muB)(muB . Y . muA)`,
/// which reduces to `tr(X Y) / 9`.
pub fn isotropic_contract(x: &Dyadic3C, y: &Dyadic3C) -> Complex64 {
    x.dot(y).trace() / 9.0
}

/// `(muA . X . muB)(muB . Y . muA)` for fixed unit dipole directions.
pub fn fixed_orientation_contract(
    x: &Dyadic3C,
    y: &Dyadic3C,
    mu_a: Vec3,
    mu_b: Vec3,
) -> Result<Complex64, Error> {
    let mu_a = vec3::require_unit(mu_a)?;
    let mu_b = vec3::require_unit(mu_b)?;
    Ok(x.bilinear(mu_a, mu_b) * y.bilinear(mu_b, mu_a))
}

/// Contraction of two dyadics under the given orientation treatment.
pub fn contract(
    orientation: &Orientation,
    x: &Dyadic3C,
    y: &Dyadic3C,
) -> Result<Complex64, Error> {
    match orientation {
        Orientation::Isotropic => Ok(isotropic_contract(x, y)),
        Orientation::Fixed { mu_a, mu_b } => fixed_orientation_contract(x, y, *mu_a, *mu_b),
    }
}

/// The three real projector contractions entering every energy formula:
/// `c_bb` pairs the traceless tensor with itself, `c_ab` mixes it with
/// the transverse projector, `c_aa` pairs the transverse projector with
/// itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionScalars {
    pub c_bb: f64,
    pub c_ab: f64,
    pub c_aa: f64,
}

/// Evaluates the projector contraction scalars for a separation
/// direction under the given orientation treatment.
///
/// Isotropic averaging gives the constants `(2/3, 2/9, 2/9)`; for fixed
/// dipoles the scalars depend on the direction cosines `p = muA . r`,
/// `q = muB . r` and `m = muA . muB`.
pub fn contraction_scalars(
    orientation: &Orientation,
    r_hat: Vec3,
) -> Result<ContractionScalars, Error> {
    let p = projectors(r_hat)?;
    Ok(ContractionScalars {
        c_bb: contract(orientation, &p.beta, &p.beta)?.re,
        c_ab: contract(orientation, &p.alpha, &p.beta)?.re,
        c_aa: contract(orientation, &p.alpha, &p.alpha)?.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn coupling_sign_follows_detuning() {
        let below = CouplingU::new(2.5, 0.9).unwrap();
        assert_relative_eq!(below.value, 2.5);
        assert_eq!(below.sign, 1);
        let above = CouplingU::new(2.5, 1.2).unwrap();
        assert_relative_eq!(above.value, -2.5);
        assert_eq!(above.sign, -1);
        assert!(CouplingU::new(2.5, 1.0).is_err());
        assert!(CouplingU::new(0.0, 0.9).is_err());
        assert!(CouplingU::new(-1.0, 0.9).is_err());
    }

    #[test]
    fn isotropic_projector_scalars_are_exact_rationals() {
        let cs = contraction_scalars(&Orientation::Isotropic, [0.36, 0.48, 0.8]).unwrap();
        assert_relative_eq!(cs.c_bb, 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(cs.c_ab, 2.0 / 9.0, max_relative = 1e-15);
        assert_relative_eq!(cs.c_aa, 2.0 / 9.0, max_relative = 1e-15);
        // Direction independence of the average.
        let cs2 = contraction_scalars(&Orientation::Isotropic, [0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(cs.c_bb, cs2.c_bb, max_relative = 1e-15);
    }

    #[test]
    fn fixed_contract_rejects_unnormalized_dipoles() {
        let p = projectors([0.0, 0.0, 1.0]).unwrap();
        let err = fixed_orientation_contract(&p.alpha, &p.beta, [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert!(matches!(err, Err(Error::NonUnitVector(_))));
    }

    #[test]
    fn fixed_scalars_match_frozen_reference_state() {
        let orientation = Orientation::Fixed {
            mu_a: [0.36, 0.48, 0.8],
            mu_b: [-0.48, 0.64, 0.6],
        };
        let cs = contraction_scalars(&orientation, [0.6, 0.0, 0.8]).unwrap();
        assert_relative_eq!(cs.c_bb, 0.014724366335999975, max_relative = 1e-13);
        assert_relative_eq!(cs.c_ab, 0.05461062451199995, max_relative = 1e-13);
        assert_relative_eq!(cs.c_aa, 0.202543202304, max_relative = 1e-13);
    }

    fn unit_from(az: f64, cz: f64) -> Vec3 {
        let sz = (1.0 - cz * cz).sqrt();
        [sz * az.cos(), sz * az.sin(), cz]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn fixed_scalars_agree_with_direction_cosine_forms(
            a1 in 0.0f64..std::f64::consts::TAU, c1 in -1.0f64..1.0,
            a2 in 0.0f64..std::f64::consts::TAU, c2 in -1.0f64..1.0,
            a3 in 0.0f64..std::f64::consts::TAU, c3 in -1.0f64..1.0,
        ) {
            let r_hat = unit_from(a1, c1);
            let mu_a = unit_from(a2, c2);
            let mu_b = unit_from(a3, c3);
            let cs = contraction_scalars(
                &Orientation::Fixed { mu_a, mu_b }, r_hat).unwrap();
            let p = vec3::dot(mu_a, r_hat);
            let q = vec3::dot(mu_b, r_hat);
            let m = vec3::dot(mu_a, mu_b);
            prop_assert!((cs.c_bb - (m - 3.0 * p * q).powi(2)).abs() < 1e-12);
            prop_assert!((cs.c_ab - (m - p * q) * (m - 3.0 * p * q)).abs() < 1e-12);
            prop_assert!((cs.c_aa - (m - p * q).powi(2)).abs() < 1e-12);
        }

        #[test]
        fn isotropic_contract_is_bilinear(
            s in -3.0f64..3.0,
        ) {
            let x = Dyadic3C::outer([1.0, 0.5, -0.25], [0.3, 1.0, 0.7]);
            let y = Dyadic3C::outer([0.2, -0.9, 1.1], [1.0, 0.0, -0.5]);
            let lhs = isotropic_contract(&(x * s), &y);
            let rhs = isotropic_contract(&x, &y) * s;
            prop_assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm().max(1e-14));
        }
    }

    #[test]
    fn isotropic_contract_matches_trace_identity() {
        // For X = a b^T, Y = c d^T: tr(XY)/9 = (b . c)(d . a)/9.
        let a = [1.0, 2.0, -1.0];
        let b = [0.5, -0.5, 1.5];
        let c = [2.0, 0.0, 1.0];
        let d = [-1.0, 1.0, 0.0];
        let x = Dyadic3C::outer(a, b);
        let y = Dyadic3C::outer(c, d);
        let got = isotropic_contract(&x, &y);
        let expect = vec3::dot(b, c) * vec3::dot(d, a) / 9.0;
        assert_relative_eq!(got.re, expect, max_relative = 1e-14);
        assert_abs_diff_eq!(got.im, 0.0);
    }
}
