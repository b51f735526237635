//! Free-space electric and magnetic propagator dyadics at a single
//! wavenumber, their wavenumber derivatives, spatial gradients, and the
//! corrections induced by uniform relative motion (Doppler phase plus
//! propagation-lag terms, each to first order in the velocity).
//!
//! Every dyadic here is a sum of radial profiles `k e^{iu} u^{-n}` with
//! `u = k x` times a fixed tensor built from the separation direction.
//! That shared shape powers the analytic `d/dk` rule used by the
//! non-conservative force assembly: each profile term obeys
//! `d/dk = term * ((1 - n) + i u) / k`.

use num_complex::Complex64;

use crate::dyadic::Dyadic3C;
use crate::vec3::{self, Vec3};
use crate::{limits, Error};

const I: Complex64 = Complex64::new(0.0, 1.0);
const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Transverse and traceless radial projectors of a direction.
#[derive(Debug, Clone, Copy)]
pub struct Projectors {
    /// `I - r r` (transverse projector).
    pub alpha: Dyadic3C,
    /// `I - 3 r r` (traceless near-field tensor).
    pub beta: Dyadic3C,
}

/// Builds the two projector dyadics of a unit direction.
pub fn projectors(r_hat: Vec3) -> Result<Projectors, Error> {
    let r_hat = vec3::require_unit(r_hat)?;
    let rr = Dyadic3C::outer(r_hat, r_hat);
    let id = Dyadic3C::identity();
    Ok(Projectors {
        alpha: id - rr,
        beta: id - rr * 3.0,
    })
}

fn separation(r_vec: Vec3) -> Result<(f64, Vec3), Error> {
    let x = vec3::norm(r_vec);
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Singularity);
    }
    Ok((x, vec3::scale(r_vec, 1.0 / x)))
}

fn check_domain(k_mag: f64, x: f64) -> Result<(), Error> {
    if k_mag == 0.0 {
        return Err(Error::InvalidInput("wavenumber must be nonzero".into()));
    }
    let kr = k_mag * x;
    if kr < limits::KR_MIN {
        return Err(Error::DomainUnderflow(kr));
    }
    Ok(())
}

/// Electric dyadic at complex wavenumber: the analytic continuation used
/// by the frequency-plane oracle. `r_vec` stays real.
pub fn green_electric_ck(k: Complex64, r_vec: Vec3) -> Result<Dyadic3C, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.norm(), x)?;
    let u = k * x;
    let inv = 1.0 / u;
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    let pref = k * (I * u).exp() / FOUR_PI;
    let p = projectors(r_hat)?;
    Ok(p.alpha * (pref * inv) + p.beta * (pref * (I * inv2 - inv3)))
}

/// Magnetic dyadic at complex wavenumber; see [`green_electric_ck`].
pub fn green_magnetic_ck(k: Complex64, r_vec: Vec3) -> Result<Dyadic3C, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.norm(), x)?;
    let u = k * x;
    let inv = 1.0 / u;
    let pref = k * (I * u).exp() / FOUR_PI;
    Ok(Dyadic3C::levi_civita(r_hat) * (pref * (inv + I * inv * inv)))
}

/// Electric propagator dyadic of a static pair at separation `r_vec`,
/// evaluated at wavenumber `k`. Symmetric in its tensor indices.
pub fn green_electric(k: f64, r_vec: Vec3) -> Result<Dyadic3C, Error> {
    green_electric_ck(Complex64::new(k, 0.0), r_vec)
}

/// Magnetic propagator dyadic (curl-coupled): antisymmetric, and odd in
/// the separation direction.
pub fn green_magnetic(k: f64, r_vec: Vec3) -> Result<Dyadic3C, Error> {
    green_magnetic_ck(Complex64::new(k, 0.0), r_vec)
}

/// A dyadic together with its analytic wavenumber derivative.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WithDk {
    pub val: Dyadic3C,
    pub dk: Dyadic3C,
}

impl WithDk {
    fn zero() -> Self {
        Self {
            val: Dyadic3C::zeros(),
            dk: Dyadic3C::zeros(),
        }
    }
}

/// Accumulates `sum_n c_n * pref * u^{-n} * tensor_n` and its `d/dk`,
/// with `pref = k e^{iu} / (4 pi x^extra)`.
struct ProfileSum {
    k: f64,
    u: f64,
    pref: Complex64,
    acc: WithDk,
}

impl ProfileSum {
    fn new(k: f64, x: f64, extra_inv_x: bool) -> Self {
        let u = k * x;
        let mut pref = Complex64::new(k, 0.0) * (I * u).exp() / FOUR_PI;
        if extra_inv_x {
            pref /= x;
        }
        Self {
            k,
            u,
            pref,
            acc: WithDk::zero(),
        }
    }

    fn term(&mut self, n: i32, c: Complex64, tensor: &Dyadic3C) {
        let scalar = self.pref * c * self.u.powi(-n);
        let dfac = Complex64::new((1 - n) as f64 / self.k, self.u / self.k);
        self.acc.val = self.acc.val + *tensor * scalar;
        self.acc.dk = self.acc.dk + *tensor * (scalar * dfac);
    }

    fn finish(self) -> WithDk {
        self.acc
    }
}

/// Electric dyadic with its wavenumber derivative (real axis).
pub(crate) fn green_electric_dk(k: f64, r_vec: Vec3) -> Result<WithDk, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    let p = projectors(r_hat)?;
    let mut s = ProfileSum::new(k, x, false);
    s.term(1, Complex64::new(1.0, 0.0), &p.alpha);
    s.term(2, I, &p.beta);
    s.term(3, Complex64::new(-1.0, 0.0), &p.beta);
    Ok(s.finish())
}

/// Magnetic dyadic with its wavenumber derivative (real axis).
pub(crate) fn green_magnetic_dk(k: f64, r_vec: Vec3) -> Result<WithDk, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    let eps_r = Dyadic3C::levi_civita(r_hat);
    let mut s = ProfileSum::new(k, x, false);
    s.term(1, Complex64::new(1.0, 0.0), &eps_r);
    s.term(2, I, &eps_r);
    Ok(s.finish())
}

/// First-order motion corrections to the two propagators, scaled by the
/// propagation lag `tau` (reduced time). The radial pieces are driven by
/// the receding velocity component, the transverse pieces by the rest.
#[derive(Debug, Clone, Copy)]
pub struct LagCorrections {
    /// Radial lag correction to the electric dyadic.
    pub d_g_lag_r: Dyadic3C,
    /// Radial lag correction to the magnetic dyadic.
    pub d_gm_lag_r: Dyadic3C,
    /// Transverse lag correction to the electric dyadic.
    pub d_g_lag_perp: Dyadic3C,
    /// Transverse lag correction to the magnetic dyadic.
    pub d_gm_lag_perp: Dyadic3C,
    /// The lag time the corrections were scaled by.
    pub lag_time: f64,
}

fn validate_motion(v: Vec3, tau: f64) -> Result<(), Error> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidInput(format!(
            "lag time must be finite and non-negative, got {tau}"
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("velocity must be finite".into()));
    }
    Ok(())
}

fn lag_radial_electric_density(k: f64, x: f64, r_hat: Vec3, v_r: f64) -> Result<WithDk, Error> {
    let p = projectors(r_hat)?;
    let mut s = ProfileSum::new(k, x, true);
    s.term(1, Complex64::new(v_r, 0.0), &p.alpha);
    s.term(2, Complex64::new(0.0, 2.0 * v_r), &p.beta);
    s.term(3, Complex64::new(-3.0 * v_r, 0.0), &p.beta);
    Ok(s.finish())
}

fn lag_perp_electric_density(k: f64, x: f64, r_hat: Vec3, v_perp: Vec3) -> WithDk {
    let sym = Dyadic3C::outer(r_hat, v_perp) + Dyadic3C::outer(v_perp, r_hat);
    let mut s = ProfileSum::new(k, x, true);
    s.term(1, Complex64::new(1.0, 0.0), &sym);
    s.term(2, Complex64::new(0.0, 3.0), &sym);
    s.term(3, Complex64::new(-3.0, 0.0), &sym);
    s.finish()
}

fn lag_radial_magnetic_density(k: f64, x: f64, r_hat: Vec3, v_r: f64) -> WithDk {
    let eps_r = Dyadic3C::levi_civita(r_hat);
    let mut s = ProfileSum::new(k, x, true);
    s.term(1, Complex64::new(v_r, 0.0), &eps_r);
    s.term(2, Complex64::new(0.0, 2.0 * v_r), &eps_r);
    s.finish()
}

fn lag_perp_magnetic_density(k: f64, x: f64, v_perp: Vec3) -> WithDk {
    let eps_v = Dyadic3C::levi_civita(v_perp);
    let mut s = ProfileSum::new(k, x, true);
    s.term(1, Complex64::new(-1.0, 0.0), &eps_v);
    s.term(2, Complex64::new(0.0, -1.0), &eps_v);
    s.finish()
}

fn split_velocity(v: Vec3, r_hat: Vec3) -> (f64, Vec3) {
    let v_r = vec3::dot(v, r_hat);
    (v_r, vec3::sub(v, vec3::scale(r_hat, v_r)))
}

/// Motion corrections to both propagators for relative velocity `v`
/// (units of `c`) over lag time `tau`, at instantaneous separation
/// `r_vec`. Linear in `v`; requires `k |r_vec|` above the domain floor.
pub fn lag_corrections(k: f64, r_vec: Vec3, v: Vec3, tau: f64) -> Result<LagCorrections, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    validate_motion(v, tau)?;
    let (v_r, v_perp) = split_velocity(v, r_hat);
    let tau_c = Complex64::new(tau, 0.0);
    Ok(LagCorrections {
        d_g_lag_r: lag_radial_electric_density(k, x, r_hat, v_r)?.val * tau_c,
        d_gm_lag_r: lag_radial_magnetic_density(k, x, r_hat, v_r).val * tau_c,
        d_g_lag_perp: lag_perp_electric_density(k, x, r_hat, v_perp).val * tau_c,
        d_gm_lag_perp: lag_perp_magnetic_density(k, x, v_perp).val * tau_c,
        lag_time: tau,
    })
}

/// Combined electric lag density (radial plus transverse, per unit lag
/// time) with its wavenumber derivative. Feeds the non-conservative
/// force assembly.
pub(crate) fn lag_density_electric(k: f64, r_vec: Vec3, beta: Vec3) -> Result<WithDk, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    let (v_r, v_perp) = split_velocity(beta, r_hat);
    let radial = lag_radial_electric_density(k, x, r_hat, v_r)?;
    let perp = lag_perp_electric_density(k, x, r_hat, v_perp);
    Ok(WithDk {
        val: radial.val + perp.val,
        dk: radial.dk + perp.dk,
    })
}

/// Combined magnetic lag density; see [`lag_density_electric`].
pub(crate) fn lag_density_magnetic(k: f64, r_vec: Vec3, beta: Vec3) -> Result<WithDk, Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    let (v_r, v_perp) = split_velocity(beta, r_hat);
    let radial = lag_radial_magnetic_density(k, x, r_hat, v_r);
    let perp = lag_perp_magnetic_density(k, x, v_perp);
    Ok(WithDk {
        val: radial.val + perp.val,
        dk: radial.dk + perp.dk,
    })
}

/// Electric dyadic evaluated at the retarded separation `r_vec - v tau`,
/// with no expansion in the velocity.
pub fn green_shifted_exact(k: f64, r_vec: Vec3, v: Vec3, tau: f64) -> Result<Dyadic3C, Error> {
    validate_motion(v, tau)?;
    let displaced = vec3::sub(r_vec, vec3::scale(v, tau));
    green_electric(k, displaced)
}

/// First-order expansion of [`green_shifted_exact`] in the velocity:
/// a Doppler phase on the static dyadic plus the two lag corrections.
pub fn green_shifted_linear(k: f64, r_vec: Vec3, v: Vec3, tau: f64) -> Result<Dyadic3C, Error> {
    let (_, r_hat) = separation(r_vec)?;
    let g = green_electric(k, r_vec)?;
    let lc = lag_corrections(k, r_vec, v, tau)?;
    let v_r = vec3::dot(v, r_hat);
    let phase = (-I * (k * v_r * tau)).exp();
    Ok(g * phase + lc.d_g_lag_r + lc.d_g_lag_perp)
}

/// Entry `(p, a)` of `d(r_hat_p)/d(y_a) * x = delta_pa - r_hat_p r_hat_a`.
fn dir_jacobian(r_hat: Vec3) -> [[f64; 3]; 3] {
    let mut j = [[0.0; 3]; 3];
    for p in 0..3 {
        for a in 0..3 {
            j[p][a] = f64::from(u8::from(p == a)) - r_hat[p] * r_hat[a];
        }
    }
    j
}

/// Spatial gradient of the electric dyadic: `out[a]` holds the partial
/// derivative with respect to the `a`-th separation component.
pub(crate) fn green_electric_grad(k: f64, r_vec: Vec3) -> Result<[Dyadic3C; 3], Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    let p = projectors(r_hat)?;
    let u = k * x;
    let pref = Complex64::new(k, 0.0) * (I * u).exp() / FOUR_PI;
    let s1 = pref / u;
    let s2 = pref * I / (u * u);
    let s3 = -pref / (u * u * u);
    // Radial derivative factor of a u^{-n} profile: k (i - n/u).
    let dfac = |n: f64| Complex64::new(-n * k / u, k);
    let jac = dir_jacobian(r_hat);
    let mut out = [Dyadic3C::zeros(); 3];
    for a in 0..3 {
        // d(alpha)/d(y_a) = -(J_pa r_q + r_p J_qa) / x, d(beta) = 3 d(alpha).
        let mut d_alpha = Dyadic3C::zeros();
        for pi in 0..3 {
            for qi in 0..3 {
                d_alpha.e[pi][qi] =
                    Complex64::new(-(jac[pi][a] * r_hat[qi] + r_hat[pi] * jac[qi][a]) / x, 0.0);
            }
        }
        let radial = p.alpha * (s1 * dfac(1.0) * r_hat[a])
            + p.beta * ((s2 * dfac(2.0) + s3 * dfac(3.0)) * r_hat[a]);
        out[a] = radial + d_alpha * s1 + d_alpha * ((s2 + s3) * 3.0);
    }
    Ok(out)
}

/// Spatial gradient of the magnetic dyadic; layout as in
/// [`green_electric_grad`].
pub(crate) fn green_magnetic_grad(k: f64, r_vec: Vec3) -> Result<[Dyadic3C; 3], Error> {
    let (x, r_hat) = separation(r_vec)?;
    check_domain(k.abs(), x)?;
    let u = k * x;
    let pref = Complex64::new(k, 0.0) * (I * u).exp() / FOUR_PI;
    let sm1 = pref / u;
    let sm2 = pref * I / (u * u);
    let dfac = |n: f64| Complex64::new(-n * k / u, k);
    let eps_r = Dyadic3C::levi_civita(r_hat);
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut out = [Dyadic3C::zeros(); 3];
    for a in 0..3 {
        let radial = eps_r * ((sm1 * dfac(1.0) + sm2 * dfac(2.0)) * r_hat[a]);
        let d_tensor = (Dyadic3C::levi_civita(axes[a]) - eps_r * r_hat[a]) * (1.0 / x);
        out[a] = radial + d_tensor * (sm1 + sm2);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    const TOL_FROZEN: f64 = 1e-13;

    fn assert_entry(m: &Dyadic3C, i: usize, j: usize, re: f64, im: f64) {
        assert_relative_eq!(m.e[i][j].re, re, max_relative = TOL_FROZEN, epsilon = 1e-300);
        assert_relative_eq!(m.e[i][j].im, im, max_relative = TOL_FROZEN, epsilon = 1e-300);
    }

    #[test]
    fn electric_matches_frozen_reference_entries() {
        let g = green_electric(1.3, [1.2, 0.0, 1.6]).unwrap();
        assert_entry(&g, 0, 0, -0.021592866128376263, 0.014418932276999962);
        assert_entry(&g, 0, 2, 0.0204626520247871, 0.013407006497881922);
        assert_entry(&g, 2, 2, -0.009656319113917117, 0.022239686067431087);
        assert_entry(&g, 1, 1, -0.03693985514696659, 0.0043636774035885175);
        // Off-diagonal couplings to the out-of-plane axis vanish.
        assert_abs_diff_eq!(g.e[0][1].norm(), 0.0);
        assert_abs_diff_eq!(g.e[1][2].norm(), 0.0);
    }

    #[test]
    fn magnetic_matches_frozen_reference_entries() {
        let gm = green_magnetic(0.7, [1.2, 1.6, 0.0]).unwrap();
        // No out-of-plane separation component, so the z column couples.
        assert_abs_diff_eq!(gm.e[0][1].norm(), 0.0);
        assert_entry(&gm, 0, 2, -0.01699537719402074, 0.035232283561501675);
        assert_entry(&gm, 1, 2, 0.012746532895515554, -0.026424212671126258);
    }

    #[test]
    fn axial_electric_entry_has_closed_form() {
        // On-axis zz entry reduces to pref * (-2)(i - 1) = pref (2 - 2i).
        let g = green_electric(1.0, [0.0, 0.0, 1.0]).unwrap();
        let pref = Complex64::new(0.0, 1.0).exp() / FOUR_PI;
        let expect = pref * Complex64::new(2.0, -2.0);
        assert_relative_eq!(g.e[2][2].re, expect.re, max_relative = 1e-14);
        assert_relative_eq!(g.e[2][2].im, expect.im, max_relative = 1e-14);
        assert_relative_eq!(g.e[2][2].re, 0.21991604944344553, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[2][2].im, 0.04793248395771829, max_relative = TOL_FROZEN);
    }

    #[test]
    fn axial_magnetic_entry_has_closed_form() {
        // xy entry at separation 2 on the z axis: -(e^{2i}/8 pi)(1 + i/2).
        let gm = green_magnetic(1.0, [0.0, 0.0, 2.0]).unwrap();
        assert_relative_eq!(gm.e[0][1].re, 0.034647854049639215, max_relative = TOL_FROZEN);
        assert_relative_eq!(gm.e[0][1].im, -0.027900816793945467, max_relative = TOL_FROZEN);
        // Antisymmetric partner.
        assert_relative_eq!(gm.e[1][0].re, -gm.e[0][1].re, max_relative = 1e-15);
    }

    #[test]
    fn far_zone_is_purely_transverse() {
        let k = 1.0;
        let x = 1e6;
        let g = green_electric(k, [0.0, 0.0, x]).unwrap();
        let u = k * x;
        let pref = Complex64::new(k, 0.0) * (I * u).exp() / FOUR_PI / u;
        // Transverse entries approach pref alpha; relative leakage ~ 1/u.
        assert_relative_eq!(g.e[0][0].re, pref.re, max_relative = 1e-5);
        assert_relative_eq!(g.e[1][1].im, pref.im, max_relative = 1e-5);
        assert!(g.e[2][2].norm() < 3e-6 * g.e[0][0].norm());
    }

    #[test]
    fn domain_floor_is_enforced() {
        assert!(matches!(
            green_electric(1e-6, [0.0, 0.0, 1e-3]),
            Err(Error::DomainUnderflow(_))
        ));
        assert!(matches!(
            green_electric(1.0, [0.0, 0.0, 0.0]),
            Err(Error::Singularity)
        ));
        assert!(green_electric(1e-4, [0.0, 0.0, 1e-3]).is_ok());
    }

    #[test]
    fn complex_k_agrees_with_real_k_on_the_axis() {
        let y = [0.4, -1.1, 0.9];
        let g = green_electric(0.8, y).unwrap();
        let gc = green_electric_ck(Complex64::new(0.8, 0.0), y).unwrap();
        assert_abs_diff_eq!(g.max_abs_diff(&gc), 0.0, epsilon = 1e-18);
    }

    #[test]
    fn lag_corrections_match_frozen_reference() {
        let lc = lag_corrections(1.0, [0.0, 0.0, 3.0], [0.01, 0.0, 0.01], 2.0).unwrap();
        assert_relative_eq!(
            lc.d_g_lag_r.e[0][0].re,
            -0.00013334973800721724,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_g_lag_r.e[0][0].im,
            -0.00010007574267107504,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_g_lag_r.e[2][2].re,
            -8.343874500300395e-05,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_g_lag_r.e[2][2].im,
            0.00025006247834636334,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_gm_lag_r.e[0][1].re,
            0.0001917061081767903,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_gm_lag_r.e[0][1].im,
            9.175724383703949e-05,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_g_lag_perp.e[0][2].re,
            -0.00014166823684125279,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_g_lag_perp.e[0][2].im,
            -0.00015843211284064808,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_gm_lag_perp.e[1][2].re,
            -0.00018338760934275472,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(
            lc.d_gm_lag_perp.e[1][2].im,
            -3.340087366746643e-05,
            max_relative = TOL_FROZEN
        );
        assert_relative_eq!(lc.lag_time, 2.0);
        // Radial pieces scale with the receding component only.
        let lc2 = lag_corrections(1.0, [0.0, 0.0, 3.0], [0.0, 0.0, 0.01], 2.0).unwrap();
        assert_relative_eq!(
            lc2.d_g_lag_r.e[0][0].re,
            lc.d_g_lag_r.e[0][0].re,
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(lc2.d_g_lag_perp.max_abs(), 0.0, epsilon = 1e-300);
    }

    #[test]
    fn shifted_linear_matches_frozen_reference() {
        let g = green_shifted_linear(1.0, [0.0, 0.0, 3.0], [0.01, 0.0, 0.01], 2.0).unwrap();
        assert_relative_eq!(g.e[0][0].re, -0.02482726861553629, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[0][0].im, -0.005033272888050438, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[2][2].re, -0.0030561073490499562, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[2][2].im, 0.018651953076665936, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[0][2].re, -0.00014166823684125279, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[0][2].im, -0.00015843211284064808, max_relative = TOL_FROZEN);
    }

    #[test]
    fn shifted_exact_matches_frozen_reference() {
        let g = green_shifted_exact(1.0, [0.0, 0.0, 3.0], [0.01, 0.0, 0.01], 2.0).unwrap();
        assert_relative_eq!(g.e[0][0].re, -0.024828045153646665, max_relative = TOL_FROZEN);
        assert_relative_eq!(g.e[0][0].im, -0.0050319621229277765, max_relative = TOL_FROZEN);
    }

    #[test]
    fn linear_expansion_error_is_second_order_in_velocity() {
        let y = [1.0, -0.5, 2.5];
        let tau = 3.0;
        let rel_err = |v: Vec3| {
            let exact = green_shifted_exact(1.1, y, v, tau).unwrap();
            let lin = green_shifted_linear(1.1, y, v, tau).unwrap();
            exact.max_abs_diff(&lin) / exact.max_abs()
        };
        let v = [2e-3, 1e-3, -1.5e-3];
        let ratio = rel_err(v) / rel_err(vec3::scale(v, 0.5));
        assert!(
            (3.5..=4.5).contains(&ratio),
            "halving the velocity should quarter the error, ratio = {ratio}"
        );
    }

    #[test]
    fn wavenumber_derivative_matches_frozen_and_finite_differences() {
        let y = [1.2, 0.0, 1.6];
        let wd = green_electric_dk(1.3, y).unwrap();
        assert_relative_eq!(wd.dk.e[0][0].re, -0.02870258866945887, max_relative = TOL_FROZEN);
        assert_relative_eq!(wd.dk.e[0][0].im, -0.04436614234554686, max_relative = TOL_FROZEN);
        assert_relative_eq!(wd.dk.e[0][2].re, -0.024379047074024912, max_relative = TOL_FROZEN);
        assert_relative_eq!(wd.dk.e[0][2].im, 0.0196779224512762, max_relative = TOL_FROZEN);
        assert_relative_eq!(wd.dk.e[2][2].re, -0.04292369946264007, max_relative = TOL_FROZEN);
        assert_relative_eq!(wd.dk.e[2][2].im, -0.03288735424896906, max_relative = TOL_FROZEN);
        // Central difference cross-check, both propagators.
        let h = 1e-6;
        let fd_e = (green_electric(1.3 + h, y).unwrap() - green_electric(1.3 - h, y).unwrap())
            * (0.5 / h);
        assert!(fd_e.max_abs_diff(&wd.dk) < 1e-9 * wd.dk.max_abs());
        let wm = green_magnetic_dk(0.9, y).unwrap();
        let fd_m = (green_magnetic(0.9 + h, y).unwrap() - green_magnetic(0.9 - h, y).unwrap())
            * (0.5 / h);
        assert!(fd_m.max_abs_diff(&wm.dk) < 1e-9 * wm.dk.max_abs());
    }

    #[test]
    fn lag_densities_recover_corrections_and_their_dk() {
        let y = [0.0, 0.0, 3.0];
        let v = [0.01, 0.0, 0.01];
        let lc = lag_corrections(1.0, y, v, 2.0).unwrap();
        let de = lag_density_electric(1.0, y, v).unwrap();
        let sum = lc.d_g_lag_r + lc.d_g_lag_perp;
        assert!(sum.max_abs_diff(&(de.val * Complex64::new(2.0, 0.0))) < 1e-18);
        // dk by central difference on the density itself.
        let h = 1e-6;
        let dp = lag_density_electric(1.0 + h, y, v).unwrap().val;
        let dm = lag_density_electric(1.0 - h, y, v).unwrap().val;
        let fd = (dp - dm) * (0.5 / h);
        assert!(fd.max_abs_diff(&de.dk) < 1e-9 * de.dk.max_abs());
        let gm = lag_density_magnetic(1.0, y, v).unwrap();
        let gp = lag_density_magnetic(1.0 + h, y, v).unwrap().val;
        let gm2 = lag_density_magnetic(1.0 - h, y, v).unwrap().val;
        let fdm = (gp - gm2) * (0.5 / h);
        assert!(fdm.max_abs_diff(&gm.dk) < 1e-9 * gm.dk.max_abs());
    }

    #[test]
    fn spatial_gradients_match_finite_differences() {
        let y = [1.4, -0.8, 2.1];
        let k = 1.2;
        let ge = green_electric_grad(k, y).unwrap();
        let gm = green_magnetic_grad(k, y).unwrap();
        let h = 1e-6 * vec3::norm(y);
        for a in 0..3 {
            let mut yp = y;
            let mut ym = y;
            yp[a] += h;
            ym[a] -= h;
            let fd_e =
                (green_electric(k, yp).unwrap() - green_electric(k, ym).unwrap()) * (0.5 / h);
            assert!(
                fd_e.max_abs_diff(&ge[a]) < 1e-7 * ge[a].max_abs(),
                "electric gradient component {a}"
            );
            let fd_m =
                (green_magnetic(k, yp).unwrap() - green_magnetic(k, ym).unwrap()) * (0.5 / h);
            assert!(
                fd_m.max_abs_diff(&gm[a]) < 1e-7 * gm[a].max_abs(),
                "magnetic gradient component {a}"
            );
        }
    }

    #[test]
    fn projector_algebra() {
        let r_hat = [0.36, 0.48, 0.8];
        let p = projectors(r_hat).unwrap();
        // alpha is idempotent and annihilates the direction.
        assert!(p.alpha.dot(&p.alpha).max_abs_diff(&p.alpha) < 1e-15);
        let ar: f64 = p.alpha.mul_vec(r_hat).iter().map(|z| z.norm()).sum();
        assert_abs_diff_eq!(ar, 0.0, epsilon = 1e-15);
        assert_relative_eq!(p.alpha.trace().re, 2.0, max_relative = 1e-15);
        assert_abs_diff_eq!(p.beta.trace().re, 0.0, epsilon = 1e-15);
        // beta = alpha - 2 r r.
        let back = p.alpha - Dyadic3C::outer(r_hat, r_hat) * 2.0;
        assert!(back.max_abs_diff(&p.beta) < 1e-15);
        assert!(projectors([0.5, 0.5, 0.5]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn electric_is_symmetric_across_the_domain(
            logkr in -3.0f64..3.0,
            az in 0.0f64..std::f64::consts::TAU,
            cz in -1.0f64..1.0,
        ) {
            let x = 10f64.powf(logkr);
            let sz = (1.0 - cz * cz).sqrt();
            let y = [x * sz * az.cos(), x * sz * az.sin(), x * cz];
            let g = green_electric(1.0, y).unwrap();
            prop_assert!(g.is_symmetric(1e-13));
        }

        #[test]
        fn magnetic_is_antisymmetric_and_odd(
            logkr in -3.0f64..3.0,
            az in 0.0f64..std::f64::consts::TAU,
            cz in -1.0f64..1.0,
        ) {
            let x = 10f64.powf(logkr);
            let sz = (1.0 - cz * cz).sqrt();
            let y = [x * sz * az.cos(), x * sz * az.sin(), x * cz];
            let gm = green_magnetic(1.0, y).unwrap();
            prop_assert!(gm.is_antisymmetric(1e-13));
            let flipped = green_magnetic(1.0, vec3::scale(y, -1.0)).unwrap();
            prop_assert!((gm + flipped).max_abs() <= 1e-13 * gm.max_abs());
        }

        #[test]
        fn wavenumber_rescaling_invariance(
            k1 in 0.2f64..5.0,
            k2 in 0.2f64..5.0,
            r in 0.3f64..30.0,
        ) {
            // k G(k, R) depends on k R only: G(k1, R) = (k1/k2) G(k2, R k1/k2).
            let y = [0.0, r * 0.6, r * 0.8];
            let a = green_electric(k1, y).unwrap();
            let b = green_electric(k2, vec3::scale(y, k1 / k2)).unwrap() * (k1 / k2);
            prop_assert!(a.max_abs_diff(&b) <= 1e-13 * a.max_abs());
        }
    }
}
