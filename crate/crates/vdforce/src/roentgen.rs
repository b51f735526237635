//! Velocity-induced magnetic coupling forces between the atom pair.
//!
//! A moving dipole sources a motional magnetic moment, and its
//! interaction with the partner's scattered field produces two force
//! channels on top of the electric-dipole dispersion force:
//!
//! * a conservative channel, the gradient of a velocity-linear
//!   interaction scalar built from one electric and one magnetic
//!   propagator, and
//! * a nonconservative channel sourced by propagation lag, which is
//!   not the gradient of any potential.
//!
//! Both channels are linear in the velocity and carry the coupling
//! strength `u`. Results are reduced-unit force vectors.

use num_complex::Complex64;

use crate::dipole_avg::Orientation;
use crate::dyadic::Dyadic3C;
use crate::greens::{
    green_electric, green_electric_dk, green_electric_grad, green_magnetic, green_magnetic_dk,
    green_magnetic_grad, lag_density_electric, lag_density_magnetic, WithDk,
};
use crate::vdw::PairState;
use crate::vec3::{self, Vec3};
use crate::Error;

const PI: f64 = std::f64::consts::PI;

/// Both magnetic-coupling force channels with their magnitude scales
/// relative to the electric-dipole dispersion force.
#[derive(Debug, Clone, Copy)]
pub struct RontgenResult {
    pub f_conservative: Vec3,
    pub f_nonconservative: Vec3,
    /// Conservative-to-dispersion magnitude scale in the near zone.
    pub near_ratio_conservative: f64,
    /// Conservative-to-dispersion magnitude scale in the far zone.
    pub far_ratio_conservative: f64,
    /// Nonconservative-to-dispersion magnitude scale in the near zone.
    pub near_ratio_nonconservative: f64,
}

/// Levi-Civita symbol on indices 0..3.
fn eps(i: usize, j: usize, k: usize) -> f64 {
    let (i, j, k) = (i as i32, j as i32, k as i32);
    (((i - j) * (j - k) * (k - i)) / 2) as f64
}

/// Dipole direction dyads for both atoms: `I/3` per axis when averaged
/// isotropically, otherwise the fixed outer products.
fn orientation_dyads(orientation: &Orientation) -> Result<(Dyadic3C, Dyadic3C), Error> {
    match orientation {
        Orientation::Isotropic => {
            let third = Dyadic3C::identity() * (1.0 / 3.0);
            Ok((third, third))
        }
        Orientation::Fixed { mu_a, mu_b } => {
            let a = vec3::require_unit(*mu_a)?;
            let b = vec3::require_unit(*mu_b)?;
            Ok((Dyadic3C::outer(a, a), Dyadic3C::outer(b, b)))
        }
    }
}

/// Velocity-linear interaction scalar behind the conservative channel:
/// a cross-coupling of one magnetic and one electric propagator through
/// both dipole dyads, contracted against the velocity direction.
fn coupling_scalar(
    beta: Vec3,
    aa: &Dyadic3C,
    ab: &Dyadic3C,
    gm: &Dyadic3C,
    ge: &Dyadic3C,
) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for l in 0..3 {
            if beta[l] == 0.0 {
                continue;
            }
            for m in 0..3 {
                let e = eps(i, l, m);
                if e == 0.0 {
                    continue;
                }
                let w = e * beta[l];
                for q in 0..3 {
                    let aiq = aa.e[i][q];
                    if aiq == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..3 {
                        let gmj = gm.e[m][j];
                        for p in 0..3 {
                            s += aiq * ab.e[j][p] * gmj * ge.e[p][q] * w;
                        }
                    }
                }
            }
        }
    }
    s.re
}

/// Conservative magnetic-coupling force: `-16 pi^2 u` times the
/// gradient of the interaction scalar, taken analytically through the
/// propagator gradients.
pub fn roentgen_conservative(
    state: &PairState,
    orientation: &Orientation,
) -> Result<Vec3, Error> {
    let y = state.y_vec();
    let beta = state.beta_vec();
    let u = state.u_value();
    let (aa, ab) = orientation_dyads(orientation)?;
    let ge = green_electric(1.0, y)?;
    let gm = green_magnetic(1.0, y)?;
    let dge = green_electric_grad(1.0, y)?;
    let dgm = green_magnetic_grad(1.0, y)?;
    let mut f = vec3::ZERO;
    for a in 0..3 {
        let ds = coupling_scalar(beta, &aa, &ab, &dgm[a], &ge)
            + coupling_scalar(beta, &aa, &ab, &gm, &dge[a]);
        f[a] = -16.0 * PI * PI * u * ds;
    }
    Ok(f)
}

/// Nonconservative force assembled from a pair of electric and
/// magnetic source dyads and their wavenumber derivatives.
///
/// The kernel is `big = E_{mn} M'_{pq} + E'_{mn} M_{pq}` mixing each
/// plain propagator with the lag density of the other character; the
/// frequency-plane residue turns the spectral integral into
/// `6 big + d(big)/dk` at the transition wavenumber.
pub(crate) fn nonconservative_assembly(
    state: &PairState,
    orientation: &Orientation,
    ge: &WithDk,
    gm: &WithDk,
    lag_e: &WithDk,
    lag_m: &WithDk,
) -> Result<Vec3, Error> {
    let u = state.u_value();
    let delta = 1.0 - state.rho;
    let (aa, ab) = orientation_dyads(orientation)?;
    let pref = -8.0 * PI * PI * u / delta;
    let mut f = vec3::ZERO;
    for i in 0..3 {
        for r in 0..3 {
            for p in 0..3 {
                let e = eps(i, r, p);
                if e == 0.0 {
                    continue;
                }
                for n in 0..3 {
                    let arn = aa.e[r][n];
                    if arn == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for q in 0..3 {
                        for m in 0..3 {
                            let bqm = ab.e[q][m];
                            let big = ge.val.e[m][n] * lag_m.val.e[p][q]
                                + lag_e.val.e[m][n] * gm.val.e[p][q];
                            let dbig = ge.dk.e[m][n] * lag_m.val.e[p][q]
                                + ge.val.e[m][n] * lag_m.dk.e[p][q]
                                + lag_e.dk.e[m][n] * gm.val.e[p][q]
                                + lag_e.val.e[m][n] * gm.dk.e[p][q];
                            f[i] += pref * e * (arn * bqm * (big * 6.0 + dbig)).re;
                        }
                    }
                }
            }
        }
    }
    Ok(f)
}

/// Nonconservative magnetic-coupling force from propagation lag.
pub fn roentgen_nonconservative(
    state: &PairState,
    orientation: &Orientation,
) -> Result<Vec3, Error> {
    let y = state.y_vec();
    let beta = state.beta_vec();
    let ge = green_electric_dk(1.0, y)?;
    let gm = green_magnetic_dk(1.0, y)?;
    let lag_e = lag_density_electric(1.0, y, beta)?;
    let lag_m = lag_density_magnetic(1.0, y, beta)?;
    nonconservative_assembly(state, orientation, &ge, &gm, &lag_e, &lag_m)
}

/// Closed form of the conservative channel for isotropic dipoles,
/// derived independently of the dyadic assembly.
pub fn conservative_isotropic_closed(state: &PairState) -> Vec3 {
    let x = state.x;
    let u = state.u_value();
    let i = Complex64::new(0.0, 1.0);
    let xi2 = x.powi(-2);
    let xi3 = x.powi(-3);
    let xi4 = x.powi(-4);
    let xi5 = x.powi(-5);
    let xi6 = x.powi(-6);
    let e2ix = (i * 2.0 * x).exp();
    let w = Complex64::new(xi2 - 2.0 * xi4, 2.0 * xi3 - xi5);
    let wp = Complex64::new(-2.0 * xi3 + 8.0 * xi5, -6.0 * xi4 + 5.0 * xi6);
    let radial = state.beta_r * ((i * 2.0 * w + wp) * e2ix).re;
    let trans = (e2ix * w).re / x;
    let pref = 2.0 * u / 9.0;
    vec3::add(
        vec3::scale(state.r_hat, pref * radial),
        vec3::scale(state.beta_perp_vec(), pref * trans),
    )
}

/// Closed form of the nonconservative channel for isotropic dipoles,
/// derived independently of the dyadic assembly.
pub fn nonconservative_isotropic_closed(state: &PairState) -> Vec3 {
    let x = state.x;
    let u = state.u_value();
    let delta = 1.0 - state.rho;
    let i = Complex64::new(0.0, 1.0);
    let e2ix = (i * 2.0 * x).exp();
    let h_rad = Complex64::new(
        -44.0 * x.powi(-4),
        8.0 / x + 28.0 * x.powi(-3) - 30.0 * x.powi(-5),
    );
    let h_trans = Complex64::new(
        4.0 * x.powi(-2) - 12.0 * x.powi(-4),
        4.0 / x + 12.0 * x.powi(-3) - 6.0 * x.powi(-5),
    );
    let pref = -u / (18.0 * delta * x);
    vec3::add(
        vec3::scale(state.r_hat, pref * state.beta_r * (e2ix * h_rad).re),
        vec3::scale(state.beta_perp_vec(), -pref * (e2ix * h_trans).re),
    )
}

/// Leading far-zone form of the nonconservative channel for isotropic
/// dipoles. The transverse part opposes the radial one at half its
/// weight per unit velocity component.
pub fn roentgen_far_isotropic(state: &PairState) -> Result<Vec3, Error> {
    let x = state.x;
    let u = state.u_value();
    let delta = 1.0 - state.rho;
    let pref = 2.0 * u * (2.0 * x).sin() / (9.0 * x * x * delta);
    Ok(vec3::add(
        vec3::scale(state.r_hat, 2.0 * pref * state.beta_r),
        vec3::scale(state.beta_perp_vec(), -pref),
    ))
}

/// Magnitude scales of the magnetic-coupling channels relative to the
/// electric-dipole dispersion force at separation `x` and frequency
/// ratio `rho`: conservative near, conservative far, nonconservative
/// near. Example: `(0.1, 0.99)` gives `(1e-4, 1e-2, 1e-2)`.
pub fn roentgen_ratios(x: f64, rho: f64) -> (f64, f64, f64) {
    let d = (1.0 - rho).abs();
    (x * x * d, d, x * x)
}

/// Evaluates both channels and their magnitude scales.
pub fn roentgen_forces(
    state: &PairState,
    orientation: &Orientation,
) -> Result<RontgenResult, Error> {
    let f_conservative = roentgen_conservative(state, orientation)?;
    let f_nonconservative = roentgen_nonconservative(state, orientation)?;
    let (near_c, far_c, near_nc) = roentgen_ratios(state.x, state.rho);
    Ok(RontgenResult {
        f_conservative,
        f_nonconservative,
        near_ratio_conservative: near_c,
        far_ratio_conservative: far_c,
        near_ratio_nonconservative: near_nc,
    })
}
