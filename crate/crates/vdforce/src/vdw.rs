//! Resonant van der Waals interaction of the moving pair: the static
//! energy, its Doppler-shifted counterpart, the retardation-window and
//! propagation-lag corrections, and the gradient force they produce.
//!
//! All four energy pieces share one radial shape, a pair of oscillating
//! profiles weighted by the projector contraction scalars. The
//! Doppler-shifted piece is that same shape with the wavenumber, the
//! coupling strength and the interference phase substituted; keeping a
//! single code path for the shape makes the substitution exact by
//! construction.

use crate::dipole_avg::{contraction_scalars, ContractionScalars, CouplingU, Orientation};
use crate::vec3::{self, Vec3};
use crate::{limits, Error};

/// Whether oscillating interference terms are averaged over the
/// observation time or kept at their instantaneous value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Drop terms oscillating in the observation time.
    TimeAveraged,
    /// Keep the interference terms at the given observation time.
    Instantaneous,
}

/// Separation regime selector for closed-form asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `x` well below one reduced wavelength.
    Near,
    /// `x` well above one reduced wavelength.
    Far,
}

/// Kinematic and spectral state of the atom pair, in reduced units.
///
/// The excited atom A sits at the origin of the relative frame; the
/// ground-state atom B is displaced by `x r_hat` and recedes with radial
/// speed `beta_r` (negative when approaching) and transverse speed
/// `beta_perp` along `e_perp`.
#[derive(Debug, Clone, Copy)]
pub struct PairState {
    /// Reduced separation `k_A R`.
    pub x: f64,
    /// Unit vector from A to B.
    pub r_hat: Vec3,
    /// Wavenumber ratio `k_B / k_A`.
    pub rho: f64,
    /// Radial velocity over `c`, positive when receding.
    pub beta_r: f64,
    /// Transverse speed over `c`, non-negative.
    pub beta_perp: f64,
    /// Unit direction of the transverse velocity, orthogonal to `r_hat`.
    pub e_perp: Vec3,
    /// Observation time in units of `1 / (c k_A)`.
    pub t_red: f64,
    /// Signed dipole coupling strength.
    pub coupling: CouplingU,
    /// Linewidth of atom A in units of `c k_A`.
    pub gamma_a_red: f64,
    /// Linewidth of atom B in units of `c k_A`.
    pub gamma_b_red: f64,
}

/// First-order Doppler substitution produced by the radial motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerShift {
    /// Shifted wavenumber over `k_A`: `1 - beta_r`.
    pub k_a_factor: f64,
    /// Shifted reduced detuning: `(1 - rho) - rho beta_r`.
    pub delta_red: f64,
    /// Ratio of shifted to static coupling strength:
    /// `(1 - rho) / delta_red`.
    pub coupling_factor: f64,
}

impl PairState {
    /// Validates and builds a pair state from the full relative velocity
    /// vector (units of `c`). The radial/transverse split is derived.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x: f64,
        r_hat: Vec3,
        beta: Vec3,
        rho: f64,
        coupling: CouplingU,
        t_red: f64,
        gamma_a_red: f64,
        gamma_b_red: f64,
    ) -> Result<Self, Error> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "reduced separation must be positive and finite, got {x}"
            )));
        }
        if x < limits::KR_MIN {
            return Err(Error::DomainUnderflow(x));
        }
        let r_hat = vec3::require_unit(r_hat)?;
        if beta.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("velocity must be finite".into()));
        }
        let speed = vec3::norm(beta);
        if speed >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "relative speed {speed} is not below the speed of light"
            )));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidInput(format!(
                "wavenumber ratio must be positive and finite, got {rho}"
            )));
        }
        if rho == 1.0 {
            return Err(Error::InvalidInput(
                "zero detuning: wavenumber ratio must differ from 1".into(),
            ));
        }
        let expected_sign: i8 = if rho < 1.0 { 1 } else { -1 };
        if coupling.sign != expected_sign {
            return Err(Error::InvalidInput(
                "coupling sign is inconsistent with the detuning sign".into(),
            ));
        }
        if !(t_red.is_finite() && t_red > 0.0) {
            return Err(Error::InvalidInput(format!(
                "observation time must be positive and finite, got {t_red}"
            )));
        }
        for (name, g) in [("gamma_a", gamma_a_red), ("gamma_b", gamma_b_red)] {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be non-negative and finite, got {g}"
                )));
            }
        }
        let beta_r = vec3::dot(beta, r_hat);
        let perp_vec = vec3::sub(beta, vec3::scale(r_hat, beta_r));
        let beta_perp = vec3::norm(perp_vec);
        // Below the resolvable floor the transverse direction is moot;
        // pick any completion of the frame.
        let e_perp = if beta_perp > 1e-300 {
            vec3::scale(perp_vec, 1.0 / beta_perp)
        } else {
            vec3::any_orthonormal(r_hat)
        };
        Ok(Self {
            x,
            r_hat,
            rho,
            beta_r,
            beta_perp,
            e_perp,
            t_red,
            coupling,
            gamma_a_red,
            gamma_b_red,
        })
    }

    /// Reduced detuning `1 - rho`.
    pub fn delta_red(&self) -> f64 {
        1.0 - self.rho
    }

    /// Signed coupling strength.
    pub fn u_value(&self) -> f64 {
        self.coupling.value
    }

    /// Relative velocity vector in units of `c`.
    pub fn beta_vec(&self) -> Vec3 {
        vec3::add(
            vec3::scale(self.r_hat, self.beta_r),
            vec3::scale(self.e_perp, self.beta_perp),
        )
    }

    /// Transverse part of the velocity vector.
    pub fn beta_perp_vec(&self) -> Vec3 {
        vec3::scale(self.e_perp, self.beta_perp)
    }

    /// Separation vector from A to B.
    pub fn y_vec(&self) -> Vec3 {
        vec3::scale(self.r_hat, self.x)
    }

    /// First-order Doppler substitution. Errors on the detuning pole,
    /// where the shifted emission of A comes to exact resonance with B.
    pub fn doppler_shift(&self) -> Result<DopplerShift, Error> {
        let delta = self.delta_red() - self.rho * self.beta_r;
        let scale = self.delta_red().abs() + self.rho * self.beta_r.abs();
        if delta.abs() <= 1e-12 * scale {
            return Err(Error::DetuningPole {
                beta_r: self.beta_r,
                rho: self.rho,
            });
        }
        Ok(DopplerShift {
            k_a_factor: 1.0 - self.beta_r,
            delta_red: delta,
            coupling_factor: self.delta_red() / delta,
        })
    }

    /// Checks that light can complete the round trip within the
    /// observation time, which is what switches on the retarded
    /// response of the window term.
    pub fn require_causal(&self) -> Result<(), Error> {
        let lhs = self.t_red * (1.0 + self.beta_r);
        let rhs = 2.0 * self.x;
        if lhs <= rhs {
            return Err(Error::CausalityViolated { lhs, rhs });
        }
        Ok(())
    }

    /// Separation regime of this state.
    pub fn regime_label(&self) -> &'static str {
        if self.x < limits::X_NEAR {
            "near"
        } else if self.x > limits::X_FAR {
            "far"
        } else {
            "crossover"
        }
    }

    /// Human-readable list of violated physical validity windows.
    /// Empty when the quasi-resonant description applies.
    pub fn validity_report(&self) -> Vec<String> {
        let mut v = Vec::new();
        let delta = self.delta_red().abs();
        for (name, g) in [("gamma_a", self.gamma_a_red), ("gamma_b", self.gamma_b_red)] {
            if g >= delta {
                v.push(format!(
                    "{name} = {g:.3e} is not below the reduced detuning {delta:.3e}"
                ));
            }
        }
        if delta >= 0.5 {
            v.push(format!(
                "reduced detuning {delta:.3} is not small against the transition frequency"
            ));
        }
        let beat = std::f64::consts::TAU / delta;
        if self.t_red <= beat {
            v.push(format!(
                "observation time {:.3e} does not exceed the detuning beat period {beat:.3e}",
                self.t_red
            ));
        }
        let gmax = self.gamma_a_red.max(self.gamma_b_red);
        if gmax > 0.0 && self.t_red >= std::f64::consts::TAU / gmax {
            v.push(format!(
                "observation time {:.3e} reaches the decay window {:.3e}",
                self.t_red,
                std::f64::consts::TAU / gmax
            ));
        }
        v
    }
}

/// The four pieces of the pair interaction energy, reduced units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// Static resonant energy (no motion).
    pub w_zero: f64,
    /// Doppler-shifted energy (motion folded into the exchanged
    /// wavenumber, detuning and coupling strength).
    pub w_doppler: f64,
    /// Retardation-window correction from the moving horizon.
    pub w_theta: f64,
    /// Propagation-lag correction.
    pub w_lag: f64,
}

impl EnergyBreakdown {
    /// Velocity-dependent energy shift, referenced to the static energy.
    pub fn total_shift(&self) -> f64 {
        self.w_doppler - self.w_zero + self.w_theta + self.w_lag
    }
}

/// An energy value bundled with the partials the force assembly needs.
#[derive(Debug, Clone, Copy, Default)]
struct EnergyDerivs {
    value: f64,
    d_x: f64,
    d_beta_r: f64,
    d_cbb: f64,
    d_cab: f64,
    d_caa: f64,
}

impl EnergyDerivs {
    fn sub(self, o: Self) -> Self {
        Self {
            value: self.value - o.value,
            d_x: self.d_x - o.d_x,
            d_beta_r: self.d_beta_r - o.d_beta_r,
            d_cbb: self.d_cbb - o.d_cbb,
            d_cab: self.d_cab - o.d_cab,
            d_caa: self.d_caa - o.d_caa,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            d_x: self.d_x + o.d_x,
            d_beta_r: self.d_beta_r + o.d_beta_r,
            d_cbb: self.d_cbb + o.d_cbb,
            d_cab: self.d_cab + o.d_cab,
            d_caa: self.d_caa + o.d_caa,
        }
    }
}

/// Output of the shared radial energy shape, with partials in the
/// shape's own parameters. `d_f` differentiates in the frequency at
/// fixed phase, `d_phi` in the phase offset.
#[derive(Debug, Clone, Copy)]
struct ShapeOut {
    value: f64,
    d_x: f64,
    d_f: f64,
    d_phi: f64,
    d_cbb: f64,
    d_cab: f64,
    d_caa: f64,
}

/// The common radial energy shape:
///
/// `uf * [ (2/x^6) B1(f x) cos(2 f x + phi) + (4 f / x^5) B2(f x) sin(2 f x + phi) ]`
///
/// with `B1(w) = c_bb - w^2 (c_bb + 2 c_ab) + w^4 c_aa` and
/// `B2(w) = c_bb - w^2 c_ab`. Every interaction energy in this module is
/// an instance of this shape with substituted parameters.
fn energy_shape(f: f64, phi: f64, x: f64, cs: &ContractionScalars, uf: f64) -> ShapeOut {
    let w = f * x;
    let w2 = w * w;
    let b1 = cs.c_bb - w2 * (cs.c_bb + 2.0 * cs.c_ab) + w2 * w2 * cs.c_aa;
    let b1p = -2.0 * w * (cs.c_bb + 2.0 * cs.c_ab) + 4.0 * w * w2 * cs.c_aa;
    let b2 = cs.c_bb - w2 * cs.c_ab;
    let b2p = -2.0 * w * cs.c_ab;
    let (s, c) = (2.0 * w + phi).sin_cos();
    let x4 = x.powi(4);
    let x5 = x4 * x;
    let x6 = x5 * x;
    let x7 = x6 * x;
    let value = uf * (2.0 / x6 * b1 * c + 4.0 * f / x5 * b2 * s);
    let d_x = uf
        * (-12.0 / x7 * b1 * c + 2.0 / x6 * b1p * f * c - 4.0 * f / x6 * b1 * s
            - 20.0 * f / x6 * b2 * s
            + 4.0 * f * f / x5 * b2p * s
            + 8.0 * f * f / x5 * b2 * c);
    let d_f = uf
        * (2.0 / x5 * b1p * c - 4.0 / x5 * b1 * s
            + 4.0 / x5 * b2 * s
            + 4.0 * f / x4 * b2p * s
            + 8.0 * f / x4 * b2 * c);
    let d_phi = uf * (-2.0 / x6 * b1 * s + 4.0 * f / x5 * b2 * c);
    let d_cbb = uf * (2.0 / x6 * (1.0 - w2) * c + 4.0 * f / x5 * s);
    let d_cab = uf * (2.0 / x6 * (-2.0 * w2) * c + 4.0 * f / x5 * (-w2) * s);
    let d_caa = uf * (2.0 / x6 * w2 * w2 * c);
    ShapeOut {
        value,
        d_x,
        d_f,
        d_phi,
        d_cbb,
        d_cab,
        d_caa,
    }
}

/// Static pair energy with partials.
fn w_zero_derivs(state: &PairState, cs: &ContractionScalars, mode: EvalMode) -> EnergyDerivs {
    let u = state.u_value();
    let t = energy_shape(1.0, 0.0, state.x, cs, u);
    let mut out = EnergyDerivs {
        value: t.value,
        d_x: t.d_x,
        d_beta_r: 0.0,
        d_cbb: t.d_cbb,
        d_cab: t.d_cab,
        d_caa: t.d_caa,
    };
    if mode == EvalMode::Instantaneous {
        // Interference terms oscillate at the partner wavenumber with a
        // detuning-beat phase; they carry no velocity dependence here.
        let p = energy_shape(state.rho, state.delta_red() * state.t_red, state.x, cs, u);
        out = out.sub(EnergyDerivs {
            value: p.value,
            d_x: p.d_x,
            d_beta_r: 0.0,
            d_cbb: p.d_cbb,
            d_cab: p.d_cab,
            d_caa: p.d_caa,
        });
    }
    out
}

/// Doppler-shifted pair energy with partials. The shift substitutes the
/// exchanged wavenumber, the detuning entering the interference phase,
/// and the coupling strength, all to first order in the radial velocity.
fn w_doppler_derivs(
    state: &PairState,
    cs: &ContractionScalars,
    mode: EvalMode,
) -> Result<EnergyDerivs, Error> {
    let ds = state.doppler_shift()?;
    let u_tilde = state.u_value() * ds.coupling_factor;
    // d(u_tilde)/d(beta_r) = u_tilde * rho / delta_red.
    let du_fac = state.rho / ds.delta_red;
    let t = energy_shape(ds.k_a_factor, 0.0, state.x, cs, u_tilde);
    let mut out = EnergyDerivs {
        value: t.value,
        d_x: t.d_x,
        d_beta_r: -t.d_f + t.value * du_fac,
        d_cbb: t.d_cbb,
        d_cab: t.d_cab,
        d_caa: t.d_caa,
    };
    if mode == EvalMode::Instantaneous {
        let p = energy_shape(
            state.rho,
            ds.delta_red * state.t_red,
            state.x,
            cs,
            u_tilde,
        );
        // The interference phase advances with the shifted detuning:
        // d(phi)/d(beta_r) = -rho T.
        out = out.sub(EnergyDerivs {
            value: p.value,
            d_x: p.d_x,
            d_beta_r: p.d_phi * (-state.rho * state.t_red) + p.value * du_fac,
            d_cbb: p.d_cbb,
            d_cab: p.d_cab,
            d_caa: p.d_caa,
        });
    }
    Ok(out)
}

/// Retardation-window correction with partials. Linear in the radial
/// velocity; defined only once the causal round trip fits inside the
/// observation time.
fn w_theta_derivs(state: &PairState, cs: &ContractionScalars) -> Result<EnergyDerivs, Error> {
    state.require_causal()?;
    let x = state.x;
    let rho = state.rho;
    let u = state.u_value();
    let w = rho * x;
    let w2 = w * w;
    let b1 = cs.c_bb - w2 * (cs.c_bb + 2.0 * cs.c_ab) + w2 * w2 * cs.c_aa;
    let b1p = -2.0 * w * (cs.c_bb + 2.0 * cs.c_ab) + 4.0 * w * w2 * cs.c_aa;
    let b2 = cs.c_bb - w2 * cs.c_ab;
    let b2p = -2.0 * w * cs.c_ab;
    let (s, c) = (2.0 * x).sin_cos();
    let x4 = x.powi(4);
    let x5 = x4 * x;
    let x6 = x5 * x;
    let pref = u * state.delta_red();
    let g = 2.0 * b1 * s / x5 - 4.0 * rho * b2 * c / x4;
    let gp = 2.0 * (b1p * rho * s + 2.0 * b1 * c) / x5 - 10.0 * b1 * s / x6
        - 4.0 * rho * (b2p * rho * c - 2.0 * b2 * s) / x4
        + 16.0 * rho * b2 * c / x5;
    Ok(EnergyDerivs {
        value: pref * state.beta_r * g,
        d_x: pref * state.beta_r * gp,
        d_beta_r: pref * g,
        d_cbb: pref * state.beta_r * (2.0 * (1.0 - w2) * s / x5 - 4.0 * rho * c / x4),
        d_cab: pref * state.beta_r * (-4.0 * w2 * s / x5 + 4.0 * rho * w2 * c / x4),
        d_caa: pref * state.beta_r * (2.0 * w2 * w2 * s / x5),
    })
}

/// Propagation-lag correction with partials. Linear in the radial
/// velocity and regular at every separation in the supported domain.
fn w_lag_derivs(state: &PairState, cs: &ContractionScalars) -> EnergyDerivs {
    let x = state.x;
    let delta = state.delta_red();
    let u = state.u_value();
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let x6 = x5 * x;
    let x7 = x6 * x;
    let (s, c) = (2.0 * x).sin_cos();
    let l1 = 3.0 * cs.c_bb / x6 + 2.0 * (cs.c_bb + 2.0 * cs.c_ab) / x4 + cs.c_aa / x2;
    let l2 = 5.0 * cs.c_bb / x5 - 3.0 * cs.c_ab / x3;
    let l1p = -18.0 * cs.c_bb / x7 - 8.0 * (cs.c_bb + 2.0 * cs.c_ab) / x5 - 2.0 * cs.c_aa / x3;
    let l2p = -25.0 * cs.c_bb / x6 + 9.0 * cs.c_ab / x4;
    let a = 2.0 * delta * x * c - s;
    let b = 2.0 * delta * x * s + c;
    let ap = 2.0 * delta * c - 4.0 * delta * x * s - 2.0 * c;
    let bp = 2.0 * delta * s + 4.0 * delta * x * c - 2.0 * s;
    let pref = 2.0 * u / delta;
    let bracket = a * l1 - b * l2;
    let value_over_beta = pref / x * bracket;
    let d_x_over_beta =
        pref * (-bracket / x2 + (ap * l1 + a * l1p - bp * l2 - b * l2p) / x);
    let dl1 = [3.0 / x6 + 2.0 / x4, 4.0 / x4, 1.0 / x2];
    let dl2 = [5.0 / x5, -3.0 / x3, 0.0];
    let br = state.beta_r;
    EnergyDerivs {
        value: br * value_over_beta,
        d_x: br * d_x_over_beta,
        d_beta_r: value_over_beta,
        d_cbb: br * pref / x * (a * dl1[0] - b * dl2[0]),
        d_cab: br * pref / x * (a * dl1[1] - b * dl2[1]),
        d_caa: br * pref / x * (a * dl1[2] - b * dl2[2]),
    }
}

/// Static resonant pair energy.
pub fn w_zero(state: &PairState, orientation: &Orientation, mode: EvalMode) -> Result<f64, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    Ok(w_zero_derivs(state, &cs, mode).value)
}

/// Doppler-shifted pair energy.
pub fn w_doppler(
    state: &PairState,
    orientation: &Orientation,
    mode: EvalMode,
) -> Result<f64, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    Ok(w_doppler_derivs(state, &cs, mode)?.value)
}

/// Retardation-window energy correction (mode-independent).
pub fn w_theta(state: &PairState, orientation: &Orientation) -> Result<f64, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    Ok(w_theta_derivs(state, &cs)?.value)
}

/// Propagation-lag energy correction (mode-independent).
pub fn w_lag(state: &PairState, orientation: &Orientation) -> Result<f64, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    Ok(w_lag_derivs(state, &cs).value)
}

/// All four energy pieces at once.
pub fn energy_breakdown(
    state: &PairState,
    orientation: &Orientation,
    mode: EvalMode,
) -> Result<EnergyBreakdown, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    Ok(EnergyBreakdown {
        w_zero: w_zero_derivs(state, &cs, mode).value,
        w_doppler: w_doppler_derivs(state, &cs, mode)?.value,
        w_theta: w_theta_derivs(state, &cs)?.value,
        w_lag: w_lag_derivs(state, &cs).value,
    })
}

/// Turns energy partials into the gradient force `-grad(W)/2`, chaining
/// through the state quantities that vary with the separation vector at
/// fixed velocity and fixed dipole directions.
fn force_from_derivs(state: &PairState, orientation: &Orientation, d: &EnergyDerivs) -> Vec3 {
    let mut grad = vec3::scale(state.r_hat, d.d_x);
    // beta_r = beta . r_hat varies across the sphere of directions:
    // grad(beta_r) = beta_perp_vec / x.
    grad = vec3::add(
        grad,
        vec3::scale(state.beta_perp_vec(), d.d_beta_r / state.x),
    );
    if let Orientation::Fixed { mu_a, mu_b } = orientation {
        let p = vec3::dot(*mu_a, state.r_hat);
        let q = vec3::dot(*mu_b, state.r_hat);
        let m = vec3::dot(*mu_a, *mu_b);
        let dcbb_dp = -6.0 * q * (m - 3.0 * p * q);
        let dcbb_dq = -6.0 * p * (m - 3.0 * p * q);
        let dcab_dp = -q * (4.0 * m - 6.0 * p * q);
        let dcab_dq = -p * (4.0 * m - 6.0 * p * q);
        let dcaa_dp = -2.0 * q * (m - p * q);
        let dcaa_dq = -2.0 * p * (m - p * q);
        let grad_p = vec3::scale(
            vec3::sub(*mu_a, vec3::scale(state.r_hat, p)),
            1.0 / state.x,
        );
        let grad_q = vec3::scale(
            vec3::sub(*mu_b, vec3::scale(state.r_hat, q)),
            1.0 / state.x,
        );
        let cp = d.d_cbb * dcbb_dp + d.d_cab * dcab_dp + d.d_caa * dcaa_dp;
        let cq = d.d_cbb * dcbb_dq + d.d_cab * dcab_dq + d.d_caa * dcaa_dq;
        grad = vec3::add(grad, vec3::add(vec3::scale(grad_p, cp), vec3::scale(grad_q, cq)));
    }
    vec3::scale(grad, -0.5)
}

/// Per-mechanism gradient forces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdwForceParts {
    /// From the Doppler-shifted energy referenced to the static one.
    pub doppler: Vec3,
    /// From the retardation-window correction.
    pub theta: Vec3,
    /// From the propagation-lag correction.
    pub lag: Vec3,
}

impl VdwForceParts {
    pub fn total(&self) -> Vec3 {
        vec3::add(vec3::add(self.doppler, self.theta), self.lag)
    }
}

/// Gradient force from each energy mechanism separately.
pub fn vdw_force_components(
    state: &PairState,
    orientation: &Orientation,
    mode: EvalMode,
) -> Result<VdwForceParts, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    let dop = w_doppler_derivs(state, &cs, mode)?.sub(w_zero_derivs(state, &cs, mode));
    let theta = w_theta_derivs(state, &cs)?;
    let lag = w_lag_derivs(state, &cs);
    Ok(VdwForceParts {
        doppler: force_from_derivs(state, orientation, &dop),
        theta: force_from_derivs(state, orientation, &theta),
        lag: force_from_derivs(state, orientation, &lag),
    })
}

/// Total velocity-dependent gradient force,
/// `-grad(w_doppler - w_zero + w_theta + w_lag) / 2`.
pub fn vdw_force(
    state: &PairState,
    orientation: &Orientation,
    mode: EvalMode,
) -> Result<Vec3, Error> {
    let cs = contraction_scalars(orientation, state.r_hat)?;
    let d = w_doppler_derivs(state, &cs, mode)?
        .sub(w_zero_derivs(state, &cs, mode))
        .add(w_theta_derivs(state, &cs)?)
        .add(w_lag_derivs(state, &cs));
    Ok(force_from_derivs(state, orientation, &d))
}

/// Closed-form asymptotics of the total gradient force for isotropic
/// dipoles and radial motion. `Near` is the leading inverse-seventh
/// power law, `Far` the oscillating inverse-square envelope.
pub fn vdw_force_asymptotic(state: &PairState, regime: Regime) -> Result<Vec3, Error> {
    let x = state.x;
    let u = state.u_value();
    let delta = state.delta_red();
    let magnitude = match regime {
        Regime::Near => -20.0 * u * (1.0 + state.rho) * state.beta_r / (delta * x.powi(7)),
        Regime::Far => {
            let (s, c) = (2.0 * x).sin_cos();
            4.0 * u * state.rho * state.beta_r / (9.0 * x * x * delta) * (s - 2.0 * delta * x * c)
        }
    };
    Ok(vec3::scale(state.r_hat, magnitude))
}
