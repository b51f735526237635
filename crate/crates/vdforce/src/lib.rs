//! Velocity-dependent dispersion forces on an excited two-level atom moving
//! relative to a ground-state partner atom or a dilute sheet of such atoms.
//!
//! The crate evaluates, in one consistent framework:
//!
//! * the resonant van der Waals interaction energy of the moving pair,
//!   split into its Doppler-shifted, retardation-window and lag pieces,
//! * the force obtained from the gradient of that energy,
//! * the conservative and non-conservative parts of the Rontgen force,
//!   a velocity-induced coupling between the atomic dipoles and the
//!   magnetic part of the field they exchange,
//! * closed-form and numerically integrated forces on an atom moving
//!   parallel to a dilute plate of ground-state atoms,
//! * independent numerical oracles (residue vs. quadrature, finite
//!   differences, Monte Carlo orientation averages, plate quadrature)
//!   used by the test suite and the `verify` CLI subcommand.
//!
//! # Units
//!
//! All engine quantities are dimensionless. With `k_A` the transition
//! wavenumber of the excited atom A and `c` the speed of light:
//!
//! * separations appear as `x = k_A * R`,
//! * velocities as `beta = v / c` (`beta_r > 0` means the atoms recede),
//! * the partner wavenumber as `rho = k_B / k_A`,
//! * times as `T` in units of `1 / (c k_A)`,
//! * energies in units of `U * k_A^6` and forces in `U * k_A^7`, where
//!   `U` is the signed dipole coupling strength carried by [`CouplingU`].
//!
//! Conversion to SI happens only at the command-line layer.

pub mod dipole_avg;
pub mod dyadic;
pub mod greens;
pub mod oracle;
pub mod plate;
pub mod quad;
pub mod roentgen;
pub mod vdw;
pub mod vec3;

pub use dipole_avg::{CouplingU, Orientation};
pub use dyadic::Dyadic3C;
pub use greens::LagCorrections;
pub use oracle::{FreqIntegral, Method, OracleReport};
pub use plate::PlateConfig;
pub use roentgen::RontgenResult;
pub use vdw::{EnergyBreakdown, EvalMode, PairState, Regime};
pub use vec3::Vec3;

/// Regime thresholds and numeric floors shared across the crate.
pub mod limits {
    /// Below this reduced separation the near-field expansions hold.
    pub const X_NEAR: f64 = 0.1;
    /// Above this reduced separation the far-field expansions hold.
    pub const X_FAR: f64 = 10.0;
    /// Hard floor on the reduced separation `|k| R`. The short-range cubic
    /// term grows as `(kR)^-3` and drowns double precision below this.
    pub const KR_MIN: f64 = 1e-8;
    /// Tolerance used when validating unit vectors supplied by callers.
    pub const UNIT_TOL: f64 = 1e-12;
    /// Floor protecting relative deviations against zero references.
    pub const REL_FLOOR: f64 = 1e-300;
}

/// Errors reported by the force engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A propagator was requested at zero separation.
    #[error("propagator evaluated at coincident points")]
    Singularity,
    /// The reduced separation `|k| R` fell below [`limits::KR_MIN`].
    #[error("reduced separation {0:.3e} underflows the supported domain")]
    DomainUnderflow(f64),
    /// A direction that must be normalized was not.
    #[error("vector norm {0:.6} where a unit vector is required")]
    NonUnitVector(f64),
    /// A parameter failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The Doppler-shifted detuning vanished; the quasi-resonant energy
    /// has a genuine pole there and no finite value exists.
    #[error("Doppler-shifted detuning vanishes at beta_r = {beta_r:.6e}, rho = {rho:.6}")]
    DetuningPole { beta_r: f64, rho: f64 },
    /// The observation time is too short for light to have made the round
    /// trip that switches on the retarded response.
    #[error("causality window violated: T (1 + beta_r) = {lhs:.6e} <= 2 x = {rhs:.6e}")]
    CausalityViolated { lhs: f64, rhs: f64 },
    /// An adaptive quadrature exhausted its budget before reaching the
    /// requested tolerance. The achieved estimate is carried along.
    #[error("quadrature reached {achieved:.3e} relative, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    /// A physical validity window was violated under strict checking.
    #[error("validity window violated: {0}")]
    Validity(String),
}

/// Per-mechanism decomposition of the total velocity-dependent force on
/// the excited atom, in reduced units of `U k_A^7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBreakdown {
    /// Gradient force from the Doppler-shifted pair energy, referenced to
    /// the static pair energy (the pure `v = 0` part is subtracted).
    pub vdw_doppler: Vec3,
    /// Gradient force from the propagation-lag energy correction.
    pub vdw_lag: Vec3,
    /// Gradient force from the moving retardation window.
    pub vdw_theta: Vec3,
    /// Conservative Rontgen force (a pure gradient).
    pub roentgen_conservative: Vec3,
    /// Non-conservative Rontgen force (not a gradient of any potential).
    pub roentgen_nonconservative: Vec3,
}

impl ForceBreakdown {
    /// Sum of all five mechanisms.
    pub fn total(&self) -> Vec3 {
        let mut t = [0.0; 3];
        for part in [
            self.vdw_doppler,
            self.vdw_lag,
            self.vdw_theta,
            self.roentgen_conservative,
            self.roentgen_nonconservative,
        ] {
            for (ti, pi) in t.iter_mut().zip(part) {
                *ti += pi;
            }
        }
        t
    }
}

/// Evaluates every force mechanism at the given pair state.
///
/// The van der Waals pieces follow the requested evaluation `mode`; the
/// Rontgen pieces are mode-independent at first order in the velocity.
pub fn total_force(
    state: &PairState,
    orientation: &Orientation,
    mode: EvalMode,
) -> Result<ForceBreakdown, Error> {
    let parts = vdw::vdw_force_components(state, orientation, mode)?;
    let rc = roentgen::roentgen_conservative(state, orientation)?;
    let rnc = roentgen::roentgen_nonconservative(state, orientation)?;
    Ok(ForceBreakdown {
        vdw_doppler: parts.doppler,
        vdw_lag: parts.lag,
        vdw_theta: parts.theta,
        roentgen_conservative: rc,
        roentgen_nonconservative: rnc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn breakdown_total_sums_all_parts() {
        let fb = ForceBreakdown {
            vdw_doppler: [1.0, 0.0, 0.0],
            vdw_lag: [0.0, 2.0, 0.0],
            vdw_theta: [0.0, 0.0, 3.0],
            roentgen_conservative: [0.5, 0.5, 0.5],
            roentgen_nonconservative: [-1.0, -1.0, -1.0],
        };
        let t = fb.total();
        assert_relative_eq!(t[0], 0.5);
        assert_relative_eq!(t[1], 1.5);
        assert_relative_eq!(t[2], 2.5);
    }
}
