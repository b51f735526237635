//! Conversion between SI inputs and the engine's reduced units.
//!
//! With `k_A = omega_a / c` the transition wavenumber of the excited atom:
//! separations reduce as `x = k_A R`, velocities as `beta = v / c`, times
//! as `t = omega_a T`, decay rates as `gamma / omega_a`, sheet densities
//! as `sigma / k_A^2`. The dipole coupling strength
//!
//! `U = mu_a^2 mu_b^2 / ((4 pi eps0)^2 hbar |omega_a - omega_b|)`
//!
//! carries the SI magnitude; the engine works with a unit coupling whose
//! sign tracks the sign of the detuning, so energies convert with
//! `U k_A^6` and forces with `U k_A^7`.

use crate::config::{Atoms, ValidityMode};
use vdforce::{CouplingU, PairState, PlateConfig, Vec3};

pub const C_MPS: f64 = 2.997_924_58e8;
pub const HBAR_JS: f64 = 1.054_571_817e-34;
pub const EPS0_F_PER_M: f64 = 8.854_187_8128e-12;

/// Multiplicative scales taking reduced engine outputs back to SI.
#[derive(Debug, Clone, Copy)]
pub struct UnitScales {
    /// Transition wavenumber of atom A, 1/m.
    pub k_a_per_m: f64,
    /// Coupling strength magnitude, J m^6.
    pub coupling_j_m6: f64,
    /// One reduced energy unit, J.
    pub energy_j: f64,
    /// One reduced force unit, N.
    pub force_n: f64,
    /// One reduced time unit, s.
    pub time_s: f64,
}

/// Validated SI atom data plus the validity-checking mode.
pub struct Reducer {
    atoms: Atoms,
    mode: ValidityMode,
}

impl Reducer {
    pub fn new(atoms: Atoms, mode: ValidityMode) -> anyhow::Result<Self> {
        for (name, v) in [
            ("omega_a", atoms.omega_a),
            ("omega_b", atoms.omega_b),
            ("mu_a", atoms.mu_a),
            ("mu_b", atoms.mu_b),
            ("gamma_a", atoms.gamma_a),
            ("gamma_b", atoms.gamma_b),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                anyhow::bail!("atoms.{name} must be positive and finite, got {v:e}");
            }
        }
        if atoms.omega_a == atoms.omega_b {
            anyhow::bail!(
                "omega_a and omega_b coincide; the degenerate pair has no \
                 well-defined quasi-resonant coupling sign. Detune the pair."
            );
        }
        Ok(Reducer { atoms, mode })
    }

    pub fn rho(&self) -> f64 {
        self.atoms.omega_b / self.atoms.omega_a
    }

    fn detuning(&self) -> f64 {
        (self.atoms.omega_a - self.atoms.omega_b).abs()
    }

    pub fn scales(&self) -> UnitScales {
        let k = self.atoms.omega_a / C_MPS;
        let four_pi_eps0 = 4.0 * std::f64::consts::PI * EPS0_F_PER_M;
        let mu2 = self.atoms.mu_a.powi(2) * self.atoms.mu_b.powi(2);
        let coupling = mu2 / (four_pi_eps0.powi(2) * HBAR_JS * self.detuning());
        UnitScales {
            k_a_per_m: k,
            coupling_j_m6: coupling,
            energy_j: coupling * k.powi(6),
            force_n: coupling * k.powi(7),
            time_s: 1.0 / self.atoms.omega_a,
        }
    }

    /// Default observation time: the geometric mean of the two edges of
    /// the admissible window, `2 pi / |detuning|` below and a fraction of
    /// `2 pi / gamma` above.
    pub fn default_time_s(&self) -> f64 {
        let gamma_max = self.atoms.gamma_a.max(self.atoms.gamma_b);
        2.0 * std::f64::consts::PI / (self.detuning() * gamma_max).sqrt()
    }

    /// Enforces the physical windows the force expressions assume. In
    /// strict mode a violation is an error; otherwise it is a warning.
    fn check_windows(&self, t_si: f64, beta: f64) -> anyhow::Result<()> {
        let a = &self.atoms;
        let delta = self.detuning();
        let gamma_max = a.gamma_a.max(a.gamma_b);
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut violations = Vec::new();
        if a.gamma_a >= delta || a.gamma_b >= delta {
            violations.push(format!(
                "decay rates must sit below the detuning: gamma_a = {:e}, \
                 gamma_b = {:e}, |omega_a - omega_b| = {delta:e}",
                a.gamma_a, a.gamma_b
            ));
        }
        if delta > 0.1 * a.omega_a.min(a.omega_b) {
            violations.push(format!(
                "the pair must be quasi-resonant: |omega_a - omega_b| = \
                 {delta:e} exceeds a tenth of the smaller frequency"
            ));
        }
        if t_si <= two_pi / delta {
            violations.push(format!(
                "observation time {t_si:e} s has not averaged over a beat \
                 period 2 pi / |detuning| = {:e} s",
                two_pi / delta
            ));
        }
        if t_si > 0.1 * two_pi / gamma_max {
            violations.push(format!(
                "observation time {t_si:e} s approaches the decay window \
                 2 pi / gamma = {:e} s; the excited population is not static",
                two_pi / gamma_max
            ));
        }
        if beta > 0.01 {
            violations.push(format!(
                "speed ratio v/c = {beta:e} strains the first-order-in-velocity \
                 treatment"
            ));
        }
        for v in &violations {
            match self.mode {
                ValidityMode::Strict => anyhow::bail!("validity window violated: {v}"),
                ValidityMode::Warn => eprintln!("warning: {v}"),
            }
        }
        Ok(())
    }

    /// Reduced pair state for one SI configuration. Returns the state and
    /// the observation time actually used, in seconds.
    pub fn pair_state(
        &self,
        separation_m: f64,
        velocity_mps: Vec3,
        direction: Vec3,
        observation_time_s: Option<f64>,
    ) -> anyhow::Result<(PairState, f64)> {
        if !(separation_m > 0.0) {
            anyhow::bail!("separation_m must be positive, got {separation_m:e}");
        }
        let n = vdforce::vec3::norm(direction);
        if n == 0.0 {
            anyhow::bail!("direction must be a nonzero vector");
        }
        let r_hat = vdforce::vec3::scale(direction, 1.0 / n);
        let speed = vdforce::vec3::norm(velocity_mps);
        if speed >= C_MPS {
            anyhow::bail!("speed {speed:e} m/s is not below the speed of light");
        }
        let t_si = observation_time_s.unwrap_or_else(|| self.default_time_s());
        if !(t_si > 0.0) {
            anyhow::bail!("observation_time_s must be positive, got {t_si:e}");
        }
        self.check_windows(t_si, speed / C_MPS)?;
        let scales = self.scales();
        let rho = self.rho();
        let coupling = CouplingU::new(1.0, rho).map_err(anyhow::Error::from)?;
        let state = PairState::new(
            scales.k_a_per_m * separation_m,
            r_hat,
            vdforce::vec3::scale(velocity_mps, 1.0 / C_MPS),
            rho,
            coupling,
            t_si / scales.time_s,
            self.atoms.gamma_a / self.atoms.omega_a,
            self.atoms.gamma_b / self.atoms.omega_a,
        )?;
        Ok((state, t_si))
    }

    /// Reduced plate configuration for one SI configuration.
    pub fn plate_config(
        &self,
        height_m: f64,
        speed_mps: f64,
        area_density_per_m2: f64,
        observation_time_s: Option<f64>,
    ) -> anyhow::Result<(PlateConfig, f64)> {
        if !(height_m > 0.0) {
            anyhow::bail!("height_m must be positive, got {height_m:e}");
        }
        if !(area_density_per_m2 > 0.0) {
            anyhow::bail!("area_density_per_m2 must be positive");
        }
        if speed_mps < 0.0 || speed_mps >= C_MPS {
            anyhow::bail!("speed_mps must lie in [0, c), got {speed_mps:e}");
        }
        let t_si = observation_time_s.unwrap_or_else(|| self.default_time_s());
        if !(t_si > 0.0) {
            anyhow::bail!("observation_time_s must be positive, got {t_si:e}");
        }
        self.check_windows(t_si, speed_mps / C_MPS)?;
        let scales = self.scales();
        let rho = self.rho();
        let coupling = CouplingU::new(1.0, rho).map_err(anyhow::Error::from)?;
        let cfg = PlateConfig::new(
            scales.k_a_per_m * height_m,
            area_density_per_m2 / scales.k_a_per_m.powi(2),
            speed_mps / C_MPS,
            rho,
            coupling,
            t_si / scales.time_s,
            self.atoms.gamma_a / self.atoms.omega_a,
            self.atoms.gamma_b / self.atoms.omega_a,
        )?;
        Ok((cfg, t_si))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms() -> Atoms {
        Atoms {
            omega_a: 2.0e15,
            omega_b: 1.96e15,
            mu_a: 1.0e-29,
            mu_b: 8.0e-30,
            gamma_a: 1.0e7,
            gamma_b: 1.2e7,
        }
    }

    #[test]
    fn scales_match_frozen_reference() {
        let r = Reducer::new(atoms(), ValidityMode::Warn).unwrap();
        let s = r.scales();
        assert!((s.k_a_per_m / 6.67128190396304e6 - 1.0).abs() < 1e-12);
        assert!((s.coupling_j_m6 / 1.225537582801942e-76 - 1.0).abs() < 1e-12);
        assert!((s.force_n / 7.207616705250548e-29 - 1.0).abs() < 1e-12);
        assert!((s.energy_j / 1.0803945641944617e-35 - 1.0).abs() < 1e-12);
        assert!((r.rho() - 0.98).abs() < 1e-15);
    }

    #[test]
    fn pair_reduction_round_trips() {
        let r = Reducer::new(atoms(), ValidityMode::Warn).unwrap();
        let s = r.scales();
        let (state, t_si) = r
            .pair_state(1.0e-8, [30.0, 0.0, 40.0], [0.0, 0.0, 1.0], Some(2.9e-10))
            .unwrap();
        assert!((state.x / (s.k_a_per_m * 1.0e-8) - 1.0).abs() < 1e-12);
        // Reduced back to SI.
        assert!((state.x / s.k_a_per_m / 1.0e-8 - 1.0).abs() < 1e-12);
        let speed = vdforce::vec3::norm(state.beta_vec()) * C_MPS;
        assert!((speed / 50.0 - 1.0).abs() < 1e-12);
        assert!((state.t_red * s.time_s / t_si - 1.0).abs() < 1e-12);
        assert!((state.beta_r * C_MPS / 40.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let mut a = atoms();
        a.omega_b = a.omega_a;
        assert!(Reducer::new(a, ValidityMode::Warn).is_err());
    }

    #[test]
    fn default_time_is_the_window_geometric_mean() {
        let r = Reducer::new(atoms(), ValidityMode::Warn).unwrap();
        let expected = 2.0 * std::f64::consts::PI / (4.0e13f64 * 1.2e7).sqrt();
        assert!((r.default_time_s() / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strict_mode_rejects_window_violations() {
        let strict = Reducer::new(atoms(), ValidityMode::Strict).unwrap();
        // Observation time shorter than one beat period.
        let err = strict
            .pair_state(1.0e-8, [30.0, 0.0, 0.0], [0.0, 0.0, 1.0], Some(1.0e-15))
            .unwrap_err();
        assert!(err.to_string().contains("validity window"));
        // The same configuration passes in warn mode.
        let warn = Reducer::new(atoms(), ValidityMode::Warn).unwrap();
        assert!(warn
            .pair_state(1.0e-8, [30.0, 0.0, 0.0], [0.0, 0.0, 1.0], Some(1.0e-15))
            .is_ok());
    }

    #[test]
    fn plate_reduction_scales_the_density() {
        let r = Reducer::new(atoms(), ValidityMode::Warn).unwrap();
        let s = r.scales();
        let (cfg, _) = r.plate_config(1.0e-8, 30.0, 1.0e17, None).unwrap();
        assert!((cfg.d_red / (s.k_a_per_m * 1.0e-8) - 1.0).abs() < 1e-12);
        assert!((cfg.sigma_red * s.k_a_per_m.powi(2) / 1.0e17 - 1.0).abs() < 1e-12);
        assert!((cfg.beta * C_MPS / 30.0 - 1.0).abs() < 1e-12);
    }
}
