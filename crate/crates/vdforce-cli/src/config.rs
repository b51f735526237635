//! TOML run configuration.
//!
//! All quantities in the file are SI: angular frequencies in rad/s, dipole
//! moments in C m, decay rates in 1/s, lengths in m, speeds in m/s, times
//! in s, sheet densities in atoms per m^2. Conversion to the engine's
//! reduced units happens in [`crate::reduce`].

use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub atoms: Atoms,
    pub geometry: Geometry,
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub output: Output,
    #[serde(default)]
    pub validity: Validity,
}

/// The two-level pair: atom A starts excited, atom B is the ground-state
/// partner (a single atom, or the species filling the sheet).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atoms {
    /// Transition angular frequency of the excited atom, rad/s.
    pub omega_a: f64,
    /// Transition angular frequency of the partner atom, rad/s. Must
    /// differ from `omega_a`; the engine treats the quasi-resonant,
    /// nondegenerate case.
    pub omega_b: f64,
    /// Transition dipole moment magnitude of atom A, C m.
    pub mu_a: f64,
    /// Transition dipole moment magnitude of atom B, C m.
    pub mu_b: f64,
    /// Spontaneous decay rate of atom A, 1/s.
    pub gamma_a: f64,
    /// Spontaneous decay rate of atom B, 1/s.
    pub gamma_b: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    /// One moving excited atom and one ground-state partner.
    Pair {
        /// Center-to-center separation, m.
        separation_m: f64,
        /// Velocity of A relative to B in lab coordinates, m/s.
        velocity_mps: [f64; 3],
        /// Unit vector from B to A. Defaults to +z.
        #[serde(default = "default_direction")]
        direction: [f64; 3],
        /// Interaction time since the pair was prepared, s. Defaults to
        /// the geometric mean of the two validity-window edges.
        observation_time_s: Option<f64>,
    },
    /// One excited atom moving parallel to a dilute sheet of partners.
    Plate {
        /// Distance from the sheet, m.
        height_m: f64,
        /// Speed parallel to the sheet, m/s.
        speed_mps: f64,
        /// Sheet number density, atoms per m^2.
        area_density_per_m2: f64,
        /// Interaction time, s. Same default as for a pair.
        observation_time_s: Option<f64>,
    },
}

fn default_direction() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Pair separation, m.
    Separation,
    /// Plate height, m.
    Height,
    /// Speed, m/s. Rescales the pair velocity vector or the plate speed.
    Speed,
    /// Frequency ratio omega_b / omega_a; overrides `omega_b`.
    Rho,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepScale {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    #[serde(default)]
    pub scale: SweepScale,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    /// The sweep grid, inclusive of both endpoints.
    pub fn values(&self) -> anyhow::Result<Vec<f64>> {
        if self.count < 2 {
            anyhow::bail!("sweep.count must be at least 2, got {}", self.count);
        }
        if self.scale == SweepScale::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            anyhow::bail!("log sweep bounds must be positive");
        }
        let n = self.count;
        Ok((0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    SweepScale::Log => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                    SweepScale::Linear => self.start + t * (self.stop - self.start),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub format: Format,
    /// Output file. Stdout when omitted.
    pub path: Option<PathBuf>,
    /// Include the per-mechanism force decomposition.
    #[serde(default = "default_true")]
    pub components: bool,
}

impl Default for Output {
    fn default() -> Self {
        Output {
            format: Format::Csv,
            path: None,
            components: true,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ValidityMode {
    /// Report window violations on stderr and keep going.
    #[default]
    Warn,
    /// Treat window violations as errors.
    Strict,
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Validity {
    #[serde(default)]
    pub mode: ValidityMode,
}

pub fn load(path: &std::path::Path) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
    let cfg: RunConfig = toml::from_str(&text)
        .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR_TOML: &str = r#"
[atoms]
omega_a = 2.0e15
omega_b = 1.96e15
mu_a = 1.0e-29
mu_b = 8.0e-30
gamma_a = 1.0e7
gamma_b = 1.2e7

[geometry]
kind = "pair"
separation_m = 1.0e-8
velocity_mps = [30.0, 0.0, 0.0]
"#;

    #[test]
    fn minimal_pair_config_parses_with_defaults() {
        let cfg: RunConfig = toml::from_str(PAIR_TOML).unwrap();
        match cfg.geometry {
            Geometry::Pair {
                direction,
                observation_time_s,
                ..
            } => {
                assert_eq!(direction, [0.0, 0.0, 1.0]);
                assert!(observation_time_s.is_none());
            }
            _ => panic!("expected pair geometry"),
        }
        assert_eq!(cfg.output.format, Format::Csv);
        assert!(cfg.output.components);
        assert!(cfg.sweep.is_none());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = PAIR_TOML.replace("gamma_b = 1.2e7", "gamma_b = 1.2e7\ntypo_key = 1");
        assert!(toml::from_str::<RunConfig>(&bad).is_err());
    }

    #[test]
    fn log_sweep_grid_is_geometric() {
        let s = Sweep {
            variable: SweepVariable::Separation,
            scale: SweepScale::Log,
            start: 1e-9,
            stop: 1e-7,
            count: 3,
        };
        let v = s.values().unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[1] / 1e-8 - 1.0).abs() < 1e-12);
        assert!((v[2] / 1e-7 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_sweeps_are_rejected() {
        let s = Sweep {
            variable: SweepVariable::Rho,
            scale: SweepScale::Log,
            start: -1.0,
            stop: 1.0,
            count: 5,
        };
        assert!(s.values().is_err());
        let s2 = Sweep { count: 1, ..s };
        assert!(s2.values().is_err());
    }
}
