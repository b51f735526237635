//! Command-line front end for the force engine.
//!
//! Subcommands:
//!
//! * `pair`: one evaluation of the forces on a moving excited atom paired
//!   with a single ground-state atom.
//! * `plate`: closed-form forces on an atom moving parallel to a dilute
//!   sheet of ground-state atoms.
//! * `sweep`: one record per point of a swept variable.
//! * `verify`: built-in numerical cross-check suites.

mod config;
mod output;
mod reduce;
mod verify;

use clap::{Args, Parser, Subcommand};
use config::{Format, Geometry, RunConfig, SweepVariable, ValidityMode};
use output::{PairRecord, Parts, PlateRecord};
use rayon::prelude::*;
use reduce::Reducer;
use std::path::PathBuf;
use vdforce::plate::{plate_roentgen_closed, plate_vdw_closed};
use vdforce::vdw::{energy_breakdown, EvalMode, Regime};
use vdforce::{total_force, vec3, Orientation};

#[derive(Parser)]
#[command(
    name = "vdforce",
    version,
    about = "Velocity-dependent dispersion forces on a moving excited atom"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forces for one excited atom and one ground-state partner.
    Pair(RunArgs),
    /// Closed-form forces above a dilute sheet of ground-state atoms.
    Plate(RunArgs),
    /// One record per point of the variable configured under [sweep].
    Sweep(RunArgs),
    /// Run numerical cross-check suites; one JSON line per check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted. Overrides output.path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides output.format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Treat validity-window violations as errors.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run; repeat the flag to run several.
    #[arg(long, value_enum, required = true)]
    suite: Vec<verify::Suite>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::Pair(args) => {
            let cfg = effective(config::load(&args.config)?, &args);
            let records = pair_records(&cfg)?;
            emit_pair(&records, &cfg)
        }
        Cmd::Plate(args) => {
            let cfg = effective(config::load(&args.config)?, &args);
            let records = plate_records(&cfg)?;
            emit_plate(&records, &cfg)
        }
        Cmd::Sweep(args) => {
            let cfg = effective(config::load(&args.config)?, &args);
            match sweep_records(&cfg)? {
                Records::Pair(r) => emit_pair(&r, &cfg),
                Records::Plate(r) => emit_plate(&r, &cfg),
            }
        }
        Cmd::Verify(args) => run_verify(&args),
    }
}

fn effective(mut cfg: RunConfig, args: &RunArgs) -> RunConfig {
    if args.strict {
        cfg.validity.mode = ValidityMode::Strict;
    }
    if let Some(f) = args.format {
        cfg.output.format = f;
    }
    if let Some(p) = &args.out {
        cfg.output.path = Some(p.clone());
    }
    cfg
}

fn eval_pair(
    cfg: &RunConfig,
    separation_m: f64,
    velocity_mps: [f64; 3],
    direction: [f64; 3],
    observation_time_s: Option<f64>,
) -> anyhow::Result<PairRecord> {
    let reducer = Reducer::new(cfg.atoms.clone(), cfg.validity.mode)?;
    let scales = reducer.scales();
    let (state, t_si) = reducer.pair_state(separation_m, velocity_mps, direction, observation_time_s)?;
    let fb = total_force(&state, &Orientation::Isotropic, EvalMode::TimeAveraged)?;
    let w_shift = energy_breakdown(&state, &Orientation::Isotropic, EvalMode::TimeAveraged)?
        .total_shift();
    let f_red = fb.total();
    let parts_red = cfg.output.components.then_some(Parts {
        doppler: fb.vdw_doppler,
        lag: fb.vdw_lag,
        theta: fb.vdw_theta,
        roentgen_conservative: fb.roentgen_conservative,
        roentgen_nonconservative: fb.roentgen_nonconservative,
    });
    Ok(PairRecord {
        separation_m,
        x: state.x,
        rho: state.rho,
        beta_r: state.beta_r,
        beta_t: state.beta_perp,
        observation_time_s: t_si,
        u_j_m6: scales.coupling_j_m6 * f64::from(state.coupling.sign),
        f_red,
        f_n: vec3::scale(f_red, scales.force_n),
        w_shift_red: w_shift,
        w_shift_j: w_shift * scales.energy_j,
        parts_red,
    })
}

fn eval_plate(
    cfg: &RunConfig,
    height_m: f64,
    speed_mps: f64,
    area_density_per_m2: f64,
    observation_time_s: Option<f64>,
) -> anyhow::Result<PlateRecord> {
    let reducer = Reducer::new(cfg.atoms.clone(), cfg.validity.mode)?;
    let scales = reducer.scales();
    let (pcfg, _) = reducer.plate_config(height_m, speed_mps, area_density_per_m2, observation_time_s)?;
    let near = plate_vdw_closed(&pcfg, Regime::Near)?;
    let far = plate_vdw_closed(&pcfg, Regime::Far)?;
    let recoil = plate_roentgen_closed(&pcfg)?;
    Ok(PlateRecord {
        height_m,
        d: pcfg.d_red,
        sigma_red: pcfg.sigma_red,
        beta: pcfg.beta,
        u_j_m6: scales.coupling_j_m6 * f64::from(pcfg.coupling.sign),
        regime: output::regime_for(pcfg.d_red),
        drag_near_red: near[0],
        drag_near_n: near[0] * scales.force_n,
        drag_far_red: far[0],
        drag_far_n: far[0] * scales.force_n,
        recoil_red: recoil[0],
        recoil_n: recoil[0] * scales.force_n,
    })
}

fn pair_records(cfg: &RunConfig) -> anyhow::Result<Vec<PairRecord>> {
    match &cfg.geometry {
        Geometry::Pair {
            separation_m,
            velocity_mps,
            direction,
            observation_time_s,
        } => Ok(vec![eval_pair(
            cfg,
            *separation_m,
            *velocity_mps,
            *direction,
            *observation_time_s,
        )?]),
        Geometry::Plate { .. } => {
            anyhow::bail!("the pair command needs geometry.kind = \"pair\"")
        }
    }
}

fn plate_records(cfg: &RunConfig) -> anyhow::Result<Vec<PlateRecord>> {
    match &cfg.geometry {
        Geometry::Plate {
            height_m,
            speed_mps,
            area_density_per_m2,
            observation_time_s,
        } => Ok(vec![eval_plate(
            cfg,
            *height_m,
            *speed_mps,
            *area_density_per_m2,
            *observation_time_s,
        )?]),
        Geometry::Pair { .. } => {
            anyhow::bail!("the plate command needs geometry.kind = \"plate\"")
        }
    }
}

enum Records {
    Pair(Vec<PairRecord>),
    Plate(Vec<PlateRecord>),
}

/// Applies one sweep value to a copy of the configuration.
fn apply_sweep(cfg: &RunConfig, variable: SweepVariable, value: f64) -> anyhow::Result<RunConfig> {
    let mut out = cfg.clone();
    match (variable, &mut out.geometry) {
        (SweepVariable::Separation, Geometry::Pair { separation_m, .. }) => {
            *separation_m = value;
        }
        (SweepVariable::Separation, _) => {
            anyhow::bail!("sweep variable \"separation\" needs pair geometry")
        }
        (SweepVariable::Height, Geometry::Plate { height_m, .. }) => {
            *height_m = value;
        }
        (SweepVariable::Height, _) => {
            anyhow::bail!("sweep variable \"height\" needs plate geometry")
        }
        (SweepVariable::Speed, Geometry::Pair { velocity_mps, .. }) => {
            let n = vec3::norm(*velocity_mps);
            if n == 0.0 {
                anyhow::bail!("cannot sweep speed: velocity_mps is the zero vector");
            }
            *velocity_mps = vec3::scale(*velocity_mps, value / n);
        }
        (SweepVariable::Speed, Geometry::Plate { speed_mps, .. }) => {
            *speed_mps = value;
        }
        (SweepVariable::Rho, _) => {
            if !(value > 0.0) {
                anyhow::bail!("sweep variable \"rho\" needs positive values, got {value:e}");
            }
            out.atoms.omega_b = value * out.atoms.omega_a;
        }
    }
    Ok(out)
}

fn sweep_records(cfg: &RunConfig) -> anyhow::Result<Records> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("the sweep command needs a [sweep] section"))?;
    let values = sweep.values()?;
    let is_pair = matches!(cfg.geometry, Geometry::Pair { .. });

    if is_pair {
        let points: Vec<(f64, anyhow::Result<PairRecord>)> = values
            .par_iter()
            .map(|&v| {
                let r = apply_sweep(cfg, sweep.variable, v).and_then(|c| match &c.geometry {
                    Geometry::Pair {
                        separation_m,
                        velocity_mps,
                        direction,
                        observation_time_s,
                    } => eval_pair(&c, *separation_m, *velocity_mps, *direction, *observation_time_s),
                    _ => unreachable!("pair geometry is preserved by apply_sweep"),
                });
                (v, r)
            })
            .collect();
        Ok(Records::Pair(collect_points(points)?))
    } else {
        let points: Vec<(f64, anyhow::Result<PlateRecord>)> = values
            .par_iter()
            .map(|&v| {
                let r = apply_sweep(cfg, sweep.variable, v).and_then(|c| match &c.geometry {
                    Geometry::Plate {
                        height_m,
                        speed_mps,
                        area_density_per_m2,
                        observation_time_s,
                    } => eval_plate(&c, *height_m, *speed_mps, *area_density_per_m2, *observation_time_s),
                    _ => unreachable!("plate geometry is preserved by apply_sweep"),
                });
                (v, r)
            })
            .collect();
        Ok(Records::Plate(collect_points(points)?))
    }
}

/// Keeps successful points in sweep order; failed points go to stderr.
/// The sweep only fails as a whole when every point failed.
fn collect_points<T>(points: Vec<(f64, anyhow::Result<T>)>) -> anyhow::Result<Vec<T>> {
    let mut ok = Vec::new();
    let mut failed = 0usize;
    for (v, r) in points {
        match r {
            Ok(rec) => ok.push(rec),
            Err(e) => {
                failed += 1;
                eprintln!("sweep point {v:e} failed: {e}");
            }
        }
    }
    if ok.is_empty() {
        anyhow::bail!("all {failed} sweep points failed");
    }
    if failed > 0 {
        eprintln!("{failed} sweep points failed and were skipped");
    }
    Ok(ok)
}

fn emit_pair(records: &[PairRecord], cfg: &RunConfig) -> anyhow::Result<()> {
    let mut w = output::make_writer(cfg.output.path.as_deref())?;
    match cfg.output.format {
        Format::Csv => output::write_pair_csv(&mut *w, records, cfg.output.components)?,
        Format::Jsonl => output::write_pair_jsonl(&mut *w, records)?,
    }
    w.flush()?;
    Ok(())
}

fn emit_plate(records: &[PlateRecord], cfg: &RunConfig) -> anyhow::Result<()> {
    let mut w = output::make_writer(cfg.output.path.as_deref())?;
    match cfg.output.format {
        Format::Csv => output::write_plate_csv(&mut *w, records)?,
        Format::Jsonl => output::write_plate_jsonl(&mut *w, records)?,
    }
    w.flush()?;
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> anyhow::Result<()> {
    let mut lines = Vec::new();
    for suite in verify::expand(&args.suite) {
        lines.extend(verify::run(suite)?);
    }
    let mut w = output::make_writer(args.out.as_deref())?;
    output::write_oracle_jsonl(&mut *w, &lines)?;
    w.flush()?;
    let failed = lines.iter().filter(|l| !l.passed).count();
    if failed > 0 {
        anyhow::bail!("{failed} of {} verification checks failed", lines.len());
    }
    eprintln!("all {} verification checks passed", lines.len());
    Ok(())
}
