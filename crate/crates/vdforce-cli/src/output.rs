//! Record types and writers.
//!
//! CSV output starts with a `# vdforce-<kind>-v1` schema line followed by a
//! column header; numbers are written with 16 significant digits so runs
//! can be diffed and post-processed without precision loss. JSONL output
//! carries the same schema tag in every line.

use serde::Serialize;
use std::io::Write;
use vdforce::Vec3;

pub const PAIR_SCHEMA: &str = "vdforce-pair-v1";
pub const PLATE_SCHEMA: &str = "vdforce-plate-v1";
pub const ORACLE_SCHEMA: &str = "vdforce-oracle-v1";

/// Per-mechanism force decomposition, reduced units.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Parts {
    pub doppler: Vec3,
    pub lag: Vec3,
    pub theta: Vec3,
    pub roentgen_conservative: Vec3,
    pub roentgen_nonconservative: Vec3,
}

/// One pair evaluation. Forces are lab-frame vectors.
#[derive(Debug, Clone, Serialize)]
pub struct PairRecord {
    pub separation_m: f64,
    /// Reduced separation `k_A R`.
    pub x: f64,
    pub rho: f64,
    /// Radial speed ratio, positive when receding.
    pub beta_r: f64,
    /// Transverse speed ratio.
    pub beta_t: f64,
    pub observation_time_s: f64,
    /// Signed dipole coupling strength, J m^6. Negative above resonance.
    pub u_j_m6: f64,
    /// Total velocity-dependent force, reduced units.
    pub f_red: Vec3,
    /// Total velocity-dependent force, newtons.
    pub f_n: Vec3,
    /// Velocity-induced interaction energy shift, reduced units.
    pub w_shift_red: f64,
    /// Velocity-induced interaction energy shift, joules.
    pub w_shift_j: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts_red: Option<Parts>,
}

/// One plate evaluation. The closed forms act along the motion, so the
/// force columns are scalars (the component along the velocity).
#[derive(Debug, Clone, Serialize)]
pub struct PlateRecord {
    pub height_m: f64,
    /// Reduced height `k_A d`.
    pub d: f64,
    pub sigma_red: f64,
    pub beta: f64,
    /// Signed dipole coupling strength, J m^6.
    pub u_j_m6: f64,
    /// Which closed form applies at this height: `near`, `far`, or
    /// `crossover` (neither expansion is controlled; treat both drag
    /// columns as envelopes only).
    pub regime: &'static str,
    pub drag_near_red: f64,
    pub drag_near_n: f64,
    pub drag_far_red: f64,
    pub drag_far_n: f64,
    pub recoil_red: f64,
    pub recoil_n: f64,
}

pub fn regime_for(d: f64) -> &'static str {
    if d <= vdforce::limits::X_NEAR {
        "near"
    } else if d >= vdforce::limits::X_FAR {
        "far"
    } else {
        "crossover"
    }
}

pub fn make_writer(path: Option<&std::path::Path>) -> anyhow::Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p)
                .map_err(|e| anyhow::anyhow!("creating {}: {e}", p.display()))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

fn push_vec3(cols: &mut Vec<String>, v: Vec3) {
    for c in v {
        cols.push(format!("{c:.16e}"));
    }
}

pub fn write_pair_csv(
    w: &mut dyn Write,
    records: &[PairRecord],
    components: bool,
) -> anyhow::Result<()> {
    writeln!(w, "# {PAIR_SCHEMA}")?;
    let mut header: Vec<String> = [
        "separation_m",
        "x",
        "rho",
        "beta_r",
        "beta_t",
        "observation_time_s",
        "u_j_m6",
        "fx_red",
        "fy_red",
        "fz_red",
        "fx_n",
        "fy_n",
        "fz_n",
        "w_shift_red",
        "w_shift_j",
    ]
    .map(String::from)
    .to_vec();
    if components {
        for part in ["doppler", "lag", "theta", "rc", "rnc"] {
            for axis in ["x", "y", "z"] {
                header.push(format!("{part}_{axis}_red"));
            }
        }
    }
    writeln!(w, "{}", header.join(","))?;
    for r in records {
        let mut cols = Vec::new();
        for s in [
            r.separation_m,
            r.x,
            r.rho,
            r.beta_r,
            r.beta_t,
            r.observation_time_s,
            r.u_j_m6,
        ] {
            cols.push(format!("{s:.16e}"));
        }
        push_vec3(&mut cols, r.f_red);
        push_vec3(&mut cols, r.f_n);
        cols.push(format!("{:.16e}", r.w_shift_red));
        cols.push(format!("{:.16e}", r.w_shift_j));
        if components {
            let p = r.parts_red.as_ref().ok_or_else(|| {
                anyhow::anyhow!("component columns requested but record has no parts")
            })?;
            for v in [
                p.doppler,
                p.lag,
                p.theta,
                p.roentgen_conservative,
                p.roentgen_nonconservative,
            ] {
                push_vec3(&mut cols, v);
            }
        }
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

pub fn write_plate_csv(w: &mut dyn Write, records: &[PlateRecord]) -> anyhow::Result<()> {
    writeln!(w, "# {PLATE_SCHEMA}")?;
    writeln!(
        w,
        "height_m,d,sigma_red,beta,u_j_m6,regime,drag_near_red,drag_near_n,drag_far_red,drag_far_n,recoil_red,recoil_n"
    )?;
    for r in records {
        let nums = [
            r.drag_near_red,
            r.drag_near_n,
            r.drag_far_red,
            r.drag_far_n,
            r.recoil_red,
            r.recoil_n,
        ]
        .map(|v| format!("{v:.16e}"));
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            r.height_m,
            r.d,
            r.sigma_red,
            r.beta,
            r.u_j_m6,
            r.regime,
            nums.join(",")
        )?;
    }
    Ok(())
}

fn write_jsonl<T: Serialize>(w: &mut dyn Write, schema: &str, records: &[T]) -> anyhow::Result<()> {
    for r in records {
        let mut value = serde_json::to_value(r)?;
        let obj = value
            .as_object_mut()
            .expect("records serialize to JSON objects");
        obj.insert(
            "schema_version".into(),
            serde_json::Value::String(schema.into()),
        );
        writeln!(w, "{}", serde_json::to_string(&value)?)?;
    }
    Ok(())
}

pub fn write_pair_jsonl(w: &mut dyn Write, records: &[PairRecord]) -> anyhow::Result<()> {
    write_jsonl(w, PAIR_SCHEMA, records)
}

pub fn write_plate_jsonl(w: &mut dyn Write, records: &[PlateRecord]) -> anyhow::Result<()> {
    write_jsonl(w, PLATE_SCHEMA, records)
}

/// Serializable mirror of an engine verification report.
#[derive(Debug, Clone, Serialize)]
pub struct OracleLine {
    pub suite: &'static str,
    pub check: String,
    pub method: &'static str,
    pub passed: bool,
    pub closed_re: f64,
    pub closed_im: f64,
    pub numeric_re: f64,
    pub numeric_im: f64,
    pub abs_error_estimate: f64,
    pub rel_deviation: f64,
    pub tolerance: f64,
}

impl OracleLine {
    pub fn from_report(
        suite: &'static str,
        check: String,
        report: &vdforce::OracleReport,
    ) -> Self {
        OracleLine {
            suite,
            check,
            method: report.method.as_str(),
            passed: report.passed,
            closed_re: report.closed_value.re,
            closed_im: report.closed_value.im,
            numeric_re: report.numeric_value.re,
            numeric_im: report.numeric_value.im,
            abs_error_estimate: report.abs_error_estimate,
            rel_deviation: report.rel_deviation,
            tolerance: report.tolerance,
        }
    }
}

pub fn write_oracle_jsonl(w: &mut dyn Write, lines: &[OracleLine]) -> anyhow::Result<()> {
    write_jsonl(w, ORACLE_SCHEMA, lines)
}
