//! Independent numerical cross-checks for the closed-form results.
//!
//! Every closed form in this crate descends from one of a handful of
//! analytic steps: a frequency-plane residue, a spatial gradient, a
//! velocity linearization, or a dipole orientation average. This
//! module re-derives each step by brute numerics so the closed forms
//! can be validated without re-using any of their own algebra:
//!
//! * [`freq_integral`] performs the damped spectral integral by
//!   contour quadrature and compares it against the residue value,
//! * [`finite_difference_gradient`] differentiates force potentials
//!   numerically,
//! * [`linearity_check`] extrapolates a quantity to vanishing velocity
//!   and verifies linear response,
//! * [`orientation_average_mc`] Monte Carlo averages dipole
//!   orientations against the closed isotropic contraction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::Dyadic3C;
use crate::limits::REL_FLOOR;
use crate::quad::GaussLegendre;
use crate::vec3::Vec3;
use crate::Error;

const PI: f64 = std::f64::consts::PI;

/// Default pole offset for the damped spectral integral, in units of
/// the pole position.
pub const DEFAULT_ETA: f64 = 1e-4;

/// Which numerical route produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Residue,
    Quadrature,
    FiniteDifference,
    MonteCarlo,
    PlateQuadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Residue => "residue",
            Method::Quadrature => "quadrature",
            Method::FiniteDifference => "finite_difference",
            Method::MonteCarlo => "monte_carlo",
            Method::PlateQuadrature => "plate_quadrature",
        }
    }
}

/// Outcome of one closed-form versus numeric comparison.
#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub closed_value: Complex64,
    pub numeric_value: Complex64,
    pub abs_error_estimate: f64,
    pub rel_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub method: Method,
}

/// Builds a report comparing a closed value against a numeric one.
pub fn compare(
    closed_value: Complex64,
    numeric_value: Complex64,
    abs_error_estimate: f64,
    tolerance: f64,
    method: Method,
) -> OracleReport {
    let rel_deviation = (closed_value - numeric_value).norm() / closed_value.norm().max(REL_FLOOR);
    OracleReport {
        closed_value,
        numeric_value,
        abs_error_estimate,
        rel_deviation,
        tolerance,
        passed: rel_deviation.is_finite() && rel_deviation <= tolerance,
        method,
    }
}

/// Damped spectral integral of a propagator kernel, evaluated two
/// independent ways.
#[derive(Debug, Clone, Copy)]
pub struct FreqIntegral {
    /// Residue closed form: `pi * pole^2 * kernel(pole)`.
    pub residue_value: Complex64,
    /// Contour quadrature at the requested damping `eta`.
    pub quadrature_value: Complex64,
    /// Richardson extrapolation of the quadrature to zero damping.
    pub extrapolated_value: Complex64,
    /// Relative distance between the finite-eta quadrature and the
    /// residue value; linear in `eta` for small `eta`.
    pub finite_eta_deviation: f64,
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let ratio = (b / a).powf(1.0 / (n as f64 - 1.0));
    (0..n).map(|j| a * ratio.powi(j as i32)).collect()
}

/// One contour evaluation of the folded spectral integral at damping
/// `eta`. See [`freq_integral`] for the integrand conventions.
fn spectral_quadrature<F>(kernel: &F, pole: f64, eta: f64) -> Result<Complex64, Error>
where
    F: Fn(Complex64) -> Complex64,
{
    let gl_head = GaussLegendre::new(32);
    let gl_tail = GaussLegendre::new(24);
    let a2 = Complex64::new(pole, eta).powi(2);

    // Odd spectral weight: the kernel minus its Schwarz reflection.
    // On the real axis this is the kernel's imaginary part, and it
    // continues analytically off the axis.
    let odd = |k: Complex64| (kernel(k) - kernel(k.conj()).conj()) / Complex64::new(0.0, 2.0);
    let folded = |k: Complex64| k.powi(3) * 2.0 * odd(k) / (k * k - a2);

    let w = (50.0 * eta).max(1e-3 * pole);
    if w >= 0.45 * pole {
        return Err(Error::InvalidInput(format!(
            "damping {eta:e} too large for pole {pole:e}: grading window overlaps the origin"
        )));
    }
    let k0 = 1.5 * pole;
    let mut total = Complex64::new(0.0, 0.0);

    // Smooth stretch from the origin to the edge of the pole window.
    let left_edge = pole - w;
    for j in 0..8 {
        let lo = left_edge * j as f64 / 8.0;
        let hi = left_edge * (j + 1) as f64 / 8.0;
        total += gl_head.integrate_complex(lo, hi, |k| folded(Complex64::new(k, 0.0)));
    }

    // Geometrically graded panels closing in on the pole from both
    // sides, with one panel straddling it. The damped pole sits at
    // distance eta from the axis, so the eta/4 innermost width
    // resolves the Lorentzian core.
    let grades = geomspace(w, eta / 4.0, 14);
    for pair in grades.windows(2) {
        total += gl_head
            .integrate_complex(pole - pair[0], pole - pair[1], |k| folded(Complex64::new(k, 0.0)));
    }
    total += gl_head.integrate_complex(pole - eta / 4.0, pole + eta / 4.0, |k| {
        folded(Complex64::new(k, 0.0))
    });
    for pair in grades.windows(2) {
        total += gl_head
            .integrate_complex(pole + pair[1], pole + pair[0], |k| folded(Complex64::new(k, 0.0)));
    }

    // From the pole window to the contour turn-off point.
    for j in 0..3 {
        let lo = (pole + w) + (k0 - pole - w) * j as f64 / 3.0;
        let hi = (pole + w) + (k0 - pole - w) * (j + 1) as f64 / 3.0;
        total += gl_head.integrate_complex(lo, hi, |k| folded(Complex64::new(k, 0.0)));
    }

    // Beyond k0 the two halves of the odd weight are rotated onto
    // vertical contours along their respective decay directions: the
    // kernel itself decays upward, its reflection downward. The
    // rational factor is shared.
    let i = Complex64::new(0.0, 1.0);
    let up = |t: f64| {
        let k = Complex64::new(k0, t);
        i * k.powi(3) * kernel(k) / (i * (k * k - a2))
    };
    let down = |t: f64| {
        let k = Complex64::new(k0, -t);
        -i * (-k.powi(3) * kernel(k.conj()).conj() / (i * (k * k - a2)))
    };
    let mut t_lo = 0.0;
    let mut t_hi = 0.5 * pole;
    let mut quiet_panels = 0;
    let mut converged = false;
    let mut last_rel = f64::INFINITY;
    for _ in 0..60 {
        let panel = gl_tail.integrate_complex(t_lo, t_hi, up)
            + gl_tail.integrate_complex(t_lo, t_hi, down);
        total += panel;
        last_rel = panel.norm() / total.norm().max(REL_FLOOR);
        if last_rel < 1e-16 {
            quiet_panels += 1;
            if quiet_panels >= 2 {
                converged = true;
                break;
            }
        } else {
            quiet_panels = 0;
        }
        t_lo = t_hi;
        t_hi *= 2.0;
    }
    if !converged {
        return Err(Error::QuadratureNonConvergence {
            achieved: last_rel,
            requested: 1e-16,
        });
    }
    Ok(total)
}

/// Evaluates the damped spectral integral of `kernel` around a simple
/// pole at `pole` two ways: by the residue closed form and by direct
/// contour quadrature at damping `eta` (plus `eta/2` for a linear
/// extrapolation to zero damping).
///
/// The kernel must satisfy the Schwarz reflection property
/// `kernel(-k) = conj(kernel(k))` for real `k`, which every propagator
/// entry in this crate does. The full-axis integral then folds onto
/// the positive axis with weight `2 k^3 / (k^2 - (pole + i eta)^2)`
/// applied to the odd part of the kernel.
pub fn freq_integral<F>(kernel: F, pole: f64, eta: f64) -> Result<FreqIntegral, Error>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(pole > 0.0) || !pole.is_finite() {
        return Err(Error::InvalidInput(format!("pole must be positive, got {pole:e}")));
    }
    if !(eta > 0.0) || !eta.is_finite() || eta >= 2e-3 * pole {
        return Err(Error::InvalidInput(format!(
            "damping must lie in (0, 2e-3 * pole), got {eta:e}"
        )));
    }
    let residue_value = Complex64::new(PI * pole * pole, 0.0) * kernel(Complex64::new(pole, 0.0));
    let quadrature_value = spectral_quadrature(&kernel, pole, eta)?;
    let half = spectral_quadrature(&kernel, pole, eta / 2.0)?;
    let extrapolated_value = half * 2.0 - quadrature_value;
    let finite_eta_deviation =
        (quadrature_value - residue_value).norm() / residue_value.norm().max(REL_FLOOR);
    Ok(FreqIntegral {
        residue_value,
        quadrature_value,
        extrapolated_value,
        finite_eta_deviation,
    })
}

/// Central-difference gradient with one Richardson refinement, fourth
/// order accurate in `h`.
pub fn finite_difference_gradient<F>(f: F, point: Vec3, h: f64) -> Result<Vec3, Error>
where
    F: Fn(Vec3) -> Result<f64, Error>,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("step must be positive, got {h:e}")));
    }
    let mut grad = [0.0; 3];
    for a in 0..3 {
        let diff = |step: f64| -> Result<f64, Error> {
            let mut plus = point;
            let mut minus = point;
            plus[a] += step;
            minus[a] -= step;
            Ok((f(plus)? - f(minus)?) / (2.0 * step))
        };
        let coarse = diff(h)?;
        let fine = diff(h / 2.0)?;
        grad[a] = (4.0 * fine - coarse) / 3.0;
    }
    Ok(grad)
}

/// Verifies that `quantity(beta)` is linear in `beta` by geometric
/// extrapolation of `quantity(beta) / beta` over a decreasing ladder
/// of speeds.
///
/// The last three ladder entries feed an Aitken-style step: with
/// `q_j = quantity(beta_j) / beta_j` and successive differences `d1`,
/// `d2`, the residual contraction ratio `r = d1 / d2` extrapolates the
/// linear-response limit `L = q_3 - d2 / (r - 1)`. The check passes
/// when the smallest-speed quotient agrees with `L` within `tol`. Any
/// power-law residual with `r` bounded away from 1 is accepted, so
/// both first and second order velocity corrections extrapolate
/// cleanly.
pub fn linearity_check<F>(quantity: F, betas: &[f64], tol: f64) -> Result<OracleReport, Error>
where
    F: Fn(f64) -> Result<f64, Error>,
{
    if betas.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 speeds, got {}",
            betas.len()
        )));
    }
    for pair in betas.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::InvalidInput(
                "speeds must be strictly decreasing".into(),
            ));
        }
    }
    let smallest = *betas.last().unwrap();
    if !(smallest > 1e-7) {
        // Below this the quotient differences drown in roundoff.
        return Err(Error::InvalidInput(format!(
            "smallest speed {smallest:e} is too close to the noise floor"
        )));
    }
    let tail = &betas[betas.len() - 3..];
    let mut q = [0.0; 3];
    for (slot, beta) in q.iter_mut().zip(tail) {
        *slot = quantity(*beta)? / beta;
    }
    let d1 = q[0] - q[1];
    let d2 = q[1] - q[2];
    let qscale = q.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(REL_FLOOR);

    let (limit, step_error) = if d1.abs() <= 1e-12 * qscale && d2.abs() <= 1e-12 * qscale {
        // Already linear to roundoff.
        (q[2], d2.abs())
    } else {
        let r = d1 / d2;
        if !r.is_finite() || r <= 1.2 {
            // Residuals are not contracting, so no limit is in sight.
            let numeric = Complex64::new(q[2], 0.0);
            return Ok(OracleReport {
                closed_value: numeric,
                numeric_value: numeric,
                abs_error_estimate: d2.abs(),
                rel_deviation: f64::INFINITY,
                tolerance: tol,
                passed: false,
                method: Method::FiniteDifference,
            });
        }
        (q[2] - d2 / (r - 1.0), (d2 / (r - 1.0)).abs())
    };

    Ok(compare(
        Complex64::new(limit, 0.0),
        Complex64::new(q[2], 0.0),
        step_error,
        tol,
        Method::FiniteDifference,
    ))
}

/// Monte Carlo estimate of the isotropic orientation average
/// `<(a . X b)(b . Y a)>` over independent uniformly distributed unit
/// dipole directions `a`, `b`. Returns the sample mean and its
/// standard error.
pub fn orientation_average_mc(
    x: &Dyadic3C,
    y: &Dyadic3C,
    samples: usize,
    seed: u64,
) -> (Complex64, f64) {
    assert!(samples >= 2, "need at least 2 samples");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let a = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        let z = x.bilinear(a, b) * y.bilinear(b, a);
        sum += z;
        values.push(z);
    }
    let mean = sum / samples as f64;
    let var: f64 = values
        .iter()
        .map(|z| (z - mean).norm_sqr())
        .sum::<f64>()
        / (samples as f64 - 1.0);
    (mean, (var / samples as f64).sqrt())
}

/// Uniform direction via normalized Gaussian triple (Box-Muller).
fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let mut g = [0.0; 4];
        for pair in 0..2 {
            let u1: f64 = 1.0 - rng.gen::<f64>();
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            g[2 * pair] = r * (2.0 * PI * u2).cos();
            g[2 * pair + 1] = r * (2.0 * PI * u2).sin();
        }
        let v = [g[0], g[1], g[2]];
        let n = crate::vec3::norm(v);
        if n > 1e-12 {
            return crate::vec3::scale(v, 1.0 / n);
        }
    }
}
