//! Gauss-Legendre panels and sequence acceleration, the numerical
//! workhorses behind the plate integrator and the frequency-plane
//! oracle.

/// Gauss-Legendre rule of fixed order on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "rule order must be at least 2");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n {
            // Chebyshev-based initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..64 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates a scalar function over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrates a complex-valued function of a real parameter.
    pub fn integrate_complex<F: FnMut(f64) -> num_complex::Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> num_complex::Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Iterated Aitken extrapolation of a sequence of partial sums.
///
/// Returns the accelerated limit and an error estimate taken from the
/// magnitude of the final correction. Stages with vanishing second
/// differences pass values through unchanged, so exactly convergent
/// input is returned as-is with zero error.
pub(crate) fn aitken_limit(partials: &[f64]) -> (f64, f64) {
    if partials.is_empty() {
        return (0.0, 0.0);
    }
    let scale = partials.iter().fold(0.0f64, |m, p| m.max(p.abs())).max(1e-300);
    let mut cur = partials.to_vec();
    let mut best = *cur.last().unwrap();
    let mut err = f64::INFINITY;
    while cur.len() >= 3 {
        let mut next = Vec::with_capacity(cur.len() - 2);
        for i in 0..cur.len() - 2 {
            let d1 = cur[i + 1] - cur[i];
            let d2 = cur[i + 2] - cur[i + 1];
            let dd = d2 - d1;
            if dd.abs() <= 1e-15 * scale {
                next.push(cur[i + 2]);
            } else {
                next.push(cur[i + 2] - d2 * d2 / dd);
            }
        }
        let cand = *next.last().unwrap();
        err = (cand - best).abs();
        best = cand;
        cur = next;
    }
    if !best.is_finite() {
        // Fall back to the raw sequence tail when acceleration blew up.
        best = *partials.last().unwrap();
        err = if partials.len() >= 2 {
            (partials[partials.len() - 1] - partials[partials.len() - 2]).abs()
        } else {
            scale
        };
    }
    if err.is_infinite() {
        err = (best - partials[partials.len() - 1]).abs();
    }
    (best, err)
}
