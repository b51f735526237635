//! Complex 3x3 dyadics, the tensor currency of the propagator layer.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::vec3::Vec3;

/// A 3x3 complex dyadic, stored row-major: `e[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dyadic3C {
    pub e: [[Complex64; 3]; 3],
}

impl Dyadic3C {
    pub const fn zeros() -> Self {
        Self {
            e: [[Complex64::new(0.0, 0.0); 3]; 3],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            m.e[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Real outer product `a b^T` promoted to complex entries.
    pub fn outer(a: Vec3, b: Vec3) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = Complex64::new(a[i] * b[j], 0.0);
            }
        }
        m
    }

    /// Antisymmetric dyadic `E[w]` with entries `E_pq = eps_{psq} w_s`,
    /// so that `E[w] v = w x v`.
    pub fn levi_civita(w: Vec3) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self {
            e: [
                [c(0.0), c(-w[2]), c(w[1])],
                [c(w[2]), c(0.0), c(-w[0])],
                [c(-w[1]), c(w[0]), c(0.0)],
            ],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[j][i];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2]
    }

    /// Matrix product `self * rhs`.
    pub fn dot(&self, rhs: &Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    s += self.e[i][k] * rhs.e[k][j];
                }
                m.e[i][j] = s;
            }
        }
        m
    }

    /// Matrix-vector product with a real vector.
    pub fn mul_vec(&self, v: Vec3) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, row) in self.e.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                out[i] += entry * v[j];
            }
        }
        out
    }

    /// Bilinear form `a . self . b` with real vectors.
    pub fn bilinear(&self, a: Vec3, b: Vec3) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                s += self.e[i][j] * (a[i] * b[j]);
            }
        }
        s
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for entry in row.iter_mut() {
                *entry *= s;
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.transpose()) <= tol * self.max_abs().max(1e-300)
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        let sum = *self + self.transpose();
        sum.max_abs() <= tol * self.max_abs().max(1e-300)
    }
}

impl Add for Dyadic3C {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }
}

impl Sub for Dyadic3C {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }
}

impl Neg for Dyadic3C {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for Dyadic3C {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scaled(s)
    }
}

impl Mul<f64> for Dyadic3C {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scaled(Complex64::new(s, 0.0))
    }
}
