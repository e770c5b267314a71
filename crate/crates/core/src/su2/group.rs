use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// An element of SU(2), `[[a, -conj(b)], [b, conj(a)]]` with `|a|² + |b|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2 {
    a: Complex64,
    b: Complex64,
}

/// Tolerance for accepting a matrix as special unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

impl Su2 {
    pub fn identity() -> Self {
        Su2 {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Builds from `(a, b)`, renormalizing away rounding drift.
    pub fn from_ab(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "(a, b) has norm {norm}, not an SU(2) element"
            )));
        }
        Ok(Su2 {
            a: a / norm,
            b: b / norm,
        })
    }

    /// Accepts a 2×2 matrix (row-major) that is unitary with determinant 1.
    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let a = m[0][0];
        let b = m[1][0];
        let mismatch = (m[0][1] + b.conj()).norm() + (m[1][1] - a.conj()).norm();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if mismatch > UNITARITY_TOLERANCE || (det - 1.0).norm() > UNITARITY_TOLERANCE {
            return Err(Error::domain("matrix is not in SU(2)"));
        }
        Ok(Su2 { a, b })
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, -self.b.conj()], [self.b, self.a.conj()]]
    }

    pub fn inverse(&self) -> Self {
        Su2 {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.a.re
    }

    /// `diag(e^{iθ}, e^{-iθ})`.
    pub fn torus(theta: f64) -> Self {
        Su2 {
            a: Complex64::from_polar(1.0, theta),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// `D(φ) R(θ) D(ψ)` with `D(α) = diag(e^{iα/2}, e^{-iα/2})` and `R(θ)` the
    /// real rotation by `θ/2`. Covers SU(2) once for `φ ∈ [0, 2π)`,
    /// `θ ∈ [0, π]`, `ψ ∈ [0, 4π)`.
    pub fn euler(phi: f64, theta: f64, psi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Su2 {
            a: Complex64::from_polar(c, (phi + psi) / 2.0),
            b: Complex64::from_polar(s, -(phi - psi) / 2.0),
        }
    }

    /// Haar-distributed random element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] = [gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)];
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-6 {
                return Su2 {
                    a: Complex64::new(q[0], q[1]) / n,
                    b: Complex64::new(q[2], q[3]) / n,
                };
            }
        }
    }

    /// `exp(i r n·σ)` for a uniformly random axis `n` and `r ∈ [0, radius)`.
    pub fn random_near_identity<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Self {
        let r = rng.gen_range(0.0..radius);
        let z: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let rho = (1.0 - z * z).sqrt();
        let (nx, ny, nz) = (rho * phi.cos(), rho * phi.sin(), z);
        let (s, c) = r.sin_cos();
        Su2 {
            a: Complex64::new(c, s * nz),
            b: Complex64::new(-s * ny, s * nx),
        }
    }

    /// Frobenius distance between the 2×2 matrices.
    pub fn distance(&self, other: &Su2) -> f64 {
        (2.0 * ((self.a - other.a).norm_sqr() + (self.b - other.b).norm_sqr())).sqrt()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

impl Mul for Su2 {
    type Output = Su2;

    fn mul(self, rhs: Su2) -> Su2 {
        // first column of the product
        Su2 {
            a: self.a * rhs.a - self.b.conj() * rhs.b,
            b: self.b * rhs.a + self.a.conj() * rhs.b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn det(g: &Su2) -> Complex64 {
        let m = g.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    #[test]
    fn products_match_matrix_multiplication() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..20 {
            let g = Su2::random(&mut rng);
            let h = Su2::random(&mut rng);
            let (mg, mh) = (g.matrix(), h.matrix());
            let gh = (g * h).matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let v = mg[i][0] * mh[0][j] + mg[i][1] * mh[1][j];
                    assert!((v - gh[i][j]).norm() < 1e-14);
                }
            }
            assert!((det(&g) - 1.0).norm() < UNITARITY_TOLERANCE);
            assert!((g * g.inverse()).distance(&Su2::identity()) < 1e-14);
        }
    }

    #[test]
    fn euler_factorization() {
        let (phi, theta, psi) = (0.7, 1.1, 3.9);
        let g = Su2::euler(phi, 0.0, 0.0) * Su2::euler(0.0, theta, 0.0) * Su2::euler(0.0, 0.0, psi);
        assert!(g.distance(&Su2::euler(phi, theta, psi)) < 1e-14);
        assert!(Su2::euler(2.0 * phi, 0.0, 0.0).distance(&Su2::torus(phi)) < 1e-14);
    }

    #[test]
    fn from_matrix_validates() {
        let g = Su2::euler(0.3, 0.4, 0.5);
        assert_eq!(Su2::from_matrix(g.matrix()).unwrap(), g);
        let mut m = g.matrix();
        m[0][0] *= 2.0;
        assert!(Su2::from_matrix(m).is_err());
    }

    #[test]
    fn near_identity_samples_stay_close() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        for _ in 0..50 {
            let g = Su2::random_near_identity(&mut rng, 0.1);
            assert!((g.a().norm_sqr() + g.b().norm_sqr() - 1.0).abs() < 1e-14);
            assert!(g.distance(&Su2::identity()) < 0.2);
        }
    }
}
