use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use super::group::Su2;
use crate::error::{Error, Result};

/// A product quadrature for normalized Haar measure on SU(2).
///
/// In the Euler chart `g = D(φ) R(θ) D(ψ)` Haar measure is
/// `(1/16π²) sin θ dθ dφ dψ`. The periodic angles use the trapezoid rule and
/// `θ` uses Gauss–Legendre nodes in `x = cos θ`, so the sine factor is
/// absorbed by the change of variables.
#[derive(Clone, Debug)]
pub struct HaarGrid {
    n_phi: usize,
    n_theta: usize,
    n_psi: usize,
    phis: Vec<f64>,
    thetas: Vec<f64>,
    theta_weights: Vec<f64>,
    psis: Vec<f64>,
}

/// Node counts `(n_φ, n_θ, n_ψ)` that make the rule exact for integrands
/// built from two functions of band limit `band_limit`.
pub fn required_counts(band_limit: usize) -> (usize, usize, usize) {
    (4 * band_limit + 4, 2 * band_limit + 4, 4 * band_limit + 4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridShape {
    pub n_phi: usize,
    pub n_theta: usize,
    pub n_psi: usize,
}

pub fn haar_grid(n_phi: usize, n_theta: usize, n_psi: usize) -> Result<HaarGrid> {
    if n_phi < 2 || n_theta < 2 || n_psi < 2 {
        return Err(Error::parameter(format!(
            "Haar grid sizes must all be at least 2, got ({n_phi}, {n_theta}, {n_psi})"
        )));
    }
    let gl = GaussLegendre::new(NonZeroUsize::new(n_theta).unwrap());
    let (thetas, theta_weights): (Vec<f64>, Vec<f64>) = gl
        .iter()
        .map(|(x, w)| (x.clamp(-1.0, 1.0).acos(), w / 2.0))
        .unzip();
    Ok(HaarGrid {
        n_phi,
        n_theta,
        n_psi,
        phis: (0..n_phi)
            .map(|i| 2.0 * PI * i as f64 / n_phi as f64)
            .collect(),
        thetas,
        theta_weights,
        psis: (0..n_psi)
            .map(|i| 4.0 * PI * i as f64 / n_psi as f64)
            .collect(),
    })
}

impl HaarGrid {
    /// The smallest grid exact for band limit `band_limit`.
    pub fn for_band_limit(band_limit: usize) -> Self {
        let (a, b, c) = required_counts(band_limit);
        haar_grid(a, b, c).expect("required counts are at least 4")
    }

    pub fn shape(&self) -> GridShape {
        GridShape {
            n_phi: self.n_phi,
            n_theta: self.n_theta,
            n_psi: self.n_psi,
        }
    }

    pub fn len(&self) -> usize {
        self.n_phi * self.n_theta * self.n_psi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn supports_band_limit(&self, band_limit: usize) -> bool {
        let (a, b, c) = required_counts(band_limit);
        self.n_phi >= a && self.n_theta >= b && self.n_psi >= c
    }

    pub(crate) fn require_band_limit(&self, band_limit: usize) -> Result<()> {
        if self.supports_band_limit(band_limit) {
            Ok(())
        } else {
            let (a, b, c) = required_counts(band_limit);
            Err(Error::parameter(format!(
                "Haar grid ({}, {}, {}) is too coarse for band limit {band_limit}; need at least ({a}, {b}, {c})",
                self.n_phi, self.n_theta, self.n_psi
            )))
        }
    }

    /// Nodes and weights in `(φ, θ, ψ)` nesting order.
    pub fn nodes(&self) -> impl Iterator<Item = (Su2, f64)> + '_ {
        (0..self.n_phi).flat_map(move |i| self.slice_nodes(i))
    }

    pub(crate) fn phi_slices(&self) -> Vec<usize> {
        (0..self.n_phi).collect()
    }

    /// Nodes and weights with the `i`-th value of `φ`.
    pub(crate) fn slice_nodes(&self, i: usize) -> impl Iterator<Item = (Su2, f64)> + '_ {
        let wp = 1.0 / (self.n_phi * self.n_psi) as f64;
        let phi = self.phis[i];
        self.thetas
            .iter()
            .zip(&self.theta_weights)
            .flat_map(move |(&theta, &wt)| {
                self.psis
                    .iter()
                    .map(move |&psi| (Su2::euler(phi, theta, psi), wt * wp))
            })
    }

    /// The `(φ, θ)` part of the rule with the `ψ` sum folded into the weights,
    /// for integrands that do not depend on `ψ`.
    pub(crate) fn phi_theta_nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let wp = 1.0 / self.n_phi as f64;
        self.phis.iter().flat_map(move |&phi| {
            self.thetas
                .iter()
                .zip(&self.theta_weights)
                .map(move |(&theta, &wt)| (phi, theta, wt * wp))
        })
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes().map(|(_, w)| w).sum()
    }

    pub fn integrate<F: Fn(&Su2) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes().map(|(g, w)| f(&g) * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::irrep::irrep_matrix;

    #[test]
    fn normalization() {
        let grid = haar_grid(2, 2, 2).unwrap();
        assert!((grid.weight_sum() - 1.0).abs() < 1e-12);
        let grid = haar_grid(16, 16, 16).unwrap();
        let one = grid.integrate(|_| Complex64::new(1.0, 0.0));
        assert!((one - 1.0).norm() < 1e-12);
        assert!(haar_grid(1, 4, 4).is_err());
    }

    #[test]
    fn integrates_small_characters() {
        let grid = haar_grid(16, 16, 16).unwrap();
        let v = grid.integrate(|g| Complex64::new(g.trace(), 0.0));
        assert!(v.norm() < 1e-10);
        let v = grid.integrate(|g| Complex64::new(g.a().norm_sqr(), 0.0));
        assert!((v - 0.5).norm() < 1e-12);
        let v = grid.integrate(|g| {
            let t = irrep_matrix(2, g).matrix.trace();
            t * t.conj()
        });
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn band_limit_rule() {
        let grid = HaarGrid::for_band_limit(4);
        assert_eq!(
            grid.shape(),
            GridShape {
                n_phi: 20,
                n_theta: 12,
                n_psi: 20
            }
        );
        assert!(grid.supports_band_limit(4));
        assert!(!grid.supports_band_limit(5));
        assert!(haar_grid(24, 24, 24).unwrap().supports_band_limit(4));
    }
}
