//! The Weyl character formula.
//!
//! A highest weight `λ` is paired with the torus character `λ + ρ`: the
//! numerator is the alternating sum over the Weyl orbit of `λ + ρ` and the
//! character is the exact Laurent quotient by the Weyl denominator `Δ⁺`. The
//! quotient is evaluated directly, so the singular set `Δ⁺ = 0` never shows
//! up as a division.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::roots::{RootSystem, Weight};
use crate::series::TorusSeries;

fn alternating_orbit_sum(rs: &RootSystem, mu: &Weight) -> LaurentPoly {
    let mut out = LaurentPoly::zero(rs.rank());
    for w in rs.weyl_elements() {
        out.add_term(w.apply(mu), w.sign());
    }
    out
}

/// `Σ_w ε(w) e_{w(λ+ρ)}`.
pub fn weyl_numerator_exact(rs: &RootSystem, lam: &Weight) -> Result<LaurentPoly> {
    rs.require_dominant_integral(lam)?;
    Ok(alternating_orbit_sum(rs, &(lam + rs.rho())))
}

pub fn weyl_numerator(rs: &RootSystem, lam: &Weight) -> Result<TorusSeries> {
    weyl_numerator_exact(rs, lam).map(|p| p.to_series())
}

/// `Δ⁺ = Σ_w ε(w) e_{wρ}`.
pub fn weyl_denominator_exact(rs: &RootSystem) -> LaurentPoly {
    alternating_orbit_sum(rs, rs.rho())
}

pub fn weyl_denominator(rs: &RootSystem) -> TorusSeries {
    weyl_denominator_exact(rs).to_series()
}

/// `Π_{α ∈ R⁺} (e_{α/2} − e_{−α/2})`, expanded.
pub fn denominator_product_form(rs: &RootSystem) -> LaurentPoly {
    rs.positive_roots()
        .iter()
        .fold(LaurentPoly::one(rs.rank()), |acc, alpha| {
            // α/2 in doubled coordinates is α's natural coordinates.
            let half = Weight::from_doubled(alpha.doubled().iter().map(|d| d / 2).collect());
            let factor =
                &LaurentPoly::monomial(half.clone(), 1) - &LaurentPoly::monomial(-&half, 1);
            &acc * &factor
        })
}

/// The irreducible character with highest weight `lam`, restricted to T.
pub fn character_series_exact(rs: &RootSystem, lam: &Weight) -> Result<LaurentPoly> {
    let numerator = weyl_numerator_exact(rs, lam)?;
    let quotient = numerator.div_exact(&weyl_denominator_exact(rs))?;
    if let Some((e, _)) = quotient.terms().find(|(e, _)| !e.is_character()) {
        return Err(Error::Consistency(format!(
            "character of {lam} has non-integral exponent {e}"
        )));
    }
    Ok(quotient)
}

pub fn character_series(rs: &RootSystem, lam: &Weight) -> Result<TorusSeries> {
    character_series_exact(rs, lam).map(|p| p.to_series())
}

/// `Θ_λ(t)` for natural torus angles `t`.
pub fn character_eval(rs: &RootSystem, lam: &Weight, t: &[f64]) -> Result<Complex64> {
    if t.len() != rs.rank() {
        return Err(Error::RankMismatch {
            expected: rs.rank(),
            found: t.len(),
        });
    }
    Ok(character_series_exact(rs, lam)?.evaluate(t))
}

/// `(1/|W|) · mean_grid |Δ⁺|² Θ_λ conj(Θ_μ)` for every pair of `weights`.
///
/// The grid has more than twice the largest doubled exponent of the integrand
/// points per axis, so the mean is the exact torus integral up to rounding.
pub fn weyl_gram(rs: &RootSystem, weights: &[Weight]) -> Result<Vec<Vec<Complex64>>> {
    let k = rs.rank();
    let delta = weyl_denominator_exact(rs);
    let chars = weights
        .iter()
        .map(|w| character_series_exact(rs, w))
        .collect::<Result<Vec<_>>>()?;

    let max_char = chars
        .iter()
        .flat_map(|c| c.terms().map(|(e, _)| e.max_abs()))
        .max()
        .unwrap_or(0);
    let max_delta = delta.terms().map(|(e, _)| e.max_abs()).max().unwrap_or(0);
    let bound = 2 * max_delta + 2 * max_char;
    let m = (2 * bound + 1) as usize;

    let n = weights.len();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let total = m.pow(k as u32);
    let mut idx = vec![0usize; k];
    let mut theta = vec![0.0; k];
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..total {
        for (t, &i) in theta.iter_mut().zip(&idx) {
            *t = std::f64::consts::TAU * i as f64 / m as f64;
        }
        let weight = delta.evaluate(&theta).norm_sqr();
        for (v, c) in values.iter_mut().zip(&chars) {
            *v = c.evaluate(&theta);
        }
        for a in 0..n {
            for b in 0..n {
                gram[a][b] += weight * values[a] * values[b].conj();
            }
        }
        for i in idx.iter_mut() {
            *i += 1;
            if *i < m {
                break;
            }
            *i = 0;
        }
    }
    let norm = (total * rs.weyl_order()) as f64;
    for row in &mut gram {
        for v in row.iter_mut() {
            *v /= norm;
        }
    }
    Ok(gram)
}
