//! Sparse Fourier series on the torus with complex coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::roots::{SpectrumSet, Weight};
use crate::ZERO_THRESHOLD;

/// `Σ c_m e^{i⟨m,θ⟩}` with exponents `m` held in doubled coordinates.
///
/// Terms whose magnitude falls below [`ZERO_THRESHOLD`] are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSeries {
    rank: usize,
    terms: BTreeMap<Weight, Complex64>,
}

impl TorusSeries {
    pub fn zero(rank: usize) -> Self {
        TorusSeries {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: Complex64) -> Self {
        Self::from_terms(rank, [(Weight::zero(rank), c)])
    }

    /// Sums duplicate exponents, then prunes at [`ZERO_THRESHOLD`].
    ///
    /// Panics if an exponent has the wrong rank.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Weight, Complex64)>) -> Self {
        Self::from_terms_with_threshold(rank, terms, ZERO_THRESHOLD)
    }

    pub fn from_terms_with_threshold(
        rank: usize,
        terms: impl IntoIterator<Item = (Weight, Complex64)>,
        threshold: f64,
    ) -> Self {
        let mut acc: BTreeMap<Weight, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.rank(), rank, "exponent rank mismatch");
            *acc.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        acc.retain(|_, c| c.norm() >= threshold);
        TorusSeries { rank, terms: acc }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, Complex64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exponent: &Weight) -> Complex64 {
        self.terms
            .get(exponent)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Drops terms below `threshold`.
    pub fn pruned(&self, threshold: f64) -> TorusSeries {
        Self::from_terms_with_threshold(
            self.rank,
            self.terms.iter().map(|(e, &c)| (e.clone(), c)),
            threshold,
        )
    }

    pub fn scale(&self, k: Complex64) -> TorusSeries {
        Self::from_terms(
            self.rank,
            self.terms.iter().map(|(e, &c)| (e.clone(), k * c)),
        )
    }

    pub fn add(&self, other: &TorusSeries) -> Result<TorusSeries> {
        self.check_same_rank(other)?;
        Ok(Self::from_terms(
            self.rank,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, &c)| (e.clone(), c)),
        ))
    }

    pub fn sub(&self, other: &TorusSeries) -> Result<TorusSeries> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub(crate) fn check_same_rank(&self, other: &TorusSeries) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            })
        }
    }

    /// `g(θ)` at natural angles `theta`.
    pub fn evaluate(&self, theta: &[f64]) -> Complex64 {
        debug_assert_eq!(theta.len(), self.rank);
        self.terms
            .iter()
            .map(|(e, &c)| {
                let phase: f64 = e
                    .doubled()
                    .iter()
                    .zip(theta)
                    .map(|(&d, &t)| d as f64 * t * 0.5)
                    .sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    /// `(Σ |c_m|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute doubled exponent coordinate (0 for the zero series).
    pub fn max_abs_doubled_exponent(&self) -> i64 {
        self.terms.keys().map(Weight::max_abs).max().unwrap_or(0)
    }

    /// Exponent support.
    pub fn support(&self) -> SpectrumSet {
        SpectrumSet::from_weights(self.rank, self.terms.keys().cloned())
            .expect("exponent ranks are checked on insertion")
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &TorusSeries) -> f64 {
        let mut keys: Vec<&Weight> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (self.coefficient(k) - other.coefficient(k)).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponent: Vec<i64>,
    re: f64,
    im: f64,
}

impl Serialize for TorusSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(e, c)| TermRecord {
            exponent: e.doubled().to_vec(),
            re: c.re,
            im: c.im,
        }))
    }
}

/// Deserialization cannot recover the rank of an empty series; it defaults to
/// one. Use [`TorusSeries::from_records`] when the rank is known.
impl<'de> Deserialize<'de> for TorusSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let rank = records.first().map_or(1, |r| r.exponent.len());
        if records.iter().any(|r| r.exponent.len() != rank) {
            return Err(serde::de::Error::custom("exponents of differing rank"));
        }
        Ok(Self::from_terms(
            rank,
            records
                .into_iter()
                .map(|r| (Weight::from_doubled(r.exponent), Complex64::new(r.re, r.im))),
        ))
    }
}
