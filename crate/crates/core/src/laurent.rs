//! Exact Laurent polynomials on the torus with integer coefficients.
//!
//! Exponents are [`Weight`]s in doubled coordinates. The `BTreeMap` keeps
//! terms sorted lexicographically by exponent, which is a group order on the
//! exponent lattice and therefore compatible with multiplication; the exact
//! division below relies on this.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::{Weight, WeylElement};
use crate::series::TorusSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Weight, i64>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), 1)
    }

    pub fn monomial(exponent: Weight, coeff: i64) -> Self {
        let mut p = Self::zero(exponent.rank());
        p.add_term(exponent, coeff);
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, exponent: Weight, coeff: i64) {
        debug_assert_eq!(exponent.rank(), self.rank);
        if coeff == 0 {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exponent: &Weight) -> i64 {
        self.terms.get(exponent).copied().unwrap_or(0)
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

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(&Weight, i64)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Lexicographically smallest term.
    pub fn trailing(&self) -> Option<(&Weight, i64)> {
        self.terms.iter().next().map(|(e, &c)| (e, c))
    }

    /// Sum of coefficients: the value at the identity of the torus.
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Substitutes `e_μ ↦ e_{w·μ}` in every term.
    pub fn apply_weyl(&self, w: &WeylElement) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (e, &c) in &self.terms {
            out.add_term(w.apply(e), c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), k * c);
        }
        out
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Eliminates the lexicographically largest term of the running remainder
    /// at each step. Fails with [`Error::Consistency`] if the division leaves
    /// a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.rank != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: divisor.rank,
            });
        }
        let Some((d_lead, d_coeff)) = divisor.leading() else {
            return Err(Error::domain("division by the zero series"));
        };
        let d_lead = d_lead.clone();
        let mut quotient = LaurentPoly::zero(self.rank);
        let Some((n_trail, _)) = self.trailing() else {
            return Ok(quotient);
        };
        // If self = q·d then trailing(self) = trailing(q) + trailing(d), so any
        // quotient exponent below this bound proves a nonzero remainder.
        let floor = n_trail - divisor.trailing().unwrap().0;

        let mut remainder = self.clone();
        while let Some((r_lead, r_coeff)) = remainder.leading() {
            let q_exp = r_lead - &d_lead;
            if q_exp < floor || r_coeff % d_coeff != 0 {
                return Err(Error::Consistency(format!(
                    "inexact Laurent division: remainder has {} terms",
                    remainder.len()
                )));
            }
            let q_coeff = r_coeff / d_coeff;
            quotient.add_term(q_exp.clone(), q_coeff);
            remainder = &remainder - &LaurentPoly::monomial(q_exp, q_coeff).mul(divisor);
        }
        Ok(quotient)
    }

    /// Evaluates at the torus point with natural angles `theta`; doubled
    /// exponents use half-angle phases.
    pub fn evaluate(&self, theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, &c)| {
                let phase: f64 = e
                    .doubled()
                    .iter()
                    .zip(theta)
                    .map(|(&d, &t)| d as f64 * t * 0.5)
                    .sum();
                Complex64::from_polar(c as f64, phase)
            })
            .sum()
    }

    pub fn to_series(&self) -> TorusSeries {
        TorusSeries::from_terms(
            self.rank,
            self.terms
                .iter()
                .map(|(e, &c)| (e.clone(), Complex64::new(c as f64, 0.0))),
        )
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.rank, rhs.rank);
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                *acc.entry(a + b).or_insert(0) += ca * cb;
            }
        }
        acc.retain(|_, c| *c != 0);
        LaurentPoly {
            rank: self.rank,
            terms: acc,
        }
    }
}
