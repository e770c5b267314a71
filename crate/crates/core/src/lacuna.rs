//! Q-thin and Hadamard-lacunary sets of integers.
//!
//! Every finite set is trivially a finite union of lacunary sets (singletons
//! qualify), so all predicates here are parametrized: a set is tested against
//! an explicit ratio `Q > 1`, cutoff `N ≥ 1`, and, for covers, a maximum part
//! count `r`. All ratio comparisons are exact integer cross-multiplications.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::roots::{RootSystem, SpectrumSet};

/// A finite set of integers, sorted ascending without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntSet(Vec<i64>);

impl IntSet {
    pub fn new(values: impl IntoIterator<Item = i64>) -> Self {
        let mut v: Vec<i64> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IntSet(v)
    }

    pub fn empty() -> Self {
        IntSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        IntSet::new(self.iter().chain(other.iter()))
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

impl FromIterator<i64> for IntSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        IntSet::new(iter)
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<i64>::deserialize(deserializer).map(IntSet::new)
    }
}

/// Serializes a rational as a `"p/q"` string.
pub mod rational_string {
    use num_rational::Rational64;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational64, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.trim().parse().map_err(de::Error::custom)
    }
}

fn check_q(q: Rational64) -> Result<()> {
    if q > Rational64::from_integer(1) {
        Ok(())
    } else {
        Err(Error::parameter(format!("Q must exceed 1, got {q}")))
    }
}

fn check_n(n: i64) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::parameter(format!("N must be at least 1, got {n}")))
    }
}

/// `|big| / |small| ≥ Q`, exactly.
fn ratio_at_least(big: i64, small: i64, q: Rational64) -> bool {
    let big = big.unsigned_abs() as i128;
    let small = small.unsigned_abs() as i128;
    big * (*q.denom() as i128) >= (*q.numer() as i128) * small
}

/// Magnitudes of `values` sorted ascending, or `None` if the values do not
/// all share one strict sign.
fn one_signed_magnitudes(values: &[i64]) -> Option<Vec<i64>> {
    let all_pos = values.iter().all(|&x| x > 0);
    let all_neg = values.iter().all(|&x| x < 0);
    if !(all_pos || all_neg) {
        return None;
    }
    let mut mags: Vec<i64> = values.iter().map(|x| x.abs()).collect();
    mags.sort_unstable();
    Some(mags)
}

fn thin_sorted_magnitudes(mags: &[i64], q: Rational64) -> bool {
    // Consecutive ratios ≥ Q > 1 imply every pairwise ratio is ≥ Q.
    mags.windows(2).all(|w| ratio_at_least(w[1], w[0], q))
}

/// Contained in ℕ = {1, 2, …} or −ℕ, with `|n|/|m| ≥ Q` whenever `|n| > |m|`.
pub fn is_q_thin(a: &IntSet, q: Rational64) -> Result<bool> {
    check_q(q)?;
    Ok(match one_signed_magnitudes(a.as_slice()) {
        Some(mags) => thin_sorted_magnitudes(&mags, q),
        None => false,
    })
}

/// Empty, or both tails `A ∩ [N, ∞)` and `A ∩ (−∞, −N]` are Q-thin.
pub fn is_lacunary(a: &IntSet, q: Rational64, n: i64) -> Result<bool> {
    check_q(q)?;
    check_n(n)?;
    let upper = IntSet::new(a.iter().filter(|&x| x >= n));
    let lower = IntSet::new(a.iter().filter(|&x| x <= -n));
    Ok(is_q_thin(&upper, q)? && is_q_thin(&lower, q)?)
}

/// A partition of a finite set into lacunary parts at fixed `(Q, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LacunaryCert {
    #[serde(with = "rational_string")]
    pub q: Rational64,
    pub n: i64,
    pub parts: Vec<IntSet>,
}

impl LacunaryCert {
    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// Parts are pairwise disjoint, reassemble `set` exactly and are each
    /// lacunary at `(q, n)`.
    pub fn verify(&self, set: &IntSet) -> bool {
        let total: usize = self.parts.iter().map(IntSet::len).sum();
        let union = self
            .parts
            .iter()
            .fold(IntSet::empty(), |acc, p| acc.union(p));
        total == union.len()
            && &union == set
            && self
                .parts
                .iter()
                .all(|p| !p.is_empty() && is_lacunary(p, self.q, self.n).unwrap_or(false))
    }
}

/// First-fit chain cover of one tail, processed by increasing magnitude.
///
/// A new chain is opened at `x` only when every open chain ends in
/// `(|x|/Q, |x|]`; together with `x` those ends form a set whose pairwise
/// ratios are all below `Q`, so no cover can use fewer chains.
fn greedy_chains(tail: &[i64], q: Rational64) -> Vec<Vec<i64>> {
    let mut sorted = tail.to_vec();
    sorted.sort_unstable_by_key(|x| x.abs());
    let mut chains: Vec<Vec<i64>> = Vec::new();
    for x in sorted {
        match chains
            .iter_mut()
            .find(|c| ratio_at_least(x, *c.last().unwrap(), q))
        {
            Some(chain) => chain.push(x),
            None => chains.push(vec![x]),
        }
    }
    chains
}

/// A cover of `a` by the fewest possible `(Q, N)`-lacunary parts.
///
/// The positive and negative tails are chain-covered independently; part `i`
/// takes the `i`-th chain from each tail, and the middle zone `(−N, N)` joins
/// the first part.
pub fn min_lacunary_cover(a: &IntSet, q: Rational64, n: i64) -> Result<LacunaryCert> {
    check_q(q)?;
    check_n(n)?;
    let upper: Vec<i64> = a.iter().filter(|&x| x >= n).collect();
    let lower: Vec<i64> = a.iter().filter(|&x| x <= -n).collect();
    let middle: Vec<i64> = a.iter().filter(|&x| x > -n && x < n).collect();

    let up = greedy_chains(&upper, q);
    let down = greedy_chains(&lower, q);
    let mut count = up.len().max(down.len());
    if count == 0 && !middle.is_empty() {
        count = 1;
    }
    let mut parts: Vec<Vec<i64>> = vec![Vec::new(); count];
    for (i, chain) in up.into_iter().enumerate() {
        parts[i].extend(chain);
    }
    for (i, chain) in down.into_iter().enumerate() {
        parts[i].extend(chain);
    }
    if let Some(first) = parts.first_mut() {
        first.extend(middle);
    }
    Ok(LacunaryCert {
        q,
        n,
        parts: parts.into_iter().map(IntSet::new).collect(),
    })
}

/// Verdict for one coordinate projection of the Weyl orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisReport {
    pub axis: usize,
    pub projection: IntSet,
    pub cert: LacunaryCert,
    pub within_limit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Outcome of the product-box lacunarity condition
/// `⋃_w w·E ⊂ E_1 × ⋯ × E_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub holds: bool,
    #[serde(with = "rational_string")]
    pub q: Rational64,
    pub n: i64,
    pub max_parts: usize,
    pub orbit: SpectrumSet,
    pub axes: Vec<AxisReport>,
}

impl ConditionReport {
    pub fn projections(&self) -> Vec<&IntSet> {
        self.axes.iter().map(|a| &a.projection).collect()
    }
}

/// Checks whether the Weyl orbit of `e` fits in a product of sets that are
/// each coverable by at most `max_parts` `(Q, N)`-lacunary parts.
///
/// Any admissible box contains the box of coordinate projections of the
/// orbit, so testing the projections is both necessary and sufficient.
pub fn check_condition_1(
    rs: &RootSystem,
    e: &SpectrumSet,
    q: Rational64,
    n: i64,
    max_parts: usize,
) -> Result<ConditionReport> {
    check_q(q)?;
    check_n(n)?;
    if max_parts == 0 {
        return Err(Error::parameter("the part limit r must be at least 1"));
    }
    if let Some(w) = e.iter().find(|w| !w.is_character()) {
        return Err(Error::domain(format!(
            "{w} is not a character of the torus"
        )));
    }
    let orbit = rs.orbit_of_set(e)?;
    let axes = (0..rs.rank())
        .map(|axis| {
            let projection = IntSet::new(orbit.iter().map(|w| w.doubled()[axis] / 2));
            let cert = min_lacunary_cover(&projection, q, n)?;
            let within_limit = cert.part_count() <= max_parts;
            let failure = (!within_limit).then(|| {
                format!(
                    "projection {projection} needs {} lacunary parts at Q = {q}, N = {n}; limit is {max_parts}",
                    cert.part_count()
                )
            });
            Ok(AxisReport {
                axis,
                projection,
                cert,
                within_limit,
                failure,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport {
        holds: axes.iter().all(|a| a.within_limit),
        q,
        n,
        max_parts,
        orbit,
        axes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, GroupId, Weight};

    fn q(p: i64, d: i64) -> Rational64 {
        Rational64::new(p, d)
    }

    fn set(v: &[i64]) -> IntSet {
        IntSet::new(v.iter().copied())
    }

    #[test]
    fn q_thin_examples() {
        assert!(is_q_thin(&set(&[1, 2, 4, 8]), q(2, 1)).unwrap());
        assert!(!is_q_thin(&set(&[3, 5]), q(2, 1)).unwrap());
        assert!(is_q_thin(&set(&[-1, -3, -9]), q(3, 1)).unwrap());
        assert!(!is_q_thin(&set(&[1, -2]), q(2, 1)).unwrap());
        assert!(is_q_thin(&IntSet::empty(), q(2, 1)).unwrap());
        assert!(!is_q_thin(&set(&[0, 4]), q(2, 1)).unwrap());
        // 3/2 boundary is inclusive
        assert!(is_q_thin(&set(&[2, 3]), q(3, 2)).unwrap());
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            is_q_thin(&set(&[1]), q(1, 1)),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            is_lacunary(&set(&[1]), q(2, 1), 0),
            Err(Error::Parameter(_))
        ));
        assert!(min_lacunary_cover(&set(&[1]), q(1, 2), 1).is_err());
    }

    #[test]
    fn lacunary_examples() {
        let powers: Vec<i64> = (0..=5).flat_map(|j| [1 << j, -(1 << j)]).collect();
        assert!(is_lacunary(&set(&powers), q(2, 1), 1).unwrap());
        for (qq, n) in [(q(2, 1), 1), (q(3, 2), 7)] {
            assert!(is_lacunary(&IntSet::empty(), qq, n).unwrap());
        }
        assert!(is_lacunary(&set(&[1, 2, 3]), q(2, 1), 4).unwrap());
        // zero sits in the unconstrained middle zone
        assert!(is_lacunary(&set(&[0, 1, 2, 4]), q(2, 1), 1).unwrap());
    }

    #[test]
    fn cover_examples() {
        let a = set(&[2, 3, 4, 6, 8, 12, 16, 24]);
        let cert = min_lacunary_cover(&a, q(2, 1), 1).unwrap();
        assert_eq!(cert.part_count(), 2);
        assert!(cert.verify(&a));
        assert_eq!(cert.parts, vec![set(&[2, 4, 8, 16]), set(&[3, 6, 12, 24])]);

        let a = set(&[1, 2, 3]);
        let cert = min_lacunary_cover(&a, q(2, 1), 4).unwrap();
        assert_eq!(cert.part_count(), 1);
        assert!(cert.verify(&a));

        let a = set(&[8]);
        assert_eq!(min_lacunary_cover(&a, q(5, 2), 3).unwrap().part_count(), 1);
        assert_eq!(
            min_lacunary_cover(&IntSet::empty(), q(2, 1), 1)
                .unwrap()
                .part_count(),
            0
        );
    }

    #[test]
    fn cover_pairs_positive_and_negative_chains() {
        let a = set(&[-6, -3, -2, 2, 4, 0]);
        let cert = min_lacunary_cover(&a, q(2, 1), 1).unwrap();
        assert_eq!(cert.part_count(), 2);
        assert!(cert.verify(&a));
    }

    #[test]
    fn condition_u2_holds() {
        let rs = build_root_system(GroupId::U2);
        let e = SpectrumSet::from_weights(
            2,
            [[1, 2], [2, 4], [4, 8]]
                .iter()
                .map(|v| Weight::from_natural(v)),
        )
        .unwrap();
        let report = check_condition_1(&rs, &e, q(2, 1), 1, 1).unwrap();
        assert!(report.holds);
        assert_eq!(report.orbit.len(), 6);
        for p in report.projections() {
            assert_eq!(p, &set(&[1, 2, 4, 8]));
        }
    }

    #[test]
    fn condition_su2_fails_for_consecutive_integers() {
        let rs = build_root_system(GroupId::Su2);
        let e = SpectrumSet::from_naturals_rank1(1..=6);
        let report = check_condition_1(&rs, &e, q(2, 1), 1, 1).unwrap();
        assert!(!report.holds);
        assert!(report.axes[0].cert.part_count() >= 2);
        assert!(report.axes[0].failure.is_some());
    }

    #[test]
    fn condition_on_empty_set_holds() {
        for g in GroupId::ALL {
            let rs = build_root_system(g);
            let report =
                check_condition_1(&rs, &SpectrumSet::empty(rs.rank()), q(2, 1), 1, 1).unwrap();
            assert!(report.holds);
        }
    }

    #[test]
    fn condition_rejects_non_characters() {
        let rs = build_root_system(GroupId::U2);
        let e = SpectrumSet::from_weights(2, [rs.rho().clone()]).unwrap();
        assert!(matches!(
            check_condition_1(&rs, &e, q(2, 1), 1, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cert_serializes_q_as_string() {
        let cert = min_lacunary_cover(&set(&[1, 2]), q(3, 2), 1).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains(r#""q":"3/2""#), "{json}");
        let back: LacunaryCert = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
