//! Root systems, weight lattices and Weyl groups for the cataloged groups.
//!
//! Weights are stored in *doubled* coordinates: the integer vector held by a
//! [`Weight`] is `2λ`, where `λ` is written in the natural character
//! coordinates of the maximal torus. This keeps `ρ` (which has half-integer
//! entries for U(2) and U(4)) exact, and turns "λ is the derivative of a
//! character of T" into an evenness test.
//!
//! | group | torus                                   | positive roots       | W      |
//! |-------|-----------------------------------------|----------------------|--------|
//! | SU(2) | `diag(e^{iθ}, e^{-iθ})`                 | `α = 2`              | `{±1}` |
//! | U(n)  | `diag(e^{iθ_1}, …, e^{iθ_n})`           | `e_i - e_j`, `i < j` | `S_n`  |

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice vector in doubled coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<i64>);

impl Weight {
    /// Wraps an already-doubled coordinate vector.
    pub fn from_doubled(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    /// Builds a weight from integer natural coordinates.
    pub fn from_natural(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|c| 2 * c).collect())
    }

    /// Builds a weight from natural coordinates that are integers or
    /// half-integers.
    pub fn from_rational(coords: &[Rational64]) -> Result<Self> {
        coords
            .iter()
            .map(|c| {
                let d = c * 2;
                if d.is_integer() {
                    Ok(d.to_integer())
                } else {
                    Err(Error::domain(format!(
                        "coordinate {c} is not an integer or half-integer"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn doubled(&self) -> &[i64] {
        &self.0
    }

    /// Natural coordinates, exact.
    pub fn natural(&self) -> Vec<Rational64> {
        self.0.iter().map(|&d| Rational64::new(d, 2)).collect()
    }

    /// Natural coordinates when the weight is a character of T.
    pub fn natural_integers(&self) -> Option<Vec<i64>> {
        self.is_character()
            .then(|| self.0.iter().map(|d| d / 2).collect())
    }

    /// A weight is a character of the torus iff every doubled coordinate is
    /// even.
    pub fn is_character(&self) -> bool {
        self.0.iter().all(|d| d % 2 == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Standard inner product of the doubled vectors (four times the natural
    /// inner product).
    pub fn dot(&self, other: &Weight) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Largest absolute doubled coordinate.
    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|d| d.abs()).max().unwrap_or(0)
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: rank,
                found: self.rank(),
            })
        }
    }
}

impl Add for &Weight {
    type Output = Weight;

    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;

    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

fn fmt_half(d: i64) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{d}/2")
    }
}

/// Parses natural coordinates such as `3`, `(1,2)` or `(1/2, -1/2)`.
impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let coords = body
            .split(',')
            .map(|c| {
                c.trim().parse::<Rational64>().map_err(|_| {
                    Error::parameter(format!("bad weight coordinate `{}` in `{s}`", c.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Weight::from_rational(&coords)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|&d| fmt_half(d)).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight{self}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NaturalCoord {
    Int(i64),
    Half(String),
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coords: Vec<NaturalCoord> = self
            .0
            .iter()
            .map(|&d| {
                if d % 2 == 0 {
                    NaturalCoord::Int(d / 2)
                } else {
                    NaturalCoord::Half(format!("{d}/2"))
                }
            })
            .collect();
        coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<NaturalCoord>::deserialize(deserializer)?;
        coords
            .into_iter()
            .map(|c| match c {
                NaturalCoord::Int(n) => Ok(2 * n),
                NaturalCoord::Half(s) => {
                    let r: Rational64 = s.trim().parse().map_err(de::Error::custom)?;
                    let d = r * 2;
                    if d.is_integer() {
                        Ok(d.to_integer())
                    } else {
                        Err(de::Error::custom(format!("`{s}` is not a half-integer")))
                    }
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }
}

/// The cataloged groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    Su2,
    U2,
    U3,
    U4,
}

impl GroupId {
    pub const ALL: [GroupId; 4] = [GroupId::Su2, GroupId::U2, GroupId::U3, GroupId::U4];

    pub fn tag(self) -> &'static str {
        match self {
            GroupId::Su2 => "su2",
            GroupId::U2 => "u2",
            GroupId::U3 => "u3",
            GroupId::U4 => "u4",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            GroupId::Su2 => 1,
            GroupId::U2 => 2,
            GroupId::U3 => 3,
            GroupId::U4 => 4,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "su2" => Ok(GroupId::Su2),
            "u2" => Ok(GroupId::U2),
            "u3" => Ok(GroupId::U3),
            "u4" => Ok(GroupId::U4),
            other => Err(Error::UnknownGroup(other.to_string())),
        }
    }
}

impl Serialize for GroupId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for GroupId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// An element of the Weyl group acting linearly on weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    action: Vec<Vec<i64>>,
    sign: i64,
}

impl WeylElement {
    fn from_permutation(perm: &[usize]) -> Self {
        let k = perm.len();
        // w·e_j = e_{perm[j]}
        let mut action = vec![vec![0; k]; k];
        for (j, &i) in perm.iter().enumerate() {
            action[i][j] = 1;
        }
        WeylElement {
            action,
            sign: permutation_sign(perm),
        }
    }

    pub fn action(&self) -> &[Vec<i64>] {
        &self.action
    }

    /// The determinant `ε(w)`.
    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        Weight(
            self.action
                .iter()
                .map(|row| row.iter().zip(w.doubled()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let k = self.action.len();
        let action = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).map(|l| self.action[i][l] * other.action[l][j]).sum())
                    .collect()
            })
            .collect();
        WeylElement {
            action,
            sign: self.sign * other.sign,
        }
    }

    /// Determinant of the action matrix, computed independently of the
    /// stored sign.
    pub fn determinant(&self) -> i64 {
        integer_det(&self.action)
    }
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn integer_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * integer_det(&minor)
            })
            .sum(),
    }
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Why a weight fails to be a highest weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    /// Condition (I): the pairing with `root` is not a nonnegative integer.
    FailsPositivity {
        root: Weight,
        pairing: Rational64,
    },
    /// Condition (II): coordinate `axis` is not an integer, so the weight is
    /// not the derivative of a character of T.
    NotCharacter {
        axis: usize,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Admissibility::Admissible => f.write_str("dominant integral"),
            Admissibility::FailsPositivity { root, pairing } => write!(
                f,
                "condition (I) fails: pairing with root {root} is {pairing}"
            ),
            Admissibility::NotCharacter { axis } => write!(
                f,
                "condition (II) fails: coordinate {axis} is not an integer"
            ),
        }
    }
}

/// Positive roots, `ρ` and the Weyl group of a cataloged group.
#[derive(Clone, Debug)]
pub struct RootSystem {
    group: GroupId,
    positive_roots: Vec<Weight>,
    rho: Weight,
    weyl: Vec<WeylElement>,
}

/// Builds the standard root data for `group`.
pub fn build_root_system(group: GroupId) -> RootSystem {
    match group {
        GroupId::Su2 => {
            let weyl = vec![
                WeylElement {
                    action: vec![vec![1]],
                    sign: 1,
                },
                WeylElement {
                    action: vec![vec![-1]],
                    sign: -1,
                },
            ];
            RootSystem {
                group,
                positive_roots: vec![Weight(vec![4])],
                rho: Weight(vec![2]),
                weyl,
            }
        }
        GroupId::U2 | GroupId::U3 | GroupId::U4 => {
            let n = group.rank();
            let mut positive_roots = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = vec![0; n];
                    v[i] = 2;
                    v[j] = -2;
                    positive_roots.push(Weight(v));
                }
            }
            let sum = positive_roots
                .iter()
                .fold(Weight::zero(n), |acc, r| &acc + r);
            let rho = Weight(sum.0.iter().map(|s| s / 2).collect());
            let weyl = permutations(n)
                .iter()
                .map(|p| WeylElement::from_permutation(p))
                .collect();
            RootSystem {
                group,
                positive_roots,
                rho,
                weyl,
            }
        }
    }
}

impl RootSystem {
    pub fn from_tag(tag: &str) -> Result<Self> {
        Ok(build_root_system(tag.parse()?))
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn weyl_elements(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    /// `2⟨λ, α⟩ / ⟨α, α⟩`, exact.
    pub fn cartan_pairing(&self, lam: &Weight, alpha: &Weight) -> Result<Rational64> {
        lam.check_rank(self.rank())?;
        if !self.positive_roots.contains(alpha) {
            return Err(Error::domain(format!(
                "{alpha} is not a positive root of {}",
                self.group
            )));
        }
        Ok(Rational64::new(2 * lam.dot(alpha), alpha.dot(alpha)))
    }

    /// Checks conditions (I) (nonnegative integral pairings, 0 included) and
    /// (II) (λ is a character of T), in that order.
    pub fn is_dominant_integral(&self, lam: &Weight) -> Result<Admissibility> {
        lam.check_rank(self.rank())?;
        for alpha in &self.positive_roots {
            let pairing = self.cartan_pairing(lam, alpha)?;
            if !pairing.is_integer() || pairing < Rational64::from_integer(0) {
                return Ok(Admissibility::FailsPositivity {
                    root: alpha.clone(),
                    pairing,
                });
            }
        }
        if let Some(axis) = lam.doubled().iter().position(|d| d % 2 != 0) {
            return Ok(Admissibility::NotCharacter { axis });
        }
        Ok(Admissibility::Admissible)
    }

    pub(crate) fn require_dominant_integral(&self, lam: &Weight) -> Result<()> {
        match self.is_dominant_integral(lam)? {
            Admissibility::Admissible => Ok(()),
            why => Err(Error::domain(format!(
                "{lam} is not a highest weight of {}: {why}",
                self.group
            ))),
        }
    }

    /// `⟨λ, α⟩ ≥ 0` for every positive root (integrality not required).
    pub fn is_dominant(&self, lam: &Weight) -> bool {
        self.positive_roots.iter().all(|a| lam.dot(a) >= 0)
    }

    pub fn weyl_orbit(&self, lam: &Weight) -> Result<SpectrumSet> {
        lam.check_rank(self.rank())?;
        let mut out = SpectrumSet::empty(self.rank());
        for w in &self.weyl {
            out.elements.insert(w.apply(lam));
        }
        Ok(out)
    }

    pub fn orbit_of_set(&self, set: &SpectrumSet) -> Result<SpectrumSet> {
        if set.rank != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: set.rank,
            });
        }
        let mut out = SpectrumSet::empty(self.rank());
        for lam in &set.elements {
            for w in &self.weyl {
                out.elements.insert(w.apply(lam));
            }
        }
        Ok(out)
    }

    /// Exact Weyl dimension `Π ⟨λ+ρ, α⟩ / ⟨ρ, α⟩`.
    pub fn weyl_dimension(&self, lam: &Weight) -> Result<i64> {
        self.require_dominant_integral(lam)?;
        let shifted = lam + &self.rho;
        let dim = self
            .positive_roots
            .iter()
            .fold(Rational64::from_integer(1), |acc, a| {
                acc * Rational64::new(shifted.dot(a), self.rho.dot(a))
            });
        if !dim.is_integer() {
            return Err(Error::Consistency(format!(
                "Weyl dimension of {lam} is not an integer: {dim}"
            )));
        }
        Ok(dim.to_integer())
    }

    /// The first `count` highest weights, ordered by the L1 norm of their
    /// natural coordinates and then lexicographically (descending).
    pub fn dominant_weights(&self, count: usize) -> Vec<Weight> {
        let k = self.rank();
        let mut radius = 1;
        loop {
            let mut found: Vec<Vec<i64>> = Vec::new();
            let mut current = vec![-radius; k];
            loop {
                let w = Weight::from_natural(&current);
                if matches!(self.is_dominant_integral(&w), Ok(Admissibility::Admissible)) {
                    found.push(current.clone());
                }
                // odometer increment over [-radius, radius]^k
                let mut axis = 0;
                while axis < k {
                    current[axis] += 1;
                    if current[axis] <= radius {
                        break;
                    }
                    current[axis] = -radius;
                    axis += 1;
                }
                if axis == k {
                    break;
                }
            }
            found.sort_by(|a, b| {
                let na: i64 = a.iter().map(|x| x.abs()).sum();
                let nb: i64 = b.iter().map(|x| x.abs()).sum();
                na.cmp(&nb).then_with(|| b.cmp(a))
            });
            // Everything with L1 norm ≤ radius is inside the box.
            let complete = found
                .iter()
                .filter(|v| v.iter().map(|x| x.abs()).sum::<i64>() <= radius)
                .count();
            if complete >= count {
                return found
                    .into_iter()
                    .take(count)
                    .map(|v| Weight::from_natural(&v))
                    .collect();
            }
            radius += 1;
        }
    }
}

/// A finite set of weights of a common rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectrumSet {
    rank: usize,
    elements: BTreeSet<Weight>,
}

impl SpectrumSet {
    pub fn empty(rank: usize) -> Self {
        SpectrumSet {
            rank,
            elements: BTreeSet::new(),
        }
    }

    pub fn from_weights(rank: usize, weights: impl IntoIterator<Item = Weight>) -> Result<Self> {
        let mut out = SpectrumSet::empty(rank);
        for w in weights {
            out.insert(w)?;
        }
        Ok(out)
    }

    /// Convenience for rank-one sets given by natural integer coordinates.
    pub fn from_naturals_rank1(values: impl IntoIterator<Item = i64>) -> Self {
        SpectrumSet {
            rank: 1,
            elements: values
                .into_iter()
                .map(|v| Weight::from_natural(&[v]))
                .collect(),
        }
    }

    pub fn insert(&mut self, w: Weight) -> Result<bool> {
        w.check_rank(self.rank)?;
        Ok(self.elements.insert(w))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.elements.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Weight> {
        self.elements.iter()
    }

    pub fn is_subset(&self, other: &SpectrumSet) -> bool {
        self.rank == other.rank && self.elements.is_subset(&other.elements)
    }

    /// Every element shifted by `by`.
    pub fn translate(&self, by: &Weight) -> Result<SpectrumSet> {
        by.check_rank(self.rank)?;
        Ok(SpectrumSet {
            rank: self.rank,
            elements: self.elements.iter().map(|w| w + by).collect(),
        })
    }
}

impl Serialize for SpectrumSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements.iter())
    }
}
