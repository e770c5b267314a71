use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::group::Su2;
use super::haar::HaarGrid;
use super::irrep::{irrep_matrix, CMatrix};
use crate::character::character_series;
use crate::error::{Error, Result};
use crate::roots::{build_root_system, GroupId, Weight};
use crate::series::TorusSeries;
use crate::ZERO_THRESHOLD;

/// A function on SU(2) with a known band limit: `π_n(f) = 0` for `n` above it.
pub trait GroupFunction: Sync {
    fn eval(&self, g: &Su2) -> Complex64;
    fn band_limit(&self) -> usize;
}

/// Wraps a closure with a declared band limit.
pub struct FnGroupFunction<F> {
    f: F,
    band_limit: usize,
}

pub fn from_fn<F: Fn(&Su2) -> Complex64 + Sync>(band_limit: usize, f: F) -> FnGroupFunction<F> {
    FnGroupFunction { f, band_limit }
}

impl<F: Fn(&Su2) -> Complex64 + Sync> GroupFunction for FnGroupFunction<F> {
    fn eval(&self, g: &Su2) -> Complex64 {
        (self.f)(g)
    }

    fn band_limit(&self) -> usize {
        self.band_limit
    }
}

/// The left translate `x ↦ f(g x)`.
pub struct Translated<'a, F: ?Sized> {
    pub f: &'a F,
    pub g: Su2,
}

impl<F: GroupFunction + ?Sized> GroupFunction for Translated<'_, F> {
    fn eval(&self, x: &Su2) -> Complex64 {
        self.f.eval(&(self.g * *x))
    }

    fn band_limit(&self) -> usize {
        self.f.band_limit()
    }
}

/// `f(x) = Σ_n (n+1) Tr(A_n π_n(x⁻¹))` for finitely many coefficient matrices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BandlimitedFunction {
    coeffs: BTreeMap<usize, CMatrix>,
}

fn check_shape(n: usize, a: &CMatrix) -> Result<()> {
    if a.nrows() != n + 1 || a.ncols() != n + 1 {
        return Err(Error::parameter(format!(
            "coefficient for n = {n} must be {0}×{0}, got {1}×{2}",
            n + 1,
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

impl BandlimitedFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(coeffs: impl IntoIterator<Item = (usize, CMatrix)>) -> Result<Self> {
        let mut f = Self::zero();
        for (n, a) in coeffs {
            f.insert(n, a)?;
        }
        Ok(f)
    }

    pub fn insert(&mut self, n: usize, a: CMatrix) -> Result<()> {
        check_shape(n, &a)?;
        self.coeffs.insert(n, a);
        Ok(())
    }

    /// `A_n = I/(n+1)` on each `n`, which synthesizes `Σ Θ_n`.
    pub fn scaled_identity(spectrum: &[usize]) -> Self {
        BandlimitedFunction {
            coeffs: spectrum
                .iter()
                .map(|&n| {
                    let s = Complex64::new(1.0 / (n + 1) as f64, 0.0);
                    (n, CMatrix::identity(n + 1, n + 1) * s)
                })
                .collect(),
        }
    }

    /// Entries with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(spectrum: &[usize], rng: &mut R) -> Self {
        BandlimitedFunction {
            coeffs: spectrum
                .iter()
                .map(|&n| {
                    let a = CMatrix::from_fn(n + 1, n + 1, |_, _| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    (n, a)
                })
                .collect(),
        }
    }

    /// [`BandlimitedFunction::random`] driven by a seeded ChaCha stream.
    pub fn seeded(spectrum: &[usize], seed: u64) -> Self {
        Self::random(spectrum, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, CMatrix> {
        &self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Option<&CMatrix> {
        self.coeffs.get(&n)
    }

    /// Highest weights with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .filter(|(_, a)| a.norm() > ZERO_THRESHOLD)
            .map(|(&n, _)| n)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    /// `‖f‖₂` for normalized Haar measure, `sqrt(Σ (n+1) ‖A_n‖²_F)`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&n, a)| (n + 1) as f64 * a.norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

impl GroupFunction for BandlimitedFunction {
    fn eval(&self, x: &Su2) -> Complex64 {
        let xinv = x.inverse();
        self.coeffs
            .iter()
            .map(|(&n, a)| {
                let p = irrep_matrix(n, &xinv).matrix;
                (n + 1) as f64 * trace_of_product(a, &p)
            })
            .sum()
    }

    fn band_limit(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut t = Complex64::new(0.0, 0.0);
    for j in 0..a.nrows() {
        for k in 0..a.ncols() {
            t += a[(j, k)] * b[(k, j)];
        }
    }
    t
}

impl Serialize for BandlimitedFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let doc: BTreeMap<String, Vec<[f64; 2]>> = self
            .coeffs
            .iter()
            .map(|(n, a)| {
                let entries = (0..a.nrows())
                    .flat_map(|j| (0..a.ncols()).map(move |k| [a[(j, k)].re, a[(j, k)].im]))
                    .collect();
                (n.to_string(), entries)
            })
            .collect();
        doc.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BandlimitedFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = BTreeMap::<String, Vec<[f64; 2]>>::deserialize(deserializer)?;
        let mut f = BandlimitedFunction::zero();
        for (key, entries) in doc {
            let n: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad highest weight `{key}`")))?;
            let d = n + 1;
            if entries.len() != d * d {
                return Err(D::Error::custom(format!(
                    "n = {n} needs {} entries, got {}",
                    d * d,
                    entries.len()
                )));
            }
            let a = CMatrix::from_row_iterator(
                d,
                d,
                entries.iter().map(|[re, im]| Complex64::new(*re, *im)),
            );
            f.coeffs.insert(n, a);
        }
        Ok(f)
    }
}

/// The inverse of [`fourier_transform`]: a [`BandlimitedFunction`] with the
/// given coefficients.
pub fn synthesize_bandlimited(
    coeffs: impl IntoIterator<Item = (usize, CMatrix)>,
) -> Result<BandlimitedFunction> {
    BandlimitedFunction::new(coeffs)
}

/// `π_n(f) = ∫ f(x) π_n(x) dx` for each requested `n`, by quadrature.
///
/// Partial sums are formed per `φ` slice and added in slice order, so the
/// result does not depend on the thread count.
pub fn fourier_transforms<F: GroupFunction + ?Sized>(
    f: &F,
    ns: &[usize],
    grid: &HaarGrid,
) -> Result<Vec<CMatrix>> {
    let top = ns.iter().copied().max().unwrap_or(0).max(f.band_limit());
    grid.require_band_limit(top)?;
    let zero: Vec<CMatrix> = ns.iter().map(|&n| CMatrix::zeros(n + 1, n + 1)).collect();
    let partials: Vec<Vec<CMatrix>> = grid
        .phi_slices()
        .into_par_iter()
        .map(|slice| {
            let mut acc = zero.clone();
            for (g, w) in grid.slice_nodes(slice) {
                let fw = f.eval(&g) * w;
                for (m, &n) in acc.iter_mut().zip(ns) {
                    *m += irrep_matrix(n, &g).matrix * fw;
                }
            }
            acc
        })
        .collect();
    Ok(partials.into_iter().fold(zero, |mut acc, p| {
        for (a, b) in acc.iter_mut().zip(p) {
            *a += b;
        }
        acc
    }))
}

pub fn fourier_transform<F: GroupFunction + ?Sized>(
    f: &F,
    n: usize,
    grid: &HaarGrid,
) -> Result<CMatrix> {
    Ok(fourier_transforms(f, &[n], grid)?.pop().unwrap())
}

/// `Tr π_n(f)` for `n = 0, …, band_limit`.
pub fn character_traces<F: GroupFunction + ?Sized>(
    f: &F,
    grid: &HaarGrid,
) -> Result<Vec<Complex64>> {
    let ns: Vec<usize> = (0..=f.band_limit()).collect();
    Ok(fourier_transforms(f, &ns, grid)?
        .iter()
        .map(|m| m.trace())
        .collect())
}

/// `F_f(t(θ)) = ∫ f(g t(θ) g⁻¹) dg` with `t(θ) = diag(e^{iθ}, e^{-iθ})`.
///
/// The integrand does not depend on the last Euler angle of `g`, so that axis
/// of the rule is summed out in closed form.
pub fn central_average<F: GroupFunction + ?Sized>(
    f: &F,
    theta: f64,
    grid: &HaarGrid,
) -> Result<Complex64> {
    grid.require_band_limit(f.band_limit())?;
    let t = Su2::torus(theta);
    Ok(grid
        .phi_theta_nodes()
        .map(|(phi, th, w)| {
            let g = Su2::euler(phi, th, 0.0);
            f.eval(&(g * t * g.inverse())) * w
        })
        .sum())
}

pub fn central_averages<F: GroupFunction + ?Sized>(
    f: &F,
    thetas: &[f64],
    grid: &HaarGrid,
) -> Result<Vec<Complex64>> {
    thetas
        .par_iter()
        .map(|&t| central_average(f, t, grid))
        .collect()
}

/// `Σ_n Tr(π_n(f)) Θ_n` as a torus series in the SU(2) angle.
pub fn char_expansion<F: GroupFunction + ?Sized>(f: &F, grid: &HaarGrid) -> Result<TorusSeries> {
    let traces = character_traces(f, grid)?;
    series_from_traces(&traces)
}

pub(crate) fn series_from_traces(traces: &[Complex64]) -> Result<TorusSeries> {
    let rs = build_root_system(GroupId::Su2);
    let mut out = TorusSeries::zero(1);
    for (n, &tr) in traces.iter().enumerate() {
        if tr.norm() <= ZERO_THRESHOLD {
            continue;
        }
        let chi = character_series(&rs, &Weight::from_natural(&[n as i64]))?;
        out = out.add(&chi.scale(tr))?;
    }
    Ok(out)
}

/// `Tr(π_n(g)⁻¹ π_n(f))`, which equals `Tr π_n(x ↦ f(g x))`.
pub fn translated_trace<F: GroupFunction + ?Sized>(
    f: &F,
    n: usize,
    g: &Su2,
    grid: &HaarGrid,
) -> Result<Complex64> {
    let pf = fourier_transform(f, n, grid)?;
    Ok(trace_of_product(&irrep_matrix(n, &g.inverse()).matrix, &pf))
}

/// Solution of the linear system `Tr(π_n(g_i)⁻¹ A) = τ_i` for `A`.
#[derive(Clone, Debug)]
pub struct TranslateRecovery {
    pub matrix: CMatrix,
    /// Smallest singular value of the system; near zero means the sampled
    /// elements were not generic enough to pin `A` down.
    pub min_singular_value: f64,
}

/// Recovers `π_n(f)` from translated traces at the elements `gs`.
///
/// With at least `(n+1)²` generic elements the map `A ↦ (Tr(π_n(g_i)⁻¹ A))_i`
/// is injective, so the traces vanish for every sampled `g` only if `A = 0`.
pub fn recover_from_translates(
    n: usize,
    gs: &[Su2],
    traces: &[Complex64],
) -> Result<TranslateRecovery> {
    let d = n + 1;
    if gs.len() != traces.len() {
        return Err(Error::parameter(format!(
            "{} group elements but {} traces",
            gs.len(),
            traces.len()
        )));
    }
    if gs.len() < d * d {
        return Err(Error::parameter(format!(
            "need at least {} translates for n = {n}, got {}",
            d * d,
            gs.len()
        )));
    }
    let mut system = DMatrix::<Complex64>::zeros(gs.len(), d * d);
    for (i, g) in gs.iter().enumerate() {
        let p = irrep_matrix(n, &g.inverse()).matrix;
        // Tr(P A) = Σ_{j,k} P_{jk} A_{kj}; unknown A_{kj} sits at column k·d + j
        for j in 0..d {
            for k in 0..d {
                system[(i, k * d + j)] = p[(j, k)];
            }
        }
    }
    let rhs = DMatrix::from_column_slice(traces.len(), 1, traces);
    let svd = system.svd(true, true);
    let min_singular_value = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let x = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Consistency(format!("least-squares solve failed: {e}")))?;
    Ok(TranslateRecovery {
        matrix: CMatrix::from_row_slice(d, d, x.as_slice()),
        min_singular_value,
    })
}
