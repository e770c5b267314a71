//! Sparse Fourier series on the torus: synthesis, grid analysis, products,
//! spectra and zero-set box scans.
//!
//! Grids are regular on `[0, 4π)` per natural angle. On such a grid the
//! doubled exponent `d` of a term lands exactly in DFT bin `d`, so half-integer
//! exponents (for instance those of `Δ⁺` on U(2)) are resolved without
//! special cases. A grid is exact for a series when every axis has more than
//! twice the largest absolute doubled exponent points.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{SpectrumSet, Weight};
use crate::series::TorusSeries;
use crate::ZERO_THRESHOLD;

/// Period of each grid axis in natural angle units.
pub const GRID_PERIOD: f64 = 4.0 * PI;

/// Upper bound on the box centers listed in a [`ScanReport`].
pub const MAX_LISTED_BOXES: usize = 1000;

/// A regular grid on `[0, 4π)^k`, stored row-major with the last axis
/// contiguous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    points_per_axis: Vec<usize>,
}

impl GridSpec {
    pub fn new(points_per_axis: Vec<usize>) -> Result<Self> {
        if points_per_axis.is_empty() || points_per_axis.contains(&0) {
            return Err(Error::parameter(
                "grid needs at least one axis and one point per axis",
            ));
        }
        Ok(GridSpec { points_per_axis })
    }

    pub fn uniform(rank: usize, points: usize) -> Result<Self> {
        Self::new(vec![points; rank])
    }

    /// Smallest power-of-two grid that is exact for `series`.
    pub fn exact_for(series: &TorusSeries) -> Self {
        let need = 2 * series.max_abs_doubled_exponent() as usize + 1;
        GridSpec {
            points_per_axis: vec![need.next_power_of_two(); series.rank()],
        }
    }

    pub fn rank(&self) -> usize {
        self.points_per_axis.len()
    }

    pub fn points_per_axis(&self) -> &[usize] {
        &self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn step(&self, axis: usize) -> f64 {
        GRID_PERIOD / self.points_per_axis[axis] as f64
    }

    fn strides(&self) -> Vec<usize> {
        let k = self.rank();
        let mut strides = vec![1; k];
        for a in (0..k.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * self.points_per_axis[a + 1];
        }
        strides
    }

    /// Multi-index of flat position `flat`.
    pub fn index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank()];
        for a in (0..self.rank()).rev() {
            idx[a] = flat % self.points_per_axis[a];
            flat /= self.points_per_axis[a];
        }
        idx
    }

    /// Natural angles of flat position `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| i as f64 * self.step(a))
            .collect()
    }

    /// Whether the grid resolves every exponent up to `band_limit` (doubled).
    pub fn is_exact_for(&self, band_limit: i64) -> bool {
        self.points_per_axis
            .iter()
            .all(|&m| m as i64 > 2 * band_limit)
    }

    fn check_exact(&self, band_limit: i64) -> Result<()> {
        if self.is_exact_for(band_limit) {
            Ok(())
        } else {
            Err(Error::parameter(format!(
                "grid {:?} is too small for doubled band limit {band_limit}: need more than {} points per axis",
                self.points_per_axis,
                2 * band_limit
            )))
        }
    }
}

/// `g(θ) = Σ c_m e^{i⟨m,θ⟩}` at each of `points` by direct summation.
pub fn synthesize(series: &TorusSeries, points: &[Vec<f64>]) -> Vec<Complex64> {
    points.iter().map(|p| series.evaluate(p)).collect()
}

fn fft_in_place(data: &mut [Complex64], grid: &GridSpec, direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let strides = grid.strides();
    for (axis, &m) in grid.points_per_axis.iter().enumerate() {
        if m == 1 {
            continue;
        }
        let fft = planner.plan_fft(m, direction);
        let stride = strides[axis];
        let mut lane = vec![Complex64::new(0.0, 0.0); m];
        let block = stride * m;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (i, v) in lane.iter_mut().enumerate() {
                    *v = data[start + i * stride];
                }
                fft.process(&mut lane);
                for (i, v) in lane.iter().enumerate() {
                    data[start + i * stride] = *v;
                }
            }
        }
    }
}

fn bin_of(d: i64, m: usize) -> usize {
    d.rem_euclid(m as i64) as usize
}

fn signed_bin(i: usize, m: usize) -> i64 {
    if 2 * i > m {
        i as i64 - m as i64
    } else {
        i as i64
    }
}

/// Samples of `series` on every grid point, via an inverse FFT.
pub fn synthesize_grid(series: &TorusSeries, grid: &GridSpec) -> Result<Vec<Complex64>> {
    if series.rank() != grid.rank() {
        return Err(Error::RankMismatch {
            expected: grid.rank(),
            found: series.rank(),
        });
    }
    grid.check_exact(series.max_abs_doubled_exponent())?;
    let strides = grid.strides();
    let mut data = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (e, c) in series.terms() {
        let flat: usize = e
            .doubled()
            .iter()
            .zip(&grid.points_per_axis)
            .zip(&strides)
            .map(|((&d, &m), &s)| bin_of(d, m) * s)
            .sum();
        data[flat] += c;
    }
    fft_in_place(&mut data, grid, FftDirection::Inverse);
    Ok(data)
}

/// Discrete Fourier coefficients of `samples` taken on `grid`.
///
/// `band_limit` is the declared largest absolute doubled exponent of the
/// sampled function; the grid must have more than twice that many points per
/// axis.
pub fn analyze(samples: &[Complex64], grid: &GridSpec, band_limit: i64) -> Result<TorusSeries> {
    analyze_with_threshold(samples, grid, band_limit, ZERO_THRESHOLD)
}

pub fn analyze_with_threshold(
    samples: &[Complex64],
    grid: &GridSpec,
    band_limit: i64,
    threshold: f64,
) -> Result<TorusSeries> {
    if samples.len() != grid.len() {
        return Err(Error::parameter(format!(
            "expected {} samples for grid {:?}, got {}",
            grid.len(),
            grid.points_per_axis,
            samples.len()
        )));
    }
    grid.check_exact(band_limit)?;
    let mut data = samples.to_vec();
    fft_in_place(&mut data, grid, FftDirection::Forward);
    let scale = 1.0 / grid.len() as f64;
    let terms = data.iter().enumerate().map(|(flat, &c)| {
        let exponent: Vec<i64> = grid
            .index(flat)
            .iter()
            .zip(&grid.points_per_axis)
            .map(|(&i, &m)| signed_bin(i, m))
            .collect();
        (Weight::from_doubled(exponent), c * scale)
    });
    Ok(TorusSeries::from_terms_with_threshold(
        grid.rank(),
        terms,
        threshold,
    ))
}

/// Exponent-wise convolution.
pub fn product(a: &TorusSeries, b: &TorusSeries) -> Result<TorusSeries> {
    a.check_same_rank(b)?;
    let mut terms = Vec::with_capacity(a.len() * b.len());
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            terms.push((ea + eb, ca * cb));
        }
    }
    Ok(TorusSeries::from_terms(a.rank(), terms))
}

/// `{m : ĝ(m) ≠ 0}` at the default zero threshold.
pub fn spectrum(series: &TorusSeries) -> SpectrumSet {
    series.support()
}

pub fn spectrum_with_threshold(series: &TorusSeries, threshold: f64) -> SpectrumSet {
    series.pruned(threshold).support()
}

/// Minkowski sum `{a + b}` of two spectra.
pub fn minkowski_sum(a: &SpectrumSet, b: &SpectrumSet) -> Result<SpectrumSet> {
    let mut out = SpectrumSet::empty(a.rank());
    for x in a.iter() {
        for y in b.iter() {
            out.insert(x + y)?;
        }
    }
    Ok(out)
}

/// Result of sliding boxes over sampled `|g|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub box_side: f64,
    pub delta: f64,
    pub samples_per_box_side: usize,
    pub stride_samples: usize,
    pub boxes_scanned: usize,
    /// Center of the box whose largest sampled `|g|` is smallest.
    pub worst_box_center: Vec<f64>,
    /// Largest sampled `|g|` in the worst box.
    pub worst_box_max: f64,
    /// Smallest sampled `|g|` in the worst box.
    pub worst_box_min: f64,
    pub vanishing_count: usize,
    /// Centers of vanishing boxes, truncated to [`MAX_LISTED_BOXES`].
    pub vanishing_boxes: Vec<Vec<f64>>,
}

impl ScanReport {
    pub fn any_vanishing(&self) -> bool {
        self.vanishing_count > 0
    }

    pub fn all_vanishing(&self) -> bool {
        self.vanishing_count == self.boxes_scanned
    }
}

/// Geometry of a box scan along one axis.
#[derive(Clone, Copy, Debug)]
pub(crate) struct AxisWindows {
    pub points: usize,
    pub len: usize,
    pub stride: usize,
    pub periodic: bool,
}

impl AxisWindows {
    pub fn starts(&self) -> Vec<usize> {
        if self.periodic {
            (0..self.points).step_by(self.stride).collect()
        } else if self.len >= self.points {
            vec![0]
        } else {
            let last = self.points - self.len;
            let mut s: Vec<usize> = (0..=last).step_by(self.stride).collect();
            if *s.last().unwrap() != last {
                s.push(last);
            }
            s
        }
    }

    pub fn sample(&self, start: usize, offset: usize) -> usize {
        if self.periodic {
            (start + offset) % self.points
        } else {
            (start + offset).min(self.points - 1)
        }
    }
}

/// Windowed maxima of a row-major array along every axis in turn.
///
/// Returns the reduced array (one entry per box, row-major over the window
/// starts) and the per-axis window starts.
pub(crate) fn box_maxima(values: &[f64], axes: &[AxisWindows]) -> (Vec<f64>, Vec<Vec<usize>>) {
    let starts: Vec<Vec<usize>> = axes.iter().map(AxisWindows::starts).collect();
    let mut shape: Vec<usize> = axes.iter().map(|a| a.points).collect();
    let mut data = values.to_vec();
    for (axis, win) in axes.iter().enumerate() {
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let n_out = starts[axis].len();
        let mut next = vec![0.0; outer * n_out * inner];
        for o in 0..outer {
            for (w, &s) in starts[axis].iter().enumerate() {
                for i in 0..inner {
                    let mut m = f64::NEG_INFINITY;
                    for off in 0..win.len {
                        let idx = win.sample(s, off);
                        let v = data[(o * shape[axis] + idx) * inner + i];
                        if v > m {
                            m = v;
                        }
                    }
                    next[(o * n_out + w) * inner + i] = m;
                }
            }
        }
        shape[axis] = n_out;
        data = next;
    }
    (data, starts)
}

pub(crate) fn check_scan_params(box_side: f64, delta: f64) -> Result<()> {
    if !(box_side.is_finite() && box_side > 0.0) {
        return Err(Error::parameter(format!(
            "box side must be positive, got {box_side}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::parameter(format!(
            "threshold δ must be positive, got {delta}"
        )));
    }
    Ok(())
}

/// Slides axis-aligned boxes of side `box_side` (stride half a side) over the
/// grid samples of `|g|`. A box is vanishing when its largest sampled `|g|`
/// is below `delta`.
pub fn zero_scan(
    series: &TorusSeries,
    grid: &GridSpec,
    box_side: f64,
    delta: f64,
) -> Result<ScanReport> {
    check_scan_params(box_side, delta)?;
    for axis in 0..grid.rank() {
        if grid.step(axis) > box_side / 8.0 {
            return Err(Error::parameter(format!(
                "grid step {} on axis {axis} exceeds box_side/8 = {}",
                grid.step(axis),
                box_side / 8.0
            )));
        }
    }
    let magnitudes: Vec<f64> = synthesize_grid(series, grid)?
        .iter()
        .map(|c| c.norm())
        .collect();
    let axes: Vec<AxisWindows> = (0..grid.rank())
        .map(|a| {
            let step = grid.step(a);
            let len = (box_side / step + 1e-9).floor() as usize + 1;
            let stride = ((box_side / 2.0) / step).round().max(1.0) as usize;
            AxisWindows {
                points: grid.points_per_axis[a],
                len,
                stride,
                periodic: true,
            }
        })
        .collect();
    let (maxima, starts) = box_maxima(&magnitudes, &axes);

    let shape: Vec<usize> = starts.iter().map(Vec::len).collect();
    let unravel = |mut flat: usize| {
        let mut idx = vec![0; shape.len()];
        for a in (0..shape.len()).rev() {
            idx[a] = starts[a][flat % shape[a]];
            flat /= shape[a];
        }
        idx
    };
    let center = |start: &[usize]| -> Vec<f64> {
        start
            .iter()
            .zip(&axes)
            .enumerate()
            .map(|(a, (&s, w))| {
                let c = (s as f64 + (w.len - 1) as f64 / 2.0) * grid.step(a);
                c % GRID_PERIOD
            })
            .collect()
    };

    let mut vanishing_count = 0;
    let mut vanishing_boxes = Vec::new();
    let mut worst = (0, f64::INFINITY);
    for (flat, &m) in maxima.iter().enumerate() {
        if m < delta {
            vanishing_count += 1;
            if vanishing_boxes.len() < MAX_LISTED_BOXES {
                vanishing_boxes.push(center(&unravel(flat)));
            }
        }
        if m < worst.1 {
            worst = (flat, m);
        }
    }

    let worst_start = unravel(worst.0);
    let strides = grid.strides();
    let mut worst_min = f64::INFINITY;
    let box_points: usize = axes.iter().map(|a| a.len).product();
    for local in 0..box_points {
        let mut rem = local;
        let mut flat = 0;
        for a in (0..axes.len()).rev() {
            let off = rem % axes[a].len;
            rem /= axes[a].len;
            flat += axes[a].sample(worst_start[a], off) * strides[a];
        }
        worst_min = worst_min.min(magnitudes[flat]);
    }

    Ok(ScanReport {
        box_side,
        delta,
        samples_per_box_side: axes[0].len,
        stride_samples: axes[0].stride,
        boxes_scanned: maxima.len(),
        worst_box_center: center(&worst_start),
        worst_box_max: worst.1,
        worst_box_min: worst_min,
        vanishing_count,
        vanishing_boxes,
    })
}

/// Writes `θ_0, …, θ_{k-1}, re, im` rows for grid samples.
pub fn write_samples_csv<W: Write>(
    mut out: W,
    grid: &GridSpec,
    samples: &[Complex64],
) -> io::Result<()> {
    let header: Vec<String> = (0..grid.rank()).map(|a| format!("theta{a}")).collect();
    writeln!(out, "{},re,im", header.join(","))?;
    for (flat, c) in samples.iter().enumerate() {
        let p: Vec<String> = grid
            .point(flat)
            .iter()
            .map(|t| format!("{t:.12}"))
            .collect();
        writeln!(out, "{},{:.15e},{:.15e}", p.join(","), c.re, c.im)?;
    }
    Ok(())
}

/// Writes `θ_0 … θ_{k-1} |g|` as tab-separated rows.
pub fn write_magnitude_tsv<W: Write>(
    mut out: W,
    grid: &GridSpec,
    samples: &[Complex64],
) -> io::Result<()> {
    let header: Vec<String> = (0..grid.rank()).map(|a| format!("theta{a}")).collect();
    writeln!(out, "{}\tabs", header.join("\t"))?;
    for (flat, c) in samples.iter().enumerate() {
        let p: Vec<String> = grid
            .point(flat)
            .iter()
            .map(|t| format!("{t:.12}"))
            .collect();
        writeln!(out, "{}\t{:.15e}", p.join("\t"), c.norm())?;
    }
    Ok(())
}
