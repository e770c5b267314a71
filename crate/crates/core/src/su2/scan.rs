use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::group::Su2;
use super::irrep::irrep_matrix;
use super::transform::{BandlimitedFunction, GroupFunction};
use crate::error::{Error, Result};
use crate::torus::{box_maxima, check_scan_params, AxisWindows, ScanReport, MAX_LISTED_BOXES};

/// Default number of samples along each side of a scanned box.
pub const DEFAULT_SAMPLES_PER_SIDE: usize = 3;

struct Axis {
    step: f64,
    windows: AxisWindows,
}

impl Axis {
    fn value(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    fn center(&self, start: usize) -> f64 {
        (start as f64 + (self.windows.len - 1) as f64 / 2.0) * self.step
    }
}

/// Slides boxes of side `box_side` in the Euler chart `(φ, θ, ψ)` over
/// samples of `|f|` and reports those whose sampled maximum is below `delta`.
///
/// `φ` runs over `[0, 2π + box_side]` so boxes straddling `φ = 2π` are seen,
/// `θ` over `[0, π]` and `ψ` periodically over `[0, 4π)`. A box with a sample
/// at or above `delta` certainly does not lie in the zero set; a box reported
/// as vanishing is only vanishing at the sampled points.
///
/// In Euler coordinates `f` separates as
/// `Σ_{p,s} C_{ps}(θ) e^{-ipφ/2} e^{-isψ/2}`, which is evaluated slice by
/// slice in `θ`.
pub fn group_scan(
    f: &BandlimitedFunction,
    box_side: f64,
    delta: f64,
    samples_per_side: usize,
) -> Result<ScanReport> {
    check_scan_params(box_side, delta)?;
    if samples_per_side < 2 {
        return Err(Error::parameter(format!(
            "a box needs at least 2 samples per side, got {samples_per_side}"
        )));
    }
    let s = samples_per_side;
    let h = box_side / (s - 1) as f64;
    let stride = ((s - 1) / 2).max(1);
    let n_phi = ((2.0 * PI + box_side) / h).ceil() as usize + 1;
    let n_theta = (PI / h).ceil() as usize + 1;
    let n_psi = ((4.0 * PI / h).ceil() as usize).max(2);
    let phi = Axis {
        step: h,
        windows: AxisWindows {
            points: n_phi,
            len: s,
            stride,
            periodic: false,
        },
    };
    let theta = Axis {
        step: PI / (n_theta - 1) as f64,
        windows: AxisWindows {
            points: n_theta,
            len: s,
            stride,
            periodic: false,
        },
    };
    let psi = Axis {
        step: 4.0 * PI / n_psi as f64,
        windows: AxisWindows {
            points: n_psi,
            len: s,
            stride,
            periodic: true,
        },
    };

    let b = f.band_limit() as i64;
    let width = (2 * b + 1) as usize;
    let phase_table = |axis: &Axis| -> Vec<Vec<Complex64>> {
        (0..axis.windows.points)
            .map(|i| {
                (-b..=b)
                    .map(|p| Complex64::from_polar(1.0, -(p as f64) * axis.value(i) / 2.0))
                    .collect()
            })
            .collect()
    };
    let e_phi = phase_table(&phi);
    let e_psi = phase_table(&psi);

    let slice_magnitudes = |it: usize| -> Vec<f64> {
        let th = theta.value(it);
        let mut c = vec![Complex64::new(0.0, 0.0); width * width];
        let rot = Su2::euler(0.0, -th, 0.0);
        for (&n, a) in f.coeffs() {
            let r = irrep_matrix(n, &rot).matrix;
            let scale = (n + 1) as f64;
            for j in 0..=n {
                for k in 0..=n {
                    let p = n + b as usize - 2 * k;
                    let q = n + b as usize - 2 * j;
                    c[p * width + q] += a[(k, j)] * r[(j, k)] * scale;
                }
            }
        }
        (0..n_phi)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut row = vec![Complex64::new(0.0, 0.0); width];
                for p in 0..width {
                    let ep = e_phi[i][p];
                    for q in 0..width {
                        row[q] += c[p * width + q] * ep;
                    }
                }
                let e_psi = &e_psi;
                (0..n_psi).map(move |l| {
                    row.iter()
                        .zip(&e_psi[l])
                        .map(|(x, e)| x * e)
                        .sum::<Complex64>()
                        .norm()
                })
            })
            .collect()
    };

    let theta_starts = theta.windows.starts();
    let mut pending = theta_starts.iter().copied().peekable();
    let mut recent: VecDeque<(usize, Vec<f64>)> = VecDeque::new();
    let mut boxes_scanned = 0;
    let mut vanishing_count = 0;
    let mut vanishing_boxes = Vec::new();
    let mut worst = (f64::INFINITY, [0usize; 3]);

    for it in 0..n_theta {
        let mags = slice_magnitudes(it);
        let (maxima, starts) = box_maxima(&mags, &[phi.windows, psi.windows]);
        let plane_starts = (&starts[0], &starts[1]);
        recent.push_back((it, maxima));
        while recent.len() > s {
            recent.pop_front();
        }
        while let Some(&st) = pending.peek() {
            let end = (st + s).min(n_theta) - 1;
            if end != it {
                break;
            }
            pending.next();
            let window: Vec<&Vec<f64>> = recent
                .iter()
                .filter(|(i, _)| *i >= st)
                .map(|(_, m)| m)
                .collect();
            let n_psi_starts = plane_starts.1.len();
            for flat in 0..window[0].len() {
                let m = window
                    .iter()
                    .map(|w| w[flat])
                    .fold(f64::NEG_INFINITY, f64::max);
                boxes_scanned += 1;
                let idx = [
                    plane_starts.0[flat / n_psi_starts],
                    st,
                    plane_starts.1[flat % n_psi_starts],
                ];
                if m < delta {
                    vanishing_count += 1;
                    if vanishing_boxes.len() < MAX_LISTED_BOXES {
                        vanishing_boxes.push(center(&phi, &theta, &psi, idx));
                    }
                }
                if m < worst.0 {
                    worst = (m, idx);
                }
            }
        }
    }

    let [i0, t0, l0] = worst.1;
    let mut worst_min = f64::INFINITY;
    for a in 0..s {
        for bb in 0..s {
            for cc in 0..s {
                let g = Su2::euler(
                    phi.value(phi.windows.sample(i0, a)),
                    theta.value(theta.windows.sample(t0, bb)),
                    psi.value(psi.windows.sample(l0, cc)),
                );
                worst_min = worst_min.min(f.eval(&g).norm());
            }
        }
    }

    Ok(ScanReport {
        box_side,
        delta,
        samples_per_box_side: s,
        stride_samples: stride,
        boxes_scanned,
        worst_box_center: center(&phi, &theta, &psi, worst.1),
        worst_box_max: worst.0,
        worst_box_min: worst_min,
        vanishing_count,
        vanishing_boxes,
    })
}

fn center(phi: &Axis, theta: &Axis, psi: &Axis, idx: [usize; 3]) -> Vec<f64> {
    vec![
        phi.center(idx[0]),
        theta.center(idx[1]),
        psi.center(idx[2]) % (4.0 * PI),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::irrep::CMatrix;
    use rand::SeedableRng;

    #[test]
    fn separable_evaluation_matches_direct() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let f = BandlimitedFunction::random(&[0, 1, 3], &mut rng);
        let report = group_scan(&f, 0.5, 1e-9, 3).unwrap();
        assert_eq!(report.vanishing_count, 0);
        let c = &report.worst_box_center;
        assert_eq!(c.len(), 3);
        // the reported box maximum bounds the directly evaluated minimum
        assert!(report.worst_box_min <= report.worst_box_max + 1e-12);
        let at_center = f.eval(&Su2::euler(c[0], c[1], c[2])).norm();
        assert!(at_center <= report.worst_box_max + 1e-9);
    }

    #[test]
    fn zero_function_vanishes_everywhere() {
        let report = group_scan(&BandlimitedFunction::zero(), 0.5, 1e-12, 3).unwrap();
        assert!(report.boxes_scanned > 0);
        assert!(report.all_vanishing());
        assert_eq!(report.worst_box_min, 0.0);
    }

    #[test]
    fn finds_the_zero_set_of_a_matrix_entry() {
        // f(x) = 2 Tr(A π₁(x⁻¹)) with A = E₁₁ is 2·conj(a), which vanishes on θ = π
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = Complex64::new(1.0, 0.0);
        let f = BandlimitedFunction::new([(1, a)]).unwrap();
        let report = group_scan(&f, 0.2, 0.25, 5).unwrap();
        assert!(report.any_vanishing());
        assert!(!report.all_vanishing());
        assert!(report.worst_box_center[1] > PI - 0.2);
        assert!(report.worst_box_min < 1e-12);
    }

    #[test]
    fn parameters_are_checked() {
        let f = BandlimitedFunction::scaled_identity(&[1]);
        assert!(group_scan(&f, 0.0, 1e-3, 3).is_err());
        assert!(group_scan(&f, 0.5, -1.0, 3).is_err());
        assert!(group_scan(&f, 0.5, 1e-3, 1).is_err());
    }
}
