use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::group::Su2;
use super::haar::{haar_grid, GridShape, HaarGrid};
use super::irrep::{irrep_matrix, CMatrix};
use super::scan::{group_scan, DEFAULT_SAMPLES_PER_SIDE};
use super::transform::{
    central_averages, fourier_transforms, recover_from_translates, series_from_traces,
    trace_of_product, BandlimitedFunction, GroupFunction, Translated,
};
use crate::character::{weyl_denominator, weyl_numerator};
use crate::error::{Error, Result};
use crate::lacuna::{check_condition_1, ConditionReport};
use crate::roots::{build_root_system, GroupId, SpectrumSet, Weight};
use crate::series::TorusSeries;
use crate::torus::{
    product, spectrum_with_threshold, synthesize_grid, zero_scan, GridSpec, ScanReport,
};
use crate::ZERO_THRESHOLD;

/// Pointwise agreement required between the two routes to `F_f`.
pub const F_F_TOLERANCE: f64 = 1e-6;
/// Threshold below which a coefficient of `Δ⁺·F_f` is not in its spectrum.
pub const SPECTRUM_THRESHOLD: f64 = 1e-9;
/// Relative agreement required for quadrature-level matrix identities.
pub const MATRIX_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentParams {
    #[serde(with = "crate::lacuna::rational_string")]
    pub q: Rational64,
    pub n: i64,
    pub r: usize,
    /// Haar grid; `None` picks the smallest exact grid for the band limit.
    pub haar: Option<GridShape>,
    pub torus_points: usize,
    pub box_side: f64,
    /// Scan thresholds are `delta_rel · ‖·‖₂`, floored at the zero threshold.
    pub delta_rel: f64,
    pub group_samples_per_side: usize,
    /// Number of torus angles where the two routes to `F_f` are compared.
    pub check_points: usize,
    /// Translates are sampled within this distance of the identity.
    pub translate_radius: f64,
    pub seed: u64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            q: Rational64::from_integer(2),
            n: 1,
            r: 1,
            haar: None,
            torus_points: 4096,
            box_side: 0.05,
            delta_rel: 1e-3,
            group_samples_per_side: DEFAULT_SAMPLES_PER_SIDE,
            check_points: 64,
            translate_radius: 1.5,
            seed: 0,
        }
    }
}

/// One assertion of the pipeline.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepCheck {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub n: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslateEntry {
    pub n: usize,
    pub samples: usize,
    pub min_singular_value: f64,
    /// Relative error of the coefficient recovered from translated traces.
    pub recovery_error: f64,
    /// Relative error of `π_n(x ↦ f(gx)) = π_n(g)⁻¹ π_n(f)` at one sampled `g`.
    pub covariance_error: f64,
    pub max_translated_trace: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scans {
    pub f_f: ScanReport,
    pub delta_plus_f_f: ScanReport,
    pub group: ScanReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub spectrum: Vec<usize>,
    pub params: ExperimentParams,
    pub haar_grid: GridShape,
    pub band_limit: usize,
    pub f_is_zero: bool,
    pub f_l2_norm: f64,
    /// The spectral condition on the highest weights of `f`.
    pub condition: ConditionReport,
    /// The same condition on the shifted exponents `n + 1`, for reference.
    pub shifted_condition: ConditionReport,
    pub traces: Vec<TraceEntry>,
    pub f_f: TorusSeries,
    pub delta_plus_f_f: TorusSeries,
    pub product_spectrum: SpectrumSet,
    pub expected_orbit: SpectrumSet,
    pub f_f_max_error: f64,
    pub scans: Scans,
    pub translates: Vec<TranslateEntry>,
    pub steps: Vec<StepCheck>,
    pub all_passed: bool,
}

impl ExperimentReport {
    pub fn step(&self, label: &str) -> Option<&StepCheck> {
        self.steps.iter().find(|s| s.label == label)
    }
}

fn check_params(p: &ExperimentParams) -> Result<()> {
    if p.torus_points < 2 || p.check_points == 0 {
        return Err(Error::parameter(
            "torus_points must be ≥ 2 and check_points ≥ 1",
        ));
    }
    if !(p.delta_rel.is_finite() && p.delta_rel > 0.0) {
        return Err(Error::parameter(format!(
            "relative threshold must be positive, got {}",
            p.delta_rel
        )));
    }
    if !(p.translate_radius.is_finite() && p.translate_radius > 0.0) {
        return Err(Error::parameter("translate radius must be positive"));
    }
    Ok(())
}

fn threshold(delta_rel: f64, norm: f64) -> f64 {
    (delta_rel * norm).max(ZERO_THRESHOLD)
}

fn rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(ZERO_THRESHOLD)
}

fn weight_set(values: impl IntoIterator<Item = usize>) -> SpectrumSet {
    SpectrumSet::from_weights(
        1,
        values
            .into_iter()
            .map(|n| Weight::from_natural(&[n as i64])),
    )
    .expect("rank-1 weights")
}

/// Runs the uncertainty pipeline for `f = Σ (n+1) Tr(A_n π_n(x⁻¹))`:
/// the spectral condition, `F_f` through its character expansion, the
/// spectrum of `Δ⁺·F_f`, zero-set scans on the torus and on the group, and
/// recovery of `π_n(f)` from translated traces.
pub fn uncertainty_experiment(
    spectrum: &[usize],
    coeffs: &BandlimitedFunction,
    params: &ExperimentParams,
) -> Result<ExperimentReport> {
    check_params(params)?;
    let mut spectrum: Vec<usize> = spectrum.to_vec();
    spectrum.sort_unstable();
    spectrum.dedup();
    let keys: Vec<usize> = coeffs.coeffs().keys().copied().collect();
    if keys != spectrum {
        return Err(Error::parameter(format!(
            "coefficients are given for {keys:?} but the spectrum is {spectrum:?}"
        )));
    }
    if coeffs.support() != spectrum {
        return Err(Error::parameter(
            "every coefficient on the spectrum must be nonzero",
        ));
    }

    let rs = build_root_system(GroupId::Su2);
    let condition = check_condition_1(
        &rs,
        &weight_set(spectrum.iter().copied()),
        params.q,
        params.n,
        params.r,
    )?;
    let shifted_condition = check_condition_1(
        &rs,
        &weight_set(spectrum.iter().map(|n| n + 1)),
        params.q,
        params.n,
        params.r,
    )?;

    let f = coeffs;
    let band_limit = f.band_limit();
    let grid: HaarGrid = match params.haar {
        Some(s) => haar_grid(s.n_phi, s.n_theta, s.n_psi)?,
        None => HaarGrid::for_band_limit(band_limit),
    };
    let f_norm = f.l2_norm();
    let f_is_zero = f.is_zero();
    let mut steps = Vec::new();

    // Fourier coefficients and the character expansion of F_f
    let ns: Vec<usize> = (0..=band_limit).collect();
    let transforms = fourier_transforms(f, &ns, &grid)?;
    let trace_values: Vec<Complex64> = transforms.iter().map(|m| m.trace()).collect();
    let f_f = series_from_traces(&trace_values)?;
    let thetas: Vec<f64> = (0..params.check_points)
        .map(|k| 2.0 * PI * k as f64 / params.check_points as f64)
        .collect();
    let averages = central_averages(f, &thetas, &grid)?;
    let f_f_max_error = thetas
        .iter()
        .zip(&averages)
        .map(|(t, v)| (f_f.evaluate(&[*t]) - v).norm())
        .fold(0.0, f64::max);
    steps.push(StepCheck {
        label: "F_f".into(),
        passed: f_f_max_error < F_F_TOLERANCE,
        detail: format!(
            "central average vs character expansion at {} angles: max error {f_f_max_error:.3e}",
            thetas.len()
        ),
    });

    // Δ⁺·F_f and its spectrum
    let delta_plus = weyl_denominator(&rs);
    let delta_plus_f_f = product(&delta_plus, &f_f)?;
    let mut predicted = TorusSeries::zero(1);
    for (n, tr) in trace_values.iter().enumerate() {
        let num = weyl_numerator(&rs, &Weight::from_natural(&[n as i64]))?;
        predicted = predicted.add(&num.scale(*tr))?;
    }
    let product_error = delta_plus_f_f.max_abs_diff(&predicted);
    steps.push(StepCheck {
        label: "Delta+ product".into(),
        passed: product_error < SPECTRUM_THRESHOLD,
        detail: format!(
            "Δ⁺·F_f vs Σ Tr π_n(f) · alternating orbit sum: max error {product_error:.3e}"
        ),
    });

    let product_spectrum = spectrum_with_threshold(&delta_plus_f_f, SPECTRUM_THRESHOLD);
    let expected_orbit = rs.orbit_of_set(&weight_set(spectrum.iter().map(|n| n + 1)))?;
    let contained = product_spectrum.is_subset(&expected_orbit);
    steps.push(StepCheck {
        label: "orbit".into(),
        passed: contained,
        detail: format!(
            "spectrum of Δ⁺·F_f has {} exponents, {} the Weyl orbit of the shifted spectrum ({} exponents)",
            product_spectrum.len(),
            if contained { "inside" } else { "NOT inside" },
            expected_orbit.len()
        ),
    });

    // zero-set scans
    let torus_grid = GridSpec::uniform(1, params.torus_points)?;
    let scan_f_f = zero_scan(
        &f_f,
        &torus_grid,
        params.box_side,
        threshold(params.delta_rel, f_f.l2_norm()),
    )?;
    let scan_product = zero_scan(
        &delta_plus_f_f,
        &torus_grid,
        params.box_side,
        threshold(params.delta_rel, delta_plus_f_f.l2_norm()),
    )?;
    let scan_group = group_scan(
        f,
        params.box_side,
        threshold(params.delta_rel, f_norm),
        params.group_samples_per_side,
    )?;
    let (scan_passed, scan_detail) = if f_is_zero {
        (
            scan_group.all_vanishing() && f_f.is_zero(),
            format!(
                "f ≡ 0: {} of {} group boxes vanish",
                scan_group.vanishing_count, scan_group.boxes_scanned
            ),
        )
    } else {
        let torus_ok = f_f.is_zero() || !(scan_f_f.any_vanishing() || scan_product.any_vanishing());
        let note = if f_f.is_zero() {
            "; F_f ≡ 0, nonvanishing rests on the translates"
        } else {
            ""
        };
        (
            torus_ok && !scan_group.any_vanishing(),
            format!(
                "vanishing boxes: F_f {}, Δ⁺·F_f {}, |f| on G {} of {} (worst box max {:.3e}, min {:.3e}){note}",
                scan_f_f.vanishing_count,
                scan_product.vanishing_count,
                scan_group.vanishing_count,
                scan_group.boxes_scanned,
                scan_group.worst_box_max,
                scan_group.worst_box_min
            ),
        )
    };
    steps.push(StepCheck {
        label: "scan".into(),
        passed: scan_passed,
        detail: scan_detail,
    });

    // translates
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut translates = Vec::new();
    if !f_is_zero {
        let g0 = Su2::random(&mut rng);
        let translated = fourier_transforms(&Translated { f, g: g0 }, &spectrum, &grid)?;
        for (&n, moved) in spectrum.iter().zip(&translated) {
            let pf = &transforms[n];
            let covariance_error = rel_err(moved, &(irrep_matrix(n, &g0.inverse()).matrix * pf));
            let samples = (n + 1) * (n + 1) + 2;
            let gs: Vec<Su2> = (0..samples)
                .map(|_| Su2::random_near_identity(&mut rng, params.translate_radius))
                .collect();
            let traces: Vec<Complex64> = gs
                .iter()
                .map(|g| trace_of_product(&irrep_matrix(n, &g.inverse()).matrix, pf))
                .collect();
            let rec = recover_from_translates(n, &gs, &traces)?;
            translates.push(TranslateEntry {
                n,
                samples,
                min_singular_value: rec.min_singular_value,
                recovery_error: rel_err(&rec.matrix, f.coefficient(n).expect("n in spectrum")),
                covariance_error,
                max_translated_trace: traces.iter().map(|t| t.norm()).fold(0.0, f64::max),
            });
        }
    }
    let translates_ok = translates.iter().all(|t| {
        t.covariance_error < MATRIX_TOLERANCE
            && t.recovery_error < MATRIX_TOLERANCE
            && t.min_singular_value > MATRIX_TOLERANCE
            && t.max_translated_trace > ZERO_THRESHOLD
    });
    steps.push(StepCheck {
        label: "translates".into(),
        passed: translates_ok,
        detail: if f_is_zero {
            "f ≡ 0: nothing to recover".into()
        } else {
            let worst = translates
                .iter()
                .map(|t| t.recovery_error.max(t.covariance_error))
                .fold(0.0, f64::max);
            format!(
                "π_n(f) recovered from translated traces near the identity for n in {spectrum:?}: worst relative error {worst:.3e}"
            )
        },
    });

    let all_passed = steps.iter().all(|s| s.passed);
    Ok(ExperimentReport {
        spectrum,
        params: params.clone(),
        haar_grid: grid.shape(),
        band_limit,
        f_is_zero,
        f_l2_norm: f_norm,
        condition,
        shifted_condition,
        traces: trace_values
            .iter()
            .enumerate()
            .map(|(n, t)| TraceEntry {
                n,
                re: t.re,
                im: t.im,
            })
            .collect(),
        f_f,
        delta_plus_f_f,
        product_spectrum,
        expected_orbit,
        f_f_max_error,
        scans: Scans {
            f_f: scan_f_f,
            delta_plus_f_f: scan_product,
            group: scan_group,
        },
        translates,
        steps,
        all_passed,
    })
}

/// Writes `phi,theta,psi,abs` rows of `|f|` on a regular Euler-angle grid
/// (`θ` endpoints included).
pub fn write_group_trace<W: Write, F: GroupFunction + ?Sized>(
    mut out: W,
    f: &F,
    shape: GridShape,
) -> io::Result<()> {
    writeln!(out, "phi,theta,psi,abs")?;
    let n_theta = shape.n_theta.max(2);
    for i in 0..shape.n_phi {
        let phi = 2.0 * PI * i as f64 / shape.n_phi as f64;
        for j in 0..n_theta {
            let theta = PI * j as f64 / (n_theta - 1) as f64;
            for k in 0..shape.n_psi {
                let psi = 4.0 * PI * k as f64 / shape.n_psi as f64;
                let v = f.eval(&Su2::euler(phi, theta, psi)).norm();
                writeln!(out, "{phi:.12},{theta:.12},{psi:.12},{v:.15e}")?;
            }
        }
    }
    Ok(())
}

/// Writes `theta,re,im,abs` rows of a rank-1 series on `points` torus angles.
pub fn write_series_trace<W: Write>(mut out: W, series: &TorusSeries, points: usize) -> Result<()> {
    let grid = GridSpec::uniform(1, points)?;
    let samples = synthesize_grid(series, &grid)?;
    let io_err = |e: io::Error| Error::parameter(format!("write failed: {e}"));
    writeln!(out, "theta,re,im,abs").map_err(io_err)?;
    for (i, c) in samples.iter().enumerate() {
        writeln!(
            out,
            "{:.12},{:.15e},{:.15e},{:.15e}",
            grid.point(i)[0],
            c.re,
            c.im,
            c.norm()
        )
        .map_err(io_err)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lacunary_example() {
        let spectrum = [1, 2, 4, 8];
        let f = BandlimitedFunction::scaled_identity(&spectrum);
        let report = uncertainty_experiment(&spectrum, &f, &ExperimentParams::default()).unwrap();
        assert!(report.condition.holds);
        assert!(!report.shifted_condition.holds);
        let want: Vec<i64> = vec![-9, -5, -3, -2, 2, 3, 5, 9];
        let got: Vec<i64> = report
            .product_spectrum
            .iter()
            .map(|w| w.doubled()[0] / 2)
            .collect();
        assert_eq!(got, want);
        assert_eq!(report.product_spectrum, report.expected_orbit);
        for s in &report.steps {
            assert!(s.passed, "{}: {}", s.label, s.detail);
        }
        assert!(report.all_passed);
        assert_eq!(report.scans.group.vanishing_count, 0);
    }

    #[test]
    fn empty_spectrum() {
        let report = uncertainty_experiment(
            &[],
            &BandlimitedFunction::zero(),
            &ExperimentParams::default(),
        )
        .unwrap();
        assert!(report.f_is_zero);
        assert!(report.scans.group.all_vanishing());
        assert!(report.all_passed);
    }

    #[test]
    fn non_lacunary_spectrum_still_runs() {
        let spectrum = [1, 2, 3, 4, 5, 6];
        let f = BandlimitedFunction::scaled_identity(&spectrum);
        let params = ExperimentParams {
            box_side: 0.2,
            ..ExperimentParams::default()
        };
        let report = uncertainty_experiment(&spectrum, &f, &params).unwrap();
        assert!(!report.condition.holds);
        assert!(report.step("scan").is_some());
    }

    #[test]
    fn preconditions() {
        let f = BandlimitedFunction::scaled_identity(&[1, 2]);
        let p = ExperimentParams::default();
        assert!(matches!(
            uncertainty_experiment(&[1], &f, &p),
            Err(Error::Parameter(_))
        ));
        let bad = ExperimentParams {
            q: Rational64::from_integer(1),
            ..p.clone()
        };
        assert!(uncertainty_experiment(&[1, 2], &f, &bad).is_err());
        let mut g = f.clone();
        g.insert(3, CMatrix::zeros(4, 4)).unwrap();
        assert!(uncertainty_experiment(&[1, 2, 3], &g, &p).is_err());
    }

    #[test]
    fn traces_have_expected_layout() {
        let f = BandlimitedFunction::scaled_identity(&[1]);
        let mut buf = Vec::new();
        write_group_trace(
            &mut buf,
            &f,
            GridShape {
                n_phi: 2,
                n_theta: 3,
                n_psi: 2,
            },
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 12);
        let mut buf = Vec::new();
        write_series_trace(
            &mut buf,
            &TorusSeries::constant(1, Complex64::new(2.0, 0.0)),
            8,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .ends_with("2.000000000000000e0"));
    }
}
