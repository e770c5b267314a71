//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qup::character::{
    character_eval, character_series_exact, denominator_product_form, weyl_denominator,
    weyl_denominator_exact, weyl_gram,
};
use qup::lacuna::{min_lacunary_cover, IntSet};
use qup::su2::{
    central_averages, char_expansion, fourier_transforms, group_scan, haar_grid, irrep_matrix,
    BandlimitedFunction, CMatrix, HaarGrid, Su2, Translated,
};
use qup::torus::{product, spectrum_with_threshold, zero_scan, GridSpec};
use qup::{Complex64, GroupId, Rational64, RootSystem, SpectrumSet, Weight};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    match (out, limit) {
        (Err(e), _) => Err(format!("{e} [{elapsed:.2?}]")),
        (Ok(msg), Some(limit)) if elapsed > limit => {
            Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}"))
        }
        (Ok(msg), _) => Ok(format!("{msg} [{elapsed:.2?}]")),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn su2() -> RootSystem {
    RootSystem::from_tag("su2").unwrap()
}

fn weyl_closed_form() -> Outcome {
    let rs = su2();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in 0..=10i64 {
        let lam = Weight::from_natural(&[n]);
        for _ in 0..1000 {
            let theta = loop {
                let t: f64 = rng.gen_range(-10.0..10.0);
                if (t / PI - (t / PI).round()).abs() > 1e-3 {
                    break t;
                }
            };
            let want = ((n + 1) as f64 * theta).sin() / theta.sin();
            let got = character_eval(&rs, &lam, &[theta]).map_err(|e| e.to_string())?;
            worst = worst.max((got - want).norm());
        }
        let dim = character_series_exact(&rs, &lam).unwrap().coefficient_sum();
        ensure(
            dim == n + 1 && rs.weyl_dimension(&lam).unwrap() == n + 1,
            || format!("dimension of n = {n} is {dim}"),
        )?;
    }
    ensure(worst < 1e-10, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("max deviation {worst:.2e} over 11 000 samples"))
}

fn denominator_identity() -> Outcome {
    for g in GroupId::ALL {
        let rs = RootSystem::from_tag(g.tag()).unwrap();
        let alt = weyl_denominator_exact(&rs);
        let prod = denominator_product_form(&rs);
        ensure(alt == prod, || {
            format!("{}: alternating sum differs from product", g.tag())
        })?;
    }
    Ok("exact for su2, u2, u3, u4".into())
}

fn orthonormality() -> Outcome {
    let mut worst: f64 = 0.0;
    for tag in ["su2", "u2"] {
        let rs = RootSystem::from_tag(tag).unwrap();
        let weights = rs.dominant_weights(5);
        let gram = weyl_gram(&rs, &weights).map_err(|e| e.to_string())?;
        for (i, row) in gram.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - want).norm());
            }
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("max deviation from identity {worst:.2e}"))
}

fn schur_orthogonality() -> Outcome {
    let grid = haar_grid(24, 24, 24).unwrap();
    // every matrix entry π_n(x)_{ab}, n ≤ 4
    let labels: Vec<(usize, usize, usize)> = (0..=4)
        .flat_map(|n| (0..=n).flat_map(move |a| (0..=n).map(move |b| (n, a, b))))
        .collect();
    let m = labels.len();
    let mut gram = vec![Complex64::new(0.0, 0.0); m * m];
    let mut vals = vec![Complex64::new(0.0, 0.0); m];
    for (g, w) in grid.nodes() {
        let mats: Vec<CMatrix> = (0..=4).map(|n| irrep_matrix(n, &g).matrix).collect();
        for (i, &(n, a, b)) in labels.iter().enumerate() {
            vals[i] = mats[n][(a, b)];
        }
        for i in 0..m {
            let vi = vals[i] * w;
            for j in 0..m {
                gram[i * m + j] += vi * vals[j].conj();
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (i, &(n, a, b)) in labels.iter().enumerate() {
        for (j, &(n2, c, d)) in labels.iter().enumerate() {
            let want = if (n, a, b) == (n2, c, d) {
                1.0 / (n + 1) as f64
            } else {
                0.0
            };
            worst = worst.max((gram[i * m + j] - want).norm());
        }
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:.3e}"))?;
    Ok(format!(
        "{m}×{m} entry Gram matrix, max deviation {worst:.2e}"
    ))
}

fn random_support(rng: &mut ChaCha8Rng, pool: &[usize]) -> Vec<usize> {
    loop {
        let s: Vec<usize> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pool: Vec<usize> = (0..=8).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let spectrum = random_support(&mut rng, &pool);
        let f = BandlimitedFunction::random(&spectrum, &mut rng);
        let b = spectrum.iter().copied().max().unwrap();
        let grid = HaarGrid::for_band_limit(b);
        let ns: Vec<usize> = (0..=b).collect();
        let got = fourier_transforms(&f, &ns, &grid).map_err(|e| e.to_string())?;
        let (mut err, mut norm) = (0.0, 0.0);
        for (n, m) in ns.iter().zip(&got) {
            let want = f
                .coefficient(*n)
                .cloned()
                .unwrap_or_else(|| CMatrix::zeros(n + 1, n + 1));
            err += (m - &want).norm_squared();
            norm += want.norm_squared();
        }
        worst = worst.max((err / norm).sqrt());
    }
    ensure(worst <= 1e-8, || {
        format!("worst relative error {worst:.3e}")
    })?;
    Ok(format!("20 families, worst relative error {worst:.2e}"))
}

fn lacunary_families() -> Vec<BandlimitedFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..10)
        .map(|_| {
            let spectrum = random_support(&mut rng, &[1, 2, 4, 8]);
            BandlimitedFunction::random(&spectrum, &mut rng)
        })
        .collect()
}

fn f_f_identity() -> Outcome {
    let grid = HaarGrid::for_band_limit(8);
    let torus = GridSpec::uniform(1, 256).unwrap();
    let thetas: Vec<f64> = (0..torus.len()).map(|i| torus.point(i)[0]).collect();
    let mut worst: f64 = 0.0;
    for f in lacunary_families() {
        let series = char_expansion(&f, &grid).map_err(|e| e.to_string())?;
        let averages = central_averages(&f, &thetas, &grid).map_err(|e| e.to_string())?;
        for (t, v) in thetas.iter().zip(&averages) {
            worst = worst.max((series.evaluate(&[*t]) - v).norm());
        }
    }
    ensure(worst < 1e-6, || format!("max pointwise gap {worst:.3e}"))?;
    Ok(format!("10 functions × 256 angles, max gap {worst:.2e}"))
}

fn spectrum_containment() -> Outcome {
    let grid = HaarGrid::for_band_limit(8);
    let rs = su2();
    let delta = weyl_denominator(&rs);
    let mut equal = 0;
    for f in lacunary_families() {
        let series = char_expansion(&f, &grid).map_err(|e| e.to_string())?;
        let spectrum = spectrum_with_threshold(&product(&delta, &series).unwrap(), 1e-9);
        let allowed = SpectrumSet::from_naturals_rank1(
            f.support()
                .iter()
                .flat_map(|&n| [n as i64 + 1, -(n as i64) - 1]),
        );
        ensure(spectrum.is_subset(&allowed), || {
            format!("spectrum {spectrum:?} escapes {allowed:?}")
        })?;
        equal += usize::from(spectrum == allowed);
    }
    Ok(format!("10 of 10 contained ({equal} with equality)"))
}

/// Smallest number of lacunary parts by backtracking over assignments.
fn exhaustive_min_parts(set: &[i64], q: Rational64, n: i64) -> usize {
    fn lacunary(part: &[i64], q: Rational64, n: i64) -> bool {
        let tail_ok = |tail: Vec<i64>| {
            tail.iter().all(|&x| {
                tail.iter().all(|&y| {
                    let (bx, by) = (x.abs() as i128, y.abs() as i128);
                    bx <= by || bx * (*q.denom() as i128) >= (*q.numer() as i128) * by
                })
            }) && tail.iter().all(|&x| x != 0)
        };
        tail_ok(part.iter().copied().filter(|&x| x >= n).collect())
            && tail_ok(part.iter().copied().filter(|&x| x <= -n).collect())
    }
    fn place(
        i: usize,
        set: &[i64],
        parts: &mut Vec<Vec<i64>>,
        k: usize,
        q: Rational64,
        n: i64,
    ) -> bool {
        if i == set.len() {
            return true;
        }
        for p in 0..parts.len() {
            parts[p].push(set[i]);
            if lacunary(&parts[p], q, n) && place(i + 1, set, parts, k, q, n) {
                return true;
            }
            parts[p].pop();
        }
        if parts.len() < k {
            parts.push(vec![set[i]]);
            if place(i + 1, set, parts, k, q, n) {
                return true;
            }
            parts.pop();
        }
        false
    }
    (0..=set.len())
        .find(|&k| place(0, set, &mut Vec::new(), k, q, n))
        .unwrap()
}

fn cover_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let qs = [
        Rational64::new(3, 2),
        Rational64::from_integer(2),
        Rational64::from_integer(3),
    ];
    for _ in 0..200 {
        let size = rng.gen_range(0..=12);
        let set = IntSet::new((0..size).map(|_| rng.gen_range(-64..=64)));
        let q = qs[rng.gen_range(0..3)];
        let n = [1, 4][rng.gen_range(0..2)];
        let cert = min_lacunary_cover(&set, q, n).map_err(|e| e.to_string())?;
        let best = exhaustive_min_parts(set.as_slice(), q, n);
        ensure(cert.verify(&set) && cert.part_count() == best, || {
            format!(
                "{set} at Q = {q}, N = {n}: greedy {} vs exhaustive {best}",
                cert.part_count()
            )
        })?;
    }
    Ok("200 random sets agree with the exhaustive minimum".into())
}

/// Worst-box minima observed when the values were frozen, for the spectrum
/// {1, 2, 4, 8} with identity coefficients.
const PINNED_GROUP_WORST_MIN: f64 = 2.746e-2;
const PINNED_TORUS_WORST_MIN: f64 = 2.230e-3;

fn within_ten_percent(got: f64, pinned: f64) -> bool {
    (got - pinned).abs() <= 0.1 * pinned.abs()
}

/// `|Σ (n+1) Θ_n(x)|` with `Θ_n` from the rotation angle of `x`.
fn central_oracle(x: &Su2, spectrum: &[usize]) -> f64 {
    let alpha = x.a().re.clamp(-1.0, 1.0).acos();
    let s = alpha.sin();
    spectrum
        .iter()
        .map(|&n| {
            let k = (n + 1) as f64;
            k * if s.abs() < 1e-12 {
                k * alpha.cos().powi(n as i32)
            } else {
                (k * alpha).sin() / s
            }
        })
        .sum::<f64>()
        .abs()
}

/// Independent box scan of the closed form on the same sample lattice:
/// returns the smallest box maximum and the smallest sample in that box.
fn oracle_group_scan(spectrum: &[usize], box_side: f64) -> (f64, f64) {
    let h = box_side / 2.0;
    let n_phi = ((2.0 * PI + box_side) / h).ceil() as usize + 1;
    let n_theta = (PI / h).ceil() as usize + 1;
    let n_psi = (4.0 * PI / h).ceil() as usize;
    let (d_theta, d_psi) = (PI / (n_theta - 1) as f64, 4.0 * PI / n_psi as f64);
    let slice = |t: usize| -> Vec<f64> {
        let mut v = Vec::with_capacity(n_phi * n_psi);
        for i in 0..n_phi {
            for l in 0..n_psi {
                let x = Su2::euler(i as f64 * h, t as f64 * d_theta, l as f64 * d_psi);
                v.push(central_oracle(&x, spectrum));
            }
        }
        v
    };
    let mut best = (f64::INFINITY, f64::INFINITY);
    let mut window: Vec<Vec<f64>> = vec![slice(0), slice(1)];
    for t in 2..n_theta {
        window.push(slice(t));
        if window.len() > 3 {
            window.remove(0);
        }
        for i in 0..n_phi - 2 {
            for l in 0..n_psi {
                let samples = window.iter().flat_map(|s| {
                    (0..3).flat_map(move |a| {
                        (0..3).map(move |c| s[(i + a) * n_psi + (l + c) % n_psi])
                    })
                });
                let (mx, mn) = samples.fold((0.0f64, f64::INFINITY), |(mx, mn), v| {
                    (mx.max(v), mn.min(v))
                });
                if mx < best.0 {
                    best = (mx, mn);
                }
            }
        }
    }
    best
}

fn oracle_torus_scan(spectrum: &[usize], points: usize, box_side: f64) -> (f64, f64) {
    let step = 4.0 * PI / points as f64;
    let len = (box_side / step).floor() as usize + 1;
    let stride = ((box_side / 2.0) / step).round() as usize;
    let vals: Vec<f64> = (0..points)
        .map(|i| central_oracle(&Su2::torus(i as f64 * step), spectrum))
        .collect();
    let mut best = (f64::INFINITY, f64::INFINITY);
    for s in (0..points).step_by(stride) {
        let w = (0..len).map(|o| vals[(s + o) % points]);
        let (mx, mn) = w.fold((0.0f64, f64::INFINITY), |(mx, mn), v| {
            (mx.max(v), mn.min(v))
        });
        if mx < best.0 {
            best = (mx, mn);
        }
    }
    best
}

fn desk_uncertainty() -> Outcome {
    let spectrum = [1usize, 2, 4, 8];
    let f = BandlimitedFunction::new(
        spectrum
            .iter()
            .map(|&n| (n, CMatrix::identity(n + 1, n + 1))),
    )
    .unwrap();
    let grid = HaarGrid::for_band_limit(8);
    let f_f = char_expansion(&f, &grid).map_err(|e| e.to_string())?;
    let torus = GridSpec::uniform(1, 4096).unwrap();
    let torus_scan =
        zero_scan(&f_f, &torus, 0.05, 1e-3 * f_f.l2_norm()).map_err(|e| e.to_string())?;
    let group = group_scan(&f, 0.05, 1e-3 * f.l2_norm(), 3).map_err(|e| e.to_string())?;
    ensure(
        torus_scan.vanishing_count == 0 && group.vanishing_count == 0,
        || {
            format!(
                "vanishing boxes: torus {}, group {}",
                torus_scan.vanishing_count, group.vanishing_count
            )
        },
    )?;
    // f is central here, so both scans can be redone in closed form
    let (g_max, g_min) = oracle_group_scan(&spectrum, 0.05);
    let (t_max, t_min) = oracle_torus_scan(&spectrum, 4096, 0.05);
    ensure(
        (g_max - group.worst_box_max).abs() < 1e-9
            && (t_max - torus_scan.worst_box_max).abs() < 1e-9,
        || {
            format!(
            "worst box maxima differ from the closed-form scan: group {:.6e} vs {g_max:.6e}, torus {:.6e} vs {t_max:.6e}",
            group.worst_box_max, torus_scan.worst_box_max
        )
        },
    )?;
    ensure(
        within_ten_percent(g_min, PINNED_GROUP_WORST_MIN)
            && within_ten_percent(t_min, PINNED_TORUS_WORST_MIN),
        || {
            format!("closed-form worst-box minima {g_min:.6e}, {t_min:.6e} drifted from the pinned values")
        },
    )?;
    ensure(
        within_ten_percent(group.worst_box_min, PINNED_GROUP_WORST_MIN),
        || {
            format!(
                "group worst_box_min {:.6e} vs pinned {PINNED_GROUP_WORST_MIN:.6e}",
                group.worst_box_min
            )
        },
    )?;
    ensure(
        within_ten_percent(torus_scan.worst_box_min, PINNED_TORUS_WORST_MIN),
        || {
            format!(
                "torus worst_box_min {:.6e} vs pinned {PINNED_TORUS_WORST_MIN:.6e}",
                torus_scan.worst_box_min
            )
        },
    )?;
    Ok(format!(
        "no vanishing box among {} group and {} torus boxes; worst_box_min group {:.4e}, torus {:.4e}",
        group.boxes_scanned, torus_scan.boxes_scanned, group.worst_box_min, torus_scan.worst_box_min
    ))
}

fn translation_covariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pool: Vec<usize> = (0..=4).collect();
    let grid = HaarGrid::for_band_limit(4);
    let ns: Vec<usize> = pool.clone();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let spectrum = random_support(&mut rng, &pool);
        let f = BandlimitedFunction::random(&spectrum, &mut rng);
        let g = Su2::random(&mut rng);
        let moved =
            fourier_transforms(&Translated { f: &f, g }, &ns, &grid).map_err(|e| e.to_string())?;
        let base = fourier_transforms(&f, &ns, &grid).map_err(|e| e.to_string())?;
        let mut support_moved = Vec::new();
        for (&n, (pm, pf)) in ns.iter().zip(moved.iter().zip(&base)) {
            let want = irrep_matrix(n, &g.inverse()).matrix * pf;
            let scale = f.l2_norm();
            worst = worst.max((pm - &want).norm() / scale);
            if pm.norm() > 1e-9 * scale {
                support_moved.push(n);
            }
        }
        ensure(support_moved == f.support(), || {
            format!("support {:?} moved to {support_moved:?}", f.support())
        })?;
    }
    ensure(worst < 1e-8, || format!("worst relative error {worst:.3e}"))?;
    Ok(format!(
        "20 pairs, worst relative error {worst:.2e}, supports preserved"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "Weyl formula closed form",
            Some(Duration::from_secs(1)),
            weyl_closed_form,
        ),
        (
            "denominator identity",
            Some(Duration::from_secs(1)),
            denominator_identity,
        ),
        (
            "character orthonormality",
            Some(Duration::from_secs(5)),
            orthonormality,
        ),
        (
            "Schur orthogonality",
            Some(Duration::from_secs(30)),
            schur_orthogonality,
        ),
        ("inversion round trip", None, round_trip),
        ("F_f identity", None, f_f_identity),
        ("spectrum containment", None, spectrum_containment),
        (
            "lacunary cover optimality",
            Some(Duration::from_secs(60)),
            cover_optimality,
        ),
        ("qualitative uncertainty", None, desk_uncertainty),
        ("translation covariance", None, translation_covariance),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        match timed(*limit, run) {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
