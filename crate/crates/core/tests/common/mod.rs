#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tvclust::clusterkit::{agglomerate, dunn_index, silhouette, sim_index, Linkage, Partition};
use tvclust::distkit::{
    build_spectral_matrix, half_l1_distance, kl_divergence, l1_log_distance, tv_distance, DissimilarityMatrix,
    Measure, MeasureConfig, SpectralMeasure,
};
use tvclust::estkit::{unit_grid, FreqUnit, SpectralDensity};
use tvclust::simkit::{simulate_arima, ArimaModel};
use tvclust::TimeSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random normalized density on `n` grid points over `[0, pi]`, about a fifth
/// of the values zero.
pub fn random_density(rng: &mut impl Rng, n: usize) -> SpectralDensity {
    loop {
        let v: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() })
            .collect();
        if let Ok(s) = SpectralDensity::new(unit_grid(n), v, FreqUnit::RadPerSample).and_then(|s| s.normalize()) {
            return s;
        }
    }
}

/// Strictly positive variant, so KL is finite.
pub fn random_positive_density(rng: &mut impl Rng, n: usize) -> SpectralDensity {
    let v: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
    SpectralDensity::new(unit_grid(n), v, FreqUnit::RadPerSample).unwrap().normalize().unwrap()
}

/// Trapezoid weights of a uniform grid: the discrete measure the quadrature integrates against.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let h = grid[1] - grid[0];
    let mut w = vec![h; grid.len()];
    w[0] = h / 2.0;
    *w.last_mut().unwrap() = h / 2.0;
    w
}

/// `sup_A |P(A) - Q(A)|` over every subset of grid points.
pub fn sup_over_subsets(f: &SpectralDensity, g: &SpectralDensity) -> f64 {
    let w = trapezoid_weights(f.grid());
    let n = w.len();
    assert!(n <= 16);
    let diff: Vec<f64> = (0..n).map(|i| w[i] * (f.values()[i] - g.values()[i])).collect();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| diff[i]).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DissimilarityMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random::<f64>() + 1e-6;
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    DissimilarityMatrix::from_rows(rows, "random").unwrap()
}

/// Agglomeration by direct recomputation of the linkage between every pair of
/// current clusters at every step. Returns the labels after `n - k` merges,
/// numbered by first appearance.
pub fn brute_force_cut(m: &DissimilarityMatrix, linkage: Linkage, k: usize) -> Vec<usize> {
    let n = m.n();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let link = |a: &[usize], b: &[usize]| -> f64 {
        let cross = a.iter().flat_map(|&i| b.iter().map(move |&j| m.get(i, j)));
        match linkage {
            Linkage::Complete => cross.fold(f64::NEG_INFINITY, f64::max),
            Linkage::Average => cross.sum::<f64>() / (a.len() * b.len()) as f64,
        }
    };
    while clusters.len() > k {
        let mut best = (0, 1, f64::INFINITY);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = link(&clusters[a], &clusters[b]);
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let merged = clusters.remove(best.1);
        clusters[best.0].extend(merged);
    }
    let mut labels = vec![0; n];
    for (c, members) in clusters.iter().enumerate() {
        for &i in members {
            labels[i] = c;
        }
    }
    Partition::new(labels).unwrap().canonical().labels().to_vec()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Metric axioms, range and triangle inequality on `triples` random triples.
pub fn tv_metric_battery(seed: u64, triples: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for t in 0..triples {
        let n = r.random_range(8..64);
        let (f, g, h) = (random_density(&mut r, n), random_density(&mut r, n), random_density(&mut r, n));
        let fg = tv_distance(&f, &g).unwrap();
        let gf = tv_distance(&g, &f).unwrap();
        let gh = tv_distance(&g, &h).unwrap();
        let fh = tv_distance(&f, &h).unwrap();
        check((0.0..=1.0).contains(&fg), || format!("triple {t}: tv = {fg} outside [0, 1]"))?;
        check(tv_distance(&f, &f).unwrap() == 0.0, || format!("triple {t}: d(f, f) != 0"))?;
        check((fg - gf).abs() < 1e-12, || format!("triple {t}: asymmetric {fg} vs {gf}"))?;
        check(fh <= fg + gh + 1e-12, || format!("triple {t}: triangle {fh} > {fg} + {gh}"))?;
        let l1 = half_l1_distance(&f, &g).unwrap();
        check((fg - l1).abs() < 1e-9, || format!("triple {t}: 1 - int min = {fg}, half L1 = {l1}"))?;
    }
    Ok(())
}

/// `2 tv^2 <= KL` on `pairs` random strictly positive pairs.
pub fn pinsker_battery(seed: u64, pairs: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for t in 0..pairs {
        let n = r.random_range(8..64);
        let (f, g) = (random_positive_density(&mut r, n), random_positive_density(&mut r, n));
        let tv = tv_distance(&f, &g).unwrap();
        let kl = kl_divergence(&f, &g).unwrap();
        check(2.0 * tv * tv <= kl + 1e-9, || format!("pair {t}: 2 tv^2 = {} > KL = {kl}", 2.0 * tv * tv))?;
    }
    Ok(())
}

/// `tv_distance` against the supremum over all `2^8` subsets of an 8-point grid.
pub fn subset_battery(seed: u64, pairs: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for t in 0..pairs {
        let (f, g) = (random_density(&mut r, 8), random_density(&mut r, 8));
        let tv = tv_distance(&f, &g).unwrap();
        let sup = sup_over_subsets(&f, &g);
        check((tv - sup).abs() < 1e-12, || format!("pair {t}: tv {tv} vs sup over subsets {sup}"))?;
    }
    Ok(())
}

/// Every cut of both linkages equals the brute-force agglomeration.
pub fn clustering_oracle_battery(seed: u64, trials: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for t in 0..trials {
        let n = r.random_range(2..=7);
        let m = random_matrix(&mut r, n);
        for linkage in [Linkage::Complete, Linkage::Average] {
            let tree = agglomerate(&m, linkage).unwrap();
            for k in 1..=n {
                let got = tree.cut(k).unwrap().canonical().labels().to_vec();
                let want = brute_force_cut(&m, linkage, k);
                check(got == want, || format!("trial {t}, {linkage}, k={k}: {got:?} vs {want:?}"))?;
            }
        }
    }
    Ok(())
}

/// Closed-form Sim cases.
pub fn sim_battery() -> Result<(), String> {
    let p = |l: &[usize]| Partition::new(l.to_vec()).unwrap();
    let s = sim_index(&p(&[0, 1, 1, 1]), &p(&[0, 0, 1, 1])).unwrap();
    check((s - 11.0 / 15.0).abs() < 1e-12, || format!("split case {s} != 11/15"))?;
    for g in 1..=6 {
        for size in 1..=4 {
            let truth: Vec<usize> = (0..g * size).map(|i| i / size).collect();
            let s = sim_index(&p(&vec![0; g * size]), &p(&truth)).unwrap();
            check((s - 2.0 / (g as f64 + 1.0)).abs() < 1e-12, || format!("one cluster, g={g}: {s}"))?;
            check(sim_index(&p(&truth), &p(&truth)).unwrap() == 1.0, || format!("identity g={g}"))?;
        }
    }
    Ok(())
}

/// Points 0, 1, 10, 11 on a line: hand-computed Dunn and silhouette values.
pub fn validity_battery() -> Result<(), String> {
    let x = [0.0f64, 1.0, 10.0, 11.0];
    let rows: Vec<Vec<f64>> = x.iter().map(|a| x.iter().map(|b| (a - b).abs()).collect()).collect();
    let m = DissimilarityMatrix::from_rows(rows, "line").unwrap();
    let p = Partition::new(vec![0, 0, 1, 1]).unwrap();
    // mean between-cluster distance 10, diameter (mean within) 1
    let d = dunn_index(&p, &m).unwrap();
    check((d - 10.0).abs() < 1e-12, || format!("Dunn {d} != 10"))?;
    let s = silhouette(&p, &m).unwrap();
    // a = 1, b = (10 + 11) / 2
    check((s[0] - 9.5 / 10.5).abs() < 1e-12, || format!("s(0) = {} != 9.5/10.5", s[0]))?;
    let swapped = Partition::new(vec![0, 1, 0, 1]).unwrap();
    check(silhouette(&swapped, &m).unwrap().iter().all(|&v| v < 0.0), || "bad partition has a non-negative silhouette".into())?;
    Ok(())
}

fn arma(seed: u64, len: usize) -> TimeSeries {
    let model = ArimaModel::arma(&[0.6, -0.2], &[0.3]).unwrap();
    simulate_arima(&model, len, seed).unwrap()
}

/// Scale behaviour of the series measures: invariant ones agree to 1e-9 under
/// `y -> c y`; P and LP change.
pub fn scale_battery(seed: u64, cases: usize) -> Result<(), String> {
    let cfg = MeasureConfig::default();
    let mut r = rng(seed);
    let invariant = [Measure::Tv, Measure::L1, Measure::Np, Measure::Lnp, Measure::Acfu, Measure::Acfg];
    for t in 0..cases {
        let x = arma(r.random(), 256);
        let y = arma(r.random(), 256);
        let c = if r.random_bool(0.5) { r.random_range(0.1..0.9) } else { r.random_range(1.5..10.0) };
        let cy = y.scaled(c);
        for m in invariant {
            let (a, b) = (m.distance(&x, &y, &cfg).unwrap(), m.distance(&x, &cy, &cfg).unwrap());
            check((a - b).abs() <= 1e-9 * a.max(1.0), || format!("case {t}: {m} moved {a} -> {b} at c={c}"))?;
        }
        for m in [Measure::P, Measure::Lp] {
            let (a, b) = (m.distance(&x, &y, &cfg).unwrap(), m.distance(&x, &cy, &cfg).unwrap());
            check((a - b).abs() > 1e-6 * a, || format!("case {t}: {m} unchanged at c={c}"))?;
        }
    }
    Ok(())
}

/// Scaling a dissimilarity matrix keeps every clustering decision.
pub fn matrix_scale_battery(seed: u64, trials: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for t in 0..trials {
        let n = r.random_range(4..=9);
        let m = random_matrix(&mut r, n);
        let c = r.random_range(0.01..100.0);
        let mc = m.scaled(c);
        for linkage in [Linkage::Complete, Linkage::Average] {
            let (a, b) = (agglomerate(&m, linkage).unwrap(), agglomerate(&mc, linkage).unwrap());
            let pairs = |d: &tvclust::clusterkit::Dendrogram| d.merges.iter().map(|s| (s.a, s.b)).collect::<Vec<_>>();
            check(pairs(&a) == pairs(&b), || format!("trial {t}: merge order changed under c={c}"))?;
            let argmax = |d: &tvclust::clusterkit::Dendrogram, m: &DissimilarityMatrix| {
                tvclust::clusterkit::select_k(d, m, 2..=n - 1).unwrap().0
            };
            check(argmax(&a, &m) == argmax(&b, &mc), || format!("trial {t}: Dunn choice changed"))?;
            for k in 2..n {
                let (pa, pb) = (a.cut(k).unwrap(), b.cut(k).unwrap());
                check(pa == pb, || format!("trial {t}: cut {k} changed"))?;
                let (sa, sb) = (silhouette(&pa, &m).unwrap(), silhouette(&pb, &mc).unwrap());
                check(
                    sa.iter().zip(&sb).all(|(u, v)| u.signum() == v.signum() || (u.abs() < 1e-12 && v.abs() < 1e-12)),
                    || format!("trial {t}: silhouette sign changed at k={k}"),
                )?;
            }
        }
    }
    Ok(())
}

/// TV matrices stay within `[0, 1]` and keep their tag.
pub fn tv_matrix_check(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let spectra: Vec<SpectralDensity> = (0..6).map(|_| random_density(&mut r, 33)).collect();
    let m = build_spectral_matrix(&spectra, SpectralMeasure::Tv).unwrap();
    check((0..6).all(|i| (0..6).all(|j| (0.0..=1.0).contains(&m.get(i, j)))), || "TV entry outside [0, 1]".into())?;
    let l = build_spectral_matrix(&spectra, SpectralMeasure::L1Log).unwrap();
    check(
        (0..6).all(|i| (0..6).all(|j| (l.get(i, j) - l1_log_distance(&spectra[i], &spectra[j]).unwrap()).abs() < 1e-12)),
        || "L1 matrix disagrees with the pairwise function".into(),
    )
}

/// Window positions where one phase hands over to the next: the middle of
/// each transition, or the switch point of an abrupt change.
pub fn phase_boundaries(truth: &[tvclust::simkit::WindowLabel]) -> Vec<usize> {
    use tvclust::simkit::WindowLabel;
    let mut out = Vec::new();
    let mut w = 0;
    while w < truth.len() {
        match truth[w] {
            WindowLabel::Transition(i) => {
                let end = (w..truth.len()).find(|&j| truth[j] != WindowLabel::Transition(i)).unwrap_or(truth.len());
                out.push((w + end).div_ceil(2));
                w = end;
            }
            WindowLabel::Phase(i) => {
                if w > 0 && truth[w - 1] != WindowLabel::Phase(i) && !matches!(truth[w - 1], WindowLabel::Transition(_)) {
                    out.push(w);
                }
                w += 1;
            }
        }
    }
    out
}

/// Checks a segmentation against the truth: exactly one stationary interval
/// per phase, in order, and every window whose label disagrees with its
/// nearest phase lies within `slack` positions of a phase boundary. Returns a
/// short description of the recovered intervals.
pub fn phase_recovery(
    report: &tvclust::segmenter::SegmentationReport,
    truth: &[tvclust::simkit::WindowLabel],
    slack: usize,
) -> Result<String, String> {
    let bounds = phase_boundaries(truth);
    let phases = bounds.len() + 1;
    let expected = |w: usize| bounds.iter().filter(|&&b| w >= b).count();
    let st = &report.stationary_intervals;
    let spans: Vec<(usize, usize)> = st.iter().map(|i| (i.start, i.end)).collect();
    if st.len() != phases {
        return Err(format!("{} stationary intervals {spans:?}, expected {phases}", st.len()));
    }
    // interval i should stand for phase i
    let mut phase_of_label = std::collections::HashMap::new();
    for (i, iv) in st.iter().enumerate() {
        let majority = (0..phases)
            .max_by_key(|&p| (iv.start..iv.end).filter(|&w| expected(w) == p).count())
            .unwrap();
        if majority != i {
            return Err(format!("interval {i} {spans:?} covers mostly phase {majority}"));
        }
        phase_of_label.insert(iv.label.unwrap(), i);
    }
    let near = |w: usize| bounds.iter().any(|&b| if w >= b { w - b < slack } else { b - w <= slack });
    for (w, s) in report.windows.iter().enumerate() {
        let got = s.label.and_then(|l| phase_of_label.get(&l).copied());
        if got != Some(expected(w)) && !near(w) {
            return Err(format!("window {} labeled {:?}, expected phase {}; intervals {spans:?}", w + 1, s.label, expected(w)));
        }
    }
    Ok(format!("stationary windows {spans:?}, boundaries {bounds:?}"))
}

/// Share of co-clustered interior window pairs of the full analysis that stay
/// co-clustered in the half analyses. Interior windows sit at least `margin`
/// windows inside a stationary interval in both analyses.
pub fn split_consistency(
    full: &tvclust::segmenter::SegmentationReport,
    halves: &[&tvclust::segmenter::SegmentationReport],
    margin: usize,
) -> (usize, f64) {
    let interior = |r: &tvclust::segmenter::SegmentationReport, w: usize| {
        r.stationary_intervals
            .iter()
            .any(|iv| w >= iv.start + margin && w + margin < iv.end)
    };
    let (mut pairs, mut kept) = (0usize, 0usize);
    let mut offset = 0;
    for h in halves {
        let n = h.windows.len();
        let inner: Vec<usize> = (0..n).filter(|&w| interior(h, w) && interior(full, w + offset)).collect();
        for (i, &a) in inner.iter().enumerate() {
            for &b in &inner[i + 1..] {
                if full.windows[a + offset].label == full.windows[b + offset].label {
                    pairs += 1;
                    kept += usize::from(h.windows[a].label == h.windows[b].label);
                }
            }
        }
        offset += n;
    }
    (pairs, if pairs == 0 { 1.0 } else { kept as f64 / pairs as f64 })
}
