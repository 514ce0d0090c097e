use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ingest::window_split;
use crate::clusterkit::{agglomerate, select_k, silhouette_revision_rounds, Linkage, Partition, Reassignment, ValidityReport};
use crate::distkit::{build_spectral_matrix, SpectralMeasure};
use crate::error::{degenerate, invalid, Result};
use crate::estkit::{
    parzen_spectrum_capped, unit_grid, FreqUnit, SpectralDensity, DEFAULT_BANDWIDTH, DEFAULT_GRID_POINTS,
};
use crate::series::TimeSeries;

/// A spectral peak lower than this multiple of the spectrum's mean level is
/// reported as low confidence.
const PEAK_CONTRAST: f64 = 2.0;

/// Share of the windows one stationary interval must cover for the record to
/// be reported as having no transition.
pub const NO_TRANSITION_SHARE: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentConfig {
    pub window_len_s: f64,
    pub linkage: Linkage,
    /// Candidate cluster counts for Dunn's index, clamped to `n - 1`.
    pub k_min: usize,
    pub k_max: usize,
    /// Skip the Dunn choice and cut at this `k`.
    pub k: Option<usize>,
    /// Shortest run of windows that counts as stationary.
    pub min_run: usize,
    pub parzen_bandwidth: usize,
    pub revision_rounds: usize,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            window_len_s: 1800.0,
            linkage: Linkage::Average,
            k_min: 2,
            k_max: 10,
            k: None,
            min_run: 3,
            parzen_bandwidth: DEFAULT_BANDWIDTH,
            revision_rounds: 1,
        }
    }
}

impl SegmentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_min < 2 || self.k_max < self.k_min {
            return Err(invalid(format!("k range {}..={} is empty or starts below 2", self.k_min, self.k_max)));
        }
        if matches!(self.k, Some(k) if k < 1) {
            return Err(invalid("forced k must be at least 1"));
        }
        if self.min_run < 1 {
            return Err(invalid("min_run must be at least 1"));
        }
        if self.parzen_bandwidth < 1 {
            return Err(invalid("Parzen bandwidth must be at least 1"));
        }
        if self.revision_rounds < 1 {
            return Err(invalid("need at least one revision round"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub index: usize,
    pub start_s: f64,
    /// Four times the window standard deviation.
    pub hs: f64,
    /// Period of the spectral peak, seconds.
    pub tp: f64,
    /// `None` for windows excluded from clustering.
    pub label: Option<usize>,
    /// Constant window; excluded from clustering.
    pub degenerate: bool,
    /// Flat spectrum: the peak barely stands out, so `tp` is unreliable.
    pub low_confidence: bool,
}

/// Half-open window range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
    /// Cluster of a stationary interval.
    pub label: Option<usize>,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn contains(&self, w: usize) -> bool {
        (self.start..self.end).contains(&w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationReport {
    pub config: SegmentConfig,
    pub dt: f64,
    pub window_samples: usize,
    pub dropped_seconds: f64,
    pub windows: Vec<WindowSummary>,
    pub stationary_intervals: Vec<Interval>,
    pub transition_intervals: Vec<Interval>,
    /// Single windows whose label differs from the stationary interval around them.
    pub anomalies: Vec<usize>,
    /// Windows left out of clustering.
    pub excluded: Vec<usize>,
    pub chosen_k: usize,
    pub validity: ValidityReport,
    /// Silhouette revision moves, in window indices.
    pub revised: Vec<Reassignment>,
    pub no_transition_found: bool,
}

impl SegmentationReport {
    pub fn labels(&self) -> Vec<Option<usize>> {
        self.windows.iter().map(|w| w.label).collect()
    }
}

/// `Hs` and `Tp` of one window. `spec` is the window's spectrum on any
/// frequency axis; `Tp` is taken from its physical-units peak.
pub fn summarize_window(index: usize, w: &TimeSeries, spec: &SpectralDensity) -> WindowSummary {
    let start_s = index as f64 * w.len() as f64 * w.dt();
    let degenerate = w.is_constant();
    let phys = spec.to_physical(w.dt());
    let (grid, vals) = (phys.grid(), phys.values());
    // skip the zero frequency so the period stays finite
    let peak = (1..vals.len()).fold(1, |b, i| if vals[i] > vals[b] { i } else { b });
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    WindowSummary {
        index,
        start_s,
        hs: 4.0 * w.std_dev(),
        tp: 2.0 * PI / grid[peak],
        label: None,
        degenerate,
        low_confidence: degenerate || !(vals[peak] >= PEAK_CONTRAST * mean) || peak == vals.len() - 1,
    }
}

/// Runs of equal labels, merging runs split by one differing window. Returns
/// the merged runs and the bridged windows.
fn bridged_runs(labels: &[Option<usize>]) -> (Vec<Interval>, Vec<usize>) {
    let mut runs: Vec<Interval> = Vec::new();
    for (w, &l) in labels.iter().enumerate() {
        match runs.last_mut() {
            Some(r) if r.label == l && l.is_some() => r.end = w + 1,
            _ => runs.push(Interval { start: w, end: w + 1, label: l }),
        }
    }
    let mut out: Vec<Interval> = Vec::new();
    let mut bridged = Vec::new();
    let mut i = 0;
    while i < runs.len() {
        let r = runs[i];
        if let Some(prev) = out.last_mut() {
            let next = runs.get(i + 1);
            if r.len() == 1 && prev.label.is_some() && next.is_some_and(|n| n.label == prev.label) {
                bridged.push(r.start);
                prev.end = next.unwrap().end;
                i += 2;
                continue;
            }
        }
        out.push(r);
        i += 1;
    }
    (out, bridged)
}

/// Stationary intervals (runs of at least `min_run` windows, single-window
/// breaks bridged), transition intervals covering the rest, and the bridged
/// windows.
pub fn contiguity(labels: &[Option<usize>], min_run: usize) -> (Vec<Interval>, Vec<Interval>, Vec<usize>) {
    let (runs, bridged) = bridged_runs(labels);
    let mut stationary = Vec::new();
    let mut transition: Vec<Interval> = Vec::new();
    let mut anomalies = Vec::new();
    for r in runs {
        if r.label.is_some() && r.len() >= min_run {
            anomalies.extend(bridged.iter().copied().filter(|&w| r.contains(w)));
            stationary.push(r);
        } else if let Some(t) = transition.last_mut().filter(|t| t.end == r.start) {
            t.end = r.end;
        } else {
            transition.push(Interval { start: r.start, end: r.end, label: None });
        }
    }
    (stationary, transition, anomalies)
}

/// Segment a record into stationary and transition intervals.
pub fn segment(ts: &TimeSeries, config: &SegmentConfig) -> Result<SegmentationReport> {
    config.validate()?;
    let split = window_split(ts, config.window_len_s)?;
    let nw = split.windows.len();
    if nw < 4 {
        return Err(invalid(format!("need at least 4 windows, the record holds {nw}")));
    }
    let estimates = split
        .windows
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            if w.is_constant() {
                let flat = SpectralDensity::new(
                    unit_grid(DEFAULT_GRID_POINTS),
                    vec![0.0; DEFAULT_GRID_POINTS],
                    FreqUnit::RadPerSample,
                )?;
                return Ok((summarize_window(i, w, &flat), None));
            }
            let spec = parzen_spectrum_capped(w, config.parzen_bandwidth)?;
            Ok((summarize_window(i, w, &spec), Some(spec.normalize()?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut windows, spectra): (Vec<_>, Vec<_>) = estimates.into_iter().unzip();
    let used: Vec<usize> = (0..nw).filter(|&i| spectra[i].is_some()).collect();
    let excluded: Vec<usize> = (0..nw).filter(|&i| spectra[i].is_none()).collect();
    let n = used.len();
    if n < 3 {
        return Err(degenerate(format!("only {n} of {nw} windows are non-constant")));
    }
    let spectra: Vec<SpectralDensity> = spectra.into_iter().flatten().collect();
    let m = build_spectral_matrix(&spectra, SpectralMeasure::Tv)?;
    let tree = agglomerate(&m, config.linkage)?;
    let k_max = config.k_max.min(n - 1);
    let k_min = config.k_min.min(k_max);
    let (dunn_k, validity) = select_k(&tree, &m, k_min..=k_max)?;
    let chosen_k = match config.k {
        Some(k) if k > n => return Err(invalid(format!("k = {k} exceeds the {n} usable windows"))),
        Some(k) => k,
        None => dunn_k,
    };
    let revision = silhouette_revision_rounds(&tree.cut(chosen_k)?, &m, config.revision_rounds)?;
    // clusters numbered by their earliest window
    let final_p: Partition = revision.partition.canonical();
    for (slot, &w) in used.iter().enumerate() {
        windows[w].label = Some(final_p.label(slot));
    }
    let revised = revision
        .moved
        .iter()
        .map(|r| Reassignment { item: used[r.item], ..r.clone() })
        .collect();
    let labels: Vec<Option<usize>> = windows.iter().map(|w| w.label).collect();
    let (stationary, transition, anomalies) = contiguity(&labels, config.min_run);
    let no_transition_found = stationary
        .iter()
        .any(|s| s.len() as f64 >= NO_TRANSITION_SHARE * nw as f64);
    Ok(SegmentationReport {
        config: config.clone(),
        dt: ts.dt(),
        window_samples: split.window_samples,
        dropped_seconds: split.dropped_seconds,
        windows,
        stationary_intervals: stationary,
        transition_intervals: transition,
        anomalies,
        excluded,
        chosen_k,
        validity,
        revised,
        no_transition_found,
    })
}
