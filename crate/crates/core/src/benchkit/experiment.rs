use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::models::{experiment1_models, experiment2_models, experiment3_spectra};
use super::table::{CountTable, ResultTable, ScoreRow};
use crate::clusterkit::{agglomerate, sim_index, Linkage, Partition};
use crate::distkit::{build_matrix, build_spectral_matrix, normalized_parzen, Measure, MeasureConfig, SpectralMeasure};
use crate::error::{degenerate, invalid, Result};
use crate::estkit::physical_grid;
use crate::seed::derive_seed;
use crate::series::{TimeSeries, BUOY_DT};
use crate::simkit::{
    jonswap_spectrum, simulate_arima, simulate_from_spectrum, simulate_transition_record,
    PeakConvention, TransitionMode, TransitionScenario, WindowLabel,
};

/// Largest share of failed replications a run tolerates.
pub const MAX_FAILURE_RATE: f64 = 0.01;

const WAVE_GRID_POINTS: usize = 4097;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    Transition,
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentId::One => "1",
            ExperimentId::Two => "2",
            ExperimentId::Three => "3",
            ExperimentId::Transition => "transition",
        })
    }
}

impl FromStr for ExperimentId {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Ok(ExperimentId::One),
            "2" => Ok(ExperimentId::Two),
            "3" => Ok(ExperimentId::Three),
            "transition" | "t" => Ok(ExperimentId::Transition),
            _ => Err(invalid(format!("unknown experiment {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    /// Series lengths in samples. Ignored by the transition study.
    pub lengths: Vec<usize>,
    pub replications: usize,
    pub ks: Vec<usize>,
    pub measures: Vec<Measure>,
    pub linkage: Linkage,
    pub seed: u64,
    #[serde(default)]
    pub config: MeasureConfig,
    /// Peak-frequency convention of the wave spectra (experiment 3 and the
    /// default transition scenario).
    #[serde(default)]
    pub convention: PeakConvention,
    /// Transition study only; `None` means the three-phase scenario with
    /// `convention` and `transition_mode`.
    #[serde(default)]
    pub scenario: Option<TransitionScenario>,
    #[serde(default)]
    pub transition_mode: TransitionMode,
}

impl ExperimentSpec {
    /// The published settings of each experiment.
    ///
    /// Wave spectra peak at `2 pi / Tp` and the transition study uses
    /// continuous transitions; with these the published tables are reproduced.
    pub fn published(id: ExperimentId) -> Self {
        let (lengths, replications, ks, measures) = match id {
            ExperimentId::One => (vec![200], 300, vec![2], Measure::BASIC.to_vec()),
            ExperimentId::Two => (vec![200, 500, 1000], 100, vec![4, 5], Measure::BASIC.to_vec()),
            ExperimentId::Three => (vec![100, 200, 1000], 100, vec![2], Measure::ALL.to_vec()),
            ExperimentId::Transition => (Vec::new(), 1000, vec![3, 5], vec![Measure::Tv]),
        };
        Self {
            id,
            lengths,
            replications,
            ks,
            measures,
            linkage: Linkage::Complete,
            seed: 0,
            config: MeasureConfig::default(),
            convention: PeakConvention::TwoPiOverTp,
            scenario: None,
            transition_mode: TransitionMode::Continuous,
        }
    }

    fn item_count(&self) -> usize {
        match self.id {
            ExperimentId::One => 12,
            ExperimentId::Two => 20,
            ExperimentId::Three => 8,
            ExperimentId::Transition => self
                .scenario
                .as_ref()
                .map_or(36, TransitionScenario::window_count),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(invalid("need at least one replication"));
        }
        if self.measures.is_empty() {
            return Err(invalid("no measures selected"));
        }
        if self.id != ExperimentId::Transition {
            if self.lengths.is_empty() {
                return Err(invalid("no series lengths given"));
            }
            if let Some(t) = self.lengths.iter().find(|&&t| t < 50) {
                return Err(invalid(format!("series length {t} is below 50")));
            }
        } else if self.measures != [Measure::Tv] {
            return Err(invalid("the transition study uses the TV distance only"));
        }
        if let Some(s) = &self.scenario {
            s.validate()?;
        }
        let n = self.item_count();
        if self.ks.is_empty() {
            return Err(invalid("no cluster counts given"));
        }
        if let Some(k) = self.ks.iter().find(|&&k| k < 1 || k > n) {
            return Err(invalid(format!("k = {k} is outside 1..={n}")));
        }
        self.config.validate()
    }
}

/// Run replications `0..n` in parallel and return the successes in index order.
///
/// Fails when more than [`MAX_FAILURE_RATE`] of them error out.
fn replicate<T, F>(n: usize, f: F) -> Result<(Vec<T>, usize)>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..n).into_par_iter().map(&f).collect();
    let mut ok = Vec::with_capacity(n);
    let mut first_err = None;
    let mut failures = 0;
    for r in results {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => {
                failures += 1;
                first_err.get_or_insert(e);
            }
        }
    }
    if failures as f64 > MAX_FAILURE_RATE * n as f64 || ok.is_empty() {
        return Err(degenerate(format!(
            "{failures} of {n} replications failed; first error: {}",
            first_err.expect("at least one failure")
        )));
    }
    Ok((ok, failures))
}

/// Sim score of every (measure, k) pair for one replication, measure-major.
fn score_replication(
    series: &[TimeSeries],
    truth: &Partition,
    spec: &ExperimentSpec,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(spec.measures.len() * spec.ks.len());
    for &m in &spec.measures {
        let d = build_matrix(series, m, &spec.config)?;
        let tree = agglomerate(&d, spec.linkage)?;
        for &k in &spec.ks {
            out.push(sim_index(&tree.cut(k)?, truth)?);
        }
    }
    Ok(out)
}

fn run_scores<G>(spec: &ExperimentSpec, generate: G) -> Result<ResultTable>
where
    G: Fn(usize, u64) -> Result<(Vec<TimeSeries>, Partition)> + Sync,
{
    spec.validate()?;
    let mut rows = Vec::new();
    let mut failures = 0;
    for &t in &spec.lengths {
        let base = derive_seed(spec.seed, t as u64);
        let (scores, failed) = replicate(spec.replications, |r| {
            let (series, truth) = generate(t, derive_seed(base, r as u64))?;
            score_replication(&series, &truth, spec)
        })?;
        failures += failed;
        let n = scores.len();
        for (ki, &k) in spec.ks.iter().enumerate() {
            let means = (0..spec.measures.len())
                .map(|mi| {
                    let col = mi * spec.ks.len() + ki;
                    scores.iter().map(|s| s[col]).sum::<f64>() / n as f64
                })
                .collect();
            rows.push(ScoreRow { t, k, n, means });
        }
    }
    rows.sort_by_key(|r| (r.t, r.k));
    Ok(ResultTable {
        experiment: spec.id,
        seed: spec.seed,
        measures: spec.measures.clone(),
        rows,
        transition: Vec::new(),
        failures,
    })
}

fn check_id(spec: &ExperimentSpec, id: ExperimentId) -> Result<()> {
    if spec.id != id {
        return Err(invalid(format!("spec is for experiment {}, not {id}", spec.id)));
    }
    Ok(())
}

/// Twelve ARIMA series per replication, split into stationary and integrated.
pub fn run_experiment1(spec: &ExperimentSpec) -> Result<ResultTable> {
    check_id(spec, ExperimentId::One)?;
    let models = experiment1_models()?;
    let truth = Partition::new((0..12).map(|i| usize::from(i >= 6)).collect())?;
    run_scores(spec, |t, seed| {
        let series = models
            .iter()
            .enumerate()
            .map(|(i, m)| simulate_arima(m, t, derive_seed(seed, i as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok((series, truth.clone()))
    })
}

/// Four series from each of five ARMA models per replication.
pub fn run_experiment2(spec: &ExperimentSpec) -> Result<ResultTable> {
    check_id(spec, ExperimentId::Two)?;
    let models = experiment2_models()?;
    let truth = Partition::new((0..20).map(|i| i / 4).collect())?;
    run_scores(spec, |t, seed| {
        let series = (0..20)
            .map(|i| simulate_arima(&models[i / 4], t, derive_seed(seed, i as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok((series, truth.clone()))
    })
}

/// Four series from each of two close JONSWAP spectra per replication,
/// sampled at the buoy rate.
pub fn run_experiment3(spec: &ExperimentSpec) -> Result<ResultTable> {
    check_id(spec, ExperimentId::Three)?;
    let grid = physical_grid(WAVE_GRID_POINTS, BUOY_DT);
    let spectra = experiment3_spectra()?
        .iter()
        .map(|p| jonswap_spectrum(&p.with_convention(spec.convention), &grid))
        .collect::<Result<Vec<_>>>()?;
    let truth = Partition::new((0..8).map(|i| i / 4).collect())?;
    run_scores(spec, |t, seed| {
        let series = (0..8)
            .map(|i| simulate_from_spectrum(&spectra[i / 4], t, BUOY_DT, derive_seed(seed, i as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok((series, truth.clone()))
    })
}

/// Cluster the windows of simulated transition records and count, for each
/// window, how often it lands in each cluster.
pub fn run_transition(spec: &ExperimentSpec) -> Result<ResultTable> {
    check_id(spec, ExperimentId::Transition)?;
    spec.validate()?;
    let scenario = spec
        .scenario
        .clone()
        .unwrap_or_else(|| {
            let mut s = TransitionScenario::three_phase_with(spec.convention);
            s.mode = spec.transition_mode;
            s
        });
    let truth = scenario.labels();
    let phases = scenario.phases.len();
    let (labels, failures) = replicate(spec.replications, |r| {
        let rec = simulate_transition_record(&scenario, derive_seed(spec.seed, r as u64))?;
        let spectra = (0..truth.len())
            .into_par_iter()
            .map(|w| {
                let win = rec.series.slice(w * rec.window_samples, rec.window_samples)?;
                normalized_parzen(&win, &spec.config)
            })
            .collect::<Result<Vec<_>>>()?;
        let d = build_spectral_matrix(&spectra, SpectralMeasure::Tv)?;
        let tree = agglomerate(&d, spec.linkage)?;
        // cut() numbers clusters by first appearance, i.e. by earliest window
        spec.ks
            .iter()
            .map(|&k| Ok(tree.cut(k)?.labels().to_vec()))
            .collect::<Result<Vec<_>>>()
    })?;
    let transition = spec
        .ks
        .iter()
        .enumerate()
        .map(|(ki, &k)| {
            let mut counts = vec![vec![0usize; k]; truth.len()];
            let mut joins = vec![vec![0usize; phases]; truth.len()];
            for rep in &labels {
                let rep = &rep[ki];
                let phase_cluster: Vec<usize> = (0..phases).map(|p| phase_mode(rep, &truth, p, k)).collect();
                for (w, &c) in rep.iter().enumerate() {
                    counts[w][c] += 1;
                    for (p, &pc) in phase_cluster.iter().enumerate() {
                        joins[w][p] += usize::from(c == pc);
                    }
                }
            }
            CountTable { k, linkage: spec.linkage, n: labels.len(), truth: truth.clone(), counts, joins }
        })
        .collect();
    Ok(ResultTable {
        experiment: spec.id,
        seed: spec.seed,
        measures: spec.measures.clone(),
        rows: Vec::new(),
        transition,
        failures,
    })
}

/// Most common cluster among the windows of phase `p`; ties go to the lower cluster.
fn phase_mode(labels: &[usize], truth: &[WindowLabel], p: usize, k: usize) -> usize {
    let mut tally = vec![0usize; k];
    for (c, t) in labels.iter().zip(truth) {
        if *t == WindowLabel::Phase(p) {
            tally[*c] += 1;
        }
    }
    (0..k).fold(0, |best, c| if tally[c] > tally[best] { c } else { best })
}

/// Dispatch on `spec.id`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    match spec.id {
        ExperimentId::One => run_experiment1(spec),
        ExperimentId::Two => run_experiment2(spec),
        ExperimentId::Three => run_experiment3(spec),
        ExperimentId::Transition => run_transition(spec),
    }
}
