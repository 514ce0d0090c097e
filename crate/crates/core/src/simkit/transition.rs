use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::arima::{arma_spectrum, ArimaModel};
use super::synth::simulate_from_spectrum;
use super::wave::{
    jonswap_spectrum, torsethaugen_spectrum, JonswapParams, PeakConvention, TorsethaugenParams,
};
use crate::error::{invalid, Result};
use crate::estkit::{physical_grid, unit_grid, SpectralDensity};
use crate::seed::derive_seed;
use crate::series::{TimeSeries, BUOY_DT};

/// Grid resolution used when a scenario spectrum is tabulated for synthesis.
const SCENARIO_GRID_POINTS: usize = 4097;

/// A parametric spectrum, as named in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SpectrumSpec {
    Jonswap(JonswapParams),
    Torsethaugen(TorsethaugenParams),
    Arma(ArimaModel),
}

impl SpectrumSpec {
    pub fn jonswap(hs: f64, tp: f64) -> Result<Self> {
        Ok(Self::Jonswap(JonswapParams::new(hs, tp)?))
    }

    pub fn torsethaugen(hs: f64, tp: f64) -> Result<Self> {
        Ok(Self::Torsethaugen(TorsethaugenParams::new(hs, tp)?))
    }

    /// One-sided rad/s spectrum on `[0, pi / dt]`.
    pub fn tabulate(&self, dt: f64, points: usize) -> Result<SpectralDensity> {
        match self {
            SpectrumSpec::Jonswap(p) => jonswap_spectrum(p, &physical_grid(points, dt)),
            SpectrumSpec::Torsethaugen(p) => torsethaugen_spectrum(p, &physical_grid(points, dt)),
            SpectrumSpec::Arma(m) => Ok(arma_spectrum(m, &unit_grid(points))?.to_physical(dt)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    #[serde(flatten)]
    pub spectrum: SpectrumSpec,
    pub duration_s: f64,
}

/// Stationary phases joined by slow transitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionScenario {
    pub phases: Vec<Phase>,
    #[serde(default)]
    pub transitions: Vec<f64>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_window", rename = "window_len_s")]
    pub window_len: f64,
    #[serde(default)]
    pub mode: TransitionMode,
}

/// How a transition evolves between two phases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionMode {
    /// Each transition window is stationary; window `w` of `W` uses the
    /// mixture weight `w / (W + 1)`.
    #[default]
    Windowed,
    /// The mixture weight rises linearly sample by sample from 0 to 1 across the
    /// transition, and each phase is one continuous stationary segment.
    Continuous,
}

fn default_dt() -> f64 {
    BUOY_DT
}

fn default_window() -> f64 {
    1800.0
}

/// Ground-truth state of one window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum WindowLabel {
    Phase(usize),
    Transition(usize),
}

impl WindowLabel {
    pub fn is_stationary(&self) -> bool {
        matches!(self, WindowLabel::Phase(_))
    }
}

/// A simulated record with one truth label per window.
#[derive(Debug, Clone)]
pub struct TransitionRecord {
    pub series: TimeSeries,
    pub labels: Vec<WindowLabel>,
    pub window_samples: usize,
}

impl TransitionScenario {
    /// Three 4-hour stationary phases (JONSWAP Tp 3.6, JONSWAP Tp 4.2,
    /// Torsethaugen Tp 5.0, all Hs 1) joined by two 3-hour transitions.
    pub fn default_three_phase() -> Self {
        Self::three_phase_with(PeakConvention::default())
    }

    /// The three-phase scenario with an explicit peak-frequency convention.
    pub fn three_phase_with(convention: PeakConvention) -> Self {
        let hours = |h: f64| h * 3600.0;
        let jonswap = |tp| {
            SpectrumSpec::Jonswap(JonswapParams::new(1.0, tp).unwrap().with_convention(convention))
        };
        let torsethaugen =
            SpectrumSpec::Torsethaugen(TorsethaugenParams::new(1.0, 5.0).unwrap().with_convention(convention));
        Self {
            phases: vec![
                Phase { spectrum: jonswap(3.6), duration_s: hours(4.0) },
                Phase { spectrum: jonswap(4.2), duration_s: hours(4.0) },
                Phase { spectrum: torsethaugen, duration_s: hours(4.0) },
            ],
            transitions: vec![hours(3.0), hours(3.0)],
            dt: BUOY_DT,
            window_len: 1800.0,
            mode: TransitionMode::default(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sc: Self = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.phases.is_empty() {
            return Err(invalid("a scenario needs at least one phase"));
        }
        if self.phases.len() != self.transitions.len() + 1 {
            return Err(invalid(format!(
                "{} phases need {} transitions, got {}",
                self.phases.len(),
                self.phases.len() - 1,
                self.transitions.len()
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.window_len > 0.0 && self.window_len.is_finite()) {
            return Err(invalid(format!("window length must be positive, got {}", self.window_len)));
        }
        let durations = self
            .phases
            .iter()
            .map(|p| p.duration_s)
            .chain(self.transitions.iter().copied());
        for d in durations {
            let ratio = d / self.window_len;
            if !(d > 0.0) || (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
                return Err(invalid(format!(
                    "duration {d} s is not a positive multiple of the {} s window",
                    self.window_len
                )));
            }
        }
        let samples = self.window_len / self.dt;
        if (samples - samples.round()).abs() > 1e-6 || samples.round() < 2.0 {
            return Err(invalid(format!(
                "window of {} s is not a whole number of {} s samples",
                self.window_len, self.dt
            )));
        }
        Ok(())
    }

    pub fn window_samples(&self) -> usize {
        (self.window_len / self.dt).round() as usize
    }

    fn windows_in(&self, duration: f64) -> usize {
        (duration / self.window_len).round() as usize
    }

    /// Truth labels, one per window, in time order.
    pub fn labels(&self) -> Vec<WindowLabel> {
        let mut out = Vec::new();
        for (i, phase) in self.phases.iter().enumerate() {
            out.extend(std::iter::repeat_n(WindowLabel::Phase(i), self.windows_in(phase.duration_s)));
            if let Some(&t) = self.transitions.get(i) {
                out.extend(std::iter::repeat_n(WindowLabel::Transition(i), self.windows_in(t)));
            }
        }
        out
    }

    pub fn window_count(&self) -> usize {
        self.labels().len()
    }
}

/// Convex mixture of two spectra's shapes, rescaled to the mixed variance.
fn mix(a: &SpectralDensity, b: &SpectralDensity, alpha: f64) -> Result<SpectralDensity> {
    let (va, vb) = (a.integral(), b.integral());
    let (na, nb) = (a.normalize()?, b.normalize()?);
    let var = (1.0 - alpha) * va + alpha * vb;
    let values = na
        .values()
        .iter()
        .zip(nb.values())
        .map(|(x, y)| var * ((1.0 - alpha) * x + alpha * y))
        .collect();
    SpectralDensity::new(a.grid().to_vec(), values, a.unit())
}

/// Simulate a scenario record with its truth labels.
///
/// In [`TransitionMode::Windowed`] window `w` (1-based) of a `W`-window
/// transition uses the mixture weight `w / (W + 1)` on the next phase and each
/// window draws from its own seed stream. See [`TransitionMode::Continuous`]
/// for the other scheme.
pub fn simulate_transition_record(scenario: &TransitionScenario, seed: u64) -> Result<TransitionRecord> {
    scenario.validate()?;
    let spectra = scenario
        .phases
        .iter()
        .map(|p| p.spectrum.tabulate(scenario.dt, SCENARIO_GRID_POINTS))
        .collect::<Result<Vec<_>>>()?;
    let labels = scenario.labels();
    let n = scenario.window_samples();
    if scenario.mode == TransitionMode::Continuous {
        let series = simulate_continuous(scenario, &spectra, seed)?;
        return Ok(TransitionRecord { series, labels, window_samples: n });
    }

    let mut samples = Vec::with_capacity(labels.len() * n);
    let mut run_pos = 0;
    for (w, label) in labels.iter().enumerate() {
        run_pos = if w > 0 && labels[w - 1] == *label { run_pos + 1 } else { 1 };
        let spec = match *label {
            WindowLabel::Phase(i) => spectra[i].clone(),
            WindowLabel::Transition(i) => {
                let total = scenario.windows_in(scenario.transitions[i]);
                let alpha = run_pos as f64 / (total + 1) as f64;
                mix(&spectra[i], &spectra[i + 1], alpha)?
            }
        };
        let window = simulate_from_spectrum(&spec, n, scenario.dt, derive_seed(seed, w as u64))?;
        samples.extend(window.into_samples());
    }
    Ok(TransitionRecord {
        series: TimeSeries::new(samples, scenario.dt)?,
        labels,
        window_samples: n,
    })
}

/// Phases are single stationary draws. A transition of `N` samples between
/// variances `v0`, `v1` is `sqrt(v(t)) (sqrt(1 - a) Z0 + sqrt(a) Z1)` with
/// `a = (i + 1/2) / N`, `v = (1 - a) v0 + a v1` and `Z0`, `Z1` independent
/// unit-variance draws from the two phase shapes, so its local spectrum is the
/// same mixture the windowed mode uses.
fn simulate_continuous(scenario: &TransitionScenario, spectra: &[SpectralDensity], seed: u64) -> Result<TimeSeries> {
    let dt = scenario.dt;
    let samples_of = |d: f64| scenario.windows_in(d) * scenario.window_samples();
    let mut out = Vec::new();
    for (i, phase) in scenario.phases.iter().enumerate() {
        let stream = derive_seed(seed, 2 * i as u64);
        let len = samples_of(phase.duration_s);
        out.extend(simulate_from_spectrum(&spectra[i], len, dt, stream)?.into_samples());
        if let Some(&d) = scenario.transitions.get(i) {
            let len = samples_of(d);
            let stream = derive_seed(seed, 2 * i as u64 + 1);
            let (v0, v1) = (spectra[i].integral(), spectra[i + 1].integral());
            let z0 = simulate_from_spectrum(&spectra[i].normalize()?, len, dt, derive_seed(stream, 0))?;
            let z1 = simulate_from_spectrum(&spectra[i + 1].normalize()?, len, dt, derive_seed(stream, 1))?;
            out.extend(z0.samples().iter().zip(z1.samples()).enumerate().map(|(j, (a0, a1))| {
                let a = (j as f64 + 0.5) / len as f64;
                let v = (1.0 - a) * v0 + a * v1;
                v.sqrt() * ((1.0 - a).sqrt() * a0 + a.sqrt() * a1)
            }));
        }
    }
    TimeSeries::new(out, dt)
}

/// Write `t,x` CSV, one row per sample, time in seconds from zero.
pub fn write_series_csv<W: Write>(ts: &TimeSeries, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "x"])?;
    for (i, x) in ts.samples().iter().enumerate() {
        out.write_record([(i as f64 * ts.dt()).to_string(), x.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_series_csv(ts: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    write_series_csv(ts, std::fs::File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_layout() {
        let sc = TransitionScenario::default_three_phase();
        sc.validate().unwrap();
        let labels = sc.labels();
        assert_eq!(labels.len(), 36);
        assert_eq!(sc.window_samples(), 2304);
        let stationary = labels.iter().filter(|l| l.is_stationary()).count();
        assert_eq!(stationary, 24);
        assert_eq!(labels[7], WindowLabel::Phase(0));
        assert_eq!(labels[8], WindowLabel::Transition(0));
        assert_eq!(labels[14], WindowLabel::Phase(1));
        assert_eq!(labels[27], WindowLabel::Transition(1));
        assert_eq!(labels[28], WindowLabel::Phase(2));
    }

    #[test]
    fn single_phase() {
        let sc = TransitionScenario {
            phases: vec![Phase { spectrum: SpectrumSpec::jonswap(2.0, 6.0).unwrap(), duration_s: 5400.0 }],
            transitions: vec![],
            dt: BUOY_DT,
            window_len: 1800.0,
            mode: TransitionMode::Windowed,
        };
        let rec = simulate_transition_record(&sc, 1).unwrap();
        assert_eq!(rec.labels, vec![WindowLabel::Phase(0); 3]);
        assert_eq!(rec.series.len(), 3 * 2304);
    }

    #[test]
    fn invariant_violations() {
        let mut sc = TransitionScenario::default_three_phase();
        sc.transitions.pop();
        assert!(sc.validate().is_err());
        let mut sc = TransitionScenario::default_three_phase();
        sc.phases[0].duration_s = 1000.0;
        assert!(sc.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let sc = TransitionScenario::default_three_phase();
        let back = TransitionScenario::from_json(&sc.to_json().unwrap()).unwrap();
        assert_eq!(back, sc);
        let text = r#"{"phases":[{"family":"jonswap","hs":1.0,"tp":3.6,"duration_s":3600},
            {"family":"arma","ar":[0.5],"duration_s":3600}],"transitions":[1800],"dt":0.78125,"window_len_s":1800}"#;
        let sc = TransitionScenario::from_json(text).unwrap();
        assert_eq!(sc.window_count(), 5);
    }

    #[test]
    fn mixture_endpoints() {
        let a = SpectrumSpec::jonswap(1.0, 3.6).unwrap().tabulate(BUOY_DT, 257).unwrap();
        let b = SpectrumSpec::jonswap(2.0, 4.2).unwrap().tabulate(BUOY_DT, 257).unwrap();
        let m = mix(&a, &b, 0.0).unwrap();
        for (x, y) in m.values().iter().zip(a.values()) {
            assert!((x - y).abs() < 1e-12 * y.max(1e-300) + 1e-15);
        }
        let half = mix(&a, &b, 0.5).unwrap();
        assert!((half.integral() - 0.5 * (a.integral() + b.integral())).abs() < 1e-12);
    }
}
