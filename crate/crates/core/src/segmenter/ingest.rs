use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{format_err, invalid, Result};
use crate::series::TimeSeries;

/// Largest relative deviation of a time step from the mean step.
pub const DT_TOLERANCE: f64 = 1e-6;

/// Read a `t,x` CSV record. A header row is optional.
pub fn ingest(path: impl AsRef<Path>) -> Result<TimeSeries> {
    ingest_csv(std::fs::File::open(path)?)
}

/// [`ingest`] from any reader. Error rows are 1-based data rows.
pub fn ingest_csv<R: Read>(r: R) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r);
    let mut t = Vec::new();
    let mut x = Vec::new();
    let mut row = 0;
    for rec in rdr.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if row == 0 && rec.get(0).is_some_and(|v| v.parse::<f64>().is_err()) {
            // header
            if rec.len() != 2 {
                return Err(format_err(None, "expected a two-column t,x header"));
            }
            continue;
        }
        row += 1;
        if rec.len() != 2 {
            return Err(format_err(Some(row), format!("expected 2 columns, found {}", rec.len())));
        }
        let num = |j: usize, name: &str| -> Result<f64> {
            let v: f64 = rec[j]
                .parse()
                .map_err(|_| format_err(Some(row), format!("{name} = {:?} is not a number", &rec[j])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format_err(Some(row), format!("{name} is not finite")))
            }
        };
        t.push(num(0, "t")?);
        x.push(num(1, "x")?);
    }
    if t.is_empty() {
        return Err(format_err(None, "no data rows"));
    }
    if t.len() < 2 {
        return Err(format_err(Some(1), "need at least two samples to infer the sampling interval"));
    }
    if let Some(i) = t.windows(2).position(|w| w[1] <= w[0]) {
        return Err(format_err(Some(i + 2), "time column is not strictly increasing"));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if let Some(i) = t
        .windows(2)
        .position(|w| ((w[1] - w[0]) - dt).abs() > DT_TOLERANCE * dt)
    {
        return Err(format_err(
            Some(i + 2),
            format!("time step {} differs from the mean step {dt}", t[i + 1] - t[i]),
        ));
    }
    TimeSeries::new(x, dt)
}

/// Consecutive non-overlapping windows of a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSplit {
    pub windows: Vec<TimeSeries>,
    pub window_samples: usize,
    /// Samples after the last full window.
    pub dropped_samples: usize,
    pub dropped_seconds: f64,
}

impl WindowSplit {
    /// Samples of all windows, in order.
    pub fn concat(&self) -> Vec<f64> {
        self.windows.iter().flat_map(|w| w.samples().iter().copied()).collect()
    }
}

/// Cut `ts` into windows of `window_len_s` seconds (rounded to whole samples).
///
/// A partial tail is dropped and reported. Fails when not even one window fits.
pub fn window_split(ts: &TimeSeries, window_len_s: f64) -> Result<WindowSplit> {
    if !(window_len_s.is_finite() && window_len_s > 0.0) {
        return Err(invalid(format!("window length must be positive, got {window_len_s}")));
    }
    let n = (window_len_s / ts.dt()).round() as usize;
    if n < 2 {
        return Err(invalid(format!(
            "a {window_len_s} s window holds fewer than 2 samples at dt = {}",
            ts.dt()
        )));
    }
    let count = ts.len() / n;
    if count == 0 {
        return Err(invalid(format!(
            "record of {} s is shorter than one {window_len_s} s window",
            ts.duration()
        )));
    }
    let windows = (0..count)
        .map(|w| ts.slice(w * n, n))
        .collect::<Result<Vec<_>>>()?;
    let dropped = ts.len() - count * n;
    Ok(WindowSplit {
        windows,
        window_samples: n,
        dropped_samples: dropped,
        dropped_seconds: dropped as f64 * ts.dt(),
    })
}
