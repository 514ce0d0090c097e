use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::divergence::{l1_log_distance, tv_distance};
use super::measure::{Measure, MeasureConfig};
use crate::error::{invalid, Error, Result};
use crate::estkit::SpectralDensity;
use crate::series::TimeSeries;

/// Symmetric, nonnegative, zero-diagonal dissimilarities over `n` items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissimilarityMatrix {
    n: usize,
    d: Vec<f64>,
    measure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<MeasureConfig>,
}

impl DissimilarityMatrix {
    /// Validate and wrap a dense row-major matrix.
    pub fn from_rows(rows: Vec<Vec<f64>>, measure: impl Into<String>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("dissimilarity matrix must be square"));
        }
        let d: Vec<f64> = rows.into_iter().flatten().collect();
        let m = Self { n, d, measure: measure.into(), config: None };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("empty dissimilarity matrix"));
        }
        for i in 0..self.n {
            if self.get(i, i) != 0.0 {
                return Err(invalid(format!("diagonal entry ({i}, {i}) is not zero")));
            }
            for j in (i + 1)..self.n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                if !(a >= 0.0) || a.is_nan() {
                    return Err(invalid(format!("entry ({i}, {j}) = {a} is negative or NaN")));
                }
                if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn measure(&self) -> &str {
        &self.measure
    }

    pub fn config(&self) -> Option<&MeasureConfig> {
        self.config.as_ref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn max(&self) -> f64 {
        self.d.iter().cloned().fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            d: self.d.iter().map(|v| v * c).collect(),
            measure: self.measure.clone(),
            config: self.config,
        }
    }

    /// Sub-matrix over `idx`, in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let d = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { n: idx.len(), d, measure: self.measure.clone(), config: self.config }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(s)?;
        if m.d.len() != m.n * m.n {
            return Err(invalid("matrix payload does not match n"));
        }
        m.validate()?;
        Ok(m)
    }

    /// Square CSV with a header row of item ids and the id in the first column.
    pub fn write_csv<W: Write>(&self, ids: &[String], w: W) -> Result<()> {
        if ids.len() != self.n {
            return Err(invalid("need one id per item"));
        }
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(ids.iter().cloned());
        out.write_record(&header)?;
        for (i, id) in ids.iter().enumerate() {
            let mut rec = vec![id.clone()];
            rec.extend(self.row(i).iter().map(|v| v.to_string()));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Fill an `n x n` matrix by evaluating `pair(i, j)` once for every `i < j`.
///
/// Pairs are evaluated in parallel; each writes its own cell so the result does
/// not depend on scheduling. Errors carry the failing pair's indices.
pub fn build_matrix_from_fn<F>(n: usize, measure: impl Into<String>, pair: F) -> Result<DissimilarityMatrix>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    if n < 2 {
        return Err(invalid(format!("need at least 2 items, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| {
            pair(i, j).map_err(|e| Error::Pair { i, j, source: Box::new(e) })
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut d = vec![0.0; n * n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        d[i * n + j] = v;
        d[j * n + i] = v;
    }
    Ok(DissimilarityMatrix { n, d, measure: measure.into(), config: None })
}

/// Pairwise `measure` over `items`. Per-item features are computed once.
pub fn build_matrix(items: &[TimeSeries], measure: Measure, cfg: &MeasureConfig) -> Result<DissimilarityMatrix> {
    cfg.validate()?;
    if measure.needs_equal_length() {
        if let Some(bad) = items.iter().position(|s| s.len() != items[0].len()) {
            return Err(invalid(format!(
                "{measure} needs equal-length series; item {bad} has length {} vs {}",
                items[bad].len(),
                items[0].len()
            )));
        }
    }
    let features = items
        .par_iter()
        .map(|s| measure.features(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut m = build_matrix_from_fn(items.len(), measure.name(), |i, j| {
        measure.compare(&features[i], &features[j], cfg)
    })?;
    m.config = Some(*cfg);
    Ok(m)
}

/// Distances between already-estimated spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMeasure {
    Tv,
    L1Log,
}

/// Pairwise distances over normalized spectra sharing one grid.
pub fn build_spectral_matrix(spectra: &[SpectralDensity], measure: SpectralMeasure) -> Result<DissimilarityMatrix> {
    let name = match measure {
        SpectralMeasure::Tv => "TV",
        SpectralMeasure::L1Log => "L1",
    };
    build_matrix_from_fn(spectra.len(), name, |i, j| match measure {
        SpectralMeasure::Tv => tv_distance(&spectra[i], &spectra[j]),
        SpectralMeasure::L1Log => l1_log_distance(&spectra[i], &spectra[j]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simkit::{simulate_arima, ArimaModel};
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn identical_pair_is_zero() {
        let x = simulate_arima(&ArimaModel::arma(&[0.4], &[]).unwrap(), 200, 1).unwrap();
        for m in Measure::ALL {
            let mat = build_matrix(&[x.clone(), x.clone()], m, &MeasureConfig::default()).unwrap();
            assert_eq!(mat.row(0), &[0.0, 0.0]);
            assert_eq!(mat.row(1), &[0.0, 0.0]);
        }
    }

    #[test]
    fn each_pair_once() {
        let calls = AtomicUsize::new(0);
        let m = build_matrix_from_fn(3, "test", |i, j| {
            calls.fetch_add(1, Ordering::SeqCst);
            Ok((i + j) as f64)
        })
        .unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 3);
        assert_eq!(m.get(2, 1), 3.0);
        assert_eq!(m.get(1, 2), 3.0);
        m.validate().unwrap();
    }

    #[test]
    fn pair_errors_carry_indices() {
        let err = build_matrix_from_fn(3, "test", |i, j| {
            if (i, j) == (1, 2) {
                Err(invalid("boom"))
            } else {
                Ok(1.0)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::Pair { i: 1, j: 2, .. }));
    }

    #[test]
    fn validation() {
        assert!(DissimilarityMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]], "x").is_err());
        assert!(DissimilarityMatrix::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]], "x").is_err());
        assert!(DissimilarityMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 0.0]], "x").is_err());
        let m = DissimilarityMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]], "x").unwrap();
        assert_eq!(DissimilarityMatrix::from_json(&m.to_json().unwrap()).unwrap(), m);
    }

    #[test]
    fn csv_layout() {
        let m = DissimilarityMatrix::from_rows(vec![vec![0.0, 0.5], vec![0.5, 0.0]], "TV").unwrap();
        let mut buf = Vec::new();
        m.write_csv(&["a".into(), "b".into()], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), ",a,b\na,0,0.5\nb,0.5,0\n");
    }
}
