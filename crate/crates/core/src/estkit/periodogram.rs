use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{degenerate, invalid, Result};
use crate::series::TimeSeries;

/// Raw periodogram at the Fourier frequencies `2 pi k / T`, `k = 1..=floor((T-1)/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    freqs: Vec<f64>,
    values: Vec<f64>,
    gamma0: f64,
}

impl Periodogram {
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sample variance (divisor `T`) of the source series.
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ordinates divided by the sample variance.
    pub fn normalized_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v / self.gamma0).collect()
    }
}

pub fn periodogram(ts: &TimeSeries) -> Result<Periodogram> {
    let t = ts.len();
    if t < 4 {
        return Err(invalid(format!("periodogram needs at least 4 samples, got {t}")));
    }
    if ts.is_constant() {
        return Err(degenerate("periodogram of a constant series"));
    }
    let m = ts.mean();
    let mut buf: Vec<Complex64> = ts
        .samples()
        .iter()
        .map(|x| Complex64::new(x - m, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(t).process(&mut buf);

    let n = (t - 1) / 2;
    let tf = t as f64;
    let freqs = (1..=n).map(|k| 2.0 * PI * k as f64 / tf).collect();
    let values = (1..=n).map(|k| buf[k].norm_sqr() / tf).collect();
    Ok(Periodogram {
        freqs,
        values,
        gamma0: ts.variance(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> TimeSeries {
        let mut rng = rng_from_seed(seed);
        TimeSeries::unit((0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).unwrap()
    }

    #[test]
    fn ordinate_count() {
        assert_eq!(periodogram(&noise(200, 1)).unwrap().len(), 99);
        assert_eq!(periodogram(&noise(201, 1)).unwrap().len(), 100);
    }

    #[test]
    fn cosine_peak() {
        let t = 200;
        let a = 1.7;
        let lambda = 2.0 * PI * 5.0 / t as f64;
        let x: Vec<f64> = (0..t).map(|i| a * (lambda * i as f64).cos()).collect();
        let p = periodogram(&TimeSeries::unit(x).unwrap()).unwrap();
        let (k, v) = p
            .values()
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert_eq!(k + 1, 5);
        assert!((v - a * a * t as f64 / 4.0).abs() < 1e-9 * v);
    }

    #[test]
    fn parseval_on_white_noise() {
        let ts = noise(1001, 3);
        let p = periodogram(&ts).unwrap();
        let t = ts.len() as f64;
        // odd T: no Nyquist bin, so the identity is exact up to rounding
        let total: f64 = p.values().iter().sum::<f64>() * 2.0 / t;
        assert!((total - ts.variance()).abs() < 0.05 * ts.variance());
    }

    #[test]
    fn invariant_to_offset() {
        let ts = noise(128, 9);
        let shifted = TimeSeries::unit(ts.samples().iter().map(|x| x + 42.0).collect()).unwrap();
        let a = periodogram(&ts).unwrap();
        let b = periodogram(&shifted).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn constant_series_is_degenerate() {
        let ts = TimeSeries::unit(vec![1.0; 16]).unwrap();
        assert!(matches!(periodogram(&ts), Err(crate::Error::Degenerate(_))));
    }
}
