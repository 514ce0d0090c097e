use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estkit::{FreqUnit, SpectralDensity};
use crate::seed::rng_from_seed;
use crate::series::TimeSeries;

/// ARIMA(p, d, q) with `x_t = sum phi_i x_{t-i} + e_t + sum theta_j e_{t-j}` on the
/// `d`-times differenced series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArima", into = "RawArima")]
pub struct ArimaModel {
    ar: Vec<f64>,
    ma: Vec<f64>,
    d: usize,
    sigma2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawArima {
    #[serde(default)]
    ar: Vec<f64>,
    #[serde(default)]
    ma: Vec<f64>,
    #[serde(default)]
    d: usize,
    #[serde(default = "one")]
    sigma2: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawArima> for ArimaModel {
    type Error = Error;

    fn try_from(r: RawArima) -> Result<Self> {
        ArimaModel::new(r.ar, r.ma, r.d, r.sigma2)
    }
}

impl From<ArimaModel> for RawArima {
    fn from(m: ArimaModel) -> Self {
        RawArima {
            ar: m.ar,
            ma: m.ma,
            d: m.d,
            sigma2: m.sigma2,
        }
    }
}

impl ArimaModel {
    pub fn new(ar: Vec<f64>, ma: Vec<f64>, d: usize, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(invalid(format!("innovation variance must be positive, got {sigma2}")));
        }
        if ar.iter().chain(&ma).any(|c| !c.is_finite()) {
            return Err(invalid("ARMA coefficients must be finite"));
        }
        if !is_stationary(&ar) {
            return Err(invalid(format!(
                "AR polynomial {ar:?} has a root on or inside the unit circle"
            )));
        }
        Ok(Self { ar, ma, d, sigma2 })
    }

    /// Stationary ARMA(p, q) with unit innovation variance.
    pub fn arma(ar: &[f64], ma: &[f64]) -> Result<Self> {
        Self::new(ar.to_vec(), ma.to_vec(), 0, 1.0)
    }

    pub fn arima(ar: &[f64], d: usize, ma: &[f64]) -> Result<Self> {
        Self::new(ar.to_vec(), ma.to_vec(), d, 1.0)
    }

    pub fn white_noise(sigma2: f64) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), 0, sigma2)
    }

    pub fn ar(&self) -> &[f64] {
        &self.ar
    }

    pub fn ma(&self) -> &[f64] {
        &self.ma
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn is_stationary(&self) -> bool {
        self.d == 0
    }

    fn burn_in(&self) -> usize {
        200.max(10 * (self.ar.len() + self.ma.len()))
    }

    /// Process variance of the stationary ARMA part from its MA(infinity) weights.
    pub fn theoretical_variance(&self) -> Result<f64> {
        if self.d > 0 {
            return Err(Error::Unsupported("variance of an integrated process".into()));
        }
        let mut psi = vec![0.0; 5000];
        psi[0] = 1.0;
        for j in 1..psi.len() {
            let mut v = if j <= self.ma.len() { self.ma[j - 1] } else { 0.0 };
            for (i, phi) in self.ar.iter().enumerate() {
                if j > i {
                    v += phi * psi[j - i - 1];
                }
            }
            psi[j] = v;
        }
        Ok(self.sigma2 * psi.iter().map(|p| p * p).sum::<f64>())
    }
}

/// Step-down (reverse Levinson) test: every reflection coefficient strictly inside (-1, 1).
fn is_stationary(ar: &[f64]) -> bool {
    let mut a = ar.to_vec();
    while let Some(&k) = a.last() {
        if k.abs() >= 1.0 {
            return false;
        }
        let p = a.len();
        let denom = 1.0 - k * k;
        a = (0..p - 1).map(|j| (a[j] + k * a[p - 2 - j]) / denom).collect();
    }
    true
}

/// Simulate `len` observations with standard-normal innovations scaled by `sqrt(sigma2)`.
///
/// The ARMA recursion starts from zeros and discards `max(200, 10 (p + q))` burn-in
/// samples. Integrated models are cumulatively summed `d` times starting at zero.
pub fn simulate_arima(model: &ArimaModel, len: usize, seed: u64) -> Result<TimeSeries> {
    if len < 2 {
        return Err(invalid(format!("series length must be at least 2, got {len}")));
    }
    let mut rng = rng_from_seed(seed);
    let burn = model.burn_in();
    let total = burn + len;
    let sd = model.sigma2.sqrt();
    let e: Vec<f64> = (0..total)
        .map(|_| sd * Distribution::<f64>::sample(&StandardNormal, &mut rng))
        .collect();

    let mut x = vec![0.0; total];
    for t in 0..total {
        let mut v = e[t];
        for (j, theta) in model.ma.iter().enumerate() {
            if t > j {
                v += theta * e[t - j - 1];
            }
        }
        for (i, phi) in model.ar.iter().enumerate() {
            if t > i {
                v += phi * x[t - i - 1];
            }
        }
        x[t] = v;
    }
    let mut out = x.split_off(burn);
    for _ in 0..model.d {
        let mut acc = 0.0;
        for v in out.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    TimeSeries::unit(out)
}

/// Theoretical spectral density `sigma2 / (2 pi) |theta(e^{-i l})|^2 / |phi(e^{-i l})|^2`
/// on a grid inside `[0, pi]` (rad/sample).
pub fn arma_spectrum(model: &ArimaModel, grid: &[f64]) -> Result<SpectralDensity> {
    if model.d > 0 {
        return Err(Error::Unsupported(
            "an integrated model has no spectral density".into(),
        ));
    }
    if grid.iter().any(|&l| !(0.0..=PI + 1e-12).contains(&l)) {
        return Err(invalid("ARMA spectrum grid must lie inside [0, pi]"));
    }
    let poly = |coefs: &[f64], sign: f64, lambda: f64| {
        let mut z = Complex64::new(1.0, 0.0);
        for (j, c) in coefs.iter().enumerate() {
            z += sign * c * Complex64::from_polar(1.0, -lambda * (j + 1) as f64);
        }
        z.norm_sqr()
    };
    let values = grid
        .iter()
        .map(|&l| model.sigma2 / (2.0 * PI) * poly(&model.ma, 1.0, l) / poly(&model.ar, -1.0, l))
        .collect();
    SpectralDensity::new(grid.to_vec(), values, FreqUnit::RadPerSample)
}
