//! Local-linear least-squares smoothing of periodogram ordinates, and the
//! W-disparity and integrated-squared-difference measures built on it.

use crate::error::{degenerate, Result};
use crate::estkit::{floor_relative, periodogram, Periodogram};
use crate::quad::trapezoid;
use crate::series::TimeSeries;

/// Local-linear fit with an Epanechnikov kernel of half-width `bandwidth`,
/// evaluated at each abscissa.
pub fn local_linear(x: &[f64], y: &[f64], bandwidth: f64) -> Vec<f64> {
    x.iter()
        .map(|&x0| {
            let (mut s0, mut s1, mut s2, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (&xi, &yi) in x.iter().zip(y) {
                let u = (xi - x0) / bandwidth;
                if u.abs() >= 1.0 {
                    continue;
                }
                let w = 0.75 * (1.0 - u * u);
                let dx = xi - x0;
                s0 += w;
                s1 += w * dx;
                s2 += w * dx * dx;
                t0 += w * yi;
                t1 += w * dx * yi;
            }
            let det = s0 * s2 - s1 * s1;
            if det.abs() <= 1e-12 * s0 * s2.max(f64::MIN_POSITIVE) {
                // a single point in the window: local constant
                t0 / s0
            } else {
                (s2 * t0 - s1 * t1) / det
            }
        })
        .collect()
}

/// Smoothed periodogram (`log = false`) or smoothed log-periodogram (`log = true`).
#[derive(Debug, Clone)]
pub struct SmoothedPeriodogram {
    pub freqs: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn smooth_periodogram(ts: &TimeSeries, bandwidth: f64, log: bool) -> Result<SmoothedPeriodogram> {
    let p = periodogram(ts)?;
    Ok(smooth(&p, bandwidth, log))
}

pub(crate) fn smooth(p: &Periodogram, bandwidth: f64, log: bool) -> SmoothedPeriodogram {
    let y = if log {
        floor_relative(p.values()).iter().map(|v| v.ln()).collect()
    } else {
        p.values().to_vec()
    };
    SmoothedPeriodogram {
        freqs: p.freqs().to_vec(),
        values: local_linear(p.freqs(), &y, bandwidth),
    }
}

/// `W(x) = log(alpha x + 1 - alpha) - alpha log x`.
pub fn w_function(x: f64, alpha: f64) -> f64 {
    (alpha * x + 1.0 - alpha).ln() - alpha * x.ln()
}

/// Symmetrized `W(x) + W(1/x)`.
pub fn w_tilde(x: f64, alpha: f64) -> f64 {
    w_function(x, alpha) + w_function(1.0 / x, alpha)
}

/// `(1 / 4 pi) integral_{-pi}^{pi} W~(f_x / f_y)`, evaluated as
/// `(1 / 2 pi) integral_0^pi` on the Fourier grid.
pub(crate) fn w_disparity_smoothed(
    fx: &SmoothedPeriodogram,
    fy: &SmoothedPeriodogram,
    alpha: f64,
) -> Result<f64> {
    let (a, b) = (floor_relative(&fx.values), floor_relative(&fy.values));
    if a.iter().chain(&b).any(|v| !(*v > 0.0)) {
        return Err(degenerate("smoothed periodogram is not positive"));
    }
    let terms: Vec<f64> = a.iter().zip(&b).map(|(x, y)| w_tilde(x / y, alpha)).collect();
    Ok((trapezoid(&fx.freqs, &terms) / (2.0 * std::f64::consts::PI)).max(0.0))
}

pub(crate) fn isd_smoothed(mx: &SmoothedPeriodogram, my: &SmoothedPeriodogram) -> f64 {
    let sq: Vec<f64> = mx
        .values
        .iter()
        .zip(&my.values)
        .map(|(a, b)| (a - b) * (a - b))
        .collect();
    trapezoid(&mx.freqs, &sq)
}
