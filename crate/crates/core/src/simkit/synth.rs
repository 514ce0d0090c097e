use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::estkit::{FreqUnit, SpectralDensity};
use crate::seed::rng_from_seed;
use crate::series::TimeSeries;

const MIN_SYNTH_LEN: usize = 4096;

/// Zero-mean Gaussian series with one-sided spectrum `spec`, by random-coefficient
/// spectral synthesis.
///
/// Each Fourier bin `omega_k = 2 pi k / (N dt)` of an `N`-point inverse FFT gets
/// independent `N(0, S(omega_k) d omega)` cosine and sine amplitudes, and the first
/// `len` samples are kept. `N >= max(4096, 2 len)` so the output is not periodic.
/// A rad/sample spectrum is first converted to its rad/s equivalent for `dt`.
pub fn simulate_from_spectrum(
    spec: &SpectralDensity,
    len: usize,
    dt: f64,
    seed: u64,
) -> Result<TimeSeries> {
    if len < 2 {
        return Err(invalid(format!("series length must be at least 2, got {len}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("sampling interval must be positive, got {dt}")));
    }
    let spec = match spec.unit() {
        FreqUnit::RadPerSecond => spec.clone(),
        FreqUnit::RadPerSample => spec.to_physical(dt),
    };
    let nyquist = PI / dt;
    let top = spec.grid()[spec.len() - 1];
    if top < 0.99 * nyquist {
        return Err(invalid(format!(
            "spectrum grid ends at {top} rad/s, below the Nyquist frequency {nyquist} rad/s"
        )));
    }

    let n = MIN_SYNTH_LEN.max((2 * len).next_power_of_two());
    let d_omega = 2.0 * PI / (n as f64 * dt);
    let mut rng = rng_from_seed(seed);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in buf.iter_mut().enumerate().take(n / 2 + 1).skip(1) {
        let amp = (spec.interpolate(k as f64 * d_omega) * d_omega).sqrt();
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        // Re[(a - ib) e^{i w t}] = a cos(w t) + b sin(w t)
        *slot = Complex64::new(amp * a, -amp * b);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    TimeSeries::new(buf[..len].iter().map(|c| c.re).collect(), dt)
}
