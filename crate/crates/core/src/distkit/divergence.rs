//! Distances between normalized spectral densities on a shared grid.

use crate::error::{invalid, Result};
use crate::estkit::{floor_relative, SpectralDensity};
use crate::quad::trapezoid;

fn check_pair(f: &SpectralDensity, g: &SpectralDensity) -> Result<()> {
    if !f.same_grid(g) {
        return Err(invalid("spectra are on different grids; regrid one of them first"));
    }
    f.check_normalized()?;
    g.check_normalized()
}

/// Total variation distance `1 - integral min(f, g)`, clamped to `[0, 1]`.
///
/// The unit mass is taken as the mean quadrature mass of `f` and `g`, so that
/// `d(f, f)` is exactly zero rather than a rounding residue.
pub fn tv_distance(f: &SpectralDensity, g: &SpectralDensity) -> Result<f64> {
    check_pair(f, g)?;
    let mins: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a.min(*b))
        .collect();
    let mass = 0.5 * (f.integral() + g.integral());
    Ok((mass - trapezoid(f.grid(), &mins)).clamp(0.0, 1.0))
}

/// `0.5 * integral |f - g|`. Equal to [`tv_distance`] up to rounding.
pub fn half_l1_distance(f: &SpectralDensity, g: &SpectralDensity) -> Result<f64> {
    check_pair(f, g)?;
    let diffs: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(0.5 * trapezoid(f.grid(), &diffs))
}

/// Kullback-Leibler divergence `integral f log(f / g)`; `+inf` when `f > 0` where `g = 0`.
pub fn kl_divergence(f: &SpectralDensity, g: &SpectralDensity) -> Result<f64> {
    check_pair(f, g)?;
    let mut terms = Vec::with_capacity(f.len());
    for (&a, &b) in f.values().iter().zip(g.values()) {
        if a <= 0.0 {
            terms.push(0.0);
        } else if b <= 0.0 {
            return Ok(f64::INFINITY);
        } else {
            terms.push(a * (a / b).ln());
        }
    }
    // the integrand can dip below zero pointwise; the integral cannot
    Ok(trapezoid(f.grid(), &terms).max(0.0))
}

/// `0.5 * integral |log f - log g|`, both floored at `1e-12 * max`.
pub fn l1_log_distance(f: &SpectralDensity, g: &SpectralDensity) -> Result<f64> {
    check_pair(f, g)?;
    let (lf, lg) = (floor_relative(f.values()), floor_relative(g.values()));
    let diffs: Vec<f64> = lf
        .iter()
        .zip(&lg)
        .map(|(a, b)| (a.ln() - b.ln()).abs())
        .collect();
    Ok(0.5 * trapezoid(f.grid(), &diffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estkit::FreqUnit;
    use crate::quad::linspace;
    use std::f64::consts::PI;

    fn density(grid: &[f64], f: impl Fn(f64) -> f64) -> SpectralDensity {
        let v = grid.iter().map(|&x| f(x)).collect();
        SpectralDensity::new(grid.to_vec(), v, FreqUnit::RadPerSample)
            .unwrap()
            .normalize()
            .unwrap()
    }

    fn indicator(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
        move |x| if (lo..=hi).contains(&x) { 1.0 } else { 0.0 }
    }

    #[test]
    fn identity() {
        let g = linspace(0.0, PI, 101);
        let f = density(&g, |x| 1.0 + x);
        assert_eq!(tv_distance(&f, &f).unwrap(), 0.0);
        assert_eq!(kl_divergence(&f, &f).unwrap(), 0.0);
        assert_eq!(l1_log_distance(&f, &f).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_supports() {
        let g = linspace(0.0, 3.0, 30_001);
        let f = density(&g, indicator(0.0, 1.0));
        let h = density(&g, indicator(2.0, 3.0));
        assert!((tv_distance(&f, &h).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(kl_divergence(&f, &h).unwrap(), f64::INFINITY);
    }

    #[test]
    fn half_overlap() {
        let g = linspace(0.0, 3.0, 30_001);
        let f = density(&g, indicator(0.0, 1.0));
        let h = density(&g, indicator(0.5, 1.5));
        assert!((tv_distance(&f, &h).unwrap() - 0.5).abs() < 1e-3);
        assert!((half_l1_distance(&f, &h).unwrap() - tv_distance(&f, &h).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn log_distance_closed_form() {
        let g = linspace(0.0, PI, 200_001);
        let f = density(&g, |_| 1.0);
        let h = density(&g, f64::exp);
        let c = ((PI.exp() - 1.0) / PI).ln();
        let truth = 0.5 * (c * c / 2.0 + (PI - c) * (PI - c) / 2.0);
        assert!((l1_log_distance(&f, &h).unwrap() - truth).abs() < 1e-6);
    }

    #[test]
    fn log_distance_ignores_scale() {
        let g = linspace(0.0, PI, 101);
        let raw: Vec<f64> = g.iter().map(|x| 2.0 + x.sin()).collect();
        let a = SpectralDensity::new(g.clone(), raw.clone(), FreqUnit::RadPerSample).unwrap();
        let b = a.scaled(7.5);
        let d = l1_log_distance(&a.normalize().unwrap(), &b.normalize().unwrap()).unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn rejects_mismatched_or_raw() {
        let f = density(&linspace(0.0, PI, 11), |_| 1.0);
        let h = density(&linspace(0.0, PI, 12), |_| 1.0);
        assert!(tv_distance(&f, &h).is_err());
        let raw = SpectralDensity::new(linspace(0.0, PI, 11), vec![1.0; 11], FreqUnit::RadPerSample).unwrap();
        assert!(tv_distance(&f, &raw).is_err());
    }
}
