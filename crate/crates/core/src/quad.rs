//! Composite trapezoid quadrature on (possibly non-uniform) grids.

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Trapezoid rule applied to `f(y_i)`.
pub fn trapezoid_map(x: &[f64], y: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let fy: Vec<f64> = y.iter().map(|&v| f(v)).collect();
    trapezoid(x, &fy)
}

/// `n` equally spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_linear() {
        let x = linspace(0.0, 2.0, 7);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v + 1.0).collect();
        assert!((trapezoid(&x, &y) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn linspace_endpoints() {
        let x = linspace(0.0, std::f64::consts::PI, 513);
        assert_eq!(x[0], 0.0);
        assert_eq!(x[512], std::f64::consts::PI);
    }
}
