use std::f64::consts::PI;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{degenerate, format_err, invalid, Result};
use crate::quad::{linspace, trapezoid};

/// Number of points on the shared estimation grid.
pub const DEFAULT_GRID_POINTS: usize = 513;

const NORMALIZED_TOL: f64 = 1e-9;

/// Unit of a spectrum's frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreqUnit {
    /// Normalized angular frequency in `[0, pi]`. Values follow the two-sided
    /// convention `var = 2 * integral_0^pi f`.
    RadPerSample,
    /// Physical angular frequency in rad/s. Values are one-sided:
    /// `var = integral S(omega) d omega`.
    RadPerSecond,
}

impl FreqUnit {
    fn label(self) -> &'static str {
        match self {
            FreqUnit::RadPerSample => "rad/sample",
            FreqUnit::RadPerSecond => "rad/s",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "rad/sample" => Some(FreqUnit::RadPerSample),
            "rad/s" => Some(FreqUnit::RadPerSecond),
            _ => None,
        }
    }
}

/// `n` points on `[0, pi]` in rad/sample.
pub fn unit_grid(n: usize) -> Vec<f64> {
    linspace(0.0, PI, n)
}

/// `n` points on `[0, pi / dt]` in rad/s.
pub fn physical_grid(n: usize, dt: f64) -> Vec<f64> {
    linspace(0.0, PI / dt, n)
}

/// A nonnegative function sampled on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    grid: Vec<f64>,
    values: Vec<f64>,
    unit: FreqUnit,
    normalized: bool,
}

impl SpectralDensity {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, unit: FreqUnit) -> Result<Self> {
        check_grid(&grid)?;
        if grid.len() != values.len() {
            return Err(invalid(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid(format!(
                "spectral value {} at index {i} is negative or not finite",
                values[i]
            )));
        }
        Ok(Self {
            grid,
            values,
            unit,
            normalized: false,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> FreqUnit {
        self.unit
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.values)
    }

    /// Divide by the trapezoid integral so the density has unit mass.
    pub fn normalize(&self) -> Result<Self> {
        let area = self.integral();
        if !(area > 0.0 && area.is_finite()) {
            return Err(degenerate(format!(
                "cannot normalize a spectrum with integral {area}"
            )));
        }
        let values = self.values.iter().map(|v| v / area).collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
            unit: self.unit,
            normalized: true,
        })
    }

    /// Multiply every value by `c > 0`. The result is not normalized.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            unit: self.unit,
            normalized: false,
        }
    }

    /// Index of the largest value (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn peak_frequency(&self) -> f64 {
        self.grid[self.argmax()]
    }

    /// Linear interpolation onto `grid`; renormalized if `self` was normalized.
    pub fn regrid(&self, grid: &[f64]) -> Result<Self> {
        check_grid(grid)?;
        let (lo, hi) = (self.grid[0], self.grid[self.grid.len() - 1]);
        let tol = 1e-12 * hi.abs().max(1.0);
        if grid[0] < lo - tol || grid[grid.len() - 1] > hi + tol {
            return Err(invalid(format!(
                "target grid [{}, {}] extends outside source grid [{lo}, {hi}]",
                grid[0],
                grid[grid.len() - 1]
            )));
        }
        let values = if grid == self.grid.as_slice() {
            self.values.clone()
        } else {
            grid.iter().map(|&w| self.interpolate(w.clamp(lo, hi))).collect()
        };
        let out = Self {
            grid: grid.to_vec(),
            values,
            unit: self.unit,
            normalized: false,
        };
        if self.normalized {
            out.normalize()
        } else {
            Ok(out)
        }
    }

    /// Linear interpolation at `w`, holding endpoint values outside the grid.
    pub fn interpolate(&self, w: f64) -> f64 {
        let g = &self.grid;
        let n = g.len();
        if w <= g[0] {
            return self.values[0];
        }
        if w >= g[n - 1] {
            return self.values[n - 1];
        }
        let j = g.partition_point(|&x| x <= w);
        let (x0, x1) = (g[j - 1], g[j]);
        let t = (w - x0) / (x1 - x0);
        self.values[j - 1] * (1.0 - t) + self.values[j] * t
    }

    /// Convert a rad/sample spectrum into a one-sided rad/s spectrum for sampling interval `dt`.
    pub fn to_physical(&self, dt: f64) -> Self {
        match self.unit {
            FreqUnit::RadPerSecond => self.clone(),
            FreqUnit::RadPerSample => self.rescale_axis(1.0 / dt, 2.0 * dt, FreqUnit::RadPerSecond),
        }
    }

    /// Inverse of [`to_physical`](Self::to_physical).
    pub fn to_rad_per_sample(&self, dt: f64) -> Self {
        match self.unit {
            FreqUnit::RadPerSample => self.clone(),
            FreqUnit::RadPerSecond => self.rescale_axis(dt, 0.5 / dt, FreqUnit::RadPerSample),
        }
    }

    fn rescale_axis(&self, axis: f64, value: f64, unit: FreqUnit) -> Self {
        let out = Self {
            grid: self.grid.iter().map(|w| w * axis).collect(),
            values: self.values.iter().map(|v| v * value).collect(),
            unit,
            normalized: false,
        };
        if self.normalized {
            // one-sided conversion doubles or halves the area
            out.normalize().expect("normalized input has positive area")
        } else {
            out
        }
    }

    /// Values floored at `1e-12 * max`, so logarithms stay finite.
    pub fn floored_values(&self) -> Vec<f64> {
        floor_relative(&self.values)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.grid == other.grid
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        if !self.normalized {
            return Err(invalid("spectrum is not normalized"));
        }
        let area = self.integral();
        if (area - 1.0).abs() > NORMALIZED_TOL {
            return Err(invalid(format!("normalized spectrum integrates to {area}")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s)?;
        let mut checked = Self::new(spec.grid, spec.values, spec.unit)?;
        if spec.normalized {
            checked.normalized = true;
            checked.check_normalized()?;
        }
        Ok(checked)
    }

    /// CSV with a leading `# unit=...` line, then `freq,value` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# unit={}", self.unit.label())?;
        writeln!(w, "freq,value")?;
        for (f, v) in self.grid.iter().zip(&self.values) {
            writeln!(w, "{f},{v}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let unit_line = lines
            .next()
            .ok_or_else(|| format_err(None, "empty spectrum file"))??;
        let unit = unit_line
            .trim()
            .strip_prefix("# unit=")
            .and_then(FreqUnit::parse)
            .ok_or_else(|| format_err(None, format!("bad unit line {unit_line:?}")))?;
        let header = lines
            .next()
            .ok_or_else(|| format_err(None, "missing header"))??;
        if header.trim() != "freq,value" {
            return Err(format_err(None, format!("expected header freq,value, got {header:?}")));
        }
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row = i + 1;
            let (f, v) = line
                .split_once(',')
                .ok_or_else(|| format_err(Some(row), "expected two columns"))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| format_err(Some(row), e.to_string()))
            };
            grid.push(parse(f)?);
            values.push(parse(v)?);
        }
        Self::new(grid, values, unit)
    }
}

pub(crate) fn floor_relative(values: &[f64]) -> Vec<f64> {
    let max = values.iter().cloned().fold(0.0_f64, f64::max);
    let floor = 1e-12 * max;
    values.iter().map(|&v| v.max(floor)).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(invalid("a frequency grid needs at least 2 points"));
    }
    if grid.iter().any(|w| !w.is_finite()) {
        return Err(invalid("frequency grid contains non-finite values"));
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(invalid(format!(
            "frequency grid is not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}
