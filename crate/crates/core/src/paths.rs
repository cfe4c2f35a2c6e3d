//! Discretised continuous paths.
//!
//! A [`DiscretePath`] is a vector of values on a shared [`TimeGrid`]. Running
//! maxima are taken over grid points only, so between grid points the
//! continuous-time maximum is understated by O(√Δt); refine the grid when the
//! running maximum matters.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const PATH_DUMP_HEADER: &str = "# growth-lab path v1";

/// Strictly increasing times starting at exactly zero. Cheap to clone.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Arc<[f64]>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Structural(format!("time grid needs at least 2 points, got {}", points.len())));
        }
        if points[0] != 0.0 {
            return Err(Error::Structural(format!("time grid must start at 0, starts at {}", points[0])));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::Structural(format!("time grid not strictly increasing at index {}", i + 1)));
            }
        }
        Ok(Self { points: points.into() })
    }

    /// `steps` equal steps on `[0, t_max]`.
    pub fn uniform(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0) || steps == 0 {
            return Err(Error::Structural(format!(
                "uniform grid needs t_max > 0 and steps > 0 (got {t_max}, {steps})"
            )));
        }
        let mut pts: Vec<f64> = (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect();
        pts[steps] = t_max;
        Self::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn dt(&self, step: usize) -> f64 {
        self.points[step + 1] - self.points[step]
    }

    /// Index of the grid point equal to `t` up to a relative 1e-9.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        let i = self.points.partition_point(|&p| p < t - tol);
        (i < self.points.len() && (self.points[i] - t).abs() <= tol).then_some(i)
    }

    /// The grid truncated after `last_index`.
    pub fn prefix(&self, last_index: usize) -> Result<Self> {
        if last_index == 0 || last_index >= self.points.len() {
            return Err(Error::Structural(format!("prefix index {last_index} outside 1..{}", self.points.len())));
        }
        Ok(Self { points: self.points[..=last_index].into() })
    }
}

/// Values sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePath {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl DiscretePath {
    /// Finite values, one per grid point.
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Structural(format!(
                "path has {} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { abscissa: grid.points()[i], value: values[i] });
        }
        Ok(Self { grid, values })
    }

    /// A wealth path: additionally every value strictly positive.
    pub fn wealth(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        let path = Self::new(grid, values)?;
        if let Some(i) = path.values.iter().position(|&v| v <= 0.0) {
            return Err(Error::InvariantViolation(format!(
                "wealth path not strictly positive at index {i} (value {})",
                path.values[i]
            )));
        }
        Ok(path)
    }

    pub fn constant(grid: TimeGrid, value: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![value; n])
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn initial(&self) -> f64 {
        self.values[0]
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }

    /// Pointwise map onto the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }
}

/// A path together with its cached running maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxPath {
    base: DiscretePath,
    running_max: Vec<f64>,
}

impl MaxPath {
    pub fn base(&self) -> &DiscretePath {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        self.base.values()
    }

    pub fn running_max(&self) -> &[f64] {
        &self.running_max
    }

    pub fn grid(&self) -> &TimeGrid {
        self.base.grid()
    }

    /// The running maximum as a path in its own right.
    pub fn maxima_path(&self) -> DiscretePath {
        DiscretePath { grid: self.base.grid.clone(), values: self.running_max.clone() }
    }

    pub fn into_base(self) -> DiscretePath {
        self.base
    }
}

/// Cumulative maximum over grid points.
pub fn running_max(path: &DiscretePath) -> MaxPath {
    let mut acc = f64::NEG_INFINITY;
    let running_max = path
        .values
        .iter()
        .map(|&v| {
            acc = acc.max(v);
            acc
        })
        .collect();
    MaxPath { base: path.clone(), running_max }
}

/// Non-anticipating sum `initial + Σ f(m_i) (x_{i+1} - x_i)` with the
/// integrand evaluated at the running maximum at the left end of each step.
pub fn integrate_against(integrand: impl Fn(f64) -> f64, initial: f64, path: &MaxPath) -> Result<DiscretePath> {
    let xs = path.values();
    let ms = path.running_max();
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = initial;
    out.push(acc);
    for i in 0..xs.len() - 1 {
        let f = integrand(ms[i]);
        if !f.is_finite() {
            return Err(Error::NonFinite { abscissa: ms[i], value: f });
        }
        acc += f * (xs[i + 1] - xs[i]);
        out.push(acc);
    }
    DiscretePath::new(path.grid().clone(), out)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `t,value,running_max` records under the v1 header.
pub fn write_path_dump<W: Write>(mut out: W, path: &MaxPath) -> std::io::Result<()> {
    let mut buf = String::with_capacity(64 * path.grid().len());
    buf.push_str(PATH_DUMP_HEADER);
    buf.push('\n');
    for ((t, v), m) in path.grid().points().iter().zip(path.values()).zip(path.running_max()) {
        let _ = writeln!(buf, "{},{},{}", fmt17(*t), fmt17(*v), fmt17(*m));
    }
    out.write_all(buf.as_bytes())
}

/// Parses a path dump. The stored running maximum must agree with the
/// recomputed one.
pub fn read_path_dump<R: BufRead>(input: R) -> Result<MaxPath> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Structural("empty path dump".into()))?
        .map_err(|e| Error::Structural(e.to_string()))?;
    if header.trim() != PATH_DUMP_HEADER {
        return Err(Error::Structural(format!("unexpected header {header:?}")));
    }
    let (mut ts, mut vs, mut ms) = (Vec::new(), Vec::new(), Vec::new());
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Structural(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Structural(format!("line {}: expected 3 fields", lineno + 2)));
        }
        let parse =
            |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Structural(format!("line {}: {e}", lineno + 2)));
        ts.push(parse(fields[0])?);
        vs.push(parse(fields[1])?);
        ms.push(parse(fields[2])?);
    }
    let path = running_max(&DiscretePath::new(TimeGrid::new(ts)?, vs)?);
    if path.running_max() != ms.as_slice() {
        return Err(Error::Structural("stored running maximum disagrees with values".into()));
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(vals: &[f64]) -> DiscretePath {
        let grid = TimeGrid::uniform(1.0, vals.len() - 1).unwrap();
        DiscretePath::new(grid, vals.to_vec()).unwrap()
    }

    #[test]
    fn running_max_examples() {
        assert_eq!(running_max(&path(&[1.0, 3.0, 2.0, 5.0])).running_max(), &[1.0, 3.0, 3.0, 5.0]);
        assert_eq!(running_max(&path(&[2.0, 2.0, 2.0])).running_max(), &[2.0, 2.0, 2.0]);
        assert_eq!(running_max(&path(&[5.0, 4.0, 3.0])).running_max(), &[5.0, 5.0, 5.0]);
    }

    #[test]
    fn running_max_is_idempotent() {
        let p = running_max(&path(&[1.0, 0.5, 4.0, 3.0, 4.5]));
        let again = running_max(&p.maxima_path());
        assert_eq!(again.running_max(), p.running_max());
        assert_eq!(again.values(), p.running_max());
    }

    #[test]
    fn zero_integrand_gives_constant() {
        let p = running_max(&path(&[1.0, 3.0, 0.5, 2.0]));
        let out = integrate_against(|_| 0.0, 7.0, &p).unwrap();
        assert_eq!(out.values(), &[7.0; 4]);
    }

    #[test]
    fn unit_integrand_reproduces_path() {
        let p = running_max(&path(&[1.0, 3.0, 0.5, 2.0]));
        let out = integrate_against(|_| 1.0, 1.0, &p).unwrap();
        assert_eq!(out.values(), p.values());
    }

    #[test]
    fn hand_computed_left_point_sum() {
        // increments 1*(2-1) + 2*(1-2)
        let p = running_max(&path(&[1.0, 2.0, 1.0]));
        let out = integrate_against(|m| m, 1.0, &p).unwrap();
        assert_eq!(out.values(), &[1.0, 2.0, 0.0]);
    }

    #[test]
    fn non_finite_integrand_reports_abscissa() {
        let p = running_max(&path(&[1.0, 2.0, 1.0]));
        let err = integrate_against(|m| if m > 1.5 { f64::INFINITY } else { 1.0 }, 1.0, &p).unwrap_err();
        assert!(matches!(err, Error::NonFinite { abscissa, .. } if abscissa == 2.0));
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.1, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0, 1.0]).is_err());
        let g = TimeGrid::uniform(10.0, 5).unwrap();
        assert_eq!(g.index_of(4.0), Some(2));
        assert_eq!(g.index_of(3.0), None);
        assert_eq!(g.end(), 10.0);
    }

    #[test]
    fn wealth_rejects_nonpositive_values() {
        let g = TimeGrid::uniform(1.0, 2).unwrap();
        assert!(DiscretePath::wealth(g.clone(), vec![1.0, 0.0, 1.0]).is_err());
        assert!(DiscretePath::new(g.clone(), vec![1.0, 2.0]).is_err());
        assert!(DiscretePath::new(g, vec![1.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let p = running_max(&path(&[1.0, 0.1 + 0.2, 5.5, 1e-17]));
        let mut buf = Vec::new();
        write_path_dump(&mut buf, &p).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# growth-lab path v1\n"));
        let back = read_path_dump(buf.as_slice()).unwrap();
        assert_eq!(back, p);
    }
}
