//! Floor- and drawdown-constrained wealth: constructions and audits.
//!
//! Floor: given an unconstrained optimiser `η̂`, the shifted process
//! `ξ̂ = δ v0 + (1-δ) η̂` stays above `δ v0`, and for any floor `G` dominated
//! by a wealth process `X` started from `v0 (1-ε)`, the process
//! `V̂ = ε ξ̂ + X` starts from `v0` and stays above `G`.
//!
//! Drawdown: transforming `ξ̂` with the scale inverse `F_w` yields a process
//! that never falls below `w` of its running maximum.
//!
//! Validation tolerances: floors are checked with absolute tolerance
//! `1e-12·v0`, drawdowns with tolerance `1e-9` relative to the running
//! maximum, absorbing the strict-versus-weak inequality at grid points.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::WealthModel;
use crate::noise::NoiseBlock;
use crate::paths::{running_max, DiscretePath, TimeGrid};
use crate::transforms::{azema_yor, DrawdownSpec, ScalePair};

pub const DRAWDOWN_REL_TOL: f64 = 1e-9;
pub const FLOOR_REL_TOL: f64 = 1e-12;
pub const DEFAULT_DELTA: f64 = 0.01;

fn same_initial(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Catalogue of floor processes, each with a declared dominating wealth.
#[derive(Clone)]
pub enum FloorKind {
    /// `G ≡ level`.
    Constant { level: f64 },
    /// `G_t = level·e^{-decay·t}`, `decay ≥ 0`.
    Exponential { level: f64, decay: f64 },
    /// `G = factor·R` for a reference wealth `R`.
    Proportional { factor: f64, reference: Arc<dyn WealthModel> },
}

impl fmt::Debug for FloorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FloorKind::Constant { level } => write!(f, "Constant({level})"),
            FloorKind::Exponential { level, decay } => write!(f, "Exponential({level}, {decay})"),
            FloorKind::Proportional { factor, reference } => {
                write!(f, "Proportional({factor}, R0 = {})", reference.initial())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FloorSpec {
    kind: FloorKind,
    v0: f64,
    epsilon: f64,
}

impl FloorSpec {
    /// Checks that the catalogue's dominating wealth, started from
    /// `v0 (1-ε)`, dominates the floor.
    ///
    /// Constant and exponential floors are dominated by the riskless holding
    /// `X ≡ v0 (1-ε)`; a proportional floor by `v0 (1-ε) R / R_0`.
    pub fn new(kind: FloorKind, v0: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!("floor epsilon must lie in (0, 1), got {epsilon}")));
        }
        if !(v0 > 0.0) {
            return Err(Error::Config(format!("v0 must be positive, got {v0}")));
        }
        let budget = v0 * (1.0 - epsilon);
        match &kind {
            FloorKind::Constant { level } | FloorKind::Exponential { level, .. } => {
                if !(*level >= 0.0) {
                    return Err(Error::Config(format!("floor level must be nonnegative, got {level}")));
                }
                if *level > budget * (1.0 + 1e-12) {
                    return Err(Error::Config(format!(
                        "floor level {level} exceeds the dominating wealth v0(1-eps) = {budget}"
                    )));
                }
                if let FloorKind::Exponential { decay, .. } = kind {
                    if !(decay >= 0.0) {
                        return Err(Error::Config(format!("floor decay must be nonnegative, got {decay}")));
                    }
                }
            }
            FloorKind::Proportional { factor, reference } => {
                let r0 = reference.initial();
                if !(*factor >= 0.0) || !(r0 > 0.0) {
                    return Err(Error::Config("proportional floor needs factor >= 0 and R0 > 0".into()));
                }
                if *factor * r0 > budget * (1.0 + 1e-12) {
                    return Err(Error::Config(format!(
                        "proportional floor starts at {} above v0(1-eps) = {budget}",
                        factor * r0
                    )));
                }
            }
        }
        Ok(Self { kind, v0, epsilon })
    }

    pub fn kind(&self) -> &FloorKind {
        &self.kind
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Absolute tolerance used when auditing this floor.
    pub fn tolerance(&self) -> f64 {
        FLOOR_REL_TOL * self.v0
    }

    pub fn floor_path(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        match &self.kind {
            FloorKind::Constant { level } => DiscretePath::constant(grid.clone(), *level),
            FloorKind::Exponential { level, decay } => {
                DiscretePath::new(grid.clone(), grid.points().iter().map(|t| level * (-decay * t).exp()).collect())
            }
            FloorKind::Proportional { factor, reference } => reference.wealth(grid, noise)?.map(|r| factor * r),
        }
    }

    /// The declared dominating wealth `X ∈ A(v0 (1-ε))`.
    pub fn dominating_path(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        let budget = self.v0 * (1.0 - self.epsilon);
        match &self.kind {
            FloorKind::Constant { .. } | FloorKind::Exponential { .. } => {
                DiscretePath::wealth(grid.clone(), vec![budget; grid.len()])
            }
            FloorKind::Proportional { reference, .. } => {
                let scale = budget / reference.initial();
                let r = reference.wealth(grid, noise)?;
                DiscretePath::wealth(grid.clone(), r.values().iter().map(|x| scale * x).collect())
            }
        }
    }

    fn noise_dim(&self) -> Option<usize> {
        match &self.kind {
            FloorKind::Proportional { reference, .. } => Some(reference.dim()),
            _ => None,
        }
    }
}

/// Outcome of auditing an ensemble against a constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    pub n_paths_checked: usize,
    pub n_points_checked: usize,
    pub n_violations: usize,
    pub worst_margin: f64,
    pub tolerance: f64,
}

impl ConstraintReport {
    pub fn empty(tolerance: f64) -> Self {
        Self { n_paths_checked: 0, n_points_checked: 0, n_violations: 0, worst_margin: f64::INFINITY, tolerance }
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            n_paths_checked: self.n_paths_checked + other.n_paths_checked,
            n_points_checked: self.n_points_checked + other.n_points_checked,
            n_violations: self.n_violations + other.n_violations,
            worst_margin: self.worst_margin.min(other.worst_margin),
            tolerance: self.tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.n_violations == 0
    }
}

impl fmt::Display for ConstraintReport {
    /// Fixed-order `key=value` record, one field per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# growth-lab constraint v1")?;
        writeln!(f, "n_paths_checked={}", self.n_paths_checked)?;
        writeln!(f, "n_points_checked={}", self.n_points_checked)?;
        writeln!(f, "n_violations={}", self.n_violations)?;
        writeln!(f, "worst_margin={:.16e}", self.worst_margin)?;
        writeln!(f, "tolerance={:.16e}", self.tolerance)
    }
}

/// `ξ̂ = δ v0 + (1-δ) η̂`.
pub fn shift_floor(eta_hat: &DiscretePath, delta: f64, v0: f64) -> Result<DiscretePath> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !same_initial(eta_hat.initial(), v0) {
        return Err(Error::Domain(format!("eta starts at {} instead of v0 = {v0}", eta_hat.initial())));
    }
    if !eta_hat.is_strictly_positive() {
        return Err(Error::Domain("eta must be strictly positive".into()));
    }
    let mut values: Vec<f64> = eta_hat.values().iter().map(|e| delta * v0 + (1.0 - delta) * e).collect();
    values[0] = v0;
    DiscretePath::wealth(eta_hat.grid().clone(), values)
}

/// `V̂ = ε ξ̂ + X`, with `ξ̂_0 = v0` and `X_0 = v0 (1-ε)`.
pub fn floor_optimal(xi_hat: &DiscretePath, dominating: &DiscretePath, epsilon: f64) -> Result<DiscretePath> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if xi_hat.grid() != dominating.grid() {
        return Err(Error::GridMismatch("xi and dominating wealth on different grids".into()));
    }
    let v0 = xi_hat.initial();
    if !same_initial(dominating.initial(), v0 * (1.0 - epsilon)) {
        return Err(Error::InvariantViolation(format!(
            "dominating wealth starts at {} instead of v0(1-eps) = {}",
            dominating.initial(),
            v0 * (1.0 - epsilon)
        )));
    }
    let values = xi_hat.values().iter().zip(dominating.values()).map(|(x, d)| epsilon * x + d).collect();
    DiscretePath::wealth(xi_hat.grid().clone(), values)
}

/// `M^{F_w}(ξ̂)`, the drawdown-constrained image of `ξ̂`.
pub fn drawdown_optimal(xi_hat: &DiscretePath, scale: &ScalePair) -> Result<DiscretePath> {
    let v0 = scale.spec().v0();
    if !same_initial(xi_hat.initial(), v0) {
        return Err(Error::Domain(format!("xi starts at {} instead of v0 = {v0}", xi_hat.initial())));
    }
    if !xi_hat.is_strictly_positive() {
        return Err(Error::Domain("xi must be strictly positive".into()));
    }
    let v = azema_yor(scale.f(), &running_max(xi_hat))?;
    DiscretePath::wealth(xi_hat.grid().clone(), v.into_values())
}

fn floor_report(path: &DiscretePath, floor: &DiscretePath, tolerance: f64) -> Result<ConstraintReport> {
    if path.grid() != floor.grid() {
        return Err(Error::GridMismatch("wealth and floor on different grids".into()));
    }
    let mut r = ConstraintReport::empty(tolerance);
    r.n_paths_checked = 1;
    for (v, g) in path.values().iter().zip(floor.values()) {
        let margin = v - g;
        r.n_points_checked += 1;
        r.worst_margin = r.worst_margin.min(margin);
        if margin < -tolerance {
            r.n_violations += 1;
        }
    }
    Ok(r)
}

/// Margins `V - G` pathwise; a violation is a margin below `-tolerance`.
pub fn validate_floor(paths: &[DiscretePath], floors: &[DiscretePath], tolerance: f64) -> Result<ConstraintReport> {
    if paths.len() != floors.len() {
        return Err(Error::GridMismatch(format!("{} paths but {} floor paths", paths.len(), floors.len())));
    }
    paths
        .par_iter()
        .zip(floors)
        .map(|(p, g)| floor_report(p, g, tolerance))
        .try_reduce(|| ConstraintReport::empty(tolerance), |a, b| Ok(a.merge(b)))
}

fn drawdown_report(path: &DiscretePath, spec: &DrawdownSpec, rel_tol: f64) -> ConstraintReport {
    let mp = running_max(path);
    let mut r = ConstraintReport::empty(rel_tol);
    r.n_paths_checked = 1;
    for (v, m) in mp.values().iter().zip(mp.running_max()) {
        let margin = v - spec.w(*m);
        r.n_points_checked += 1;
        r.worst_margin = r.worst_margin.min(margin);
        if margin < -rel_tol * m {
            r.n_violations += 1;
        }
    }
    r
}

/// Margins `V - w(max V)`; a violation is a margin below `-rel_tol·max V`.
pub fn validate_drawdown(paths: &[DiscretePath], spec: &DrawdownSpec, rel_tol: f64) -> ConstraintReport {
    paths
        .par_iter()
        .map(|p| drawdown_report(p, spec, rel_tol))
        .reduce(|| ConstraintReport::empty(rel_tol), ConstraintReport::merge)
}

/// `ξ̂ = δ v0 + (1-δ) η̂` for an inner optimiser `η̂` started from `v0`.
pub struct Shifted<M> {
    pub inner: M,
    pub delta: f64,
}

impl<M: WealthModel> WealthModel for Shifted<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn initial(&self) -> f64 {
        self.inner.initial()
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        shift_floor(&self.inner.wealth(grid, noise)?, self.delta, self.inner.initial())
    }
}

/// `V̂ = ε ξ̂ + X` for the floor's declared dominating wealth `X`.
pub struct FloorOptimal<M> {
    xi: M,
    floor: FloorSpec,
}

impl<M: WealthModel> FloorOptimal<M> {
    pub fn new(xi: M, floor: FloorSpec) -> Result<Self> {
        if !same_initial(xi.initial(), floor.v0()) {
            return Err(Error::Config(format!(
                "xi starts at {} but the floor budget is v0 = {}",
                xi.initial(),
                floor.v0()
            )));
        }
        if let Some(d) = floor.noise_dim() {
            if d != xi.dim() {
                return Err(Error::Config("floor reference uses a different noise dimension".into()));
            }
        }
        Ok(Self { xi, floor })
    }

    pub fn floor(&self) -> &FloorSpec {
        &self.floor
    }

    /// Audits `n_paths` simulated `V̂` paths against the floor.
    pub fn audit(&self, grid: &TimeGrid, n_paths: usize, seed: u64) -> Result<ConstraintReport> {
        let tol = self.floor.tolerance();
        (0..n_paths as u64)
            .into_par_iter()
            .map(|i| {
                let noise = NoiseBlock::generate(seed, i, grid, self.dim());
                let v = self.wealth(grid, &noise)?;
                let g = self.floor.floor_path(grid, &noise)?;
                floor_report(&v, &g, tol)
            })
            .try_reduce(|| ConstraintReport::empty(tol), |a, b| Ok(a.merge(b)))
    }

    /// Audits the declared dominating wealth itself against the floor.
    pub fn audit_dominating(&self, grid: &TimeGrid, n_paths: usize, seed: u64) -> Result<ConstraintReport> {
        let tol = self.floor.tolerance();
        (0..n_paths as u64)
            .into_par_iter()
            .map(|i| {
                let noise = NoiseBlock::generate(seed, i, grid, self.dim());
                let x = self.floor.dominating_path(grid, &noise)?;
                let g = self.floor.floor_path(grid, &noise)?;
                floor_report(&x, &g, tol)
            })
            .try_reduce(|| ConstraintReport::empty(tol), |a, b| Ok(a.merge(b)))
    }
}

impl<M: WealthModel> WealthModel for FloorOptimal<M> {
    fn dim(&self) -> usize {
        self.xi.dim()
    }

    fn initial(&self) -> f64 {
        self.floor.v0()
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        let xi = self.xi.wealth(grid, noise)?;
        let x = self.floor.dominating_path(grid, noise)?;
        floor_optimal(&xi, &x, self.floor.epsilon())
    }
}

/// `M^{F_w}(ξ̂)` for an inner model `ξ̂`.
pub struct DrawdownOptimal<M> {
    pub xi: M,
    pub scale: ScalePair,
}

impl<M: WealthModel> DrawdownOptimal<M> {
    pub fn audit(&self, grid: &TimeGrid, n_paths: usize, seed: u64) -> Result<ConstraintReport> {
        let spec = self.scale.spec();
        (0..n_paths as u64)
            .into_par_iter()
            .map(|i| {
                let noise = NoiseBlock::generate(seed, i, grid, self.dim());
                Ok(drawdown_report(&self.wealth(grid, &noise)?, spec, DRAWDOWN_REL_TOL))
            })
            .try_reduce(|| ConstraintReport::empty(DRAWDOWN_REL_TOL), |a, b| Ok(a.merge(b)))
    }
}

impl<M: WealthModel> WealthModel for DrawdownOptimal<M> {
    fn dim(&self) -> usize {
        self.xi.dim()
    }

    fn initial(&self) -> f64 {
        self.scale.spec().v0()
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        drawdown_optimal(&self.xi.wealth(grid, noise)?, &self.scale)
    }
}
