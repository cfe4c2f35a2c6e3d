//! Scenario files: flat `key = value` lines with dotted section prefixes.
//!
//! ```text
//! # one asset, constant coefficients
//! market.mu.0 = 0.06
//! market.sigma.0 = 0.2
//! p = 0.5
//! grid.t_max = 20
//! grid.steps = 200
//! horizons = 2, 4, 6, 8, 10, 12, 14, 16, 18, 20
//! n_paths = 10000
//! seed = 42
//! constraint = drawdown
//! drawdown.alpha = 0.3
//! ```
//!
//! Every key is validated at load; unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use growth_lab::nalgebra::{DMatrix, DVector};
use growth_lab::transforms::DEFAULT_QUAD_TOL;
use growth_lab::{
    build_scale_pair, linear_drawdown_scale, CoefficientSchedule, DrawdownSpec, FloorKind, FloorSpec, HorizonGrid,
    MertonModel, PowerUtility, ScalePair, TimeGrid,
};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SANDWICH_HORIZONS: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];

#[derive(Debug, Clone)]
pub enum Constraint {
    None,
    Drawdown(DrawdownConstraint),
    Floor(FloorSpec),
}

#[derive(Debug, Clone)]
pub struct DrawdownConstraint {
    pub scale: ScalePair,
    /// Closed-form linear drawdown, as opposed to a tabulated `w`.
    pub linear: bool,
}

impl DrawdownConstraint {
    pub fn alpha(&self) -> f64 {
        self.scale.spec().alpha()
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub schedule: CoefficientSchedule,
    pub p: f64,
    pub v0: f64,
    pub grid: TimeGrid,
    pub horizons: HorizonGrid,
    pub n_paths: usize,
    pub seed: u64,
    pub constraint: Constraint,
    pub delta: f64,
    pub tail_fraction: f64,
    pub sandwich_horizons: Vec<f64>,
    pub dump_paths: usize,
    canonical: String,
}

impl Scenario {
    /// Normalised `key = value` text (sorted keys, effective seed).
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    /// SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical.as_bytes()))
    }

    pub fn utility(&self) -> PowerUtility {
        PowerUtility::new(self.p).expect("validated at load")
    }
}

pub fn load_scenario(path: &Path, seed_override: Option<u64>) -> CliResult<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read scenario {}: {e}", path.display())))?;
    parse_scenario(&text, seed_override)
}

struct Entries {
    map: BTreeMap<String, String>,
    used: std::collections::BTreeSet<String>,
}

impl Entries {
    fn parse(text: &str) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key or value", n + 1)));
            }
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::key(k, "duplicate key"));
            }
        }
        Ok(Self { map, used: Default::default() })
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    fn opt<T: FromStr>(&mut self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::key(key, format!("cannot parse `{v}`: {e}"))))
            .transpose()
    }

    fn req<T: FromStr>(&mut self, key: &str) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key)?.ok_or_else(|| CliError::key(key, "missing required key"))
    }

    fn list(&mut self, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|e| CliError::key(key, format!("cannot parse `{}`: {e}", x.trim())))
                    })
                    .collect()
            })
            .transpose()
    }

    fn finish(&self) -> CliResult<()> {
        match self.map.keys().find(|k| !self.used.contains(*k)) {
            Some(k) => Err(CliError::key(k, "unknown key")),
            None => Ok(()),
        }
    }
}

fn positive(key: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::key(key, format!("must be positive and finite, got {x}")))
    }
}

fn core(key: &str) -> impl Fn(growth_lab::Error) -> CliError + '_ {
    move |e| CliError::key(key, e)
}

fn parse_schedule(e: &mut Entries, default_span: f64) -> CliResult<CoefficientSchedule> {
    let mut mu = Vec::new();
    while let Some(v) = e.list(&format!("market.mu.{}", mu.len()))? {
        mu.push(v);
    }
    if mu.is_empty() {
        return Err(CliError::key("market.mu.0", "missing required key"));
    }
    let d = mu[0].len();
    let mut sigma = Vec::with_capacity(mu.len());
    for (k, m) in mu.iter().enumerate() {
        let key = format!("market.mu.{k}");
        if m.len() != d {
            return Err(CliError::key(&key, format!("expected {d} entries, got {}", m.len())));
        }
        let key = format!("market.sigma.{k}");
        let s = e.list(&key)?.ok_or_else(|| CliError::key(&key, "missing required key"))?;
        if s.len() != d * d {
            return Err(CliError::key(&key, format!("expected {} row-major entries, got {}", d * d, s.len())));
        }
        sigma.push(DMatrix::from_row_slice(d, d, &s));
    }
    let breakpoints = match e.list("market.breakpoints")? {
        Some(b) => b,
        None if mu.len() == 1 => vec![0.0, default_span],
        None => return Err(CliError::key("market.breakpoints", "required with more than one interval")),
    };
    if breakpoints.len() != mu.len() + 1 {
        return Err(CliError::key(
            "market.breakpoints",
            format!("{} intervals need {} breakpoints, got {}", mu.len(), mu.len() + 1, breakpoints.len()),
        ));
    }
    let mu = mu.into_iter().map(DVector::from_vec).collect();
    CoefficientSchedule::new(breakpoints, mu, sigma).map_err(core("market"))
}

fn parse_drawdown(e: &mut Entries, v0: f64) -> CliResult<DrawdownConstraint> {
    let alpha: Option<f64> = e.opt("drawdown.alpha")?;
    let table = e.raw("drawdown.table");
    let quad_tol = positive("drawdown.quad_tol", e.opt("drawdown.quad_tol")?.unwrap_or(DEFAULT_QUAD_TOL))?;
    match (alpha, table) {
        (Some(a), None) => {
            if !(0.0..1.0).contains(&a) {
                return Err(CliError::key(
                    "drawdown.alpha",
                    format!("drawdown bound must satisfy 0 <= alpha < 1, got {a}"),
                ));
            }
            let scale = linear_drawdown_scale(a, v0).map_err(core("drawdown.alpha"))?;
            Ok(DrawdownConstraint { scale, linear: true })
        }
        (None, Some(t)) => {
            let points = t
                .split(',')
                .map(|pair| {
                    let (x, w) = pair.split_once(':').ok_or_else(|| {
                        CliError::key("drawdown.table", format!("expected `x:w`, got `{}`", pair.trim()))
                    })?;
                    let parse = |s: &str| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|err| CliError::key("drawdown.table", format!("`{}`: {err}", s.trim())))
                    };
                    Ok((parse(x)?, parse(w)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let spec = DrawdownSpec::tabulated(&points, v0).map_err(core("drawdown.table"))?;
            let scale = build_scale_pair(spec, quad_tol).map_err(core("drawdown.table"))?;
            Ok(DrawdownConstraint { scale, linear: false })
        }
        (Some(_), Some(_)) => Err(CliError::key("drawdown.table", "give either drawdown.alpha or drawdown.table")),
        (None, None) => Err(CliError::key("drawdown.alpha", "missing; drawdown needs alpha or a table")),
    }
}

fn parse_floor(e: &mut Entries, v0: f64, schedule: &CoefficientSchedule) -> CliResult<FloorSpec> {
    let epsilon: f64 = e.req("floor.epsilon")?;
    let kind: String = e.req("floor.kind")?;
    let kind = match kind.as_str() {
        "constant" => FloorKind::Constant { level: e.req("floor.level")? },
        "exponential" => FloorKind::Exponential { level: e.req("floor.level")?, decay: e.req("floor.decay")? },
        "proportional" => {
            let ref_p: f64 = e.req("floor.reference_p")?;
            let ref_v0 = positive("floor.reference_v0", e.opt("floor.reference_v0")?.unwrap_or(1.0))?;
            let reference = MertonModel::new(schedule.clone(), ref_p, ref_v0).map_err(core("floor.reference_p"))?;
            FloorKind::Proportional { factor: e.req("floor.factor")?, reference: std::sync::Arc::new(reference) }
        }
        other => {
            return Err(CliError::key(
                "floor.kind",
                format!("expected constant, exponential or proportional, got `{other}`"),
            ))
        }
    };
    FloorSpec::new(kind, v0, epsilon).map_err(core("floor"))
}

pub fn parse_scenario(text: &str, seed_override: Option<u64>) -> CliResult<Scenario> {
    let mut e = Entries::parse(text)?;

    let p: f64 = e.req("p")?;
    PowerUtility::new(p).map_err(|_| CliError::key("p", format!("power utility needs p < 1 and p != 0, got {p}")))?;
    let v0 = positive("v0", e.opt("v0")?.unwrap_or(1.0))?;

    let t_max = positive("grid.t_max", e.req("grid.t_max")?)?;
    let steps: usize = e.req("grid.steps")?;
    if steps == 0 {
        return Err(CliError::key("grid.steps", "must be at least 1"));
    }
    let grid = TimeGrid::uniform(t_max, steps).map_err(core("grid"))?;

    let sandwich_horizons = e.list("sandwich.horizons")?.unwrap_or_else(|| DEFAULT_SANDWICH_HORIZONS.to_vec());
    if let Some(t) = sandwich_horizons.iter().find(|&&t| !(t >= 2.0)) {
        return Err(CliError::key("sandwich.horizons", format!("horizons must be >= 2, got {t}")));
    }
    let span = sandwich_horizons.iter().copied().fold(t_max, f64::max);
    let schedule = parse_schedule(&mut e, span)?;
    schedule.step_intervals(&grid).map_err(core("grid.steps"))?;

    let horizons =
        HorizonGrid::new(e.list("horizons")?.ok_or_else(|| CliError::key("horizons", "missing required key"))?)
            .map_err(core("horizons"))?;
    growth_lab::montecarlo::horizon_indices(&grid, horizons.horizons()).map_err(core("horizons"))?;

    let n_paths: usize = e.req("n_paths")?;
    if n_paths < 2 {
        return Err(CliError::key("n_paths", format!("need at least 2 paths, got {n_paths}")));
    }
    let file_seed: u64 = e.req("seed")?;
    let seed = seed_override.unwrap_or(file_seed);

    let delta: f64 = e.opt("delta")?.unwrap_or(growth_lab::constraints::DEFAULT_DELTA);
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CliError::key("delta", format!("must lie in (0, 1), got {delta}")));
    }
    let tail_fraction: f64 = e.opt("tail_fraction")?.unwrap_or(growth_lab::cer::DEFAULT_TAIL_FRACTION);
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(CliError::key("tail_fraction", format!("must lie in (0, 1], got {tail_fraction}")));
    }
    let dump_paths: usize = e.opt("simulate.paths")?.unwrap_or(4);

    let kind: String = e.opt("constraint")?.unwrap_or_else(|| "none".into());
    let constraint = match kind.as_str() {
        "none" => Constraint::None,
        "drawdown" => Constraint::Drawdown(parse_drawdown(&mut e, v0)?),
        "floor" => Constraint::Floor(parse_floor(&mut e, v0, &schedule)?),
        other => return Err(CliError::key("constraint", format!("expected none, drawdown or floor, got `{other}`"))),
    };
    e.finish()?;

    let mut canonical = String::new();
    for (k, v) in &e.map {
        let v = if k == "seed" { seed.to_string() } else { v.clone() };
        let _ = writeln!(canonical, "{k} = {v}");
    }

    Ok(Scenario {
        schedule,
        p,
        v0,
        grid,
        horizons,
        n_paths,
        seed,
        constraint,
        delta,
        tail_fraction,
        sandwich_horizons,
        dump_paths,
        canonical,
    })
}
