//! Complete market with piecewise-constant deterministic coefficients.
//!
//! Assets follow `dS^i/S^i = μ^i dt + Σ_j σ^{ij} dW^j`, the market price of
//! risk is `θ = σ^{-1} μ` and the state-price density is the exponential
//! martingale `Z = exp(-∫θ'dW - ½∫‖θ‖²dt)`. All simulation uses the exact
//! per-step lognormal scheme, so terminal laws carry no discretisation bias
//! provided the grid contains every coefficient breakpoint.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::WealthModel;
use crate::noise::NoiseBlock;
use crate::paths::{DiscretePath, TimeGrid};

/// Largest accepted condition number of a volatility matrix.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSchedule {
    breakpoints: Vec<f64>,
    mu: Vec<DVector<f64>>,
    sigma: Vec<DMatrix<f64>>,
    theta: Vec<Option<DVector<f64>>>,
    dim: usize,
}

impl CoefficientSchedule {
    /// `breakpoints` are `0 = b_0 < b_1 < … < b_n = T_max`; interval `k` is
    /// `[b_k, b_{k+1})` and carries `mu[k]`, `sigma[k]`.
    pub fn new(breakpoints: Vec<f64>, mu: Vec<DVector<f64>>, sigma: Vec<DMatrix<f64>>) -> Result<Self> {
        let mut s = Self::new_unchecked(breakpoints, mu, sigma)?;
        for (k, sig) in s.sigma.iter().enumerate() {
            let sv = sig.singular_values();
            let smax = sv.max();
            let smin = sv.min();
            let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
            if !(cond <= MAX_CONDITION) {
                return Err(Error::LinearAlgebra(format!(
                    "volatility matrix on interval {k} has condition number {cond:e} > {MAX_CONDITION:e}"
                )));
            }
        }
        s.theta = s
            .sigma
            .iter()
            .zip(&s.mu)
            .enumerate()
            .map(|(k, (sig, mu))| solve(sig, mu, k).map(Some))
            .collect::<Result<_>>()?;
        Ok(s)
    }

    /// Skips the invertibility guard. Only for degenerate-volatility limits
    /// in tests; `theta` is unavailable where `σ` is singular.
    #[doc(hidden)]
    pub fn new_unchecked(breakpoints: Vec<f64>, mu: Vec<DVector<f64>>, sigma: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = mu.len();
        if n == 0 || sigma.len() != n || breakpoints.len() != n + 1 {
            return Err(Error::Config(format!(
                "schedule needs n intervals, n drifts, n volatilities and n+1 breakpoints (got {} / {} / {})",
                mu.len(),
                sigma.len(),
                breakpoints.len()
            )));
        }
        if breakpoints[0] != 0.0 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("schedule breakpoints must start at 0 and increase".into()));
        }
        let dim = mu[0].len();
        if dim == 0 {
            return Err(Error::Config("market needs at least one risky asset".into()));
        }
        for (k, (m, s)) in mu.iter().zip(&sigma).enumerate() {
            if m.len() != dim || s.nrows() != dim || s.ncols() != dim {
                return Err(Error::Config(format!("interval {k}: drift/volatility dimensions disagree")));
            }
            if m.iter().chain(s.iter()).any(|v| !v.is_finite()) || !breakpoints[k + 1].is_finite() {
                return Err(Error::Config(format!("interval {k}: non-finite coefficient")));
            }
        }
        let theta = sigma.iter().zip(&mu).enumerate().map(|(k, (sig, mu))| solve(sig, mu, k).ok()).collect();
        Ok(Self { breakpoints, mu, sigma, theta, dim })
    }

    /// Constant coefficients on `[0, t_max]`; `sigma` is row-major.
    pub fn constant(mu: &[f64], sigma: &[f64], t_max: f64) -> Result<Self> {
        let d = mu.len();
        if sigma.len() != d * d {
            return Err(Error::Config(format!("sigma needs {} entries, got {}", d * d, sigma.len())));
        }
        Self::new(vec![0.0, t_max], vec![DVector::from_row_slice(mu)], vec![DMatrix::from_row_slice(d, d, sigma)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_max(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn intervals(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self, k: usize) -> &DVector<f64> {
        &self.mu[k]
    }

    pub fn sigma(&self, k: usize) -> &DMatrix<f64> {
        &self.sigma[k]
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.t_max() * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::Domain(format!("time {t} outside schedule span [0, {}]", self.t_max())));
        }
        Ok(())
    }

    /// Interval containing `t`, right-continuous, with `T_max` in the last.
    pub fn interval_at(&self, t: f64) -> Result<usize> {
        self.check_time(t)?;
        let k = self.breakpoints.partition_point(|&b| b <= t);
        Ok(k.saturating_sub(1).min(self.intervals() - 1))
    }

    fn theta_of(&self, k: usize) -> Result<&DVector<f64>> {
        self.theta[k].as_ref().ok_or_else(|| Error::LinearAlgebra(format!("volatility on interval {k} is singular")))
    }

    /// Market price of risk θ_t = σ_t⁻¹ μ_t.
    pub fn theta(&self, t: f64) -> Result<DVector<f64>> {
        self.theta_of(self.interval_at(t)?).cloned()
    }

    /// `∫_0^T ‖θ_u‖² du`, exact for piecewise-constant coefficients.
    pub fn theta_sq_integral(&self, horizon: f64) -> Result<f64> {
        self.check_time(horizon)?;
        let mut acc = 0.0;
        for k in 0..self.intervals() {
            let a = self.breakpoints[k];
            if a >= horizon {
                break;
            }
            let b = self.breakpoints[k + 1].min(horizon);
            acc += self.theta_of(k)?.norm_squared() * (b - a);
        }
        Ok(acc)
    }

    /// Time-average of ‖θ‖² over `[0, T]`; the constant that multiplies
    /// `T` in every long-run rate.
    pub fn mean_theta_sq(&self, horizon: f64) -> Result<f64> {
        if !(horizon > 0.0) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        Ok(self.theta_sq_integral(horizon)? / horizon)
    }

    /// Coefficient interval of every grid step. Fails when the grid runs
    /// past the schedule or a step straddles a breakpoint.
    pub fn step_intervals(&self, grid: &TimeGrid) -> Result<Vec<usize>> {
        if grid.end() > self.t_max() * (1.0 + 1e-12) {
            return Err(Error::Config(format!("grid end {} beyond schedule span {}", grid.end(), self.t_max())));
        }
        for &b in &self.breakpoints[1..self.breakpoints.len() - 1] {
            if b < grid.end() && grid.index_of(b).is_none() {
                return Err(Error::Config(format!("grid does not contain coefficient breakpoint {b}")));
            }
        }
        (0..grid.steps()).map(|k| self.interval_at(grid.points()[k])).collect()
    }
}

fn solve(sigma: &DMatrix<f64>, rhs: &DVector<f64>, k: usize) -> Result<DVector<f64>> {
    sigma
        .clone()
        .lu()
        .solve(rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::LinearAlgebra(format!("volatility on interval {k} is singular")))
}

fn check_noise(schedule: &CoefficientSchedule, grid: &TimeGrid, noise: &NoiseBlock) -> Result<Vec<usize>> {
    if noise.dim() != schedule.dim() || noise.steps() != grid.steps() {
        return Err(Error::Config(format!(
            "noise block is {}x{} but market needs {}x{}",
            noise.steps(),
            noise.dim(),
            grid.steps(),
            schedule.dim()
        )));
    }
    schedule.step_intervals(grid)
}

/// Exact lognormal simulation of every risky asset.
pub fn simulate_assets(
    schedule: &CoefficientSchedule,
    grid: &TimeGrid,
    noise: &NoiseBlock,
    initial_prices: &[f64],
) -> Result<Vec<DiscretePath>> {
    let steps = check_noise(schedule, grid, noise)?;
    let d = schedule.dim();
    if initial_prices.len() != d || initial_prices.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Domain(format!("need {d} positive initial prices")));
    }
    // per-interval log drift μ_i - ½ Σ_j σ_ij²
    let log_drift: Vec<Vec<f64>> = (0..schedule.intervals())
        .map(|k| {
            let s = schedule.sigma(k);
            (0..d).map(|i| schedule.mu(k)[i] - 0.5 * s.row(i).norm_squared()).collect()
        })
        .collect();
    let mut logs: Vec<f64> = initial_prices.iter().map(|s| s.ln()).collect();
    let mut values: Vec<Vec<f64>> = initial_prices.iter().map(|&s| vec![s]).collect();
    for (k, &iv) in steps.iter().enumerate() {
        let dt = grid.dt(k);
        let dw = noise.step(k);
        let sig = schedule.sigma(iv);
        for i in 0..d {
            let mut shock = 0.0;
            for j in 0..d {
                shock += sig[(i, j)] * dw[j];
            }
            logs[i] += log_drift[iv][i] * dt + shock;
            values[i].push(logs[i].exp());
        }
    }
    values.into_iter().map(|v| DiscretePath::wealth(grid.clone(), v)).collect()
}

/// Exact simulation of the state-price density, `Z_0 = 1`.
pub fn state_price_density(
    schedule: &CoefficientSchedule,
    grid: &TimeGrid,
    noise: &NoiseBlock,
) -> Result<DiscretePath> {
    let steps = check_noise(schedule, grid, noise)?;
    let thetas: Vec<DVector<f64>> =
        (0..schedule.intervals()).map(|k| schedule.theta_of(k).cloned()).collect::<Result<_>>()?;
    let mut log_z = 0.0;
    let mut values = Vec::with_capacity(grid.len());
    values.push(1.0);
    for (k, &iv) in steps.iter().enumerate() {
        let th = &thetas[iv];
        let dw = noise.step(k);
        let shock: f64 = th.iter().zip(dw).map(|(a, b)| a * b).sum();
        log_z += -shock - 0.5 * th.norm_squared() * grid.dt(k);
        values.push(log_z.exp());
    }
    DiscretePath::wealth(grid.clone(), values)
}

/// Merton proportions `π̃ = σ'^{-1} θ / (1-p)` per coefficient interval,
/// reduced to what the log-wealth scheme needs.
#[derive(Debug, Clone, PartialEq)]
pub struct MertonStrategy {
    p: f64,
    proportions: Vec<DVector<f64>>,
    log_drift: Vec<f64>,
    loading: Vec<DVector<f64>>,
}

impl MertonStrategy {
    pub fn new(schedule: &CoefficientSchedule, p: f64) -> Result<Self> {
        check_exponent(p)?;
        let mut proportions = Vec::new();
        let mut log_drift = Vec::new();
        let mut loading = Vec::new();
        for k in 0..schedule.intervals() {
            let theta = schedule.theta_of(k)?;
            let sig = schedule.sigma(k);
            let pi = solve(&sig.transpose(), &(theta / (1.0 - p)), k)?;
            let load = sig.transpose() * &pi;
            log_drift.push(pi.dot(schedule.mu(k)) - 0.5 * load.norm_squared());
            loading.push(load);
            proportions.push(pi);
        }
        Ok(Self { p, proportions, log_drift, loading })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Fractions of wealth held in each risky asset on interval `k`.
    pub fn proportions(&self, k: usize) -> &DVector<f64> {
        &self.proportions[k]
    }

    fn wealth(
        &self,
        schedule: &CoefficientSchedule,
        grid: &TimeGrid,
        noise: &NoiseBlock,
        v0: f64,
    ) -> Result<DiscretePath> {
        let steps = check_noise(schedule, grid, noise)?;
        let mut log_v = v0.ln();
        let mut values = Vec::with_capacity(grid.len());
        values.push(v0);
        for (k, &iv) in steps.iter().enumerate() {
            let shock: f64 = self.loading[iv].iter().zip(noise.step(k)).map(|(a, b)| a * b).sum();
            log_v += self.log_drift[iv] * grid.dt(k) + shock;
            values.push(log_v.exp());
        }
        DiscretePath::wealth(grid.clone(), values)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p < 1.0) || p == 0.0 || !p.is_finite() {
        return Err(Error::Domain(format!("power utility exponent must satisfy p < 1, p != 0 (got {p})")));
    }
    Ok(())
}

/// Optimal wealth for `U_p` with constant-in-wealth Merton proportions,
/// `V_0 = v0`. Horizon independent: the path on `[0, T1]` is a prefix of the
/// path on `[0, T2]` under the same noise.
pub fn merton_wealth(
    schedule: &CoefficientSchedule,
    p: f64,
    grid: &TimeGrid,
    noise: &NoiseBlock,
    v0: f64,
) -> Result<DiscretePath> {
    if !(v0 > 0.0) {
        return Err(Error::Domain(format!("initial wealth must be positive, got {v0}")));
    }
    MertonStrategy::new(schedule, p)?.wealth(schedule, grid, noise, v0)
}

/// Arguments of the finite-horizon value function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueFunctionQuery {
    pub v0: f64,
    pub horizon: f64,
    pub p: f64,
}

impl ValueFunctionQuery {
    pub fn new(v0: f64, horizon: f64, p: f64) -> Result<Self> {
        check_exponent(p)?;
        if !(v0 > 0.0) || !(horizon >= 0.0) {
            return Err(Error::Domain(format!("need v0 > 0 and T >= 0 (got {v0}, {horizon})")));
        }
        Ok(Self { v0, horizon, p })
    }
}

/// `sup E U_p(V_T) = U_p(v0) exp{p/(2(1-p)) ∫_0^T ‖θ‖²}`.
pub fn closed_form_value(query: ValueFunctionQuery, schedule: &CoefficientSchedule) -> Result<f64> {
    let ValueFunctionQuery { v0, horizon, p } = ValueFunctionQuery::new(query.v0, query.horizon, query.p)?;
    let integral = schedule.theta_sq_integral(horizon)?;
    Ok(v0.powf(p) / p * (p / (2.0 * (1.0 - p)) * integral).exp())
}

/// Merton-optimal wealth as a simulation model.
#[derive(Debug, Clone)]
pub struct MertonModel {
    schedule: CoefficientSchedule,
    strategy: MertonStrategy,
    v0: f64,
}

impl MertonModel {
    pub fn new(schedule: CoefficientSchedule, p: f64, v0: f64) -> Result<Self> {
        if !(v0 > 0.0) {
            return Err(Error::Domain(format!("initial wealth must be positive, got {v0}")));
        }
        let strategy = MertonStrategy::new(&schedule, p)?;
        Ok(Self { schedule, strategy, v0 })
    }

    pub fn schedule(&self) -> &CoefficientSchedule {
        &self.schedule
    }

    pub fn strategy(&self) -> &MertonStrategy {
        &self.strategy
    }
}

impl WealthModel for MertonModel {
    fn dim(&self) -> usize {
        self.schedule.dim()
    }

    fn initial(&self) -> f64 {
        self.v0
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        self.strategy.wealth(&self.schedule, grid, noise, self.v0)
    }
}
