//! Growth rates of expected utility.
//!
//! The certainty equivalent rate of a wealth process is the long-run slope of
//! `T ↦ log E U(V_T)`, with `log` extended to negative arguments as
//! `log x = -log(-x)`. Here it is estimated by Monte Carlo on a finite
//! horizon grid and a least-squares fit over the tail of that grid; the fit
//! residuals are reported so non-convergence stays visible.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::market::{closed_form_value, CoefficientSchedule, ValueFunctionQuery};
use crate::model::WealthModel;
use crate::montecarlo::{horizon_indices, map_paths};
use crate::paths::TimeGrid;
use crate::stats::{mean_and_std_error, median, ols};
use crate::utility::{signed_log, PowerUtility, Utility};

pub const SWEEP_HEADER: &str = "# growth-lab sweep v1";
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

/// Ratio of largest to median absolute residual beyond which a fit is
/// refused as non-linear.
pub const NONLINEARITY_RATIO: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonGrid {
    horizons: Vec<f64>,
}

impl HorizonGrid {
    pub fn new(horizons: Vec<f64>) -> Result<Self> {
        if horizons.is_empty() {
            return Err(Error::Config("horizon grid is empty".into()));
        }
        if !(horizons[0] > 0.0) || horizons.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("horizons must be positive and strictly increasing".into()));
        }
        Ok(Self { horizons })
    }

    /// `step, 2·step, …, count·step`.
    pub fn arithmetic(step: f64, count: usize) -> Result<Self> {
        Self::new((1..=count).map(|k| step * k as f64).collect())
    }

    pub fn horizons(&self) -> &[f64] {
        &self.horizons
    }

    pub fn last(&self) -> f64 {
        self.horizons[self.horizons.len() - 1]
    }
}

/// Sample mean and standard error of `U(V_T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityEstimate {
    pub horizon: f64,
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

impl UtilityEstimate {
    pub fn signed_log_mean(&self) -> Result<f64> {
        if self.mean == 0.0 {
            return Err(Error::InvalidEstimate(format!("zero mean at T = {}", self.horizon)));
        }
        signed_log(self.mean)
    }

    /// Delta-method standard error of `log |mean|`.
    pub fn log_std_error(&self) -> f64 {
        self.std_error / self.mean.abs()
    }

    /// Mean distinguishable from zero at three standard errors.
    pub fn is_usable(&self) -> bool {
        self.mean != 0.0 && self.mean.abs() > 3.0 * self.std_error
    }
}

/// Fitted growth rate over the tail of a horizon sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub estimates: Vec<UtilityEstimate>,
    pub fitted_rate: f64,
    pub fit_intercept: f64,
    pub max_residual: f64,
    pub tail_fraction_used: f64,
    pub rate_std_error: f64,
    pub seed: Option<u64>,
}

/// Monte Carlo estimates of `E U(V_T)` at every horizon, reusing each
/// simulated path for all horizons. Horizons must be grid points.
pub fn sweep_expected_utility(
    model: &dyn WealthModel,
    u: &dyn Utility,
    grid: &TimeGrid,
    horizons: &HorizonGrid,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<UtilityEstimate>> {
    if n_paths < 2 {
        return Err(Error::Config(format!("need at least 2 paths, got {n_paths}")));
    }
    let idx = horizon_indices(grid, horizons.horizons())?;
    let per_path = map_paths(model, grid, n_paths, seed, |i, path| {
        idx.iter()
            .map(|&k| {
                let v = path.values()[k];
                if !(v > 0.0) {
                    return Err(Error::InvariantViolation(format!(
                        "path {i}: non-positive wealth {v} at t = {}",
                        grid.points()[k]
                    )));
                }
                Ok(u.value(v))
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    let mut column = vec![0.0; n_paths];
    Ok(horizons
        .horizons()
        .iter()
        .enumerate()
        .map(|(h, &t)| {
            for (slot, row) in column.iter_mut().zip(&per_path) {
                *slot = row[h];
            }
            let (mean, std_error) = mean_and_std_error(&column);
            UtilityEstimate { horizon: t, mean, std_error, n_paths }
        })
        .collect())
}

/// `E U(V_T)` at the end of `grid`.
pub fn estimate_expected_utility(
    model: &dyn WealthModel,
    u: &dyn Utility,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<UtilityEstimate> {
    let horizons = HorizonGrid::new(vec![grid.end()])?;
    Ok(sweep_expected_utility(model, u, grid, &horizons, n_paths, seed)?[0])
}

fn tail<T>(xs: &[T], tail_fraction: f64) -> &[T] {
    let k = ((tail_fraction * xs.len() as f64).ceil() as usize).clamp(1, xs.len());
    &xs[xs.len() - k..]
}

/// Least-squares slope of `signed_log(mean)` against `T` over the largest
/// `tail_fraction` of horizons, using only estimates with `|mean| > 3·SE`.
///
/// The fit is refused when the largest residual exceeds both ten times the
/// median residual and three times the largest log-scale standard error,
/// i.e. when the curvature is visible above Monte Carlo noise.
pub fn fit_rate(estimates: &[UtilityEstimate], tail_fraction: f64) -> Result<SweepReport> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Config(format!("tail fraction must lie in (0, 1], got {tail_fraction}")));
    }
    let usable: Vec<&UtilityEstimate> = tail(estimates, tail_fraction).iter().filter(|e| e.is_usable()).collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData(format!("{} usable estimates in the tail, need 3", usable.len())));
    }
    let xs: Vec<f64> = usable.iter().map(|e| e.horizon).collect();
    let ys: Vec<f64> = usable.iter().map(|e| e.signed_log_mean()).collect::<Result<_>>()?;
    let (intercept, slope) = ols(&xs, &ys);
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let noise = usable.iter().map(|e| e.log_std_error()).fold(0.0, f64::max);
    let scale = ys.iter().map(|y| y.abs()).fold(1.0, f64::max);
    let med = median(residuals);
    if max_residual > NONLINEARITY_RATIO * med && max_residual > 3.0 * noise && max_residual > 1e-9 * scale {
        return Err(Error::NonLinearFit(format!(
            "max residual {max_residual:e} vs median {med:e} and noise {noise:e}"
        )));
    }
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let var: f64 = usable.iter().map(|e| (e.horizon - mx).powi(2) * e.log_std_error().powi(2)).sum();
    Ok(SweepReport {
        estimates: estimates.to_vec(),
        fitted_rate: slope,
        fit_intercept: intercept,
        max_residual,
        tail_fraction_used: tail_fraction,
        rate_std_error: var.sqrt() / sxx,
        seed: None,
    })
}

/// Per-horizon gap `(signed_log E U(optimal) - signed_log E U(candidate)) / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub horizons: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Standard error of each gap, ignoring the (positive) correlation
    /// between the two sweeps.
    pub std_errors: Vec<f64>,
    /// Slope of the log difference over the tail: the difference of rates.
    pub tail_slope: f64,
    /// Largest gap over the tail horizons.
    pub statistic: f64,
}

pub fn long_run_gap(candidate: &SweepReport, optimal: &SweepReport) -> Result<GapReport> {
    gap_from_estimates(&candidate.estimates, &optimal.estimates, candidate.tail_fraction_used)
}

pub fn gap_from_estimates(
    candidate: &[UtilityEstimate],
    optimal: &[UtilityEstimate],
    tail_fraction: f64,
) -> Result<GapReport> {
    if candidate.len() != optimal.len()
        || candidate.iter().zip(optimal).any(|(a, b)| (a.horizon - b.horizon).abs() > 1e-12 * a.horizon.max(1.0))
    {
        return Err(Error::GridMismatch("candidate and optimal sweeps use different horizons".into()));
    }
    let mut horizons = Vec::new();
    let mut diffs = Vec::new();
    let mut gaps = Vec::new();
    let mut std_errors = Vec::new();
    for (c, o) in candidate.iter().zip(optimal) {
        let d = o.signed_log_mean()? - c.signed_log_mean()?;
        horizons.push(c.horizon);
        diffs.push(d);
        gaps.push(d / c.horizon);
        std_errors.push((c.log_std_error().powi(2) + o.log_std_error().powi(2)).sqrt() / c.horizon);
    }
    let th = tail(&horizons, tail_fraction);
    let td = tail(&diffs, tail_fraction);
    let tail_slope = if th.len() >= 2 { ols(th, td).1 } else { 0.0 };
    let statistic = tail(&gaps, tail_fraction).iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GapReport { horizons, gaps, std_errors, tail_slope, statistic })
}

/// Certainty equivalent loss with its propagated standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertaintyEquivalentLoss {
    pub loss: f64,
    pub std_error: f64,
}

/// The rate `l_T` solving `E U(e^{l_T T} V_T) = sup E U`, i.e.
/// `l_T = log(value / E U(V_T)) / (p T)` for power utility, with the
/// closed-form value function of the complete market as the supremum.
pub fn certainty_equivalent_loss(
    candidate: &UtilityEstimate,
    u: &PowerUtility,
    schedule: &CoefficientSchedule,
    v0: f64,
) -> Result<CertaintyEquivalentLoss> {
    let p = u.p();
    let value = closed_form_value(ValueFunctionQuery::new(v0, candidate.horizon, p)?, schedule)?;
    if candidate.mean == 0.0 || candidate.mean.signum() != value.signum() {
        return Err(Error::InvalidEstimate(format!("estimate {} and value {value} differ in sign", candidate.mean)));
    }
    let t = candidate.horizon;
    Ok(CertaintyEquivalentLoss {
        loss: (value / candidate.mean).ln() / (p * t),
        std_error: candidate.log_std_error() / (p.abs() * t),
    })
}

/// One horizon of the sandwich bounds on the drawdown-constrained value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichRow {
    pub horizon: f64,
    pub epsilon: f64,
    pub lower: f64,
    pub upper: f64,
    /// `signed_log(upper) - signed_log(lower)`, computed in log space.
    pub log_gap: f64,
    pub log_gap_over_log_t: f64,
    pub ordered: bool,
    /// Whether the Monte Carlo estimate sits in `[lower - 3SE, upper + 3SE]`.
    pub mc_within: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub p: f64,
    pub alpha: f64,
    pub rows: Vec<SandwichRow>,
    /// Largest `log_gap / log T` over the grid.
    pub bound_constant: f64,
}

impl SandwichReport {
    pub fn all_ordered(&self) -> bool {
        self.rows.iter().all(|r| r.ordered)
    }
}

/// `(sign, log|V(1, T, q)|)` for the unit-wealth value function.
fn log_value(q: f64, integral: f64) -> (f64, f64) {
    (q.signum(), -q.abs().ln() + q / (2.0 * (1.0 - q)) * integral)
}

fn signed_log_of(sign: f64, log_abs: f64) -> f64 {
    sign * log_abs
}

/// Closed-form bounds
/// `(1-α) V(1,T,q) ≤ sup_{drawdown} E U_p ≤ (1-α)/(1-ε) ε^{-q/(1-ε)} V(1,T,q/(1-ε))`
/// with `q = p(1-α)` and `ε = 1/T`.
pub fn sandwich_check(
    p: f64,
    alpha: f64,
    schedule: &CoefficientSchedule,
    horizons: &[f64],
    mc: Option<&[UtilityEstimate]>,
) -> Result<SandwichReport> {
    PowerUtility::new(p)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("sandwich needs 0 < alpha < 1, got {alpha}")));
    }
    if let Some(est) = mc {
        if est.len() != horizons.len() {
            return Err(Error::GridMismatch("one Monte Carlo estimate per horizon required".into()));
        }
    }
    let q = p * (1.0 - alpha);
    let mut rows = Vec::with_capacity(horizons.len());
    for (i, &t) in horizons.iter().enumerate() {
        if !(t >= 2.0) {
            return Err(Error::Domain(format!("sandwich needs T >= 2, got {t}")));
        }
        let eps = 1.0 / t;
        let q_up = q / (1.0 - eps);
        if !(q_up < 1.0) {
            return Err(Error::Domain(format!("perturbed exponent {q_up} reaches 1 at T = {t}")));
        }
        let integral = schedule.theta_sq_integral(t)?;
        let (s_lo, l_lo) = log_value(q, integral);
        let (s_up, l_up) = log_value(q_up, integral);
        let log_lower = (1.0 - alpha).ln() + l_lo;
        let log_upper = ((1.0 - alpha) / (1.0 - eps)).ln() - q_up * eps.ln() + l_up;
        let lower = s_lo * log_lower.exp();
        let upper = s_up * log_upper.exp();
        let sl_lo = signed_log_of(s_lo, log_lower);
        let sl_up = signed_log_of(s_up, log_upper);
        let log_gap = sl_up - sl_lo;
        let mc_within = mc.map(|est| {
            let e = est[i];
            e.mean >= lower - 3.0 * e.std_error && e.mean <= upper + 3.0 * e.std_error
        });
        rows.push(SandwichRow {
            horizon: t,
            epsilon: eps,
            lower,
            upper,
            log_gap,
            log_gap_over_log_t: log_gap / t.ln(),
            ordered: sl_lo <= sl_up,
            mc_within,
        });
    }
    let bound_constant = rows.iter().map(|r| r.log_gap_over_log_t).fold(f64::NEG_INFINITY, f64::max);
    Ok(SandwichReport { p, alpha, rows, bound_constant })
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the sweep records and the fit footer.
pub fn write_sweep<W: Write>(mut out: W, report: &SweepReport) -> std::io::Result<()> {
    let mut buf = String::new();
    buf.push_str(SWEEP_HEADER);
    buf.push('\n');
    buf.push_str("# T,mean,std_error,signed_log_mean,n_paths\n");
    for e in &report.estimates {
        let sl = e.signed_log_mean().unwrap_or(f64::NAN);
        let _ =
            writeln!(buf, "{},{},{},{},{}", fmt17(e.horizon), fmt17(e.mean), fmt17(e.std_error), fmt17(sl), e.n_paths);
    }
    let _ = writeln!(buf, "# fitted_rate={}", fmt17(report.fitted_rate));
    let _ = writeln!(buf, "# rate_std_error={}", fmt17(report.rate_std_error));
    let _ = writeln!(buf, "# fit_intercept={}", fmt17(report.fit_intercept));
    let _ = writeln!(buf, "# max_residual={}", fmt17(report.max_residual));
    let _ = writeln!(buf, "# tail_fraction={}", fmt17(report.tail_fraction_used));
    if let Some(seed) = report.seed {
        let _ = writeln!(buf, "# seed={seed}");
    }
    out.write_all(buf.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConstantWealth, FnModel};
    use crate::paths::DiscretePath;

    fn synthetic(a: f64, b: f64, sign: f64) -> Vec<UtilityEstimate> {
        (1..=10)
            .map(|k| {
                let t = 2.0 * k as f64;
                UtilityEstimate { horizon: t, mean: sign * (sign * (a + b * t)).exp(), std_error: 0.0, n_paths: 100 }
            })
            .collect()
    }

    #[test]
    fn constant_wealth_has_zero_error() {
        let grid = TimeGrid::uniform(5.0, 5).unwrap();
        let u = PowerUtility::new(0.5).unwrap();
        let e = estimate_expected_utility(&ConstantWealth { v0: 4.0, dim: 1 }, &u, &grid, 50, 1).unwrap();
        assert_eq!((e.mean, e.std_error, e.n_paths), (4.0, 0.0, 50));
    }

    #[test]
    fn nonpositive_terminal_wealth_is_an_invariant_violation() {
        let grid = TimeGrid::uniform(1.0, 2).unwrap();
        let bad = FnModel::new(1, 1.0, |g: &TimeGrid, _n: &crate::noise::NoiseBlock| {
            DiscretePath::new(g.clone(), vec![1.0, 0.5, -0.1])
        });
        let u = PowerUtility::new(0.5).unwrap();
        assert!(matches!(estimate_expected_utility(&bad, &u, &grid, 4, 0), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn fit_recovers_planted_slope() {
        for sign in [1.0, -1.0] {
            let r = fit_rate(&synthetic(0.3, 0.0225, sign), 0.5).unwrap();
            assert!((r.fitted_rate - 0.0225).abs() < 1e-12, "{sign}: {}", r.fitted_rate);
            assert!((r.fit_intercept - 0.3).abs() < 1e-10);
            assert!(r.max_residual < 1e-12);
        }
    }

    #[test]
    fn fit_needs_three_usable_points() {
        let mut est = synthetic(0.0, 0.01, 1.0);
        for e in est.iter_mut().skip(7) {
            e.std_error = e.mean;
        }
        assert!(matches!(fit_rate(&est, 0.5), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn fit_refuses_visible_curvature() {
        let est: Vec<UtilityEstimate> = (1..=40)
            .map(|k| {
                let t = k as f64;
                let y = if k == 30 { 5.0 } else { 0.1 * t };
                UtilityEstimate { horizon: t, mean: y.exp(), std_error: 1e-6, n_paths: 10 }
            })
            .collect();
        assert!(matches!(fit_rate(&est, 0.5), Err(Error::NonLinearFit(_))));
    }

    #[test]
    fn gap_of_identical_sweeps_is_zero() {
        let r = fit_rate(&synthetic(0.1, 0.02, -1.0), 0.5).unwrap();
        let g = long_run_gap(&r, &r).unwrap();
        assert!(g.gaps.iter().all(|&x| x == 0.0));
        assert_eq!(g.statistic, 0.0);
        assert_eq!(g.tail_slope, 0.0);
    }

    #[test]
    fn gap_of_scaled_candidate_is_analytic() {
        // U(cV) = c^p U(V)  ⇒  gap_T = -|p| log c / T under signed logs
        for p in [0.5, -1.0] {
            let c: f64 = 0.7;
            let sign = f64::signum(p);
            let opt = synthetic(0.2, 0.03, sign);
            let cand: Vec<UtilityEstimate> =
                opt.iter().map(|e| UtilityEstimate { mean: c.powf(p) * e.mean, ..*e }).collect();
            let g = gap_from_estimates(&cand, &opt, 0.5).unwrap();
            for (t, gap) in g.horizons.iter().zip(&g.gaps) {
                assert!((gap + p.abs() * c.ln() / t).abs() < 1e-12);
            }
            assert!(g.tail_slope.abs() < 1e-12);
        }
    }

    #[test]
    fn gap_rejects_mismatched_grids() {
        let a = synthetic(0.0, 0.01, 1.0);
        let b = &a[1..];
        assert!(matches!(gap_from_estimates(&a, b, 0.5), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn cel_examples() {
        let s = CoefficientSchedule::constant(&[0.06], &[0.2], 20.0).unwrap();
        for p in [0.5, -1.0] {
            let u = PowerUtility::new(p).unwrap();
            let t = 10.0;
            let value = closed_form_value(ValueFunctionQuery::new(1.0, t, p).unwrap(), &s).unwrap();
            let exact = UtilityEstimate { horizon: t, mean: value, std_error: 0.0, n_paths: 10 };
            assert_eq!(certainty_equivalent_loss(&exact, &u, &s, 1.0).unwrap().loss, 0.0);
            // optimal wealth scaled by e^{-0.01 T}
            let scaled = UtilityEstimate { mean: value * (-0.01 * t * p).exp(), ..exact };
            let l = certainty_equivalent_loss(&scaled, &u, &s, 1.0).unwrap().loss;
            assert!((l - 0.01).abs() < 1e-13, "p = {p}: {l}");
            let wrong = UtilityEstimate { mean: -value, ..exact };
            assert!(matches!(certainty_equivalent_loss(&wrong, &u, &s, 1.0), Err(Error::InvalidEstimate(_))));
        }
    }

    #[test]
    fn sandwich_orders_on_lattice() {
        let s = CoefficientSchedule::constant(&[0.06], &[0.2], 1e4).unwrap();
        for p in [-2.0, -1.0, -0.5, 0.5] {
            for alpha in [0.1, 0.3, 0.5, 0.9] {
                let r = sandwich_check(p, alpha, &s, &[10.0, 100.0, 1000.0], None).unwrap();
                assert!(r.all_ordered(), "p {p} alpha {alpha}");
            }
        }
    }

    #[test]
    fn sandwich_degenerate_market_is_ordered() {
        let s = CoefficientSchedule::constant(&[0.0], &[0.2], 100.0).unwrap();
        let r = sandwich_check(0.5, 0.5, &s, &[10.0, 100.0], None).unwrap();
        assert!(r.all_ordered());
        // no risk premium: lower = (1-α)/q = 1/p, upper = ε^{-q/(1-ε)}/p
        let row = r.rows[0];
        assert!((row.lower - 2.0).abs() < 1e-12);
        assert!((row.upper - 2.0 * 0.1f64.powf(-0.25 / 0.9)).abs() < 1e-12);
    }

    #[test]
    fn sandwich_hand_values() {
        // p = 0.5, α = 0.5, ‖θ‖² = 0.09, T = 100
        let s = CoefficientSchedule::constant(&[0.06], &[0.2], 100.0).unwrap();
        let r = sandwich_check(0.5, 0.5, &s, &[100.0], None).unwrap();
        let row = r.rows[0];
        let q: f64 = 0.25;
        let lower = 0.5 * (1.0 / q) * (q / (2.0 * (1.0 - q)) * 9.0).exp();
        let qu = q / 0.99;
        let upper = 0.5 / 0.99 * 0.01f64.powf(-qu) * (1.0 / qu) * (qu / (2.0 * (1.0 - qu)) * 9.0).exp();
        assert!((row.lower - lower).abs() < 1e-12 * lower);
        assert!((row.upper - upper).abs() < 1e-12 * upper);
        assert!(row.lower <= row.upper);
    }

    #[test]
    fn sandwich_domain_errors() {
        let s = CoefficientSchedule::constant(&[0.06], &[0.2], 100.0).unwrap();
        assert!(sandwich_check(0.5, 0.0, &s, &[10.0], None).is_err());
        assert!(sandwich_check(0.5, 0.3, &s, &[1.5], None).is_err());
        assert!(sandwich_check(0.0, 0.3, &s, &[10.0], None).is_err());
        assert!(sandwich_check(0.95, 0.01, &s, &[2.0], None).is_err());
    }

    #[test]
    fn sweep_file_layout() {
        let r = fit_rate(&synthetic(0.0, 0.01, 1.0), 0.5).unwrap();
        let mut buf = Vec::new();
        write_sweep(&mut buf, &SweepReport { seed: Some(9), ..r }).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines[2].split(',').count(), 5);
        assert!(lines[2].ends_with(",100"));
        assert!(text.contains("# fitted_rate="));
        assert!(text.ends_with("# seed=9\n"));
    }
}
