mod common;

use growth_lab::market::{simulate_assets, state_price_density};
use growth_lab::stats::mean_and_std_error;
use growth_lab::{
    closed_form_value, estimate_expected_utility, merton_wealth, CoefficientSchedule, MertonModel, NoiseBlock,
    PowerUtility, TimeGrid, ValueFunctionQuery,
};
use nalgebra::{DMatrix, DVector};

fn terminal_sample(n: u64, f: impl Fn(u64) -> f64 + Sync) -> (f64, f64) {
    let xs: Vec<f64> = (0..n).map(f).collect();
    mean_and_std_error(&xs)
}

#[test]
fn gbm_mean() {
    let s = common::scalar_market(0.06, 0.2, 5.0);
    let grid = TimeGrid::uniform(5.0, 10).unwrap();
    let (m, se) = terminal_sample(100_000, |i| {
        let noise = NoiseBlock::generate(11, i, &grid, 1);
        simulate_assets(&s, &grid, &noise, &[1.0]).unwrap()[0].terminal()
    });
    assert!((m - (0.3f64).exp()).abs() < 3.0 * se, "{m} ± {se}");
}

#[test]
fn density_is_a_martingale() {
    let s = common::scalar_market(0.06, 0.2, 5.0);
    let grid = TimeGrid::uniform(5.0, 50).unwrap();
    let (m, se) = terminal_sample(20_000, |i| {
        state_price_density(&s, &grid, &NoiseBlock::generate(12, i, &grid, 1)).unwrap().terminal()
    });
    assert!((m - 1.0).abs() < 3.0 * se, "{m} ± {se}");
}

#[test]
fn density_power_moment() {
    // log Z_T ~ N(-θ²T/2, θ²T), so E Z^{-r} = exp(r(1+r)θ²T/2)
    let s = common::scalar_market(0.06, 0.2, 5.0);
    let grid = TimeGrid::uniform(5.0, 5).unwrap();
    for p in [-1.0, 0.5] {
        let r = p / (1.0 - p);
        let (m, se) = terminal_sample(100_000, |i| {
            let z = state_price_density(&s, &grid, &NoiseBlock::generate(13, i, &grid, 1)).unwrap().terminal();
            z.powf(-r)
        });
        let exact = (0.5 * r * (1.0 + r) * 0.09 * 5.0).exp();
        assert!((m - exact).abs() < 3.0 * se, "p {p}: {m} ± {se} vs {exact}");
    }
}

#[test]
fn value_function_match() {
    let s = common::scalar_market(0.06, 0.2, 5.0);
    let grid = TimeGrid::uniform(5.0, 5).unwrap();
    for p in [-2.0, -1.0, -0.5, 0.5] {
        let model = MertonModel::new(s.clone(), p, 1.0).unwrap();
        let u = PowerUtility::new(p).unwrap();
        let est = estimate_expected_utility(&model, &u, &grid, 50_000, 21).unwrap();
        let v = closed_form_value(ValueFunctionQuery::new(1.0, 5.0, p).unwrap(), &s).unwrap();
        assert!((est.mean - v).abs() < 3.0 * est.std_error, "p {p}: {} ± {} vs {v}", est.mean, est.std_error);
    }
}

#[test]
fn two_asset_value_function_match() {
    let sigma = DMatrix::from_row_slice(2, 2, &[0.2, 0.0, 0.1, 0.25]);
    let mu = DVector::from_vec(vec![0.05, 0.08]);
    let s =
        CoefficientSchedule::new(vec![0.0, 2.0, 4.0], vec![mu.clone(), mu * 0.5], vec![sigma.clone(), sigma]).unwrap();
    let grid = TimeGrid::uniform(4.0, 8).unwrap();
    for p in [-1.0, 0.5] {
        let model = MertonModel::new(s.clone(), p, 1.0).unwrap();
        let est = estimate_expected_utility(&model, &PowerUtility::new(p).unwrap(), &grid, 50_000, 5).unwrap();
        let v = closed_form_value(ValueFunctionQuery::new(1.0, 4.0, p).unwrap(), &s).unwrap();
        assert!((est.mean - v).abs() < 3.0 * est.std_error, "p {p}: {} ± {} vs {v}", est.mean, est.std_error);
    }
}

#[test]
fn paths_are_deterministic_and_positive() {
    let s = common::scalar_market(0.06, 0.2, 5.0);
    let grid = TimeGrid::uniform(5.0, 500).unwrap();
    for i in 0..20 {
        let a = common::merton_path(&s, -1.0, &grid, 99, i);
        let b = common::merton_path(&s, -1.0, &grid, 99, i);
        assert_eq!(a.values(), b.values());
        assert!(a.is_strictly_positive());
        let z = state_price_density(&s, &grid, &NoiseBlock::generate(99, i, &grid, 1)).unwrap();
        assert!(z.is_strictly_positive());
    }
}

#[test]
fn strategy_is_horizon_independent() {
    let s = common::scalar_market(0.06, 0.2, 10.0);
    let long = TimeGrid::uniform(10.0, 1000).unwrap();
    let short = long.prefix(400).unwrap();
    for i in 0..10 {
        let a = merton_wealth(&s, 0.5, &long, &NoiseBlock::generate(1, i, &long, 1), 1.0).unwrap();
        let b = merton_wealth(&s, 0.5, &short, &NoiseBlock::generate(1, i, &short, 1), 1.0).unwrap();
        assert_eq!(&a.values()[..401], b.values());
    }
}
