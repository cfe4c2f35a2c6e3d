#![allow(dead_code)]

use growth_lab::{merton_wealth, CoefficientSchedule, DiscretePath, NoiseBlock, TimeGrid};

/// Scalar GBM with drift `mu` and volatility `sigma`, started at 1.
pub fn gbm(grid: &TimeGrid, mu: f64, sigma: f64, seed: u64, index: u64) -> DiscretePath {
    let s = CoefficientSchedule::constant(&[mu], &[sigma], grid.end()).unwrap();
    let noise = NoiseBlock::generate(seed, index, grid, 1);
    growth_lab::market::simulate_assets(&s, grid, &noise, &[1.0]).unwrap().remove(0)
}

pub fn scalar_market(mu: f64, sigma: f64, t_max: f64) -> CoefficientSchedule {
    CoefficientSchedule::constant(&[mu], &[sigma], t_max).unwrap()
}

pub fn merton_path(s: &CoefficientSchedule, p: f64, grid: &TimeGrid, seed: u64, index: u64) -> DiscretePath {
    let noise = NoiseBlock::generate(seed, index, grid, s.dim());
    merton_wealth(s, p, grid, &noise, 1.0).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
