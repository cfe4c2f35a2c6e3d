//! Parallel path ensembles with results in path-index order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::WealthModel;
use crate::noise::NoiseBlock;
use crate::paths::{DiscretePath, TimeGrid};

/// Simulates paths `0..n_paths` and applies `f` to each. The output is in
/// index order whatever the thread count; on failure the error of the lowest
/// failing index is returned.
pub fn map_paths<T, F>(model: &dyn WealthModel, grid: &TimeGrid, n_paths: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, DiscretePath) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let noise = NoiseBlock::generate(seed, i, grid, model.dim());
            let path = model.wealth(grid, &noise)?;
            f(i, path)
        })
        .collect();
    results.into_iter().collect()
}

/// Horizon indices on `grid`, failing when a horizon is not a grid point.
pub fn horizon_indices(grid: &TimeGrid, horizons: &[f64]) -> Result<Vec<usize>> {
    horizons
        .iter()
        .map(|&t| {
            grid.index_of(t)
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::GridMismatch(format!("horizon {t} is not a positive grid point")))
        })
        .collect()
}
