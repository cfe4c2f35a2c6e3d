//! Counter-addressed Gaussian noise.
//!
//! Each path index owns a ChaCha8 stream keyed by the scenario seed. Every
//! step consumes a fixed number of 64-bit words (two per pair of normals via
//! Box–Muller), so the draw for `(seed, path_index, step, component)` sits at
//! a fixed counter position and never depends on other paths, on `n_paths`, or
//! on how the work is split across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::paths::TimeGrid;

/// Identifier recorded in run manifests.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-path/box-muller-fixed-consumption/v1";

/// Brownian increments `Z·√Δt` for one path, step-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBlock {
    seed: u64,
    path_index: u64,
    dim: usize,
    increments: Vec<f64>,
}

fn words_per_step(dim: usize) -> u128 {
    // two u64 (four 32-bit words) per Box–Muller pair
    4 * dim.div_ceil(2) as u128
}

fn stream(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

fn uniform_open(rng: &mut ChaCha8Rng) -> f64 {
    // (0, 1]
    ((rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
}

fn fill_normals(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    for chunk in out.chunks_mut(2) {
        let u1 = uniform_open(rng);
        let u2 = uniform_open(rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        chunk[0] = r * c;
        if chunk.len() == 2 {
            chunk[1] = r * s;
        }
    }
}

impl NoiseBlock {
    pub fn generate(seed: u64, path_index: u64, grid: &TimeGrid, dim: usize) -> Self {
        let steps = grid.steps();
        let mut increments = vec![0.0; steps * dim];
        if dim > 0 {
            let mut rng = stream(seed, path_index);
            for (k, row) in increments.chunks_mut(dim).enumerate() {
                fill_normals(&mut rng, row);
                let sq = grid.dt(k).sqrt();
                row.iter_mut().for_each(|z| *z *= sq);
            }
        }
        Self { seed, path_index, dim, increments }
    }

    /// All-zero increments, for deterministic limits.
    pub fn zeros(grid: &TimeGrid, dim: usize) -> Self {
        Self { seed: 0, path_index: 0, dim, increments: vec![0.0; grid.steps() * dim] }
    }

    /// The standard normal draw at a given counter position, without
    /// generating the preceding steps.
    pub fn standard_normal_at(seed: u64, path_index: u64, dim: usize, step: usize, component: usize) -> f64 {
        let mut rng = stream(seed, path_index);
        rng.set_word_pos(words_per_step(dim) * step as u128);
        let mut row = vec![0.0; dim];
        fill_normals(&mut rng, &mut row);
        row[component]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path_index(&self) -> u64 {
        self.path_index
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> usize {
        self.increments.len().checked_div(self.dim).unwrap_or(0)
    }

    /// Increments `ΔW` for one step.
    pub fn step(&self, k: usize) -> &[f64] {
        &self.increments[k * self.dim..(k + 1) * self.dim]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_triple_gives_identical_noise() {
        let g = TimeGrid::uniform(1.0, 50).unwrap();
        assert_eq!(NoiseBlock::generate(7, 3, &g, 2), NoiseBlock::generate(7, 3, &g, 2));
        assert_ne!(NoiseBlock::generate(7, 3, &g, 2), NoiseBlock::generate(7, 4, &g, 2));
        assert_ne!(NoiseBlock::generate(7, 3, &g, 2), NoiseBlock::generate(8, 3, &g, 2));
    }

    #[test]
    fn random_access_matches_sequential() {
        let g = TimeGrid::uniform(4.0, 16).unwrap();
        for dim in [1, 2, 3] {
            let block = NoiseBlock::generate(11, 5, &g, dim);
            for step in [0, 1, 7, 15] {
                for c in 0..dim {
                    let z = NoiseBlock::standard_normal_at(11, 5, dim, step, c);
                    let expect = block.step(step)[c] / g.dt(step).sqrt();
                    assert!((z - expect).abs() < 1e-12, "dim {dim} step {step} comp {c}");
                }
            }
        }
    }

    #[test]
    fn prefix_grid_gives_prefix_noise() {
        let g = TimeGrid::uniform(10.0, 100).unwrap();
        let short = g.prefix(40).unwrap();
        let a = NoiseBlock::generate(1, 9, &g, 1);
        let b = NoiseBlock::generate(1, 9, &short, 1);
        assert_eq!(&a.increments[..40], b.increments.as_slice());
    }

    #[test]
    fn moments_are_standard() {
        let g = TimeGrid::uniform(1.0, 1).unwrap();
        let n = 40_000;
        let zs: Vec<f64> = (0..n).map(|i| NoiseBlock::generate(3, i, &g, 1).step(0)[0]).collect();
        let mean = zs.iter().sum::<f64>() / n as f64;
        let var = zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 0.03);
    }
}
