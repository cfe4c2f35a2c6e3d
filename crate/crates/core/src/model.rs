//! Wealth-path factories.
//!
//! A [`WealthModel`] turns a grid and a noise block into one wealth path.
//! Estimators only ever see this trait, so constrained constructions compose
//! by wrapping an inner model.

use std::sync::Arc;

use crate::error::Result;
use crate::noise::NoiseBlock;
use crate::paths::{DiscretePath, TimeGrid};

pub trait WealthModel: Send + Sync {
    /// Number of Brownian components the model consumes.
    fn dim(&self) -> usize;

    /// Initial wealth `V_0`.
    fn initial(&self) -> f64;

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath>;
}

impl<M: WealthModel + ?Sized> WealthModel for Arc<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn initial(&self) -> f64 {
        (**self).initial()
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        (**self).wealth(grid, noise)
    }
}

impl<M: WealthModel + ?Sized> WealthModel for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn initial(&self) -> f64 {
        (**self).initial()
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        (**self).wealth(grid, noise)
    }
}

/// Riskless holding: `V ≡ v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantWealth {
    pub v0: f64,
    pub dim: usize,
}

impl WealthModel for ConstantWealth {
    fn dim(&self) -> usize {
        self.dim
    }

    fn initial(&self) -> f64 {
        self.v0
    }

    fn wealth(&self, grid: &TimeGrid, _noise: &NoiseBlock) -> Result<DiscretePath> {
        DiscretePath::wealth(grid.clone(), vec![self.v0; grid.len()])
    }
}

/// Adapts a closure into a model.
pub struct FnModel<F> {
    dim: usize,
    v0: f64,
    f: F,
}

impl<F> FnModel<F>
where
    F: Fn(&TimeGrid, &NoiseBlock) -> Result<DiscretePath> + Send + Sync,
{
    pub fn new(dim: usize, v0: f64, f: F) -> Self {
        Self { dim, v0, f }
    }
}

impl<F> WealthModel for FnModel<F>
where
    F: Fn(&TimeGrid, &NoiseBlock) -> Result<DiscretePath> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn initial(&self) -> f64 {
        self.v0
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        (self.f)(grid, noise)
    }
}

/// `c·V` for an inner model `V`.
pub struct Scaled<M> {
    pub inner: M,
    pub factor: f64,
}

impl<M: WealthModel> WealthModel for Scaled<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn initial(&self) -> f64 {
        self.factor * self.inner.initial()
    }

    fn wealth(&self, grid: &TimeGrid, noise: &NoiseBlock) -> Result<DiscretePath> {
        let v = self.inner.wealth(grid, noise)?;
        DiscretePath::wealth(grid.clone(), v.values().iter().map(|x| self.factor * x).collect())
    }
}
