//! Power utilities, the signed logarithm, and sampled checks of the
//! structural assumptions on a utility function.
//!
//! Every check here runs on a finite log lattice (1000 points over
//! `[1e-6, 1e6]` by default); none of them is a proof.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::transforms::{ScalePair, SmoothIncreasingFn};

/// Something that maps strictly positive wealth to utility.
pub trait Utility: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// `U_p(x) = x^p / p` with `p < 1`, `p ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerUtility {
    p: f64,
}

impl PowerUtility {
    pub fn new(p: f64) -> Result<Self> {
        if !(p < 1.0) || p == 0.0 || !p.is_finite() {
            return Err(Error::Domain(format!("power utility needs p < 1 and p != 0, got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("utility evaluated at non-positive wealth {x}")));
        }
        Ok(self.value(x))
    }
}

impl Utility for PowerUtility {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        x.powf(self.p) / self.p
    }

    #[inline]
    fn derivative(&self, x: f64) -> f64 {
        x.powf(self.p - 1.0)
    }
}

/// `log x` for `x > 0`, `-log(-x)` for `x < 0`.
pub fn signed_log(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x.ln())
    } else if x < 0.0 {
        Ok(-(-x).ln())
    } else {
        Err(Error::Domain("signed log of zero".into()))
    }
}

/// Exponent `γ` with `U(λx) ≤ λ^γ U(x)` for all `λ > 1`, `x ≥ x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBound {
    pub gamma: f64,
    pub x0: f64,
}

impl GammaBound {
    /// Largest relative excess `(U(λx) - λ^γ U(x)) / |U(x)|` over the
    /// sampled pairs with `x ≥ x0`; nonpositive when the bound holds.
    pub fn worst_excess(&self, u: &dyn Utility, lambdas: &[f64], xs: &[f64]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for &x in xs.iter().filter(|&&x| x >= self.x0) {
            let ux = u.value(x);
            for &l in lambdas {
                let excess = (u.value(l * x) - l.powf(self.gamma) * ux) / ux.abs();
                worst = worst.max(excess);
            }
        }
        worst
    }
}

/// For the power family `U(λx) = λ^p U(x)` exactly, so `γ = p` for every `x0`.
pub fn gamma_for_power(u: &PowerUtility, x0: f64) -> GammaBound {
    GammaBound { gamma: u.p(), x0 }
}

/// Log-spaced lattice of `n` points on `[lo, hi]`.
pub fn log_lattice(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub const LATTICE_LOW: f64 = 1e-6;
pub const LATTICE_HIGH: f64 = 1e6;
pub const LATTICE_POINTS: usize = 1000;

fn default_lattice() -> Vec<f64> {
    log_lattice(LATTICE_LOW, LATTICE_HIGH, LATTICE_POINTS)
}

/// Sampled infimum and supremum of `x U'(x) / |U(x)|`.
pub fn growth_ratio_range(u: &dyn Utility) -> (f64, f64) {
    default_lattice()
        .into_iter()
        .map(|x| x * u.derivative(x) / u.value(x).abs())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

/// `limsup x U'(x)/|U(x)| < ∞`, checked as a finite sampled supremum.
pub fn growth_condition_check(u: &dyn Utility) -> bool {
    let (_, hi) = growth_ratio_range(u);
    hi.is_finite()
}

/// First and second difference checks on a lattice: returns the index of
/// the first point where monotonicity or concavity fails.
pub fn shape_violation(u: &dyn Utility, xs: &[f64]) -> Option<(usize, &'static str)> {
    let us: Vec<f64> = xs.iter().map(|&x| u.value(x)).collect();
    let slopes: Vec<f64> = xs.windows(2).zip(us.windows(2)).map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0])).collect();
    for (i, s) in slopes.iter().enumerate() {
        if *s < 0.0 {
            return Some((i, "decreasing"));
        }
    }
    for (i, w) in slopes.windows(2).enumerate() {
        if w[1] > w[0] * (1.0 + 1e-9) + 1e-300 {
            return Some((i + 1, "not concave"));
        }
    }
    None
}

/// A user-supplied `(U, U', γ)` triple that passed the sampled checks.
#[derive(Clone)]
pub struct CustomUtility {
    value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    gamma: GammaBound,
}

impl fmt::Debug for CustomUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomUtility").field("gamma", &self.gamma).finish()
    }
}

impl CustomUtility {
    /// Runs the lattice checks: finite values, one strict sign throughout,
    /// nondecreasing, concave, bounded growth ratio, and the γ bound for
    /// `λ ∈ {1.5, 2, 10}`.
    pub fn register(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gamma: GammaBound,
    ) -> Result<Self> {
        let u = Self { value: Arc::new(value), derivative: Arc::new(derivative), gamma };
        let xs = default_lattice();
        let vals: Vec<f64> = xs.iter().map(|&x| u.value(x)).collect();
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("utility not finite at x = {}", xs[i])));
        }
        let positive = vals.iter().all(|&v| v > 0.0);
        let negative = vals.iter().all(|&v| v < 0.0);
        if !positive && !negative {
            return Err(Error::Domain("utility must be strictly positive or strictly negative".into()));
        }
        if let Some((i, what)) = shape_violation(&u, &xs) {
            return Err(Error::Domain(format!("utility {what} near x = {}", xs[i])));
        }
        if !growth_condition_check(&u) {
            return Err(Error::Domain("x U'(x)/|U(x)| unbounded on the lattice".into()));
        }
        let excess = gamma.worst_excess(&u, &[1.5, 2.0, 10.0], &log_lattice(LATTICE_LOW, 1e5, LATTICE_POINTS));
        if excess > 1e-12 {
            return Err(Error::Domain(format!("gamma bound fails (relative excess {excess:e})")));
        }
        Ok(u)
    }

    pub fn gamma(&self) -> GammaBound {
        self.gamma
    }
}

impl Utility for CustomUtility {
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }
}

/// `U ∘ F_w`.
#[derive(Debug, Clone)]
pub struct ComposedUtility {
    u: PowerUtility,
    f: SmoothIncreasingFn,
}

impl Utility for ComposedUtility {
    fn value(&self, x: f64) -> f64 {
        self.u.value(self.f.eval(x))
    }

    fn derivative(&self, x: f64) -> f64 {
        self.u.derivative(self.f.eval(x)) * self.f.deriv(x)
    }
}

pub fn compose_with_scale(u: &PowerUtility, scale: &ScalePair) -> ComposedUtility {
    ComposedUtility { u: *u, f: scale.f().clone() }
}
