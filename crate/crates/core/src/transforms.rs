//! Azéma–Yor path transforms and drawdown scale functions.
//!
//! For a nondecreasing `F` with derivative `F'`, the transform of a path `X`
//! with running maximum `M` is
//!
//! ```text
//! M^F(X)_t = F(M_t) - F'(M_t) (M_t - X_t)
//! ```
//!
//! which also equals `F(X_0) + ∫ F'(M_u) dX_u`. The direct formula is the one
//! used everywhere; [`azema_yor_integral_form`] only exists as a cross-check.
//!
//! A drawdown function `w` induces the scale function
//! `K_w(x) = v0 exp(∫_{v0}^x du / (u - w(u)))` and its inverse `F_w`;
//! transforming any wealth path with `F_w` yields a path that never falls
//! below `w` of its own running maximum.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::paths::{integrate_against, DiscretePath, MaxPath};
use crate::quadrature::{adaptive_simpson, invert_increasing};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Relative width at which numerical inversion stops.
pub const INVERSION_REL_WIDTH: f64 = 1e-12;

/// Default absolute tolerance on the log-scale integral.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// A nondecreasing function carried together with its derivative, and
/// optionally with its inverse.
#[derive(Clone)]
pub struct SmoothIncreasingFn {
    eval: RealFn,
    deriv: RealFn,
    domain_low: f64,
    strictly_increasing: bool,
    inverse: Option<(RealFn, RealFn, f64)>,
}

impl fmt::Debug for SmoothIncreasingFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothIncreasingFn")
            .field("domain_low", &self.domain_low)
            .field("strictly_increasing", &self.strictly_increasing)
            .field("has_inverse", &self.inverse.is_some())
            .finish()
    }
}

impl SmoothIncreasingFn {
    /// `deriv` must be nonnegative on `[domain_low, ∞)`.
    pub fn new(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain_low: f64,
    ) -> Self {
        Self { eval: Arc::new(eval), deriv: Arc::new(deriv), domain_low, strictly_increasing: false, inverse: None }
    }

    /// A strictly increasing function with a known inverse. `inv_domain_low`
    /// is the lower end of the inverse's domain, normally `eval(domain_low)`.
    pub fn with_inverse(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain_low: f64,
        inv_eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inv_deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inv_domain_low: f64,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain_low,
            strictly_increasing: true,
            inverse: Some((Arc::new(inv_eval), Arc::new(inv_deriv), inv_domain_low)),
        }
    }

    pub fn identity() -> Self {
        Self::with_inverse(|x| x, |_| 1.0, f64::NEG_INFINITY, |y| y, |_| 1.0, f64::NEG_INFINITY)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c, |_| 0.0, f64::NEG_INFINITY)
    }

    /// `x ↦ intercept + slope·x` with `slope > 0`.
    pub fn affine(intercept: f64, slope: f64) -> Result<Self> {
        if !(slope > 0.0) || !intercept.is_finite() || !slope.is_finite() {
            return Err(Error::Domain(format!("affine map needs finite slope > 0, got {slope}")));
        }
        Ok(Self::with_inverse(
            move |x| intercept + slope * x,
            move |_| slope,
            f64::NEG_INFINITY,
            move |y| (y - intercept) / slope,
            move |_| 1.0 / slope,
            f64::NEG_INFINITY,
        ))
    }

    /// `x ↦ scale·x^power` on `(0, ∞)` with `scale, power > 0`.
    pub fn power(scale: f64, power: f64) -> Result<Self> {
        if !(scale > 0.0 && power > 0.0) {
            return Err(Error::Domain(format!("power map needs scale, power > 0 (got {scale}, {power})")));
        }
        Ok(Self::with_inverse(
            move |x| scale * x.powf(power),
            move |x| scale * power * x.powf(power - 1.0),
            0.0,
            move |y| (y / scale).powf(1.0 / power),
            move |y| (y / scale).powf(1.0 / power) / (power * y),
            0.0,
        ))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    #[inline]
    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    pub fn domain_low(&self) -> f64 {
        self.domain_low
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.strictly_increasing
    }

    pub fn inverse(&self) -> Option<SmoothIncreasingFn> {
        self.inverse.as_ref().map(|(e, d, low)| SmoothIncreasingFn {
            eval: e.clone(),
            deriv: d.clone(),
            domain_low: *low,
            strictly_increasing: true,
            inverse: Some((self.eval.clone(), self.deriv.clone(), self.domain_low)),
        })
    }
}

/// Direct Azéma–Yor transform `F(m) - F'(m)(m - x)`.
pub fn azema_yor(f: &SmoothIncreasingFn, path: &MaxPath) -> Result<DiscretePath> {
    let xs = path.values();
    let ms = path.running_max();
    let mut out = Vec::with_capacity(xs.len());
    let mut cached_m = f64::NAN;
    let (mut fm, mut dfm) = (f64::NAN, f64::NAN);
    for (i, (&x, &m)) in xs.iter().zip(ms).enumerate() {
        if m != cached_m {
            if m < f.domain_low() {
                return Err(Error::DomainAt {
                    index: i,
                    reason: format!("running max {m} below domain start {}", f.domain_low()),
                });
            }
            fm = f.eval(m);
            dfm = f.deriv(m);
            if !fm.is_finite() || !dfm.is_finite() {
                return Err(Error::DomainAt { index: i, reason: format!("F or F' not finite at running max {m}") });
            }
            cached_m = m;
        }
        out.push(fm - dfm * (m - x));
    }
    DiscretePath::new(path.grid().clone(), out)
}

/// The same transform as a left-point stochastic integral
/// `F(X_0) + Σ F'(m_i)(x_{i+1} - x_i)`; carries O(√Δt) discretisation error.
pub fn azema_yor_integral_form(f: &SmoothIncreasingFn, path: &MaxPath) -> Result<DiscretePath> {
    let x0 = path.values()[0];
    if x0 < f.domain_low() {
        return Err(Error::DomainAt { index: 0, reason: format!("initial value {x0} below domain") });
    }
    let low = f.domain_low();
    integrate_against(|m| if m < low { f64::NAN } else { f.deriv(m) }, f.eval(x0), path)
}

/// A drawdown function `w` with certified bound `0 <= w(x)/x <= alpha < 1`.
#[derive(Clone)]
pub struct DrawdownSpec {
    w: RealFn,
    alpha: f64,
    v0: f64,
    linear: bool,
}

impl fmt::Debug for DrawdownSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DrawdownSpec")
            .field("alpha", &self.alpha)
            .field("v0", &self.v0)
            .field("linear", &self.linear)
            .finish()
    }
}

/// Points of the sampled validation lattice.
const VALIDATION_POINTS: usize = 1000;

impl DrawdownSpec {
    /// Validates `w` on a log lattice over `[1e-6·v0, 1e6·v0]` plus the given
    /// breakpoints. Validation is sampled, not a proof.
    pub fn new(
        w: impl Fn(f64) -> f64 + Send + Sync + 'static,
        alpha: f64,
        v0: f64,
        breakpoints: &[f64],
    ) -> Result<Self> {
        let spec = Self { w: Arc::new(w), alpha, v0, linear: false };
        spec.validate(breakpoints)?;
        Ok(spec)
    }

    /// `w(x) = alpha·x`.
    pub fn linear(alpha: f64, v0: f64) -> Result<Self> {
        let spec = Self { w: Arc::new(move |x| alpha * x), alpha, v0, linear: true };
        spec.validate(&[])?;
        Ok(spec)
    }

    /// Piecewise-linear `w` through `(x, w)` points, extended with constant
    /// ratio `w/x` outside the table. `alpha` is the largest tabulated ratio.
    pub fn tabulated(points: &[(f64, f64)], v0: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDrawdown("empty drawdown table".into()));
        }
        if points.windows(2).any(|p| !(p[1].0 > p[0].0)) || !(points[0].0 > 0.0) {
            return Err(Error::InvalidDrawdown("table abscissae must be positive and increasing".into()));
        }
        let alpha = points.iter().map(|(x, w)| w / x).fold(0.0, f64::max);
        let table: Vec<(f64, f64)> = points.to_vec();
        let w = move |x: f64| {
            let (x0, w0) = table[0];
            let (xn, wn) = table[table.len() - 1];
            if x <= x0 {
                return w0 / x0 * x;
            }
            if x >= xn {
                return wn / xn * x;
            }
            let j = table.partition_point(|&(xi, _)| xi <= x);
            let (xa, wa) = table[j - 1];
            let (xb, wb) = table[j];
            wa + (wb - wa) * (x - xa) / (xb - xa)
        };
        let breakpoints: Vec<f64> = points.iter().map(|p| p.0).collect();
        Self::new(w, alpha, v0, &breakpoints)
    }

    fn validate(&self, breakpoints: &[f64]) -> Result<()> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::InvalidDrawdown(format!("drawdown bound alpha must lie in [0, 1), got {}", self.alpha)));
        }
        if !(self.v0 > 0.0) || !self.v0.is_finite() {
            return Err(Error::InvalidDrawdown(format!("v0 must be positive, got {}", self.v0)));
        }
        let lo = (1e-6 * self.v0).ln();
        let hi = (1e6 * self.v0).ln();
        let mut xs: Vec<f64> = (0..VALIDATION_POINTS)
            .map(|i| (lo + (hi - lo) * i as f64 / (VALIDATION_POINTS - 1) as f64).exp())
            .chain(breakpoints.iter().copied().filter(|b| *b > 0.0))
            .collect();
        xs.sort_by(f64::total_cmp);
        let mut prev = f64::NEG_INFINITY;
        for &x in &xs {
            let wx = self.w(x);
            if !wx.is_finite() {
                return Err(Error::InvalidDrawdown(format!("w({x}) is not finite")));
            }
            let ratio = wx / x;
            if ratio < -1e-12 || ratio > self.alpha * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::InvalidDrawdown(format!("w({x})/x = {ratio} outside [0, alpha = {}]", self.alpha)));
            }
            if wx < prev - 1e-12 * prev.abs() {
                return Err(Error::InvalidDrawdown(format!("w decreases near x = {x}")));
            }
            prev = wx;
        }
        Ok(())
    }

    #[inline]
    pub fn w(&self, x: f64) -> f64 {
        (self.w)(x)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }
}

/// `K_w` together with its inverse `F_w`; both fix `v0`.
#[derive(Clone, Debug)]
pub struct ScalePair {
    k: SmoothIncreasingFn,
    f: SmoothIncreasingFn,
    spec: DrawdownSpec,
}

impl ScalePair {
    pub fn k(&self) -> &SmoothIncreasingFn {
        &self.k
    }

    pub fn f(&self) -> &SmoothIncreasingFn {
        &self.f
    }

    pub fn spec(&self) -> &DrawdownSpec {
        &self.spec
    }

    /// Largest `|F(K(x)) - x| / x` over the given abscissae.
    pub fn roundtrip_error(&self, xs: &[f64]) -> f64 {
        xs.iter().map(|&x| (self.f.eval(self.k.eval(x)) - x).abs() / x).fold(0.0, f64::max)
    }
}

/// Closed-form scale pair for `w(x) = alpha·x`:
/// `K(x) = v0 (x/v0)^{1/(1-alpha)}`, `F(y) = v0 (y/v0)^{1-alpha}`.
pub fn linear_drawdown_scale(alpha: f64, v0: f64) -> Result<ScalePair> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let spec = DrawdownSpec::linear(alpha, v0)?;
    let beta = 1.0 - alpha;
    let k_eval = move |x: f64| v0 * (x / v0).powf(1.0 / beta);
    let f_eval = move |y: f64| v0 * (y / v0).powf(beta);
    let k = SmoothIncreasingFn::with_inverse(
        k_eval,
        move |x| k_eval(x) / (beta * x),
        0.0,
        f_eval,
        move |y| beta * f_eval(y) / y,
        0.0,
    );
    let f = k.inverse().expect("closed-form pair has an inverse");
    Ok(ScalePair { k, f, spec })
}

/// Log-lattice table of `∫ du/(u - w(u))`, written once at construction.
struct LogScaleTable {
    spec: DrawdownSpec,
    log_v0: f64,
    step: f64,
    first_index: i64,
    cumulative: Vec<f64>,
    tol: f64,
}

const TABLE_STEP: f64 = 0.5;
const TABLE_LOW_DECADES: f64 = 6.0;
const TABLE_HIGH_DECADES: f64 = 12.0;

impl LogScaleTable {
    fn integrand(spec: &DrawdownSpec, s: f64) -> Result<f64> {
        let u = s.exp();
        let wu = spec.w(u);
        if !(wu < u) {
            return Err(Error::InvalidDrawdown(format!("w({u}) = {wu} is not below u")));
        }
        Ok(u / (u - wu))
    }

    fn build(spec: DrawdownSpec, quad_tol: f64) -> Result<Self> {
        let log_v0 = spec.v0().ln();
        let lo_n = -((TABLE_LOW_DECADES * std::f64::consts::LN_10) / TABLE_STEP).ceil() as i64;
        let hi_n = ((TABLE_HIGH_DECADES * std::f64::consts::LN_10) / TABLE_STEP).ceil() as i64;
        let seg_tol = quad_tol * TABLE_STEP / 10.0;
        let g = |s: f64| Self::integrand(&spec, s);
        let mut upper = vec![0.0];
        for n in 0..hi_n {
            let a = log_v0 + n as f64 * TABLE_STEP;
            let v = adaptive_simpson(&g, a, a + TABLE_STEP, seg_tol)?;
            upper.push(upper[upper.len() - 1] + v);
        }
        let mut lower = Vec::new();
        let mut acc = 0.0;
        for n in (lo_n..0).rev() {
            let a = log_v0 + n as f64 * TABLE_STEP;
            acc -= adaptive_simpson(&g, a, a + TABLE_STEP, seg_tol)?;
            lower.push(acc);
        }
        lower.reverse();
        lower.extend(upper);
        Ok(Self { spec, log_v0, step: TABLE_STEP, first_index: lo_n, cumulative: lower, tol: quad_tol / 10.0 })
    }

    /// `∫_{v0}^{x} du/(u - w(u))` via the nearest node at or below `ln x`.
    fn log_k_over_v0(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("scale function needs x > 0, got {x}")));
        }
        let s = x.ln();
        let pos = ((s - self.log_v0) / self.step).floor() as i64;
        let idx = (pos - self.first_index).clamp(0, self.cumulative.len() as i64 - 1) as usize;
        let node = self.log_v0 + (idx as i64 + self.first_index) as f64 * self.step;
        let g = |t: f64| Self::integrand(&self.spec, t);
        let rest = if s >= node {
            adaptive_simpson(&g, node, s, self.tol)?
        } else {
            -adaptive_simpson(&g, s, node, self.tol)?
        };
        Ok(self.cumulative[idx] + rest)
    }

    fn k(&self, x: f64) -> Result<f64> {
        Ok(self.spec.v0() * self.log_k_over_v0(x)?.exp())
    }

    fn f(&self, y: f64) -> Result<f64> {
        let v0 = self.spec.v0();
        if y == v0 {
            return Ok(v0);
        }
        let lo = if y >= v0 { v0 } else { 0.5 * y };
        invert_increasing(&|x| self.k(x), y, lo, 2.0 * y.max(v0), INVERSION_REL_WIDTH)
    }
}

/// Scale pair for an arbitrary drawdown function, by adaptive Simpson on
/// the log-substituted integrand `u/(u - w(u))` and bisection inversion.
/// Derivatives are analytic: `K'(x) = K(x)/(x - w(x))`.
pub fn build_scale_pair(spec: DrawdownSpec, quad_tol: f64) -> Result<ScalePair> {
    if !(quad_tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {quad_tol}")));
    }
    let table = Arc::new(LogScaleTable::build(spec.clone(), quad_tol)?);
    let t1 = table.clone();
    let t2 = table.clone();
    let t3 = table.clone();
    let t4 = table;
    let k = SmoothIncreasingFn::with_inverse(
        move |x| t1.k(x).unwrap_or(f64::NAN),
        move |x| match t2.k(x) {
            Ok(kx) => kx / (x - t2.spec.w(x)),
            Err(_) => f64::NAN,
        },
        0.0,
        move |y| t3.f(y).unwrap_or(f64::NAN),
        move |y| match t4.f(y) {
            Ok(x) => (x - t4.spec.w(x)) / y,
            Err(_) => f64::NAN,
        },
        0.0,
    );
    let f = k.inverse().expect("constructed with inverse");
    Ok(ScalePair { k, f, spec })
}

/// The floor function implied by a strictly increasing transform `F` with
/// inverse `K`: `w(x) = x - K(x)/K'(x)`.
pub fn implied_floor_of_max(f: &SmoothIncreasingFn) -> Result<impl Fn(f64) -> Result<f64> + Send + Sync + use<>> {
    let k = f.inverse().ok_or_else(|| Error::Domain("implied floor needs a transform with known inverse".into()))?;
    Ok(move |x: f64| {
        let kp = k.deriv(x);
        if kp == 0.0 || !kp.is_finite() {
            return Err(Error::Singularity(format!("K'({x}) = {kp}")));
        }
        Ok(x - k.eval(x) / kp)
    })
}
