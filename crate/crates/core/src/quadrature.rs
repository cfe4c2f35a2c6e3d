//! Adaptive Simpson quadrature and bracketed bisection for monotone maps.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`, with the
/// standard Richardson correction on accepted panels.
pub fn adaptive_simpson(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        if !delta.is_finite() {
            return Err(Error::NonFinite { abscissa: m, value: delta });
        }
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Solves `g(x) = y` for nondecreasing `g` by bisection.
///
/// The bracket starts at `[lo, hi]`, expands multiplicatively until it
/// contains the root, and bisection stops when `(hi - lo) / hi <= rel_width`.
pub fn invert_increasing(
    g: &impl Fn(f64) -> Result<f64>,
    y: f64,
    mut lo: f64,
    mut hi: f64,
    rel_width: f64,
) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Domain(format!("bad bracket [{lo}, {hi}]")));
    }
    let mut expand = 0;
    while g(lo)? > y {
        lo *= 0.5;
        expand += 1;
        if expand > 2000 || lo == 0.0 {
            return Err(Error::Domain(format!("cannot bracket inverse of {y} from below")));
        }
    }
    expand = 0;
    while g(hi)? < y {
        hi *= 2.0;
        expand += 1;
        if expand > 2000 || !hi.is_finite() {
            return Err(Error::Domain(format!("cannot bracket inverse of {y} from above")));
        }
    }
    while (hi - lo) > rel_width * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
