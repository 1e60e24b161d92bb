//! Scalar root finding and unimodal maximization.

use crate::error::{Error, Result};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Brent's bracketed root finder.
///
/// Requires `f(lo)` and `f(hi)` of opposite sign (or one of them zero). Iterates
/// until the bracket has collapsed to `xtol` plus a few ulps, or a zero is hit.
pub fn brent_root<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Convergence(format!(
            "root not bracketed on [{lo}, {hi}] (f = {fa}, {fb})"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * m * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Convergence(format!("objective is NaN at {b}")));
        }
    }
    Err(Error::Convergence(format!(
        "brent did not converge in {max_iter} iterations"
    )))
}

/// Locates a sign change of an increasing function that is negative near zero.
///
/// Starts at `start` and halves or doubles the trial point until the function
/// changes sign. Returns `(lo, hi)` with `f(lo) < 0 <= f(hi)`.
pub fn bracket_increasing<F>(mut f: F, start: f64, max_steps: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut x = start;
    let fx = f(x);
    if fx.is_nan() {
        return Err(Error::Convergence(format!("objective is NaN at {x}")));
    }
    if fx >= 0.0 {
        let mut hi = x;
        for _ in 0..max_steps {
            x *= 0.5;
            if f(x) < 0.0 {
                return Ok((x, hi));
            }
            hi = x;
        }
    } else {
        let mut lo = x;
        for _ in 0..max_steps {
            x *= 2.0;
            let v = f(x);
            if v.is_nan() {
                return Err(Error::Convergence(format!("objective is NaN at {x}")));
            }
            if v >= 0.0 {
                return Ok((lo, x));
            }
            lo = x;
        }
    }
    Err(Error::Convergence(format!(
        "no sign change found within {max_steps} doublings/halvings of {start}"
    )))
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
///
/// `better(a, b)` must return true when the value at abscissa `a` is strictly
/// greater than the value at `b`; this lets callers compare in extended
/// precision. Returns the abscissa of the maximum.
pub fn golden_section_max_by<F>(mut better: F, lo: f64, hi: f64, xtol: f64) -> f64
where
    F: FnMut(f64, f64) -> bool,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    while (b - a) > xtol {
        if better(x1, x2) {
            b = x2;
            x2 = x1;
            x1 = b - GOLDEN * (b - a);
        } else {
            a = x1;
            x1 = x2;
            x2 = a + GOLDEN * (b - a);
        }
    }
    0.5 * (a + b)
}

/// Golden-section maximization of `f` on `[lo, hi]`; returns `(x, f(x))`.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a) > xtol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Coarse scan of `points` equispaced abscissae followed by golden-section
/// refinement on the two cells around the best scan point.
pub fn scan_then_golden_max<F>(mut f: F, lo: f64, hi: f64, points: usize, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..points {
        let v = f(lo + step * i as f64);
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let a = lo + step * best.saturating_sub(1) as f64;
    let b = (lo + step * (best + 1) as f64).min(hi);
    golden_section_max(f, a, b, xtol)
}
