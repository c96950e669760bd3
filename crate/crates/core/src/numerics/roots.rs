//! Bracketed root finding (Brent's method).

use crate::error::{Error, Result};
use crate::numerics::Interval;

/// Finds a root of `f` inside `bracket`.
///
/// Requires a sign change over the bracket. Returns once the bracket has
/// shrunk below `tol` (plus a few ulps of the iterate) or `f` hits exactly
/// zero. Inverse-quadratic and secant steps are only accepted while they
/// beat bisection, so the worst case is bisection. Deterministic.
pub fn find_root<F>(f: F, bracket: Interval, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            what: "root tolerance",
            value: tol,
            expected: "> 0",
        });
    }
    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::InvalidBracket {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
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
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
    }
    Ok(b)
}
