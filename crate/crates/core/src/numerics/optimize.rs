//! Derivative-free maximization of unimodal scalar functions.

use crate::error::{Error, Result};
use crate::numerics::Interval;

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub arg: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` over `interval`, which the caller guarantees to be unimodal.
///
/// Golden-section search narrows the bracket to a thousandth of its width.
/// Comparing two nearby function values cannot locate a smooth maximum
/// better than about sqrt(eps), so the last stretch bisects on the sign of
/// the symmetric difference `f(x + h) - f(x - h)` with a small fixed `h`,
/// which vanishes at the maximum up to O(h^2).
pub fn maximize_scalar<F>(f: F, interval: Interval, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            what: "maximization tolerance",
            value: tol,
            expected: "> 0",
        });
    }
    let (lo0, hi0) = (interval.lo(), interval.hi());
    let width0 = interval.width();
    let h = 1e-6 * width0;
    let golden_stop = tol.max(1e-3 * width0);

    let (mut a, mut b) = (lo0, hi0);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > golden_stop {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }

    while b - a > tol {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            break;
        }
        let left = f((m - h).max(lo0));
        let right = f((m + h).min(hi0));
        if right > left {
            a = m;
        } else {
            b = m;
        }
    }

    let arg = 0.5 * (a + b);
    Ok(Extremum { arg, value: f(arg) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parabola() {
        let m = maximize_scalar(
            |x| -(x - 0.3) * (x - 0.3),
            Interval::new(0.0, 1.0).unwrap(),
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(m.arg, 0.3, epsilon = 1e-10);
        assert_abs_diff_eq!(m.value, 0.0, epsilon = 1e-18);
    }

    #[test]
    fn maximum_on_boundary() {
        let iv = Interval::new(0.0, 2.0).unwrap();
        let m = maximize_scalar(|x| -x, iv, 1e-10).unwrap();
        assert!(m.arg < 1e-9);
        let m = maximize_scalar(|x| x, iv, 1e-10).unwrap();
        assert!(m.arg > 2.0 - 1e-9);
    }

    #[test]
    fn sharp_smooth_peak_resolved_below_sqrt_eps() {
        // argmax of 3 - cosh(x - 0.123456789) is exact; golden section alone stalls near 1e-8.
        let peak = 0.123_456_789_012_345;
        let m = maximize_scalar(
            |x| 3.0 - (x - peak).cosh(),
            Interval::new(-1.0, 1.0).unwrap(),
            1e-13,
        )
        .unwrap();
        assert_abs_diff_eq!(m.arg, peak, epsilon = 1e-10);
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x * 3.0).sin();
        let iv = Interval::new(0.0, 1.0).unwrap();
        let a = maximize_scalar(f, iv, 1e-12).unwrap();
        let b = maximize_scalar(f, iv, 1e-12).unwrap();
        assert_eq!(a.arg.to_bits(), b.arg.to_bits());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(maximize_scalar(|x| x, Interval::new(0.0, 1.0).unwrap(), 0.0).is_err());
    }
}
