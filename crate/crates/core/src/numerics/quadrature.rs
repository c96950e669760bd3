//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Infinite ranges are mapped onto finite ones with
//! `x = c + s * t / (1 - t^2)`, which suits Gaussian-type integrands: the
//! caller picks the centre `c` and scale `s` to match the bulk of the mass.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::numerics::Interval;

const MAX_PANELS: usize = 2000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integration region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Finite(Interval),
    /// `[lo, +inf)`
    Above {
        lo: f64,
        scale: f64,
    },
    /// `(-inf, hi]`
    Below {
        hi: f64,
        scale: f64,
    },
    /// The whole real line, mapped around `center`.
    Whole {
        center: f64,
        scale: f64,
    },
}

impl Region {
    pub fn finite(lo: f64, hi: f64) -> Result<Self> {
        Ok(Region::Finite(Interval::new(lo, hi)?))
    }

    pub fn whole() -> Self {
        Region::Whole {
            center: 0.0,
            scale: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let (anchor, scale) = match *self {
            Region::Finite(_) => return Ok(()),
            Region::Above { lo, scale } => (lo, scale),
            Region::Below { hi, scale } => (hi, scale),
            Region::Whole { center, scale } => (center, scale),
        };
        if !anchor.is_finite() {
            return Err(Error::Domain {
                what: "region anchor",
                value: anchor,
                expected: "finite",
            });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain {
                what: "region scale",
                value: scale,
                expected: "finite and > 0",
            });
        }
        Ok(())
    }

    /// Parameter range after the variable change.
    fn parameter_range(&self) -> (f64, f64) {
        match *self {
            Region::Finite(iv) => (iv.lo(), iv.hi()),
            Region::Above { .. } | Region::Below { .. } => (0.0, 1.0),
            Region::Whole { .. } => (-1.0, 1.0),
        }
    }

    /// Maps a parameter value to `(x, dx/dt)`.
    fn map(&self, t: f64) -> (f64, f64) {
        let stretch = |t: f64, scale: f64| {
            let d = 1.0 - t * t;
            (scale * t / d, scale * (1.0 + t * t) / (d * d))
        };
        match *self {
            Region::Finite(_) => (t, 1.0),
            Region::Above { lo, scale } => {
                let (u, j) = stretch(t, scale);
                (lo + u, j)
            }
            Region::Below { hi, scale } => {
                let (u, j) = stretch(t, scale);
                (hi - u, j)
            }
            Region::Whole { center, scale } => {
                let (u, j) = stretch(t, scale);
                (center + u, j)
            }
        }
    }
}

/// Quadrature result with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = g(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = g(center - dx) + g(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive quadrature returning the estimate and its error bound.
///
/// Panels are refined largest-error-first until the summed error estimate
/// drops below `tol` or the panel budget runs out, in which case
/// [`Error::NotConverged`] carries the best estimate.
pub fn integrate_with_error<F>(f: F, region: Region, tol: f64) -> Result<QuadratureEstimate>
where
    F: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain {
            what: "quadrature tolerance",
            value: tol,
            expected: "> 0",
        });
    }
    region.validate()?;
    let g = |t: f64| {
        let (x, jac) = region.map(t);
        if !x.is_finite() || !jac.is_finite() {
            return 0.0;
        }
        let v = f(x) * jac;
        if v.is_nan() && jac > 1e100 {
            0.0
        } else {
            v
        }
    };

    let (lo, hi) = region.parameter_range();
    let first = gauss_kronrod(&g, lo, hi);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);

    while error > tol {
        if heap.len() >= MAX_PANELS {
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Panel can no longer be split in floating point.
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: error,
            });
        }
        let left = gauss_kronrod(&g, worst.lo, mid);
        let right = gauss_kronrod(&g, mid, worst.hi);
        if !(left.value + right.value + left.error + right.error).is_finite() {
            // Report the last finite state rather than the overflow.
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: error,
            });
        }
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadratureEstimate {
        value,
        error,
        panels: heap.len(),
    })
}

/// Adaptive quadrature of `f` over `region` to absolute tolerance `tol`.
pub fn integrate<F>(f: F, region: Region, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_error(f, region, tol).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::Gaussian;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_on_unit_interval() {
        let v = integrate(|_| 1.0, Region::finite(0.0, 1.0).unwrap(), 1e-12).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_normalization_on_whole_line() {
        let g = Gaussian::new(1.7, 0.3).unwrap();
        let v = integrate(
            |x| g.pdf(x),
            Region::Whole {
                center: 1.7,
                scale: 0.3,
            },
            1e-10,
        )
        .unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
        // Badly centred mapping still converges.
        let v = integrate(|x| g.pdf(x), Region::whole(), 1e-10).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn half_line_tails() {
        let g = Gaussian::new(0.0, 0.7).unwrap();
        let above = integrate(
            |x| g.pdf(x),
            Region::Above {
                lo: 0.4,
                scale: 0.7,
            },
            1e-11,
        )
        .unwrap();
        assert_abs_diff_eq!(above, g.tail_above(0.4), epsilon = 1e-11);
        let below = integrate(
            |x| g.pdf(x),
            Region::Below {
                hi: 0.4,
                scale: 0.7,
            },
            1e-11,
        )
        .unwrap();
        assert_abs_diff_eq!(below, g.tail_below(0.4), epsilon = 1e-11);
    }

    #[test]
    fn erf_one_by_quadrature() {
        let v = integrate(
            |t| std::f64::consts::FRAC_2_SQRT_PI * (-t * t).exp(),
            Region::finite(0.0, 1.0).unwrap(),
            1e-13,
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.842_700_792_9, epsilon = 1e-10);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        // x^-0.999 integrates to 1000 but the singularity defeats any panel budget.
        let err =
            integrate(|x| x.powf(-0.999), Region::finite(0.0, 1.0).unwrap(), 1e-8).unwrap_err();
        match err {
            Error::NotConverged {
                estimate,
                error_bound,
            } => {
                assert!(
                    estimate.is_finite() && estimate > 1.0,
                    "estimate {estimate}"
                );
                assert!(error_bound > 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tolerance_and_scale() {
        assert!(integrate(|x| x, Region::finite(0.0, 1.0).unwrap(), 0.0).is_err());
        assert!(integrate(
            |x| x,
            Region::Whole {
                center: 0.0,
                scale: 0.0
            },
            1e-8
        )
        .is_err());
    }
}
