//! Error function, its inverse and Gaussian densities/tails.

use std::f64::consts::{FRAC_2_SQRT_PI, PI, SQRT_2};

use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Below this the all-positive series is used for erf; above it the
/// continued fraction for erfc.
const ERF_SERIES_LIMIT: f64 = 2.5;

/// erfc switches from `1 - erf` to the continued fraction here so that
/// tail probabilities keep full relative accuracy.
const ERFC_FRACTION_START: f64 = 1.0;

/// exp(-x^2) with the rounding error of x*x folded back in.
fn exp_neg_square(x: f64) -> f64 {
    let xx = x * x;
    let err = x.mul_add(x, -xx);
    (-xx).exp() * (1.0 - err)
}

/// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n (2x^2)^n x / (2n+1)!!
///
/// Every term is positive, so there is no cancellation.
fn erf_series(x: f64) -> f64 {
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= two_x2 / f64::from(2 * n + 1);
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 || n > 500 {
            break;
        }
    }
    FRAC_2_SQRT_PI * exp_neg_square(x) * sum
}

/// erfc(x) for x >= 1 via the continued fraction
/// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
/// evaluated with the modified Lentz algorithm.
fn erfc_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for i in 1..5000u32 {
        let a = f64::from(i) * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    exp_neg_square(x) / (SQRT_PI * f)
}

/// The error function, accurate to about 1e-15 absolute on the whole real line.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax < ERF_SERIES_LIMIT {
        erf_series(ax)
    } else if ax > 6.5 {
        1.0
    } else {
        1.0 - erfc_fraction(ax)
    };
    value.copysign(x)
}

/// The complementary error function `1 - erf(x)`, with relative accuracy
/// preserved for large positive `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < ERFC_FRACTION_START {
        // For negative x this is 1 + erf(|x|), no cancellation.
        return 1.0 - erf(x);
    }
    if x > 27.3 {
        return 0.0;
    }
    erfc_fraction(x)
}

/// Initial guess for erf^{-1}(p) from Giles' single-precision polynomial,
/// written in terms of w = -ln((1-p)(1+p)).
fn inv_erf_guess(p: f64, w: f64) -> f64 {
    let poly = if w < 5.0 {
        let w = w - 2.5;
        let mut r = 2.810_226_36e-08;
        r = 3.432_739_39e-07 + r * w;
        r = -3.523_387_7e-06 + r * w;
        r = -4.391_506_54e-06 + r * w;
        r = 0.000_218_580_87 + r * w;
        r = -0.001_253_725_03 + r * w;
        r = -0.004_177_681_64 + r * w;
        r = 0.246_640_727 + r * w;
        1.501_409_41 + r * w
    } else {
        let w = w.sqrt() - 3.0;
        let mut r = -0.000_200_214_257;
        r = 0.000_100_950_558 + r * w;
        r = 0.001_349_343_22 + r * w;
        r = -0.003_673_428_44 + r * w;
        r = 0.005_739_507_73 + r * w;
        r = -0.007_622_461_3 + r * w;
        r = 0.009_438_870_47 + r * w;
        r = 1.001_674_06 + r * w;
        2.832_976_82 + r * w
    };
    poly * p
}

/// Halley refinement of y against a residual function whose derivative is
/// `sign * 2/sqrt(pi) * exp(-y^2)`.
fn halley_refine(mut y: f64, sign: f64, residual: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..60 {
        let slope = sign * FRAC_2_SQRT_PI * exp_neg_square(y);
        if slope == 0.0 {
            break;
        }
        let newton = residual(y) / slope;
        let step = newton / (1.0 + y * newton);
        y -= step;
        if step.abs() <= 1e-16 * y.abs().max(1e-300) {
            break;
        }
    }
    y
}

/// Inverse error function on (-1, 1).
pub fn inv_erf(p: f64) -> Result<f64> {
    if !(p > -1.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "inv_erf argument",
            value: p,
            expected: "(-1, 1)",
        });
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p.abs() > 0.5 {
        // 1 - |p| is exact here (Sterbenz).
        let y = inv_erfc_unchecked(1.0 - p.abs());
        return Ok(y.copysign(p));
    }
    let w = -((1.0 - p) * (1.0 + p)).ln();
    let guess = inv_erf_guess(p, w);
    Ok(halley_refine(guess, 1.0, |y| erf(y) - p))
}

/// Inverse complementary error function on (0, 2).
pub fn inv_erfc(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 2.0) {
        return Err(Error::Domain {
            what: "inv_erfc argument",
            value: q,
            expected: "(0, 2)",
        });
    }
    Ok(inv_erfc_unchecked(q))
}

fn inv_erfc_unchecked(q: f64) -> f64 {
    if q > 1.0 {
        return -inv_erfc_unchecked(2.0 - q);
    }
    if q == 1.0 {
        return 0.0;
    }
    if q > 0.5 {
        // Central region: refine on erf, where the residual is well conditioned.
        let p = 1.0 - q;
        let w = -(q * (2.0 - q)).ln();
        let guess = inv_erf_guess(p, w);
        return halley_refine(guess, 1.0, |y| erf(y) - p);
    }
    // Tail: Newton on ln erfc(y) = ln q, which stays well conditioned far out.
    let mut y = if q < 1e-8 {
        let mut y = (-q.ln()).sqrt();
        for _ in 0..4 {
            y = (-(q * SQRT_PI * y).ln()).sqrt();
        }
        y
    } else {
        let w = -(q * (2.0 - q)).ln();
        inv_erf_guess(1.0 - q, w)
    };
    let log_q = q.ln();
    for _ in 0..100 {
        let tail = erfc(y);
        let slope = -FRAC_2_SQRT_PI * exp_neg_square(y) / tail;
        let step = (tail.ln() - log_q) / slope;
        y -= step;
        if step.abs() <= 1e-16 * y.abs() {
            break;
        }
    }
    y
}

/// A normal distribution with a validated standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    mean: f64,
    sigma: f64,
}

impl Gaussian {
    pub fn new(mean: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain {
                what: "standard deviation",
                value: sigma,
                expected: "finite and > 0",
            });
        }
        if !mean.is_finite() {
            return Err(Error::Domain {
                what: "mean",
                value: mean,
                expected: "finite",
            });
        }
        Ok(Self { mean, sigma })
    }

    pub(crate) fn new_unchecked(mean: f64, sigma: f64) -> Self {
        debug_assert!(sigma > 0.0);
        Self { mean, sigma }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sigma;
        (-0.5 * z * z).exp() / (self.sigma * (2.0 * PI).sqrt())
    }

    /// Mass above `x0`, i.e. P(X >= x0).
    pub fn tail_above(&self, x0: f64) -> f64 {
        0.5 * erfc((x0 - self.mean) / (self.sigma * SQRT_2))
    }

    /// Mass below `x0`, i.e. P(X <= x0).
    pub fn tail_below(&self, x0: f64) -> f64 {
        0.5 * erfc((self.mean - x0) / (self.sigma * SQRT_2))
    }
}

/// G(x; mean, sigma), the normal density.
pub fn gaussian_pdf(x: f64, mean: f64, sigma: f64) -> Result<f64> {
    Ok(Gaussian::new(mean, sigma)?.pdf(x))
}

/// Upper tail mass of G(x; mean, sigma) above `x0`.
pub fn gaussian_tail(x0: f64, mean: f64, sigma: f64) -> Result<f64> {
    Ok(Gaussian::new(mean, sigma)?.tail_above(x0))
}

/// Lower tail mass of G(x; mean, sigma) below `x0`.
pub fn gaussian_tail_below(x0: f64, mean: f64, sigma: f64) -> Result<f64> {
    Ok(Gaussian::new(mean, sigma)?.tail_below(x0))
}
