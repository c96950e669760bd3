//! Neyman-Pearson detection against a mixed (fuzzy) alternative.
//!
//! Under the alternative the displacement itself is Gaussian-distributed,
//! `b ~ H1(b) = G(b; a, Sigma)`, while the null stays the crisp vacuum. The
//! marginal outcome density under the alternative is the convolution
//! `G(x; a, sqrt(sigma^2 + Sigma^2))`, and the fuzzy likelihood ratio
//!
//! `L(x) = sqrt(b2 / (1 + b2)) exp[(x^2 + 2 a x b2 - a^2 b2) / (2 sigma^2 (1 + b2))]`,
//! `b2 = sigma^2 / Sigma^2`,
//!
//! has an upward parabola in its exponent. Thresholding it therefore gives a
//! two-sided region `{x <= x-} ∪ {x >= x+}`; the left branch carries little
//! mass but is part of the optimal test. Internally everything is written in
//! terms of `r = Sigma^2 / sigma^2 = 1 / b2`, which stays finite in the pure
//! limit.

use serde::{Deserialize, Serialize};

use crate::channel::{snr_of_budget, ChannelConfig, CodingPair};
use crate::detection::{
    null_density, roc_point, threshold_for_size, verify_gamma, GammaCheck, ThresholdStrategy,
};
use crate::error::{check_open_probability, Error, Result};
use crate::numerics::{find_root, Gaussian, Interval, DEFAULT_ROOT_TOL};

/// Membership density `H1(b) = G(b; center, spread)` of the mixed alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyAlternative {
    center: f64,
    spread: f64,
}

impl FuzzyAlternative {
    pub fn new(center: f64, spread: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::Domain {
                what: "membership center",
                value: center,
                expected: "finite",
            });
        }
        if !(spread > 0.0 && spread.is_finite()) {
            return Err(Error::Domain {
                what: "mixing spread",
                value: spread,
                expected: "finite and > 0",
            });
        }
        Ok(Self { center, spread })
    }

    /// Alternative centred on the realized amplitude of a mixed channel.
    pub fn from_config(config: &ChannelConfig) -> Result<Self> {
        Self::new(config.realize().amplitude(), config.mixing_spread())
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    /// `Sigma^2 / sigma^2`
    fn spread_ratio(&self, pair: &CodingPair) -> f64 {
        let q = self.spread / pair.sigma();
        q * q
    }

    /// Marginal outcome density under the alternative.
    pub fn marginal(&self, pair: &CodingPair) -> Gaussian {
        Gaussian::new_unchecked(self.center, pair.sigma().hypot(self.spread))
    }
}

/// Fuzzy likelihood ratio at outcome `x`. The pair supplies `sigma`; the
/// amplitude is the alternative's center.
pub fn fuzzy_likelihood(x: f64, pair: &CodingPair, alt: &FuzzyAlternative) -> f64 {
    let a = alt.center;
    let s2 = pair.sigma() * pair.sigma();
    let r = alt.spread_ratio(pair);
    let exponent = (r * x * x + 2.0 * a * x - a * a) / (2.0 * s2 * (1.0 + r));
    exponent.exp() / (1.0 + r).sqrt()
}

/// `G(x; a, sqrt(sigma^2 + Sigma^2))`, the numerator of the fuzzy likelihood ratio.
pub fn marginal_alternative_density(x: f64, pair: &CodingPair, alt: &FuzzyAlternative) -> f64 {
    alt.marginal(pair).pdf(x)
}

/// Exact NP region `{x : L(x) >= e^kappa}`.
///
/// Always two-sided; when the level sits below the ratio's minimum the
/// region is the whole line, returned with both cuts at the parabola vertex.
pub fn fuzzy_decision_region(
    pair: &CodingPair,
    alt: &FuzzyAlternative,
    kappa: f64,
) -> ThresholdStrategy {
    let a = alt.center;
    let s2 = pair.sigma() * pair.sigma();
    let r = alt.spread_ratio(pair);
    // r x^2 + 2 a x - c >= 0
    let level = kappa + 0.5 * r.ln_1p();
    let c = a * a + 2.0 * s2 * (1.0 + r) * level;
    let disc = a * a + r * c;
    let strategy = if disc < 0.0 {
        let vertex = -a / r;
        ThresholdStrategy::two_sided(vertex, vertex)
    } else {
        let root = disc.sqrt();
        let upper = if a + root > 0.0 { c / (a + root) } else { 0.0 };
        let lower = -(a + root) / r;
        ThresholdStrategy::two_sided(lower.min(upper), upper)
    };
    strategy
        .expect("cuts are ordered by construction")
        .with_level(kappa)
}

/// Size of a region under the crisp null `G(x; 0, sigma)`.
pub fn fuzzy_size(strategy: &ThresholdStrategy, pair: &CodingPair) -> f64 {
    strategy.mass(&null_density(pair))
}

/// Power of a region under the mixed alternative's marginal.
pub fn fuzzy_power(strategy: &ThresholdStrategy, pair: &CodingPair, alt: &FuzzyAlternative) -> f64 {
    strategy.mass(&alt.marginal(pair))
}

/// Decision level whose exact region has size `q0`.
///
/// Size is continuous and non-increasing in `kappa`; the bracket is grown
/// geometrically until it straddles `q0`, then solved by Brent's method.
pub fn level_for_size(pair: &CodingPair, alt: &FuzzyAlternative, q0: f64) -> Result<f64> {
    check_open_probability("size", q0)?;
    let excess = |kappa: f64| fuzzy_size(&fuzzy_decision_region(pair, alt, kappa), pair) - q0;
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..1100 {
        if excess(lo) >= 0.0 {
            break;
        }
        lo *= 2.0;
    }
    for _ in 0..1100 {
        if excess(hi) <= 0.0 {
            break;
        }
        hi *= 2.0;
    }
    find_root(excess, Interval::new(lo, hi)?, DEFAULT_ROOT_TOL)
}

/// A solved point on the exact mixed-signal characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyRocPoint {
    pub strategy: ThresholdStrategy,
    pub size: f64,
    pub power: f64,
    /// Pure-state characteristic evaluated at the mixed amplitude.
    pub closed_form: f64,
}

pub fn fuzzy_roc_point(
    pair: &CodingPair,
    alt: &FuzzyAlternative,
    q0: f64,
) -> Result<FuzzyRocPoint> {
    let kappa = level_for_size(pair, alt, q0)?;
    let strategy = fuzzy_decision_region(pair, alt, kappa);
    Ok(FuzzyRocPoint {
        strategy,
        size: fuzzy_size(&strategy, pair),
        power: fuzzy_power(&strategy, pair, alt),
        closed_form: fuzzy_roc_closed_form(pair, q0)?,
    })
}

/// Power at size `q0` of the exact NP test against the mixed alternative.
pub fn fuzzy_roc(pair: &CodingPair, alt: &FuzzyAlternative, q0: f64) -> Result<f64> {
    Ok(fuzzy_roc_point(pair, alt, q0)?.power)
}

/// Pure-state characteristic with the mixed amplitude
/// `a = sqrt(2 E_T (1 - gamma) - Sigma^2)`, ignoring the extra variance.
pub fn fuzzy_roc_closed_form(pair: &CodingPair, q0: f64) -> Result<f64> {
    roc_point(pair, q0)
}

/// Power of the one-sided threshold of size `q0` against the mixed
/// alternative; never better than [`fuzzy_roc`].
pub fn fuzzy_roc_one_sided(pair: &CodingPair, alt: &FuzzyAlternative, q0: f64) -> Result<f64> {
    let strategy = threshold_for_size(pair, q0)?;
    Ok(fuzzy_power(&strategy, pair, alt))
}

fn check_mixed_budget(total_energy: f64, spread: f64) -> Result<()> {
    if !(total_energy > 0.0 && total_energy.is_finite()) {
        return Err(Error::Domain {
            what: "total energy",
            value: total_energy,
            expected: "finite and > 0",
        });
    }
    if spread.is_nan() || spread < 0.0 || spread * spread > 2.0 * total_energy * (1.0 + 1e-12) {
        return Err(Error::Domain {
            what: "mixing spread",
            value: spread,
            expected: "0 <= Sigma^2 <= 2 E_T",
        });
    }
    Ok(())
}

/// Optimal squeezing fraction with a mixed alternative,
/// `(2 E_T - Sigma^2)^2 / (8 E_T (1 + E_T - Sigma^2 / 2))`.
pub fn optimal_gamma_mixed(total_energy: f64, spread: f64) -> Result<f64> {
    check_mixed_budget(total_energy, spread)?;
    let free = (2.0 * total_energy - spread * spread).max(0.0);
    Ok(free * free / (8.0 * total_energy * (1.0 + 0.5 * free)))
}

/// [`optimal_gamma_mixed`] checked against numerical maximization of
/// `a / (sqrt(2) sigma)` over the feasible squeezing fractions.
pub fn optimal_gamma_mixed_verified(total_energy: f64, spread: f64) -> Result<GammaCheck> {
    let closed_form = optimal_gamma_mixed(total_energy, spread)?;
    let feasible = 1.0 - spread * spread / (2.0 * total_energy);
    if feasible <= 0.0 {
        return Ok(GammaCheck {
            closed_form,
            numerical: 0.0,
            max_snr: 0.0,
        });
    }
    verify_gamma(closed_form, feasible, |g| {
        snr_of_budget(total_energy, g, spread)
    })
}
