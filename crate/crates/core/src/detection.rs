//! Pure-state Neyman-Pearson detection with a quadrature threshold.
//!
//! For equal-spread Gaussians the likelihood ratio
//! `exp(-(a^2 - 2 a x) / (2 sigma^2))` is increasing in `x`, so thresholding
//! it at `e^kappa` is the same as thresholding the outcome at
//! `x0 = (a^2 + 2 sigma^2 kappa) / (2a)`. Size and power are Gaussian tails
//! above `x0`, and eliminating `x0` gives the power-size characteristic
//! `Q1 = erfc(erfc^{-1}(2 Q0) - a/(sqrt(2) sigma)) / 2`.

use serde::{Deserialize, Serialize};

use crate::channel::{snr_of_budget, CodingPair};
use crate::error::{check_open_probability, check_probability, Error, Result};
use crate::numerics::{
    erfc, find_root, inv_erfc, maximize_scalar, Gaussian, Interval, DEFAULT_MAX_TOL,
    DEFAULT_ROOT_TOL,
};

/// Agreement required between a closed-form optimum and its numerical check.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    OneSided,
    TwoSided,
}

/// A deterministic decision rule: declare the signal present when the
/// outcome lies in `{x >= upper}` (one-sided) or `{x <= lower} ∪ {x >= upper}`
/// (two-sided).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdStrategy {
    kind: StrategyKind,
    lower_cut: f64,
    upper_cut: f64,
    decision_level: Option<f64>,
}

impl ThresholdStrategy {
    pub fn one_sided(threshold: f64) -> Result<Self> {
        if threshold.is_nan() {
            return Err(Error::Domain {
                what: "threshold",
                value: threshold,
                expected: "not NaN",
            });
        }
        Ok(Self {
            kind: StrategyKind::OneSided,
            lower_cut: f64::NEG_INFINITY,
            upper_cut: threshold,
            decision_level: None,
        })
    }

    /// Two-sided region. `lower == upper` covers the whole real line.
    pub fn two_sided(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::Domain {
                what: "lower cut",
                value: lower,
                expected: "<= upper cut",
            });
        }
        Ok(Self {
            kind: StrategyKind::TwoSided,
            lower_cut: lower,
            upper_cut: upper,
            decision_level: None,
        })
    }

    pub fn with_level(mut self, kappa: f64) -> Self {
        self.decision_level = Some(kappa);
        self
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    /// `x-` for two-sided strategies, `-inf` for one-sided ones.
    pub fn lower_cut(&self) -> f64 {
        self.lower_cut
    }

    /// `x0` (one-sided) or `x+` (two-sided).
    pub fn upper_cut(&self) -> f64 {
        self.upper_cut
    }

    pub fn decision_level(&self) -> Option<f64> {
        self.decision_level
    }

    /// `Pi(x)`: whether the alternative hypothesis is chosen for outcome `x`.
    pub fn accepts(&self, x: f64) -> bool {
        x >= self.upper_cut || (self.kind == StrategyKind::TwoSided && x <= self.lower_cut)
    }

    /// Probability of the decision region under a normal outcome density.
    pub fn mass(&self, density: &Gaussian) -> f64 {
        let above = density.tail_above(self.upper_cut);
        match self.kind {
            StrategyKind::OneSided => above,
            StrategyKind::TwoSided => (above + density.tail_below(self.lower_cut)).min(1.0),
        }
    }
}

/// A point `(Q0, Q1)` on a power-size characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub size: f64,
    pub power: f64,
}

impl RocPoint {
    pub fn new(size: f64, power: f64) -> Result<Self> {
        Ok(Self {
            size: check_probability("size", size)?,
            power: check_probability("power", power)?,
        })
    }
}

pub(crate) fn null_density(pair: &CodingPair) -> Gaussian {
    Gaussian::new_unchecked(0.0, pair.sigma())
}

pub(crate) fn alternative_density(pair: &CodingPair) -> Gaussian {
    Gaussian::new_unchecked(pair.amplitude(), pair.sigma())
}

/// One-sided strategy at decision level `kappa`.
pub fn threshold_from_level(pair: &CodingPair, kappa: f64) -> Result<ThresholdStrategy> {
    let a = pair.amplitude();
    if a == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    let s2 = pair.sigma() * pair.sigma();
    Ok(ThresholdStrategy::one_sided((a * a + 2.0 * s2 * kappa) / (2.0 * a))?.with_level(kappa))
}

/// One-sided strategy whose size under `p0` is exactly `q0`.
pub fn threshold_for_size(pair: &CodingPair, q0: f64) -> Result<ThresholdStrategy> {
    check_open_probability("size", q0)?;
    let x0 = pair.sigma() * std::f64::consts::SQRT_2 * inv_erfc(2.0 * q0)?;
    let strategy = ThresholdStrategy::one_sided(x0)?;
    let a = pair.amplitude();
    Ok(if a > 0.0 {
        let s2 = pair.sigma() * pair.sigma();
        strategy.with_level((2.0 * a * x0 - a * a) / (2.0 * s2))
    } else {
        strategy
    })
}

/// Size `Q0`: probability of the decision region under `p0 = G(x; 0, sigma)`.
pub fn size_of(strategy: &ThresholdStrategy, pair: &CodingPair) -> f64 {
    strategy.mass(&null_density(pair))
}

/// Power `Q1`: probability of the decision region under `p1 = G(x; a, sigma)`.
pub fn power_of(strategy: &ThresholdStrategy, pair: &CodingPair) -> f64 {
    strategy.mass(&alternative_density(pair))
}

/// Power at size `q0` for a given `a / (sqrt(2) sigma)`.
pub fn roc_from_snr(snr: f64, q0: f64) -> Result<f64> {
    check_probability("size", q0)?;
    if q0 == 0.0 || q0 == 1.0 {
        return Ok(q0);
    }
    Ok(0.5 * erfc(inv_erfc(2.0 * q0)? - snr))
}

/// Power-size characteristic `Q1(Q0)` of the optimal threshold strategy.
///
/// `Q0 = 0` and `Q0 = 1` return their limits; a blank channel gives `Q1 = Q0`.
pub fn roc_point(pair: &CodingPair, q0: f64) -> Result<f64> {
    roc_from_snr(crate::channel::snr_term(pair), q0)
}

/// Power-size points for each size in `sizes`.
pub fn roc_curve(pair: &CodingPair, sizes: &[f64]) -> Result<Vec<RocPoint>> {
    sizes
        .iter()
        .map(|&q0| {
            let q1 = roc_point(pair, q0)?;
            RocPoint::new(q0, q1)
        })
        .collect()
}

/// Optimal squeezing fraction for pure coding, `E_T / (2 (1 + E_T))`.
///
/// Expects `E_T > 0`.
pub fn optimal_gamma(total_energy: f64) -> f64 {
    0.5 * total_energy / (1.0 + total_energy)
}

/// Closed form next to a numerical maximization of `a / (sqrt(2) sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaCheck {
    pub closed_form: f64,
    pub numerical: f64,
    /// `a / (sqrt(2) sigma)` at the numerical optimum.
    pub max_snr: f64,
}

pub(crate) fn verify_gamma(
    closed_form: f64,
    upper: f64,
    snr: impl Fn(f64) -> f64,
) -> Result<GammaCheck> {
    let best = maximize_scalar(snr, Interval::new(0.0, upper)?, DEFAULT_MAX_TOL)?;
    if (best.arg - closed_form).abs() > VERIFY_TOL {
        return Err(Error::Verification(format!(
            "closed-form squeezing fraction {closed_form} disagrees with numerical optimum {}",
            best.arg
        )));
    }
    Ok(GammaCheck {
        closed_form,
        numerical: best.arg,
        max_snr: best.value,
    })
}

/// [`optimal_gamma`] checked against golden-section maximization over `[0, 1]`.
pub fn optimal_gamma_verified(total_energy: f64) -> Result<GammaCheck> {
    if !(total_energy > 0.0 && total_energy.is_finite()) {
        return Err(Error::Domain {
            what: "total energy",
            value: total_energy,
            expected: "finite and > 0",
        });
    }
    verify_gamma(optimal_gamma(total_energy), 1.0, |g| {
        snr_of_budget(total_energy, g, 0.0)
    })
}

/// Minimum energy for which the strategy reaches power 1/2 at a given size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinEnergy {
    /// Root of `a/(sqrt(2) sigma) = erf^{-1}(1 - 2 Q0)` in `E_T`; authoritative.
    pub root: f64,
    /// The published closed form
    /// `y^2 / (2 (1 - gamma + y^2 sqrt(2 gamma (1 - gamma))))`, `y = erf^{-1}(1 - 2 Q0)`.
    /// It agrees with `root` only at `gamma = 0`.
    pub closed_form: f64,
}

impl MinEnergy {
    pub fn difference(&self) -> f64 {
        self.closed_form - self.root
    }
}

pub fn min_energy(q0: f64, gamma: f64) -> Result<MinEnergy> {
    if !(q0 > 0.0 && q0 < 0.5) {
        return Err(Error::Domain {
            what: "size",
            value: q0,
            expected: "(0, 1/2)",
        });
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain {
            what: "squeezing fraction",
            value: gamma,
            expected: "[0, 1)",
        });
    }
    let y = inv_erfc(2.0 * q0)?;
    let f = |e: f64| snr_of_budget(e, gamma, 0.0) - y;
    let mut hi = 1.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Domain {
                what: "squeezing fraction",
                value: gamma,
                expected: "a value leaving room for signal amplitude",
            });
        }
    }
    let root = find_root(f, Interval::new(0.0, hi)?, DEFAULT_ROOT_TOL)?;
    let closed_form = 0.5 * y * y / (1.0 - gamma + y * y * (2.0 * gamma * (1.0 - gamma)).sqrt());
    Ok(MinEnergy { root, closed_form })
}

/// Small-size asymptotics of the minimum detectable energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticMinEnergy {
    /// Root of `y sqrt(pi) Q0 = exp(-y^2)`.
    pub y: f64,
    /// `y^2 / 2`
    pub coherent: f64,
    /// `sqrt(1 + y^2) - 1`
    pub squeezed: f64,
}

/// Intended for small sizes (roughly `Q0 <= 0.05`), where `y` approximates
/// `erf^{-1}(1 - 2 Q0)`.
pub fn asymptotic_min_energy(q0: f64) -> Result<AsymptoticMinEnergy> {
    check_open_probability("size", q0)?;
    let k = std::f64::consts::PI.sqrt() * q0;
    let hi = (1.0 / k).max(1.0);
    let y = find_root(|y| y * k - (-y * y).exp(), Interval::new(0.0, hi)?, 1e-14)?;
    Ok(AsymptoticMinEnergy {
        y,
        coherent: 0.5 * y * y,
        squeezed: y * y / ((1.0 + y * y).sqrt() + 1.0),
    })
}

/// Power of the optimal quantum measurement discriminating two pure states
/// with squared overlap `omega`, at size `q0`.
pub fn helstrom_np_bound(omega: f64, q0: f64) -> Result<f64> {
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(Error::Domain {
            what: "overlap",
            value: omega,
            expected: "(0, 1]",
        });
    }
    check_probability("size", q0)?;
    if q0 >= omega {
        return Ok(1.0);
    }
    let root = (q0 * omega).sqrt() + ((1.0 - q0) * (1.0 - omega)).sqrt();
    Ok((root * root).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{overlap, ChannelConfig};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn coherent_e1() -> CodingPair {
        CodingPair::new(SQRT_2, FRAC_1_SQRT_2).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let pair = CodingPair::new(0.8, 0.3).unwrap();
        let s = threshold_from_level(&pair, 0.0).unwrap();
        assert_abs_diff_eq!(s.upper_cut(), 0.4, epsilon = 1e-15);
        assert_eq!(s.decision_level(), Some(0.0));

        let s = threshold_from_level(&coherent_e1(), 1.0).unwrap();
        assert_abs_diff_eq!(s.upper_cut(), 1.060_660_17, epsilon = 1e-8);

        let s = threshold_from_level(&CodingPair::new(1.0, 0.5).unwrap(), -2.0).unwrap();
        assert_abs_diff_eq!(s.upper_cut(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_amplitude_threshold_is_undefined() {
        let blank = CodingPair::new(0.0, 0.5).unwrap();
        assert_eq!(threshold_from_level(&blank, 0.3), Err(Error::ZeroAmplitude));
    }

    #[test]
    fn size_examples() {
        let pair = coherent_e1();
        let s = ThresholdStrategy::one_sided(0.0).unwrap();
        assert_abs_diff_eq!(size_of(&s, &pair), 0.5, epsilon = 1e-15);
        let s = ThresholdStrategy::one_sided(f64::INFINITY).unwrap();
        assert_eq!(size_of(&s, &pair), 0.0);
        let s = ThresholdStrategy::one_sided(1.163_087_15).unwrap();
        assert_abs_diff_eq!(size_of(&s, &pair), 0.05, epsilon = 1e-9);
    }

    #[test]
    fn power_examples() {
        let pair = coherent_e1();
        let s = ThresholdStrategy::one_sided(pair.amplitude()).unwrap();
        assert_abs_diff_eq!(power_of(&s, &pair), 0.5, epsilon = 1e-15);
        let s = ThresholdStrategy::one_sided(0.0).unwrap();
        assert_abs_diff_eq!(power_of(&s, &pair), 0.977_249_87, epsilon = 1e-8);
        let blank = CodingPair::new(0.0, 0.5).unwrap();
        let s = ThresholdStrategy::one_sided(0.37).unwrap();
        assert_eq!(power_of(&s, &blank), size_of(&s, &blank));
    }

    #[test]
    fn two_sided_mass_and_membership() {
        let pair = coherent_e1();
        let s = ThresholdStrategy::two_sided(-1.0, 1.0).unwrap();
        assert!(s.accepts(-1.5) && s.accepts(1.0) && !s.accepts(0.0));
        let g = null_density(&pair);
        assert_abs_diff_eq!(
            size_of(&s, &pair),
            g.tail_below(-1.0) + g.tail_above(1.0),
            epsilon = 1e-16
        );
        let everything = ThresholdStrategy::two_sided(0.3, 0.3).unwrap();
        assert_abs_diff_eq!(size_of(&everything, &pair), 1.0, epsilon = 1e-15);
        assert!(ThresholdStrategy::two_sided(1.0, -1.0).is_err());
    }

    #[test]
    fn roc_examples() {
        let blank = CodingPair::new(0.0, 0.6).unwrap();
        for q0 in [0.0, 0.01, 0.3, 0.9, 1.0] {
            assert_abs_diff_eq!(roc_point(&blank, q0).unwrap(), q0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            roc_point(&coherent_e1(), 0.01).unwrap(),
            0.372_080_585_435_494_3,
            epsilon = 1e-12
        );
        let squeezed = ChannelConfig::pure(1.0, 0.25).unwrap().realize();
        assert_abs_diff_eq!(
            roc_point(&squeezed, 0.01).unwrap(),
            0.549_002_621_449_642_2,
            epsilon = 1e-12
        );
        assert!(roc_point(&squeezed, 1.2).is_err());
        assert!(roc_point(&squeezed, -0.1).is_err());
    }

    #[test]
    fn threshold_for_size_hits_size() {
        let pair = ChannelConfig::pure(1.0, 0.25).unwrap().realize();
        for q0 in [1e-6, 0.01, 0.05, 0.5, 0.93] {
            let s = threshold_for_size(&pair, q0).unwrap();
            assert_abs_diff_eq!(size_of(&s, &pair), q0, epsilon = 1e-14);
            let direct = threshold_from_level(&pair, s.decision_level().unwrap()).unwrap();
            assert_abs_diff_eq!(direct.upper_cut(), s.upper_cut(), epsilon = 1e-12);
        }
    }

    #[test]
    fn optimal_gamma_examples() {
        assert_eq!(optimal_gamma(1.0), 0.25);
        assert_abs_diff_eq!(optimal_gamma(2.0), 1.0 / 3.0, epsilon = 1e-15);
        assert!(optimal_gamma(1e-12) < 1e-12);
        let check = optimal_gamma_verified(1.0).unwrap();
        assert_abs_diff_eq!(check.numerical, 0.25, epsilon = 1e-8);
        assert_abs_diff_eq!(check.max_snr, 3f64.sqrt(), epsilon = 1e-12);
        let check = optimal_gamma_verified(2.0).unwrap();
        assert_abs_diff_eq!(check.numerical, 1.0 / 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(check.max_snr, 8f64.sqrt(), epsilon = 1e-12);
        assert!(optimal_gamma_verified(0.0).is_err());
    }

    #[test]
    fn min_energy_examples() {
        let coherent = min_energy(0.01, 0.0).unwrap();
        assert_abs_diff_eq!(coherent.root, 1.352_973_607_763_585, epsilon = 1e-10);
        assert_abs_diff_eq!(coherent.closed_form, coherent.root, epsilon = 1e-10);
        let squeezed = min_energy(0.01, 0.25).unwrap();
        assert!(squeezed.root < coherent.root);
        assert!(squeezed.difference().abs() > 1e-3);
        let near_half = min_energy(0.5 - 1e-9, 0.0).unwrap();
        assert!(near_half.root < 1e-15);
        assert!(min_energy(0.5, 0.0).is_err());
        assert!(min_energy(0.0, 0.0).is_err());
        assert!(min_energy(0.1, 1.0).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        let a = asymptotic_min_energy(0.01).unwrap();
        assert_abs_diff_eq!(a.y, 1.848_848_843_097_621, epsilon = 1e-12);
        assert_abs_diff_eq!(a.coherent, 1.709_121_022_311_706, epsilon = 1e-11);
        assert_abs_diff_eq!(a.squeezed, 1.101_961_475_532_654, epsilon = 1e-11);
        let mut last_ratio = f64::INFINITY;
        for q0 in [1e-2, 1e-4, 1e-8, 1e-16, 1e-64] {
            let a = asymptotic_min_energy(q0).unwrap();
            assert!(a.squeezed < a.coherent);
            let ratio = a.squeezed / a.coherent;
            assert!(ratio < last_ratio);
            last_ratio = ratio;
        }
        assert!(last_ratio < 0.2);
    }

    #[test]
    fn helstrom_examples() {
        assert_eq!(helstrom_np_bound(0.3, 0.3).unwrap(), 1.0);
        assert_abs_diff_eq!(helstrom_np_bound(0.3, 0.0).unwrap(), 0.7, epsilon = 1e-15);
        let omega = overlap(&coherent_e1());
        assert_abs_diff_eq!(
            helstrom_np_bound(omega, 0.01).unwrap(),
            0.725_440_372_794_066_5,
            epsilon = 1e-12
        );
        assert!(helstrom_np_bound(0.0, 0.1).is_err());
        assert!(helstrom_np_bound(1.1, 0.1).is_err());
        assert!(helstrom_np_bound(0.5, 1.1).is_err());
    }
}
