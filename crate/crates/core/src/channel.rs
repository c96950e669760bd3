//! Channel model: energy budget, squeezing fraction and the coding states.
//!
//! The null symbol is a Gaussian wavefunction centred at zero, the
//! alternative the same wavefunction displaced by `a`:
//!
//! `psi(x) = (2 pi sigma^2)^(-1/4) exp(-(x - a)^2 / (4 sigma^2))`
//!
//! so that `|psi|^2` is the normal density `G(x; a, sigma)` seen by a
//! quadrature measurement. Phases are taken as zero. Energies are in units
//! of `h tau`; the squeezing cost is `(sigma^2 - 1/2)^2 / sigma^2`. That term
//! is not the usual `sinh^2 r` photon number, but it is the one the squeezing
//! fraction parameterization below is exactly consistent with.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed when checking `Sigma^2 <= 2 E (1 - gamma)`, so that
/// a spread computed as `sqrt(2 E (1 - gamma))` is accepted.
const FEASIBILITY_SLACK: f64 = 1e-12;

/// Designer-side channel knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    total_energy: f64,
    squeezing_fraction: f64,
    mixing_spread: f64,
}

impl ChannelConfig {
    /// Validates `E_T > 0`, `0 <= gamma < 1`, `Sigma >= 0` and
    /// `Sigma^2 <= 2 E_T (1 - gamma)`.
    pub fn new(total_energy: f64, squeezing_fraction: f64, mixing_spread: f64) -> Result<Self> {
        if !(total_energy > 0.0 && total_energy.is_finite()) {
            return Err(Error::Domain {
                what: "total energy",
                value: total_energy,
                expected: "finite and > 0",
            });
        }
        if !(0.0..1.0).contains(&squeezing_fraction) {
            return Err(Error::Domain {
                what: "squeezing fraction",
                value: squeezing_fraction,
                expected: "[0, 1)",
            });
        }
        if !(mixing_spread >= 0.0 && mixing_spread.is_finite()) {
            return Err(Error::Domain {
                what: "mixing spread",
                value: mixing_spread,
                expected: "finite and >= 0",
            });
        }
        let budget = 2.0 * total_energy * (1.0 - squeezing_fraction);
        if mixing_spread * mixing_spread > budget * (1.0 + FEASIBILITY_SLACK) {
            return Err(Error::InfeasibleEnergy {
                spread: mixing_spread,
                max_spread: budget.sqrt(),
            });
        }
        Ok(Self {
            total_energy,
            squeezing_fraction,
            mixing_spread,
        })
    }

    /// Pure-state coding (`Sigma = 0`).
    pub fn pure(total_energy: f64, squeezing_fraction: f64) -> Result<Self> {
        Self::new(total_energy, squeezing_fraction, 0.0)
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    pub fn squeezing_fraction(&self) -> f64 {
        self.squeezing_fraction
    }

    pub fn mixing_spread(&self) -> f64 {
        self.mixing_spread
    }

    pub fn is_pure(&self) -> bool {
        self.mixing_spread == 0.0
    }

    pub fn realize(&self) -> CodingPair {
        realize(self)
    }
}

/// Physical parameters of the coding states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodingPair {
    amplitude: f64,
    sigma: f64,
}

impl CodingPair {
    pub fn new(amplitude: f64, sigma: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Domain {
                what: "amplitude",
                value: amplitude,
                expected: "finite and >= 0",
            });
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain {
                what: "quadrature spread",
                value: sigma,
                expected: "finite and > 0",
            });
        }
        Ok(Self { amplitude, sigma })
    }

    /// The unsqueezed pair, `sigma^2 = 1/2`.
    pub fn coherent(amplitude: f64) -> Result<Self> {
        Self::new(amplitude, std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_squeezed(&self) -> bool {
        self.sigma * self.sigma < 0.5
    }
}

/// Quadrature spread bought by spending `squeezing_energy = gamma E_T` on
/// squeezing: `sigma = (sqrt(s + 2) - sqrt(s)) / 2`, evaluated in the
/// cancellation-free form `1 / (sqrt(s + 2) + sqrt(s))`.
pub fn squeezed_sigma(squeezing_energy: f64) -> f64 {
    1.0 / ((squeezing_energy + 2.0).sqrt() + squeezing_energy.sqrt())
}

/// Amplitude and spread for a configuration:
/// `a = sqrt(2 E_T (1 - gamma) - Sigma^2)`, `sigma = squeezed_sigma(gamma E_T)`.
pub fn realize(config: &ChannelConfig) -> CodingPair {
    let e = config.total_energy;
    let g = config.squeezing_fraction;
    let s = config.mixing_spread;
    let budget = 2.0 * e * (1.0 - g);
    let mut a2 = budget - s * s;
    if a2 <= 4.0 * f64::EPSILON * budget {
        // Rounding noise at the feasibility boundary.
        a2 = 0.0;
    }
    CodingPair {
        amplitude: a2.sqrt(),
        sigma: squeezed_sigma(g * e),
    }
}

/// Total energy `(a^2 + Sigma^2)/2 + (sigma^2 - 1/2)^2 / sigma^2`.
pub fn energy_of(pair: &CodingPair, mixing_spread: f64) -> f64 {
    let a = pair.amplitude;
    let s2 = pair.sigma * pair.sigma;
    0.5 * (a * a + mixing_spread * mixing_spread) + (s2 - 0.5).powi(2) / s2
}

/// Signal-to-noise term `a / (sqrt(2) sigma)` that fixes the power-size curve.
pub fn snr_term(pair: &CodingPair) -> f64 {
    pair.amplitude / (std::f64::consts::SQRT_2 * pair.sigma)
}

/// Squared overlap `|<psi0|psi1>|^2 = exp(-a^2 / (4 sigma^2))`.
pub fn overlap(pair: &CodingPair) -> f64 {
    let r = pair.amplitude / pair.sigma;
    (-0.25 * r * r).exp()
}

/// Largest feasible mixing spread, `sqrt(2 E_T (1 - gamma))`.
pub fn max_mixing(total_energy: f64, squeezing_fraction: f64) -> f64 {
    (2.0 * total_energy * (1.0 - squeezing_fraction))
        .max(0.0)
        .sqrt()
}

/// `a / (sqrt(2) sigma)` straight from budget parameters, without building a
/// config. Infeasible amplitudes are clamped to zero.
pub fn snr_of_budget(total_energy: f64, squeezing_fraction: f64, mixing_spread: f64) -> f64 {
    let a2 =
        (2.0 * total_energy * (1.0 - squeezing_fraction) - mixing_spread * mixing_spread).max(0.0);
    let sigma = squeezed_sigma(squeezing_fraction * total_energy);
    a2.sqrt() / (std::f64::consts::SQRT_2 * sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, Region};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn wavefunction(x: f64, a: f64, sigma: f64) -> f64 {
        (2.0 * PI * sigma * sigma).powf(-0.25) * (-(x - a) * (x - a) / (4.0 * sigma * sigma)).exp()
    }

    fn overlap_by_quadrature(pair: &CodingPair) -> f64 {
        let (a, s) = (pair.amplitude(), pair.sigma());
        let amp = integrate(
            |x| wavefunction(x, 0.0, s) * wavefunction(x, a, s),
            Region::Whole {
                center: a / 2.0,
                scale: s,
            },
            1e-13,
        )
        .unwrap();
        amp * amp
    }

    #[test]
    fn realize_examples() {
        let p = ChannelConfig::pure(1.0, 0.0).unwrap().realize();
        assert_abs_diff_eq!(p.amplitude(), std::f64::consts::SQRT_2, epsilon = 1e-8);
        assert_abs_diff_eq!(p.sigma(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-8);

        let p = ChannelConfig::pure(1.0, 0.25).unwrap().realize();
        assert_abs_diff_eq!(p.amplitude(), 1.224_744_87, epsilon = 1e-8);
        assert_abs_diff_eq!(p.sigma(), 0.5, epsilon = 1e-15);

        let p = ChannelConfig::new(1.0, 0.25, 1.5f64.sqrt())
            .unwrap()
            .realize();
        assert_eq!(p.amplitude(), 0.0);
        assert_abs_diff_eq!(p.sigma(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn coherent_limit_is_exact() {
        // sqrt(1/2) is not representable; sigma^2 lands within an ulp of 1/2.
        let p = ChannelConfig::pure(3.7, 0.0).unwrap().realize();
        assert!((p.sigma() * p.sigma() - 0.5).abs() <= f64::EPSILON);
    }

    #[test]
    fn infeasible_and_invalid_configs() {
        assert!(matches!(
            ChannelConfig::new(1.0, 0.25, 1.3),
            Err(Error::InfeasibleEnergy { .. })
        ));
        assert!(ChannelConfig::new(0.0, 0.1, 0.0).is_err());
        assert!(ChannelConfig::new(1.0, 1.0, 0.0).is_err());
        assert!(ChannelConfig::new(1.0, -0.1, 0.0).is_err());
        assert!(ChannelConfig::new(1.0, 0.1, -0.1).is_err());
        assert!(CodingPair::new(-1.0, 0.5).is_err());
        assert!(CodingPair::new(1.0, 0.0).is_err());
    }

    #[test]
    fn energy_examples() {
        let coherent = CodingPair::new(SQRT_2, FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(energy_of(&coherent, 0.0), 1.0, epsilon = 1e-15);
        let squeezed = CodingPair::new(1.5f64.sqrt(), 0.5).unwrap();
        assert_abs_diff_eq!(energy_of(&squeezed, 0.0), 1.0, epsilon = 1e-15);
        let blank = CodingPair::new(0.0, FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(energy_of(&blank, SQRT_2), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn snr_examples() {
        assert_eq!(snr_term(&CodingPair::new(0.0, 0.3).unwrap()), 0.0);
        let coherent = CodingPair::new(SQRT_2, FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(
            snr_term(&coherent),
            std::f64::consts::SQRT_2,
            epsilon = 1e-8
        );
        let opt = ChannelConfig::pure(1.0, 0.25).unwrap().realize();
        assert_abs_diff_eq!(snr_term(&opt), 1.732_050_81, epsilon = 1e-8);
    }

    #[test]
    fn overlap_examples_against_wavefunction_quadrature() {
        let blank = CodingPair::new(0.0, 0.4).unwrap();
        assert_eq!(overlap(&blank), 1.0);
        let coherent = CodingPair::new(SQRT_2, FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(overlap(&coherent), 0.367_879_44, epsilon = 1e-8);
        assert_abs_diff_eq!(
            overlap(&coherent),
            overlap_by_quadrature(&coherent),
            epsilon = 1e-10
        );
        let squeezed = CodingPair::new(1.5f64.sqrt(), 0.5).unwrap();
        assert_abs_diff_eq!(overlap(&squeezed), 0.223_130_16, epsilon = 1e-8);
        assert_abs_diff_eq!(
            overlap(&squeezed),
            overlap_by_quadrature(&squeezed),
            epsilon = 1e-10
        );
    }

    #[test]
    fn overlap_monotonicity_on_grid() {
        for i in 0..20 {
            let s = 0.1 + 0.05 * f64::from(i);
            let mut prev = 1.0 + 1e-15;
            for j in 0..20 {
                let a = 0.2 * f64::from(j);
                let w = overlap(&CodingPair::new(a, s).unwrap());
                assert!(w <= prev);
                prev = w;
                let wider = overlap(&CodingPair::new(a, s + 0.05).unwrap());
                assert!(wider >= w);
            }
        }
    }

    #[test]
    fn max_mixing_examples() {
        assert_abs_diff_eq!(
            max_mixing(1.0, 0.0),
            std::f64::consts::SQRT_2,
            epsilon = 1e-8
        );
        assert!(max_mixing(1.0, 1.0 - 1e-15) < 1e-7);
        assert_abs_diff_eq!(max_mixing(2.0, 0.5), SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn energy_round_trip_and_squeezing_identity_grid() {
        for i in 0..20 {
            let e = 0.1 + 0.5 * f64::from(i);
            for j in 0..20 {
                let g = 0.049 * f64::from(j);
                let smax = max_mixing(e, g);
                for k in 0..5 {
                    let spread = smax * f64::from(k) / 4.0;
                    let cfg = ChannelConfig::new(e, g, spread).unwrap();
                    let pair = cfg.realize();
                    assert_abs_diff_eq!(energy_of(&pair, spread), e, epsilon = 1e-9);
                    let s2 = pair.sigma() * pair.sigma();
                    assert_abs_diff_eq!((s2 - 0.5).powi(2) / s2, g * e, epsilon = 1e-9);
                }
            }
        }
    }
}
