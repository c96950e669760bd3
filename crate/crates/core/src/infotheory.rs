//! Mutual information of the binary channel induced by a decision strategy.
//!
//! Inputs are equiprobable. Outputs are the decisions, so the transition
//! matrix is `P11 = Q1`, `P10 = Q0`, `P01 = 1 - Q1`, `P00 = 1 - Q0`.
//! Information is measured in bits.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelConfig;
use crate::detection::roc_point;
use crate::error::{check_open_probability, check_probability, Result};
use crate::fuzzy::{fuzzy_roc, optimal_gamma_mixed, FuzzyAlternative};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryChannel {
    p_false_alarm: f64,
    p_detect: f64,
}

impl BinaryChannel {
    pub fn new(p_false_alarm: f64, p_detect: f64) -> Result<Self> {
        Ok(Self {
            p_false_alarm: check_probability("false-alarm probability", p_false_alarm)?,
            p_detect: check_probability("detection probability", p_detect)?,
        })
    }

    pub fn p_false_alarm(&self) -> f64 {
        self.p_false_alarm
    }

    pub fn p_detect(&self) -> f64 {
        self.p_detect
    }

    /// `P[i][j]`: probability of deciding `i` when `j` was sent.
    pub fn transition(&self) -> [[f64; 2]; 2] {
        [
            [1.0 - self.p_false_alarm, 1.0 - self.p_detect],
            [self.p_false_alarm, self.p_detect],
        ]
    }
}

/// `I = sum_ij P_ij p_j log2(P_ij / sum_k P_ik p_k)` with `p_0 = p_1 = 1/2`.
pub fn mutual_information(channel: &BinaryChannel) -> f64 {
    let prior = 0.5;
    let info: f64 = channel
        .transition()
        .iter()
        .map(|row| {
            let output = prior * (row[0] + row[1]);
            row.iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| p * prior * (p / output).log2())
                .sum::<f64>()
        })
        .sum();
    info.clamp(0.0, 1.0)
}

/// Converts a power ratio to decibels, `10 log10(r)`.
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Squeezed-vs-coherent mutual information at fixed energy and mixing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingGain {
    pub squeezing_fraction: f64,
    pub squeezed_information: f64,
    pub coherent_information: f64,
    pub ratio: f64,
    /// `10 log10(ratio)`
    pub ratio_db: f64,
}

/// Mutual information of the strategy of size `q0` on a channel, using the
/// exact mixed characteristic when `Sigma > 0`.
pub fn channel_information(config: &ChannelConfig, q0: f64) -> Result<f64> {
    let pair = config.realize();
    let q1 = if config.is_pure() {
        roc_point(&pair, q0)?
    } else {
        fuzzy_roc(&pair, &FuzzyAlternative::from_config(config)?, q0)?
    };
    Ok(mutual_information(&BinaryChannel::new(q0, q1)?))
}

/// Ratio `R = I(gamma_squeezed) / I(gamma = 0)` at fixed `(E_T, Sigma, Q0)`.
pub fn squeezing_gain_at(
    total_energy: f64,
    spread: f64,
    q0: f64,
    squeezing_fraction: f64,
) -> Result<SqueezingGain> {
    check_open_probability("size", q0)?;
    let squeezed = channel_information(
        &ChannelConfig::new(total_energy, squeezing_fraction, spread)?,
        q0,
    )?;
    let coherent = channel_information(&ChannelConfig::new(total_energy, 0.0, spread)?, q0)?;
    let ratio = squeezed / coherent;
    Ok(SqueezingGain {
        squeezing_fraction,
        squeezed_information: squeezed,
        coherent_information: coherent,
        ratio,
        ratio_db: to_db(ratio),
    })
}

/// [`squeezing_gain_at`] with the optimal mixed squeezing fraction.
pub fn squeezing_gain(total_energy: f64, spread: f64, q0: f64) -> Result<SqueezingGain> {
    let gamma = optimal_gamma_mixed(total_energy, spread)?;
    squeezing_gain_at(total_energy, spread, q0, gamma)
}
