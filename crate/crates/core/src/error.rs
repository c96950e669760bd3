use thiserror::Error;

/// Errors raised by the channel, detection and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    NotConverged { estimate: f64, error_bound: f64 },

    #[error("mixing spread {spread} exceeds the energy budget (max {max_spread})")]
    InfeasibleEnergy { spread: f64, max_spread: f64 },

    #[error("signal amplitude is zero: threshold is undefined")]
    ZeroAmplitude,

    #[error("trial count must be at least 1")]
    InvalidTrials,

    #[error("strategy does not match the channel: {0}")]
    StrategyMismatch(&'static str),

    #[error("{0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "[0, 1]",
        })
    }
}

pub(crate) fn check_open_probability(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "(0, 1)",
        })
    }
}
