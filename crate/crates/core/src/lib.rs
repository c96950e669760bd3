//! Neyman-Pearson detection for amplitude-keyed binary communication over
//! squeezed Gaussian channels.
//!
//! The null symbol is the (possibly squeezed) vacuum, the alternative the
//! same state displaced by an amplitude `a`. A fixed energy budget is split
//! between squeezing and displacement; the modules here compute the
//! resulting quadrature-threshold receivers, compare them with the ideal
//! quantum receiver and check every closed form numerically.
//!
//! - [`numerics`]: erf and its inverse, Gaussian tails, quadrature, roots, maximization.
//! - [`channel`]: energy accounting and the squeezing-fraction parameterization.
//! - [`detection`]: pure-state threshold strategies and their power-size curves.
//! - [`fuzzy`]: mixed (Gaussian-jittered) alternatives and their exact NP regions.
//! - [`infotheory`]: mutual information of the induced binary channel.
//! - [`montecarlo`]: reproducible receiver simulation.

#![forbid(unsafe_code)]

pub mod channel;
pub mod detection;
mod error;
pub mod fuzzy;
pub mod infotheory;
pub mod montecarlo;
pub mod numerics;

pub use channel::{ChannelConfig, CodingPair};
pub use detection::{RocPoint, StrategyKind, ThresholdStrategy};
pub use error::{Error, Result};
pub use fuzzy::FuzzyAlternative;
pub use infotheory::BinaryChannel;
pub use montecarlo::SimulationReport;
