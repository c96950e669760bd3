//! Reproducible Monte Carlo simulation of the threshold receiver.
//!
//! Trials are split into fixed-size chunks. Every (chunk, hypothesis) pair
//! owns a ChaCha8 stream keyed by the user seed with the stream id
//! `2 * chunk + hypothesis`, so the result depends only on `(seed, trials)`
//! and never on how many worker threads ran the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelConfig;
use crate::detection::{StrategyKind, ThresholdStrategy};
use crate::error::{Error, Result};
use crate::infotheory::{mutual_information, BinaryChannel};

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials_per_hypothesis: u64,
    pub q0_hat: f64,
    pub q1_hat: f64,
    pub q0_stderr: f64,
    pub q1_stderr: f64,
    pub seed: u64,
    pub mutual_information_hat: f64,
}

/// Binomial standard error `sqrt(p (1 - p) / n)`.
pub fn standard_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Standard normal variates by Box-Muller, both outputs used.
pub(crate) struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub(crate) fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    pub(crate) fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(radius * sin);
        radius * cos
    }
}

/// Builder for a simulation run.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: ChannelConfig,
    strategy: ThresholdStrategy,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
    allow_two_sided: bool,
}

impl Simulation {
    pub fn new(config: ChannelConfig, strategy: ThresholdStrategy) -> Self {
        Self {
            config,
            strategy,
            trials: 100_000,
            seed: 0,
            workers: None,
            allow_two_sided: false,
        }
    }

    /// Trials per hypothesis.
    pub fn trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Runs on a dedicated pool of `n` threads instead of the global one.
    pub fn workers(mut self, n: usize) -> Self {
        self.workers = Some(n);
        self
    }

    /// Two-sided regions are otherwise only accepted for mixed channels.
    pub fn allow_two_sided(mut self, allow: bool) -> Self {
        self.allow_two_sided = allow;
        self
    }

    pub fn run(&self) -> Result<SimulationReport> {
        if self.trials == 0 {
            return Err(Error::InvalidTrials);
        }
        if self.strategy.kind() == StrategyKind::TwoSided
            && self.config.is_pure()
            && !self.allow_two_sided
        {
            return Err(Error::StrategyMismatch(
                "two-sided region on a pure channel (enable allow_two_sided to force it)",
            ));
        }
        let (hits0, hits1) = match self.workers {
            None => self.count_hits(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|_| Error::Domain {
                    what: "worker count",
                    value: n as f64,
                    expected: "a buildable thread pool",
                })?
                .install(|| self.count_hits()),
        };
        let n = self.trials;
        let q0_hat = hits0 as f64 / n as f64;
        let q1_hat = hits1 as f64 / n as f64;
        Ok(SimulationReport {
            trials_per_hypothesis: n,
            q0_hat,
            q1_hat,
            q0_stderr: standard_error(q0_hat, n),
            q1_stderr: standard_error(q1_hat, n),
            seed: self.seed,
            mutual_information_hat: mutual_information(&BinaryChannel::new(q0_hat, q1_hat)?),
        })
    }

    fn count_hits(&self) -> (u64, u64) {
        let chunks = self.trials.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let len = CHUNK.min(self.trials - chunk * CHUNK);
                (
                    self.chunk_hits(chunk, 0, len),
                    self.chunk_hits(chunk, 1, len),
                )
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    }

    fn chunk_hits(&self, chunk: u64, hypothesis: u64, len: u64) -> u64 {
        let pair = self.config.realize();
        let sigma = pair.sigma();
        let amplitude = pair.amplitude();
        let spread = self.config.mixing_spread();
        let mut normals = NormalStream::new(self.seed, 2 * chunk + hypothesis);
        let mut hits = 0;
        for _ in 0..len {
            let x = if hypothesis == 0 {
                sigma * normals.next()
            } else if spread == 0.0 {
                amplitude + sigma * normals.next()
            } else {
                let b = amplitude + spread * normals.next();
                b + sigma * normals.next()
            };
            if self.strategy.accepts(x) {
                hits += 1;
            }
        }
        hits
    }
}

/// Runs `trials` per hypothesis with the given seed on the global pool.
pub fn simulate(
    config: &ChannelConfig,
    strategy: &ThresholdStrategy,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    Simulation::new(*config, *strategy)
        .trials(trials)
        .seed(seed)
        .allow_two_sided(!config.is_pure())
        .run()
}
