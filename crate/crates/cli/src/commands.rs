use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use squeezed_np::channel::{overlap, ChannelConfig};
use squeezed_np::detection::{
    asymptotic_min_energy, helstrom_np_bound, min_energy, optimal_gamma, optimal_gamma_verified,
    power_of, roc_point, size_of, threshold_for_size,
};
use squeezed_np::fuzzy::{
    fuzzy_roc, fuzzy_roc_point, optimal_gamma_mixed, optimal_gamma_mixed_verified, FuzzyAlternative,
};
use squeezed_np::infotheory::{
    mutual_information, squeezing_gain, squeezing_gain_at, to_db, BinaryChannel,
};
use squeezed_np::montecarlo::simulate;
use squeezed_np::SimulationReport;

use crate::spec::{Command, Gamma, OutputFormat, RunSpec, SigmaRule};
use crate::table::Table;

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table(Table),
    Simulation(SimulationOutput),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationOutput {
    pub command: &'static str,
    pub report: SimulationReport,
    pub analytic: Analytic,
}

/// Exact size and power of the simulated strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Analytic {
    pub q0: f64,
    pub q1: f64,
}

impl Output {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match (self, format) {
            (Output::Table(t), OutputFormat::Csv) => t.to_csv(),
            (Output::Table(t), OutputFormat::Json) => t.to_json(),
            (Output::Simulation(s), OutputFormat::Json) => {
                Ok(serde_json::to_string_pretty(s)? + "\n")
            }
            (Output::Simulation(s), OutputFormat::Csv) => s.as_table().to_csv(),
        }
    }

    pub fn table(&self) -> Option<&Table> {
        match self {
            Output::Table(t) => Some(t),
            Output::Simulation(_) => None,
        }
    }
}

impl SimulationOutput {
    fn as_table(&self) -> Table {
        let r = &self.report;
        let mut t = Table::new(
            self.command,
            &[
                "Q0",
                "Q1",
                "q0_hat",
                "q0_stderr",
                "q1_hat",
                "q1_stderr",
                "trials",
                "seed",
            ],
        );
        t.push(vec![
            self.analytic.q0,
            self.analytic.q1,
            r.q0_hat,
            r.q0_stderr,
            r.q1_hat,
            r.q1_stderr,
            r.trials_per_hypothesis as f64,
            r.seed as f64,
        ]);
        t
    }
}

pub fn execute(spec: &RunSpec) -> Result<Output> {
    let name = spec.command.name();
    let out = match spec.command {
        Command::Roc => Output::Table(roc(spec)?),
        Command::Sweep => Output::Table(sweep(spec)?),
        Command::MinEnergy => Output::Table(min_energy_table(spec)?),
        Command::MutualInfo => Output::Table(mutual_info(spec)?),
        Command::MixedGain => Output::Table(mixed_gain(spec)?),
        Command::Optimize => Output::Table(optimize(spec)?),
        Command::Simulate => Output::Simulation(simulation(spec)?),
    };
    if let Output::Table(t) = &out {
        debug_assert_eq!(t.command, name);
    }
    Ok(out)
}

fn resolve_gamma(gamma: Gamma, energy: f64, spread: f64) -> Result<f64> {
    Ok(match gamma {
        Gamma::Fixed(g) => g,
        Gamma::Optimal if spread == 0.0 => optimal_gamma(energy),
        Gamma::Optimal => optimal_gamma_mixed(energy, spread)?,
    })
}

fn sizes(spec: &RunSpec) -> Result<Vec<f64>> {
    let q0 = spec.grid("q0")?;
    for &q in &q0 {
        ensure!(
            q > 0.0 && q < 1.0,
            "--q0 values must lie in (0, 1), got {q}"
        );
    }
    Ok(q0)
}

/// Power of the best strategy of size `q0` on a configured channel.
fn power(config: &ChannelConfig, q0: f64) -> Result<f64> {
    let pair = config.realize();
    Ok(if config.is_pure() {
        roc_point(&pair, q0)?
    } else {
        fuzzy_roc(&pair, &FuzzyAlternative::from_config(config)?, q0)?
    })
}

fn collect(mut table: Table, rows: Vec<Result<Vec<f64>>>) -> Result<Table> {
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

fn roc(spec: &RunSpec) -> Result<Table> {
    let energy = spec.scalar("energy")?;
    let spread = spec.single_sigma()?.at(energy);
    let gamma = resolve_gamma(spec.single_gamma()?, energy, spread)?;
    let config = ChannelConfig::new(energy, gamma, spread)?;
    let omega = overlap(&config.realize());
    let rows = sizes(spec)?
        .into_par_iter()
        .map(|q0| Ok(vec![q0, power(&config, q0)?, helstrom_np_bound(omega, q0)?]))
        .collect();
    collect(Table::new("roc", &["Q0", "Q1_x", "Q1_helstrom"]), rows)
}

fn sweep(spec: &RunSpec) -> Result<Table> {
    let energy = spec.scalar("energy")?;
    let spread = spec.single_sigma()?.at(energy);
    let gammas = spec
        .gamma()?
        .into_iter()
        .map(|g| resolve_gamma(g, energy, spread))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = sizes(spec)?
        .into_iter()
        .flat_map(|q0| gammas.iter().map(move |&g| (q0, g)))
        .collect();
    let rows = points
        .into_par_iter()
        .map(|(q0, g)| {
            let config = ChannelConfig::new(energy, g, spread)?;
            Ok(vec![q0, g, power(&config, q0)?])
        })
        .collect();
    collect(Table::new("sweep", &["Q0", "gamma", "Q1"]), rows)
}

fn min_energy_table(spec: &RunSpec) -> Result<Table> {
    let gammas = match spec.raw("gamma")? {
        None => vec![0.0],
        Some(_) => spec
            .gamma()?
            .into_iter()
            .map(|g| match g {
                Gamma::Fixed(g) => Ok(g),
                Gamma::Optimal => bail!("min-energy needs numeric --gamma values"),
            })
            .collect::<Result<_>>()?,
    };
    let points: Vec<(f64, f64)> = sizes(spec)?
        .into_iter()
        .flat_map(|q0| gammas.iter().map(move |&g| (q0, g)))
        .collect();
    let rows = points
        .into_par_iter()
        .map(|(q0, g)| {
            let m = min_energy(q0, g)?;
            let asym = asymptotic_min_energy(q0)?;
            Ok(vec![
                q0,
                g,
                m.root,
                m.closed_form,
                asym.coherent,
                asym.squeezed,
            ])
        })
        .collect();
    collect(
        Table::new(
            "min-energy",
            &[
                "Q0",
                "gamma",
                "E_root",
                "E_eq8",
                "E_asym_coherent",
                "E_asym_squeezed",
            ],
        ),
        rows,
    )
}

fn mutual_info(spec: &RunSpec) -> Result<Table> {
    if spec.sigma()? != [SigmaRule::Fixed(0.0)] {
        bail!("mutual-info compares against the pure-state optimum and needs --sigma-mix 0");
    }
    let gamma = spec.single_gamma()?;
    let q0s = sizes(spec)?;
    let points: Vec<(f64, f64)> = spec
        .grid("energy")?
        .into_iter()
        .flat_map(|e| q0s.iter().map(move |&q| (e, q)))
        .collect();
    let rows = points
        .into_par_iter()
        .map(|(e, q0)| {
            let config = ChannelConfig::pure(e, resolve_gamma(gamma, e, 0.0)?)?;
            let pair = config.realize();
            let x = mutual_information(&BinaryChannel::new(q0, roc_point(&pair, q0)?)?);
            let best = helstrom_np_bound(overlap(&pair), q0)?;
            let opt = mutual_information(&BinaryChannel::new(q0, best)?);
            Ok(vec![e, q0, x, opt, to_db(x / opt)])
        })
        .collect();
    collect(
        Table::new("mutual-info", &["E_T", "Q0", "I_x", "I_opt", "ratio_dB"]),
        rows,
    )
}

fn mixed_gain(spec: &RunSpec) -> Result<Table> {
    let gamma = spec.single_gamma()?;
    let rules = spec.sigma()?;
    let q0s = sizes(spec)?;
    let mut points = Vec::new();
    for e in spec.grid("energy")? {
        for rule in &rules {
            for &q0 in &q0s {
                points.push((e, rule.at(e), q0));
            }
        }
    }
    let rows = points
        .into_par_iter()
        .map(|(e, s, q0)| {
            let gain = match gamma {
                Gamma::Optimal => squeezing_gain(e, s, q0),
                Gamma::Fixed(g) => squeezing_gain_at(e, s, q0, g),
            }
            .with_context(|| format!("E_T={e}, Sigma={s}, Q0={q0}"))?;
            Ok(vec![e, s, q0, gain.ratio, gain.ratio_db])
        })
        .collect();
    collect(
        Table::new("mixed-gain", &["E_T", "Sigma", "Q0", "R", "R_dB"]),
        rows,
    )
}

fn optimize(spec: &RunSpec) -> Result<Table> {
    let rules = spec.sigma()?;
    let points: Vec<(f64, f64)> = spec
        .grid("energy")?
        .into_iter()
        .flat_map(|e| rules.iter().map(move |r| (e, r.at(e))))
        .collect();
    let rows = points
        .into_par_iter()
        .map(|(e, s)| {
            let check = if s == 0.0 {
                optimal_gamma_verified(e)?
            } else {
                optimal_gamma_mixed_verified(e, s)?
            };
            Ok(vec![
                e,
                s,
                check.closed_form,
                check.numerical,
                check.max_snr,
            ])
        })
        .collect();
    collect(
        Table::new(
            "optimize",
            &["E_T", "Sigma", "gamma_closed", "gamma_numeric", "snr_max"],
        ),
        rows,
    )
}

fn simulation(spec: &RunSpec) -> Result<SimulationOutput> {
    let energy = spec.scalar("energy")?;
    let spread = spec.single_sigma()?.at(energy);
    let gamma = resolve_gamma(spec.single_gamma()?, energy, spread)?;
    let q0 = spec.scalar("q0")?;
    let config = ChannelConfig::new(energy, gamma, spread)?;
    let pair = config.realize();
    let (strategy, analytic) = if config.is_pure() {
        let s = threshold_for_size(&pair, q0)?;
        (
            s,
            Analytic {
                q0: size_of(&s, &pair),
                q1: power_of(&s, &pair),
            },
        )
    } else {
        let p = fuzzy_roc_point(&pair, &FuzzyAlternative::from_config(&config)?, q0)?;
        (
            p.strategy,
            Analytic {
                q0: p.size,
                q1: p.power,
            },
        )
    };
    let report = simulate(
        &config,
        &strategy,
        spec.integer("trials", 1_000_000)?,
        spec.integer("seed", 0)?,
    )?;
    Ok(SimulationOutput {
        command: "simulate",
        report,
        analytic,
    })
}
