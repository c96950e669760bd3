use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::grid::{parse_grid, parse_number, parse_scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Roc,
    Optimize,
    MinEnergy,
    MutualInfo,
    MixedGain,
    Simulate,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Roc => "roc",
            Command::Optimize => "optimize",
            Command::MinEnergy => "min-energy",
            Command::MutualInfo => "mutual-info",
            Command::MixedGain => "mixed-gain",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
        }
    }

    /// Parameter that `--grid` stands for.
    pub fn grid_axis(self) -> &'static str {
        match self {
            Command::Roc | Command::MinEnergy | Command::Simulate => "q0",
            Command::Sweep => "gamma",
            Command::MutualInfo | Command::MixedGain | Command::Optimize => "energy",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        <Command as ValueEnum>::from_str(s, false).map_err(|_| anyhow!("unknown command {s:?}"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parameter keys accepted from flags and config files.
pub const PARAMETERS: [&str; 7] = [
    "energy",
    "gamma",
    "sigma-mix",
    "q0",
    "grid",
    "trials",
    "seed",
];

/// A fully merged request: command, raw parameter strings and output target.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub parameters: BTreeMap<String, String>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

/// Values given on the command line; each one overrides the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub parameters: BTreeMap<String, String>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn resolve(config: Option<&Path>, overrides: Overrides) -> Result<Self> {
        let mut file = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                ConfigFile::parse(&text).with_context(|| format!("in config {}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        file.parameters.extend(overrides.parameters);
        let command = overrides
            .command
            .or(file.command)
            .ok_or_else(|| anyhow!("no command given"))?;
        let output_format = overrides.format.or(file.format).unwrap_or(match command {
            Command::Simulate => OutputFormat::Json,
            _ => OutputFormat::Csv,
        });
        let spec = RunSpec {
            command,
            parameters: file.parameters,
            output_format,
            output_path: overrides.out.or(file.out),
        };
        spec.check_keys()?;
        Ok(spec)
    }

    pub fn new(command: Command) -> Self {
        RunSpec {
            command,
            parameters: BTreeMap::new(),
            output_format: OutputFormat::Csv,
            output_path: None,
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_owned(), value.to_string());
        self
    }

    fn check_keys(&self) -> Result<()> {
        for key in self.parameters.keys() {
            if !PARAMETERS.contains(&key.as_str()) {
                bail!("unknown parameter {key:?}");
            }
        }
        Ok(())
    }

    /// Raw value of `key`, honouring `--grid` for the command's swept axis.
    pub fn raw(&self, key: &str) -> Result<Option<&str>> {
        let direct = self.parameters.get(key).map(String::as_str);
        if key != self.command.grid_axis() {
            return Ok(direct);
        }
        match (direct, self.parameters.get("grid")) {
            (Some(_), Some(_)) => bail!("--grid and --{key} both set the {key} axis"),
            (None, Some(g)) => Ok(Some(g)),
            (d, None) => Ok(d),
        }
    }

    pub fn required(&self, key: &str) -> Result<&str> {
        self.raw(key)?
            .ok_or_else(|| anyhow!("{} needs --{key}", self.command))
    }

    pub fn grid(&self, key: &str) -> Result<Vec<f64>> {
        parse_grid(self.required(key)?).with_context(|| format!("--{key}"))
    }

    pub fn scalar(&self, key: &str) -> Result<f64> {
        parse_scalar(self.required(key)?).with_context(|| format!("--{key}"))
    }

    pub fn gamma(&self) -> Result<Vec<Gamma>> {
        match self.raw("gamma")? {
            None => Ok(vec![Gamma::Optimal]),
            Some(s) if s.trim() == "opt" => Ok(vec![Gamma::Optimal]),
            Some(s) => Ok(parse_grid(s)
                .context("--gamma")?
                .into_iter()
                .map(Gamma::Fixed)
                .collect()),
        }
    }

    pub fn single_gamma(&self) -> Result<Gamma> {
        match self.gamma()?.as_slice() {
            [g] => Ok(*g),
            _ => bail!("{} takes a single --gamma", self.command),
        }
    }

    pub fn sigma(&self) -> Result<Vec<SigmaRule>> {
        match self.raw("sigma-mix")?.map(str::trim) {
            None => Ok(vec![SigmaRule::Fixed(0.0)]),
            Some("weak") => Ok(vec![SigmaRule::Weak]),
            Some("strong") => Ok(vec![SigmaRule::Strong]),
            Some(s) => Ok(parse_grid(s)
                .context("--sigma-mix")?
                .into_iter()
                .map(SigmaRule::Fixed)
                .collect()),
        }
    }

    pub fn single_sigma(&self) -> Result<SigmaRule> {
        match self.sigma()?.as_slice() {
            [s] => Ok(*s),
            _ => bail!("{} takes a single --sigma-mix", self.command),
        }
    }

    pub fn integer(&self, key: &str, default: u64) -> Result<u64> {
        match self.raw(key)? {
            None => Ok(default),
            Some(s) => {
                let s = s.trim();
                if let Ok(v) = s.parse::<u64>() {
                    return Ok(v);
                }
                // Accept 1e6 and the like when the value is integral.
                let v = parse_number(s).with_context(|| format!("--{key}"))?;
                if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 {
                    Ok(v as u64)
                } else {
                    bail!("--{key} must be a non-negative integer, got {s:?}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    Optimal,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    /// `sqrt(2 E_T) / 10`
    Weak,
    /// `2 sqrt(2 E_T) / 3`
    Strong,
    Fixed(f64),
}

impl SigmaRule {
    pub fn at(self, total_energy: f64) -> f64 {
        match self {
            SigmaRule::Weak => (2.0 * total_energy).sqrt() / 10.0,
            SigmaRule::Strong => 2.0 * (2.0 * total_energy).sqrt() / 3.0,
            SigmaRule::Fixed(s) => s,
        }
    }
}

#[derive(Debug, Default)]
struct ConfigFile {
    command: Option<Command>,
    parameters: BTreeMap<String, String>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

impl ConfigFile {
    fn parse(text: &str) -> Result<Self> {
        let Value::Object(map) = serde_json::from_str(text)? else {
            bail!("config must be a JSON object");
        };
        let mut cfg = ConfigFile::default();
        for (key, value) in map {
            let text = match &value {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                Value::Array(items) => items
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => Ok(n.to_string()),
                        _ => Err(anyhow!("{key:?}: arrays may only hold numbers")),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .join(","),
                _ => bail!("{key:?}: expected a string, number or array"),
            };
            match key.as_str() {
                "command" => cfg.command = Some(Command::parse(&text)?),
                "format" => {
                    cfg.format = Some(
                        OutputFormat::from_str(&text, false)
                            .map_err(|_| anyhow!("unknown format {text:?}"))?,
                    )
                }
                "out" => cfg.out = Some(PathBuf::from(text)),
                k if PARAMETERS.contains(&k) => {
                    cfg.parameters.insert(key, text);
                }
                _ => bail!("unknown key {key:?}"),
            }
        }
        Ok(cfg)
    }
}
