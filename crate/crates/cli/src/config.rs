//! `key = value` run configuration with fail-closed key checking.
//!
//! Defaults are the cryostat (fridge) column of the reference circuit
//! table. Values given later (file, then `--set`) override earlier ones.

use std::collections::BTreeMap;
use std::str::FromStr;

use cvqt_core::freespace::BathParams;
use cvqt_core::microwave::{
    AdcConfig, AmplifierChain, CircuitBudget, GainConfig, LambdaSource, MicrowaveSetup, RunMode,
    TauRule,
};
use cvqt_core::protocol::{InputOrientation, InputSpec, ResourceSpec};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Real,
    NonNegative,
    Positive,
    Efficiency,
    Count,
    Integer,
    Bool,
    Chain,
    Lambda,
    TauRule,
    Orientation,
    Mode,
    Pipeline,
    Grid,
}

const KEYS: &[(&str, Kind, &str)] = &[
    ("epsilon", Kind::Efficiency, "0.95"),
    ("eta", Kind::Efficiency, "0.90"),
    ("kappa", Kind::Efficiency, "0.65"),
    ("nu", Kind::Efficiency, "0.75"),
    ("T1", Kind::NonNegative, "0.040"),
    ("T2", Kind::NonNegative, "4"),
    ("T3", Kind::NonNegative, "4"),
    ("T4", Kind::NonNegative, "0.100"),
    ("gJ", Kind::Positive, "100"),
    ("gH", Kind::Positive, "1e4"),
    ("rJ", Kind::Real, "2.30"),
    ("chain", Kind::Chain, "HEMT"),
    ("omega_hz", Kind::Positive, "5e9"),
    ("omega_is_angular", Kind::Bool, "true"),
    ("bandwidth_hz", Kind::Positive, "420e3"),
    ("resistance_ohm", Kind::Positive, "50"),
    ("lo_amplitude", Kind::Positive, "1e6"),
    ("lambda", Kind::Lambda, "matched"),
    ("tau_rule", Kind::TauRule, "half"),
    ("r", Kind::Real, "1.32"),
    ("n", Kind::NonNegative, "0"),
    ("y", Kind::Real, "0"),
    ("x_in", Kind::Real, "0"),
    ("p_in", Kind::Real, "0"),
    ("shots", Kind::Count, "10000"),
    ("seed", Kind::Integer, "0"),
    ("mode", Kind::Mode, "deterministic"),
    ("pipeline", Kind::Pipeline, "microwave"),
    ("zero_resource", Kind::Bool, "false"),
    ("y_grid", Kind::Grid, "0"),
    ("r_grid", Kind::Grid, "0:3:0.05"),
    ("bath_eta", Kind::Grid, "1"),
    ("bath_n", Kind::Grid, "0"),
    ("orientation", Kind::Orientation, "standard"),
];

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _, _)| *k == key).map(|(_, kind, _)| *kind)
}

/// Which circuit `run` drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Microwave,
    Ideal,
}

/// Merged, validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let values = KEYS
            .iter()
            .map(|(k, _, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { values }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v = f64::from_str(value.trim()).map_err(|_| CliError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: "not a number".into(),
    })?;
    if !v.is_finite() {
        return Err(CliError::Value {
            key: key.to_string(),
            value: value.to_string(),
            reason: "not finite".into(),
        });
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Value {
            key: key.to_string(),
            value: value.to_string(),
            reason: "expected true or false".into(),
        }),
    }
}

/// Comma-separated numbers, or `start:stop:step` (inclusive of `stop`
/// up to rounding).
pub fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>> {
    let value = value.trim();
    let bad = |reason: &str| CliError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    };
    let grid = if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range must be start:stop:step"));
        }
        let start = parse_f64(key, parts[0])?;
        let stop = parse_f64(key, parts[1])?;
        let step = parse_f64(key, parts[2])?;
        if !(step > 0.0) || stop < start {
            return Err(bad("range needs step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        value
            .split(',')
            .map(|p| parse_f64(key, p))
            .collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(grid)
}

fn validate(key: &str, value: &str) -> Result<()> {
    let kind = kind_of(key).ok_or_else(|| CliError::UnknownKey(key.to_string()))?;
    let range = |ok: bool, expected: &str| {
        if ok {
            Ok(())
        } else {
            Err(CliError::Value {
                key: key.to_string(),
                value: value.to_string(),
                reason: format!("must be {expected}"),
            })
        }
    };
    let word = value.trim().to_ascii_lowercase();
    match kind {
        Kind::Real => parse_f64(key, value).map(|_| ()),
        Kind::NonNegative => range(parse_f64(key, value)? >= 0.0, ">= 0"),
        Kind::Positive => range(parse_f64(key, value)? > 0.0, "> 0"),
        Kind::Efficiency => {
            let v = parse_f64(key, value)?;
            range(v > 0.0 && v <= 1.0, "in (0, 1]")
        }
        Kind::Count => range(
            value.trim().parse::<u64>().map(|v| v >= 1).unwrap_or(false),
            "a positive integer",
        ),
        Kind::Integer => range(value.trim().parse::<u64>().is_ok(), "a non-negative integer"),
        Kind::Bool => parse_bool(key, value).map(|_| ()),
        Kind::Chain => range(
            matches!(word.as_str(), "hemt" | "jpa_chain"),
            "HEMT or JPA_CHAIN",
        ),
        Kind::Lambda => {
            if matches!(word.as_str(), "matched" | "physical") {
                Ok(())
            } else {
                range(parse_f64(key, value)? > 0.0, "matched, physical or a number > 0")
            }
        }
        Kind::TauRule => range(matches!(word.as_str(), "half" | "full"), "half or full"),
        Kind::Orientation => range(
            matches!(word.as_str(), "standard" | "inverse"),
            "standard or inverse",
        ),
        Kind::Mode => range(
            matches!(word.as_str(), "deterministic" | "monte_carlo"),
            "deterministic or monte_carlo",
        ),
        Kind::Pipeline => range(
            matches!(word.as_str(), "microwave" | "ideal"),
            "microwave or ideal",
        ),
        Kind::Grid => parse_grid(key, value).map(|_| ()),
    }
}

/// Splits `key = value`; `#` starts a comment.
fn split_line(line: &str) -> Option<Result<(String, String)>> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return None;
    }
    Some(match line.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(CliError::Syntax(line.to_string())),
    })
}

impl RunConfig {
    /// Defaults overridden by the lines of `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for line in text.lines() {
            if let Some(kv) = split_line(line) {
                let (k, v) = kv?;
                cfg.set(&k, &v)?;
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        validate(key, value)?;
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        match split_line(assignment) {
            Some(kv) => {
                let (k, v) = kv?;
                self.set(&k, &v)
            }
            None => Err(CliError::Syntax(assignment.to_string())),
        }
    }

    pub fn get(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .expect("all keys carry defaults")
    }

    pub fn real(&self, key: &str) -> f64 {
        f64::from_str(self.get(key)).expect("validated")
    }

    pub fn flag(&self, key: &str) -> bool {
        parse_bool(key, self.get(key)).expect("validated")
    }

    pub fn grid(&self, key: &str) -> Vec<f64> {
        parse_grid(key, self.get(key)).expect("validated")
    }

    fn word(&self, key: &str) -> String {
        self.get(key).to_ascii_lowercase()
    }

    pub fn seed(&self) -> u64 {
        self.get("seed").parse().expect("validated")
    }

    pub fn shots(&self) -> u64 {
        self.get("shots").parse().expect("validated")
    }

    /// Sorted `key=value` lines; the hashed form of the configuration.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn mode(&self) -> RunMode {
        match self.word("mode").as_str() {
            "monte_carlo" => RunMode::MonteCarlo,
            _ => RunMode::Deterministic,
        }
    }

    pub fn pipeline(&self) -> Pipeline {
        match self.word("pipeline").as_str() {
            "ideal" => Pipeline::Ideal,
            _ => Pipeline::Microwave,
        }
    }

    pub fn orientation(&self) -> InputOrientation {
        match self.word("orientation").as_str() {
            "inverse" => InputOrientation::Inverse,
            _ => InputOrientation::Standard,
        }
    }

    pub fn input(&self) -> Result<InputSpec> {
        Ok(InputSpec::new(
            self.real("y"),
            self.real("x_in"),
            self.real("p_in"),
        )?)
    }

    pub fn resource(&self) -> Result<ResourceSpec> {
        Ok(ResourceSpec::new(self.real("r"), self.real("n"))?)
    }

    pub fn setup(&self) -> Result<MicrowaveSetup> {
        let budget = CircuitBudget::new(
            self.real("epsilon"),
            self.real("eta"),
            self.real("kappa"),
            self.real("nu"),
            [
                self.real("T1"),
                self.real("T2"),
                self.real("T3"),
                self.real("T4"),
            ],
        )?;
        let chain = match self.word("chain").as_str() {
            "jpa_chain" => AmplifierChain::JpaChain,
            _ => AmplifierChain::Hemt,
        };
        let gains = GainConfig::new(self.real("gJ"), self.real("rJ"), self.real("gH"), chain)?;
        let adc = AdcConfig::from_frequency(
            self.real("omega_hz"),
            self.flag("omega_is_angular"),
            self.real("bandwidth_hz"),
            self.real("resistance_ohm"),
            self.real("lo_amplitude"),
        )?;
        let lambda_source = match self.word("lambda").as_str() {
            "matched" => LambdaSource::Matched,
            "physical" => LambdaSource::Physical,
            _ => LambdaSource::Fixed(self.real("lambda")),
        };
        let tau_rule = match self.word("tau_rule").as_str() {
            "full" => TauRule::Full,
            _ => TauRule::Half,
        };
        Ok(MicrowaveSetup {
            budget,
            gains,
            adc,
            lambda_source,
            tau_rule,
        })
    }

    /// Every `(bath_eta, bath_n)` pair.
    pub fn baths(&self) -> Result<Vec<BathParams>> {
        let mut out = Vec::new();
        for eta in self.grid("bath_eta") {
            for n in self.grid("bath_n") {
                out.push(BathParams::new(eta, n)?);
            }
        }
        Ok(out)
    }
}
