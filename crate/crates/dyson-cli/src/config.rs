//! Flat `key = value` configuration files for the simulation commands. Keys
//! mirror the simulation parameter names; `#` starts a comment.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use dyson_core::{Boundary, CouplingParams, FieldProfile, SimParams};

pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "j1",
    "h_star",
    "gamma",
    "cutoff_l",
    "beta",
    "window_radius",
    "boundary",
    "sweeps",
    "burn_in",
    "seed",
    "measure_every",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected `key = value`, got `{raw}`", lineno + 1);
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key `{key}`", lineno + 1);
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                bail!("config line {}: duplicate key `{key}`", lineno + 1);
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| anyhow!("missing config key: {key}"))
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str, raw: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        raw.parse()
            .map_err(|e| anyhow!("config key `{key}`: cannot parse `{raw}`: {e}"))
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse_value(key, self.require(key)?)
    }

    fn optional<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            Some(raw) => self.parse_value(key, raw),
            None => Ok(default),
        }
    }

    fn boundary(&self) -> Result<Boundary> {
        match self.require("boundary")? {
            "plus" | "+" => Ok(Boundary::Plus),
            "minus" | "-" => Ok(Boundary::Minus),
            other => bail!("config key `boundary`: expected plus or minus, got `{other}`"),
        }
    }

    /// Comma-separated list of floats; a single value yields a single-entry
    /// grid.
    pub fn float_list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.require(key)?;
        raw.split(',')
            .map(|piece| {
                piece
                    .trim()
                    .parse()
                    .map_err(|e| anyhow!("config key `{key}`: cannot parse `{piece}`: {e}"))
            })
            .collect()
    }

    /// Builds simulation parameters, using the first entry of any beta or
    /// gamma lists. The master seed comes from the CLI flag, then the
    /// DYSON_SEED environment variable, then the config.
    pub fn sim_params(&self, seed_flag: Option<u64>) -> Result<SimParams> {
        let seed = match seed_flag {
            Some(s) => s,
            None => match std::env::var("DYSON_SEED") {
                Ok(raw) => raw
                    .parse()
                    .map_err(|e| anyhow!("DYSON_SEED: cannot parse `{raw}`: {e}"))?,
                Err(_) => self.required("seed").map_err(|_| {
                    anyhow!("missing config key: seed (or pass --seed / set DYSON_SEED)")
                })?,
            },
        };
        let coupling = CouplingParams::new(
            self.required("alpha")?,
            self.optional("j1", 1.0)?,
        )
        .map_err(|e| anyhow!("{e}"))?;
        let field = FieldProfile::new(
            self.optional("h_star", 0.0)?,
            self.optional("gamma", 1.0)?,
            self.optional("cutoff_l", 0)?,
        )
        .map_err(|e| anyhow!("{e}"))?;
        let beta_list = self.float_list("beta")?;
        Ok(SimParams {
            coupling,
            field,
            beta: beta_list[0],
            window_radius: self.required("window_radius")?,
            boundary: self.boundary()?,
            sweeps: self.required("sweeps")?,
            burn_in: self.required("burn_in")?,
            seed,
            measure_every: self.required("measure_every")?,
        })
    }
}
