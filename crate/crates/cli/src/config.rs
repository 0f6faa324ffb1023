//! Flat `key = value` configuration files. Blank lines and lines starting
//! with `#` are skipped. Command-line flags override file values.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use photon_fidelity::{Error, PhysicalConstants, QuadratureSpec, Result};

pub const THREADS_ENV: &str = "PHOTON_FIDELITY_THREADS";

const KEYS: &[&str] = &[
    "rel_tol",
    "radial_nodes",
    "polar_nodes",
    "azimuth_nodes",
    "max_refinements",
    "radial_scale",
    "hbar_c",
    "c",
    "epsilon0",
    "mu0",
    "threads",
    "threshold",
    "bracket_max",
    "a_min",
    "a_max",
    "steps",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidParameter(format!(
                    "config line {}: expected key=value, got {line:?}",
                    n + 1
                )));
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::InvalidParameter(format!(
                    "config line {}: unknown key {key:?}",
                    n + 1
                )));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                Error::InvalidParameter(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        let d = QuadratureSpec::default();
        let spec = QuadratureSpec {
            radial_nodes: self.get_or("radial_nodes", d.radial_nodes)?,
            polar_nodes: self.get_or("polar_nodes", d.polar_nodes)?,
            azimuth_nodes: self.get_or("azimuth_nodes", d.azimuth_nodes)?,
            rel_tol: self.get_or("rel_tol", d.rel_tol)?,
            max_refinements: self.get_or("max_refinements", d.max_refinements)?,
            radial_scale: self.get_or("radial_scale", d.radial_scale)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn constants(&self) -> Result<PhysicalConstants> {
        let d = PhysicalConstants::default();
        PhysicalConstants::new(
            self.get_or("hbar_c", d.hbar_c)?,
            self.get_or("c", d.c)?,
            self.get_or("epsilon0", d.epsilon0)?,
            self.get_or("mu0", d.mu0)?,
        )
    }

    /// Worker count: `threads` from the file (or all cores), capped by the
    /// environment variable.
    pub fn threads(&self, env: Option<&str>) -> Result<usize> {
        let available = std::thread::available_parallelism().map_or(1, |n| n.get());
        let requested: usize = self.get_or("threads", available)?;
        let cap = match env {
            None => usize::MAX,
            Some(raw) => raw.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::InvalidParameter(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))
            })?,
        };
        if requested == 0 {
            return Err(Error::InvalidParameter("threads must be positive".into()));
        }
        Ok(requested.min(cap))
    }
}
