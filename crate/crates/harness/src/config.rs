//! Sweep configuration: `key = value` files, overridden by command-line
//! flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use congr_core::modarith::{primes_in, Ratio};
use congr_core::theorems::TheoremId;

use crate::record::Format;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Keys accepted in config files and as overrides.
pub const KEYS: [&str; 17] = [
    "theorem", "p", "pmin", "pmax", "a", "amax", "c", "m", "t", "d", "r", "s", "budget", "workers",
    "format", "out", "timings",
];

/// Parameter symbols that may carry a grid.
pub const GRID_KEYS: [&str; 6] = ["c", "m", "t", "d", "r", "s"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub theorems: Vec<TheoremId>,
    pub pmin: u64,
    pub pmax: u64,
    pub amin: u32,
    pub amax: u32,
    /// Explicit parameter grids; symbols left out use per-theorem defaults.
    pub grids: BTreeMap<String, Vec<Ratio>>,
    pub budget: u64,
    pub workers: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timings: bool,
}

/// Raw `key = value` pairs in override order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig(BTreeMap<String, String>);

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut out = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("line {}: expected key = value", no + 1));
            };
            out.set(k.trim(), v.trim())?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = if key == "theorems" { "theorem" } else { key };
        if !KEYS.contains(&key) {
            return err(format!("unknown key {key:?}"));
        }
        self.0.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn remove(&mut self, key: &str) {
        self.0.remove(key);
    }

    /// Values from `other` win.
    pub fn merge(&mut self, other: RawConfig) {
        self.0.extend(other.0);
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn number<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError(format!("{key} = {v:?} is not a valid number"))),
        }
    }

    pub fn build(&self) -> Result<SweepConfig, ConfigError> {
        let theorems = match self.get("theorem") {
            None => TheoremId::ALL.to_vec(),
            Some(list) => {
                let mut ids = Vec::new();
                for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    ids.push(item.parse::<TheoremId>().map_err(|e| ConfigError(e.to_string()))?);
                }
                ids.sort();
                ids.dedup();
                ids
            }
        };
        if theorems.is_empty() {
            return err("no theorems selected");
        }
        let (pmin, pmax) = match self.get("p") {
            Some(_) => {
                let p = self.number("p", 0u64)?;
                (p, p)
            }
            None => (self.number("pmin", 5u64)?, self.number("pmax", 100u64)?),
        };
        if pmin > pmax || primes_in(pmin, pmax).is_empty() {
            return err(format!("empty p range [{pmin}, {pmax}]"));
        }
        let amin = self.number("a", 1u32)?;
        let amax = self.number("amax", amin)?;
        if amin == 0 || amin > amax {
            return err(format!("empty a range [{amin}, {amax}]"));
        }
        let mut grids = BTreeMap::new();
        for key in GRID_KEYS {
            if let Some(v) = self.get(key) {
                grids.insert(key.to_string(), parse_grid(key, v)?);
            }
        }
        let budget = self.number("budget", DEFAULT_BUDGET)?;
        if budget == 0 {
            return err("budget must be at least 1");
        }
        let default_workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        let workers = self.number("workers", default_workers)?.max(1);
        let format = match self.get("format") {
            None => Format::Jsonl,
            Some(f) => f.parse().map_err(ConfigError)?,
        };
        let timings = match self.get("timings") {
            None => false,
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError(format!("timings = {v:?} is not a boolean")))?,
        };
        Ok(SweepConfig {
            theorems,
            pmin,
            pmax,
            amin,
            amax,
            grids,
            budget,
            workers,
            format,
            out: self.get("out").map(PathBuf::from),
            timings,
        })
    }
}

/// `1,2,5`, `-3..3` (inclusive) and `1/2` items, in the given order.
pub fn parse_grid(key: &str, text: &str) -> Result<Vec<Ratio>, ConfigError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let bound = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| ConfigError(format!("{key}: bad range {item:?}")))
            };
            let (lo, hi) = (bound(lo)?, bound(hi)?);
            if lo > hi {
                return err(format!("{key}: empty range {item:?}"));
            }
            out.extend((lo..=hi).map(Ratio::from));
        } else {
            out.push(item.parse::<Ratio>().map_err(|e| ConfigError(format!("{key}: {e}")))?);
        }
    }
    if out.is_empty() {
        return err(format!("{key}: empty grid"));
    }
    Ok(out)
}

impl SweepConfig {
    pub fn primes(&self) -> Vec<u64> {
        primes_in(self.pmin, self.pmax)
    }
}
