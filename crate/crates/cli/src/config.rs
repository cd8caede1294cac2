//! Run settings from a sectioned key-value file, overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ini::Ini;
use yangian_core::relation::parse_relation_list;
use yangian_core::scalar::parse_rational;
use yangian_core::{RunConfig, Suite};

use crate::error::CliError;

/// `(section, key)` pairs a config file may contain.
const KEYS: &[(&str, &str)] = &[
    ("run", "suite"),
    ("run", "relations"),
    ("run", "N"),
    ("run", "variant"),
    ("run", "en-reading"),
    ("run", "seed"),
    ("oracle", "k"),
    ("oracle", "hbar"),
    ("oracle", "L"),
    ("oracle", "window"),
    ("oracle", "momenta"),
    ("oracle", "serre-L"),
    ("oracle", "serre-window"),
    ("report", "path"),
];

/// Raw settings keyed by their flag names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let ini = Ini::load_from_file(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let Some(section) = section else {
                    return Err(CliError::Usage(format!("{}: key {key:?} is outside any section", path.display())));
                };
                if !KEYS.contains(&(section, key)) {
                    return Err(CliError::Usage(format!("{}: unknown key {key:?} in [{section}]", path.display())));
                }
                values.insert(key.to_string(), value.trim().to_string());
            }
        }
        Ok(Self { values })
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse(v).map(Some).ok_or_else(|| CliError::Usage(format!("bad value {v:?} for {key}"))),
        }
    }

    pub fn suites(&self) -> Result<Vec<Suite>, CliError> {
        let Some(list) = self.get("suite") else {
            return Err(CliError::Usage("no suite selected; pass --suite or set suite in [run]".into()));
        };
        if list.trim() == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        let mut out = Vec::new();
        for s in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let suite: Suite = s.parse().map_err(|e: yangian_core::Error| CliError::Usage(e.to_string()))?;
            if !out.contains(&suite) {
                out.push(suite);
            }
        }
        if out.is_empty() {
            return Err(CliError::Usage("empty suite list".into()));
        }
        Ok(out)
    }

    pub fn report_path(&self) -> Option<PathBuf> {
        self.get("path").map(PathBuf::from)
    }

    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let d = RunConfig::default();
        let usage = |e: yangian_core::Error| CliError::Usage(e.to_string());
        let cfg = RunConfig {
            n: self.parsed("N", |v| v.parse().ok())?.unwrap_or(d.n),
            k: self.parsed("k", |v| parse_rational(v).ok())?.unwrap_or(d.k),
            hbar: self.parsed("hbar", |v| parse_rational(v).ok())?.unwrap_or(d.hbar),
            level: self.parsed("L", |v| v.parse().ok())?.unwrap_or(d.level),
            window: self.parsed("window", parse_window)?.unwrap_or(d.window),
            serre_level: self.parsed("serre-L", |v| v.parse().ok())?.unwrap_or(d.serre_level),
            serre_window: self.parsed("serre-window", parse_window)?.unwrap_or(d.serre_window),
            variant: self.get("variant").map(str::parse).transpose().map_err(usage)?.unwrap_or(d.variant),
            en_reading: self.get("en-reading").map(str::parse).transpose().map_err(usage)?.unwrap_or(d.en_reading),
            momenta: self.get("momenta").map(str::parse).transpose().map_err(usage)?.unwrap_or(d.momenta),
            relations: self.get("relations").map(parse_relation_list).transpose().map_err(usage)?.unwrap_or_default(),
            seed: self.parsed("seed", |v| v.parse().ok())?,
        };
        if cfg.n < 2 {
            return Err(CliError::Usage(format!("N = {} is below 2", cfg.n)));
        }
        if cfg.hbar == yangian_core::Q::from_integer(0.into()) {
            return Err(CliError::Usage("hbar must be nonzero".into()));
        }
        Ok(cfg)
    }
}

/// `lo,hi` or `[lo,hi]` with `lo <= hi`.
fn parse_window(v: &str) -> Option<(i64, i64)> {
    let body = v.trim().trim_start_matches('[').trim_end_matches(']');
    let (a, b) = body.split_once(',')?;
    let (lo, hi) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (lo <= hi).then_some((lo, hi))
}
