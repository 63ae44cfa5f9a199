//! `--set key=value` handling.
//!
//! Plain keys apply to whichever model reads them; `model.key=value`
//! targets one model. Every key must be consumed by the command, so
//! typos fail loudly instead of silently fitting defaults.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, bail, Result};

#[derive(Debug, Default)]
pub struct Settings {
    entries: BTreeMap<String, String>,
    consumed: RefCell<BTreeSet<String>>,
}

impl Settings {
    pub fn parse(pairs: &[String]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for pair in pairs {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| anyhow!("--set expects key=value, got {pair:?}"))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                bail!("--set expects key=value, got {pair:?}");
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                bail!("duplicate --set key {key:?}");
            }
        }
        Ok(Settings { entries, consumed: RefCell::new(BTreeSet::new()) })
    }

    /// Raw lookup within a scope: `scope.key` wins over a plain `key`.
    fn lookup(&self, scope: &str, key: &str) -> Option<&str> {
        let scoped = format!("{scope}.{key}");
        if let Some(v) = self.entries.get(&scoped) {
            self.consumed.borrow_mut().insert(scoped);
            return Some(v);
        }
        if let Some(v) = self.entries.get(key) {
            self.consumed.borrow_mut().insert(key.to_string());
            return Some(v);
        }
        None
    }

    pub fn get_str(&self, scope: &str, key: &str, default: &str) -> String {
        self.lookup(scope, key).unwrap_or(default).to_string()
    }

    pub fn get_usize(&self, scope: &str, key: &str, default: usize) -> Result<usize> {
        match self.lookup(scope, key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| anyhow!("setting {scope}.{key} must be a non-negative integer, got {raw:?}")),
        }
    }

    pub fn get_f64(&self, scope: &str, key: &str, default: f64) -> Result<f64> {
        match self.lookup(scope, key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| anyhow!("setting {scope}.{key} must be a number, got {raw:?}")),
        }
    }

    /// Comma-separated floats, e.g. `phi=0.5,-0.3`.
    pub fn get_f64_list(&self, scope: &str, key: &str) -> Result<Option<Vec<f64>>> {
        match self.lookup(scope, key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse()
                        .map_err(|_| anyhow!("setting {scope}.{key} must be comma-separated numbers, got {raw:?}"))
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some),
        }
    }

    /// Echo of every entry, for embedding in reports.
    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    /// Error out if any --set key was never read by the command.
    pub fn ensure_all_consumed(&self) -> Result<()> {
        let consumed = self.consumed.borrow();
        let unused: Vec<&String> =
            self.entries.keys().filter(|k| !consumed.contains(*k)).collect();
        if !unused.is_empty() {
            bail!("unknown --set key(s): {}", unused.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "));
        }
        Ok(())
    }
}
