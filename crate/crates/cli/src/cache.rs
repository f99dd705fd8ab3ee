//! On-disk Euler-factor cache: one JSON file `k{K}_p{P}.json` per pair.
//!
//! Integers are stored as decimal strings. Every entry is re-verified on
//! load, and writes go through a temporary file in the same directory
//! followed by a rename, so concurrent writers never expose partial files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use symkl::{verify_record, EulerFactorRecord, FactorRoute, IntPolynomial};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "SYMKL_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub k: u32,
    pub p: u64,
    pub z: Vec<String>,
    pub r: Vec<String>,
    pub m: Vec<String>,
    pub moments: Vec<String>,
    pub route: String,
    pub checks: BTreeMap<String, bool>,
    /// Unix seconds.
    pub created_at: u64,
    pub code_version: String,
}

fn digits(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(BigInt::to_string).collect()
}

fn parse_ints(xs: &[String], field: &str) -> Result<Vec<BigInt>, String> {
    xs.iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| format!("{field}: `{s}` is not an integer")))
        .collect()
}

pub fn route_name(route: FactorRoute) -> &'static str {
    match route {
        FactorRoute::Enumerated => "enumerated",
        FactorRoute::Reciprocity => "reciprocity",
    }
}

impl CacheEntry {
    pub fn from_record(record: &EulerFactorRecord, created_at: u64) -> Self {
        CacheEntry {
            schema_version: SCHEMA_VERSION,
            k: record.k,
            p: record.p,
            z: digits(record.z.coeffs()),
            r: digits(record.r.coeffs()),
            m: digits(record.m.coeffs()),
            moments: digits(&record.moments),
            route: route_name(record.route).to_string(),
            checks: record.checks.clone(),
            created_at,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_record(&self) -> Result<EulerFactorRecord, String> {
        let route = match self.route.as_str() {
            "enumerated" => FactorRoute::Enumerated,
            "reciprocity" => FactorRoute::Reciprocity,
            other => return Err(format!("unknown route `{other}`")),
        };
        Ok(EulerFactorRecord {
            k: self.k,
            p: self.p,
            z: IntPolynomial::new(parse_ints(&self.z, "z")?),
            r: IntPolynomial::new(parse_ints(&self.r, "r")?),
            m: IntPolynomial::new(parse_ints(&self.m, "m")?),
            moments: parse_ints(&self.moments, "moments")?,
            route,
            checks: self.checks.clone(),
        })
    }

    /// Sorted-key JSON without `created_at`.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("entry serializes");
        v.as_object_mut().expect("entry is an object").remove("created_at");
        v.to_string()
    }
}

pub fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$SYMKL_CACHE_DIR`, else `$XDG_CACHE_HOME/symkl`, else
    /// `$HOME/.cache/symkl`, else `./.symkl-cache`.
    pub fn default_dir() -> PathBuf {
        let var = |name: &str| std::env::var_os(name).filter(|v| !v.is_empty()).map(PathBuf::from);
        if let Some(d) = var(CACHE_ENV) {
            return d;
        }
        if let Some(d) = var("XDG_CACHE_HOME") {
            return d.join("symkl");
        }
        if let Some(h) = var("HOME") {
            return h.join(".cache").join("symkl");
        }
        PathBuf::from(".symkl-cache")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, k: u32, p: u64) -> PathBuf {
        self.dir.join(format!("k{k}_p{p}.json"))
    }

    /// The verified record, or `None` when absent or written under another schema.
    pub fn load(&self, k: u32, p: u64) -> CliResult<Option<EulerFactorRecord>> {
        let path = self.path(k, p);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CliError::Io { path, source }),
        };
        let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Corrupt {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        if raw.get("schema_version").and_then(|v| v.as_u64()) != Some(SCHEMA_VERSION as u64) {
            return Ok(None);
        }
        let corrupt = |reason: String| CliError::Corrupt {
            path: path.clone(),
            reason,
        };
        let entry: CacheEntry = serde_json::from_value(raw).map_err(|e| corrupt(e.to_string()))?;
        if (entry.k, entry.p) != (k, p) {
            return Err(corrupt(format!("holds k={} p={}", entry.k, entry.p)));
        }
        let record = entry.to_record().map_err(corrupt)?;
        verify_record(&record).map_err(|source| CliError::Stale {
            path: path.clone(),
            source,
        })?;
        Ok(Some(record))
    }

    pub fn store(&self, record: &EulerFactorRecord) -> CliResult<PathBuf> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        let path = self.path(record.k, record.p);
        let entry = CacheEntry::from_record(record, now_secs());
        let mut text = serde_json::to_string_pretty(&entry).expect("entry serializes");
        text.push('\n');
        let tmp = self.dir.join(format!(
            ".k{}_p{}.{}.{}.tmp",
            record.k,
            record.p,
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, text).map_err(io(&tmp))?;
        fs::rename(&tmp, &path).map_err(|source| {
            let _ = fs::remove_file(&tmp);
            CliError::Io {
                path: path.clone(),
                source,
            }
        })?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symkl::{euler_record, MomentTable, RecordOptions};

    #[test]
    fn entry_round_trips() {
        let rec = euler_record(5, &MomentTable::new(7, 5), RecordOptions::default()).unwrap();
        let entry = CacheEntry::from_record(&rec, 17);
        let json = serde_json::to_string(&entry).unwrap();
        let back: CacheEntry = serde_json::from_str(&json).unwrap();
        assert_eq!(back, entry);
        assert_eq!(back.to_record().unwrap(), rec);
        assert!(!entry.canonical_json().contains("created_at"));
        assert_eq!(entry.canonical_json(), CacheEntry::from_record(&rec, 99).canonical_json());
    }
}
