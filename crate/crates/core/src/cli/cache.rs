//! Result cache: one JSON file per query fingerprint.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;

use super::output::{Record, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema_version: u32,
    pub fingerprint: String,
    pub op: String,
    pub params: Value,
    pub result: Value,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub elapsed_ms: u64,
}

impl CacheRecord {
    pub fn from_record(rec: &Record) -> CacheRecord {
        CacheRecord {
            schema_version: SCHEMA_VERSION,
            fingerprint: fingerprint(&rec.op, &rec.params),
            op: rec.op.clone(),
            params: rec.params.clone(),
            result: rec.result.clone(),
            version: rec.version.clone(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            elapsed_ms: rec.elapsed_ms,
        }
    }

    pub fn to_record(&self) -> Record {
        Record {
            schema_version: self.schema_version,
            op: self.op.clone(),
            params: self.params.clone(),
            result: self.result.clone(),
            elapsed_ms: self.elapsed_ms,
            version: self.version.clone(),
        }
    }
}

/// SHA-256 of the canonical `{"op", "params"}` JSON; the params carry the convention.
pub fn fingerprint(op: &str, params: &Value) -> String {
    let canonical = serde_json::to_string(&json!({ "op": op, "params": params })).expect("json");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, fp: &str) -> PathBuf {
        self.dir.join(format!("{fp}.json"))
    }

    /// A stored record for `(op, params)`, if any. Unreadable entries count as misses.
    pub fn load(&self, op: &str, params: &Value) -> Option<CacheRecord> {
        let fp = fingerprint(op, params);
        let text = fs::read_to_string(self.path(&fp)).ok()?;
        let rec: CacheRecord = serde_json::from_str(&text).ok()?;
        (rec.fingerprint == fp && rec.schema_version == SCHEMA_VERSION).then_some(rec)
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn store(&self, rec: &CacheRecord) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let target = self.path(&rec.fingerprint);
        let tmp = self.dir.join(format!(".{}.{}.tmp", rec.fingerprint, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(rec).expect("json").as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_depends_on_op_and_params() {
        let a = fingerprint("count", &json!({"n": 10, "convention": "equal"}));
        let b = fingerprint("count", &json!({"n": 10, "convention": "distinct"}));
        let c = fingerprint("strata", &json!({"n": 10, "convention": "equal"}));
        assert_eq!(a.len(), 64);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, fingerprint("count", &json!({"n": 10, "convention": "equal"})));
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let rec = Record::new("count", json!({"n": 4}), json!({"total": "9"}), 3);
        assert!(cache.load("count", &rec.params).is_none());
        cache.store(&CacheRecord::from_record(&rec)).unwrap();
        let hit = cache.load("count", &rec.params).unwrap();
        assert_eq!(hit.to_record(), rec);
        let leftovers = fs::read_dir(cache.dir()).unwrap().count();
        assert_eq!(leftovers, 1);
    }
}
