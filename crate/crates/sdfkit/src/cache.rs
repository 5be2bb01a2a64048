//! Append-only JSON-lines cache of search results (`fcache.jsonl`).
//!
//! One record per modulus: `{"m":…,"F":…,"exact":…,"witness":[…]}`. The
//! cache is consulted before searching; an exact record always wins over a
//! budget-capped one.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::search::SearchResult;
use crate::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheRecord {
    pub m: u64,
    #[serde(rename = "F")]
    pub f: usize,
    pub exact: bool,
    pub witness: Vec<u64>,
}

impl CacheRecord {
    pub fn from_result(r: &SearchResult) -> Self {
        CacheRecord {
            m: r.m,
            f: r.size,
            exact: r.exact,
            witness: r.best_set.clone(),
        }
    }
}

/// File-backed cache. Loaded fully at open; appends go straight to disk.
#[derive(Debug)]
pub struct FCache {
    path: PathBuf,
    records: BTreeMap<u64, CacheRecord>,
}

impl FCache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records: BTreeMap<u64, CacheRecord> = BTreeMap::new();
        if path.exists() {
            let file = std::fs::File::open(&path)?;
            for line in BufReader::new(file).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line)?;
                // Later lines refine earlier ones, but an exact record is
                // never displaced by an inexact one.
                let keep = match records.get(&rec.m) {
                    Some(old) => !(old.exact && !rec.exact),
                    None => true,
                };
                if keep {
                    records.insert(rec.m, rec);
                }
            }
        }
        Ok(FCache { path, records })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, m: u64) -> Option<&CacheRecord> {
        self.records.get(&m)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn append(&mut self, rec: CacheRecord) -> Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let line = serde_json::to_string(&rec)?;
        writeln!(file, "{line}")?;
        self.records.insert(rec.m, rec);
        Ok(())
    }
}
