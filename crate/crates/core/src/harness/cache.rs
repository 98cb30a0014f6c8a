//! Line-delimited JSON cache of per-discriminant oracle values.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CacheRecord {
    pub D: i64,
    pub cl3: u64,
    pub i3: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_proj: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_proj_red: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_irred_total: Option<u64>,
    pub schema_version: u32,
}

impl CacheRecord {
    pub fn new(d: i64, cl3: u64, i3: u64) -> Self {
        CacheRecord {
            D: d,
            cl3,
            i3,
            n_proj: None,
            n_proj_red: None,
            n_irred_total: None,
            schema_version: SCHEMA_VERSION,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema_version: u32,
}

/// Records keyed by D. The first line is a header; a truncated or corrupt
/// tail is dropped when the file is opened.
pub struct Cache {
    path: PathBuf,
    records: BTreeMap<i64, CacheRecord>,
    writer: Option<BufWriter<File>>,
}

impl Cache {
    pub fn open(path: impl AsRef<Path>) -> Result<Cache> {
        let path = path.as_ref().to_path_buf();
        let mut records = BTreeMap::new();
        let mut good_len = 0u64;
        let mut fresh = true;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            let mut offset = 0u64;
            for (i, line) in reader.split(b'\n').enumerate() {
                let line = line?;
                let end = offset + line.len() as u64 + 1;
                if i == 0 {
                    match serde_json::from_slice::<Header>(&line) {
                        Ok(h) if h.schema_version == SCHEMA_VERSION => {}
                        Ok(h) => {
                            return Err(Error::Cache(format!(
                                "{} has schema version {}, expected {SCHEMA_VERSION}",
                                path.display(),
                                h.schema_version
                            )))
                        }
                        Err(_) => break,
                    }
                    fresh = false;
                } else {
                    match serde_json::from_slice::<CacheRecord>(&line) {
                        Ok(r) if r.schema_version == SCHEMA_VERSION => {
                            records.insert(r.D, r);
                        }
                        _ => break,
                    }
                }
                offset = end;
                good_len = end;
            }
            let file_len = std::fs::metadata(&path)?.len();
            if good_len < file_len {
                OpenOptions::new().write(true).open(&path)?.set_len(good_len)?;
            }
        }
        let mut cache = Cache { path, records, writer: None };
        if fresh {
            let mut w = BufWriter::new(File::create(&cache.path)?);
            serde_json::to_writer(&mut w, &Header { schema_version: SCHEMA_VERSION })?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        cache.writer = Some(BufWriter::new(OpenOptions::new().append(true).open(&cache.path)?));
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, d: i64) -> Option<&CacheRecord> {
        self.records.get(&d)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.records.values()
    }

    /// Appends a record unless an identical one is present.
    pub fn insert(&mut self, r: CacheRecord) -> Result<()> {
        if self.records.get(&r.D) == Some(&r) {
            return Ok(());
        }
        let w = self.writer.as_mut().expect("cache writer");
        serde_json::to_writer(&mut *w, &r)?;
        w.write_all(b"\n")?;
        self.records.insert(r.D, r);
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        if let Some(w) = self.writer.as_mut() {
            w.flush()?;
        }
        Ok(())
    }
}

impl Drop for Cache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}
