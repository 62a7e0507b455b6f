//! Content-addressed report cache. One file per request, named by the
//! SHA-256 of the request's JSON, written via a temporary file and rename.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fraisse_core::report::Report;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::request::Request;

#[derive(Serialize, Deserialize)]
pub struct Entry {
    pub request: Request,
    pub report: Report,
}

pub struct Cache {
    dir: PathBuf,
}

pub fn key(request: &Request) -> String {
    let bytes = serde_json::to_vec(request).expect("serializable");
    format!("{:x}", Sha256::digest(&bytes))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, request: &Request) -> Option<Report> {
        let text = fs::read_to_string(self.path(&key(request))).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        let same = serde_json::to_value(&entry.request).ok()? == serde_json::to_value(request).ok()?;
        same.then_some(entry.report)
    }

    pub fn put(&self, request: &Request, report: &Report) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry { request: request.clone(), report: report.clone() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(&key(request))).map_err(|e| e.error)?;
        Ok(())
    }

    /// Keys of all entries, sorted.
    pub fn keys(&self) -> io::Result<Vec<String>> {
        let mut keys = Vec::new();
        match fs::read_dir(&self.dir) {
            Ok(rd) => {
                for e in rd {
                    let name = e?.file_name().to_string_lossy().into_owned();
                    if let Some(k) = name.strip_suffix(".json") {
                        keys.push(k.to_string());
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        keys.sort();
        Ok(keys)
    }

    pub fn load(&self, key: &str) -> io::Result<Entry> {
        let text = fs::read_to_string(self.path(key))?;
        serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }
}

/// Flag, then environment (handled by the argument parser), then the
/// per-user data directory.
pub fn default_dir() -> Option<PathBuf> {
    dirs::data_dir().map(|d| d.join("fraisse").join("cache"))
}
