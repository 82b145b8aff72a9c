//! Append-only JSON-lines result cache.
//!
//! The file stays exclusively locked from open until the handle is dropped,
//! so a lookup, the computation and the append happen as one unit.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use zswlab::search::SearchStats;
use zswlab::{ConstantKind, Residue, SOLVER_VERSION};

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub n: u32,
    pub a: Vec<Residue>,
    pub b: Vec<Residue>,
    pub kind: ConstantKind,
    pub value: usize,
    pub witness: Vec<Residue>,
    pub solver_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub stats: SearchStats,
}

impl CacheEntry {
    pub fn new(
        n: u32,
        a: Vec<Residue>,
        b: Vec<Residue>,
        kind: ConstantKind,
        value: usize,
        witness: Vec<Residue>,
        stats: SearchStats,
    ) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CacheEntry {
            schema_version: CACHE_SCHEMA_VERSION,
            n,
            a,
            b,
            kind,
            value,
            witness,
            solver_version: SOLVER_VERSION.to_string(),
            timestamp,
            stats,
        }
    }

    fn matches(&self, n: u32, a: &[Residue], b: &[Residue], kind: ConstantKind) -> bool {
        self.schema_version == CACHE_SCHEMA_VERSION
            && self.solver_version == SOLVER_VERSION
            && self.n == n
            && self.a == a
            && self.b == b
            && self.kind == kind
    }
}

pub struct Cache {
    path: PathBuf,
    file: File,
}

impl Cache {
    pub fn open(path: &Path) -> std::io::Result<Cache> {
        let file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        file.lock()?;
        Ok(Cache {
            path: path.to_path_buf(),
            file,
        })
    }

    /// The first entry for this key written by the current solver version.
    pub fn lookup(
        &mut self,
        n: u32,
        a: &[Residue],
        b: &[Residue],
        kind: ConstantKind,
    ) -> std::io::Result<Option<CacheEntry>> {
        self.file.seek(SeekFrom::Start(0))?;
        let reader = BufReader::new(&self.file);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheEntry>(&line) {
                Ok(e) if e.matches(n, a, b, kind) => return Ok(Some(e)),
                Ok(_) => {}
                Err(err) => eprintln!(
                    "warning: skipping malformed cache line {} in {}: {err}",
                    i + 1,
                    self.path.display()
                ),
            }
        }
        Ok(None)
    }

    pub fn append(&mut self, entry: &CacheEntry) -> std::io::Result<()> {
        let mut line = serde_json::to_string(entry).map_err(std::io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(kind: ConstantKind, value: usize) -> CacheEntry {
        CacheEntry::new(5, vec![1, 4], vec![1], kind, value, vec![0, 1], SearchStats::default())
    }

    #[test]
    fn append_then_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let mut c = Cache::open(&path).unwrap();
            assert_eq!(c.lookup(5, &[1, 4], &[1], ConstantKind::D).unwrap(), None);
            c.append(&entry(ConstantKind::D, 4)).unwrap();
        }
        let mut c = Cache::open(&path).unwrap();
        let hit = c.lookup(5, &[1, 4], &[1], ConstantKind::D).unwrap().unwrap();
        assert_eq!(hit.value, 4);
        assert_eq!(c.lookup(5, &[1, 4], &[1], ConstantKind::C).unwrap(), None);
        assert_eq!(c.lookup(5, &[1, 4], &[0], ConstantKind::D).unwrap(), None);
    }

    #[test]
    fn malformed_lines_and_other_versions_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let mut old = entry(ConstantKind::D, 99);
        old.solver_version = "0.0.0-old".into();
        let body = format!(
            "{{truncated\n{}\n\n{}\n",
            serde_json::to_string(&old).unwrap(),
            serde_json::to_string(&entry(ConstantKind::D, 4)).unwrap()
        );
        std::fs::write(&path, body).unwrap();
        let mut c = Cache::open(&path).unwrap();
        assert_eq!(c.lookup(5, &[1, 4], &[1], ConstantKind::D).unwrap().unwrap().value, 4);
    }
}
