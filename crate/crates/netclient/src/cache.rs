//! Append-only `query<TAB>E` count cache. On reload the last entry for a
//! query wins.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use crate::NetError;

#[derive(Debug, Default)]
pub struct CountCache {
    entries: Mutex<HashMap<String, u64>>,
    file: Option<Mutex<File>>,
}

impl CountCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn open(path: &Path) -> Result<Self, NetError> {
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (no, line) in reader.lines().enumerate() {
                let line = line?;
                if line.is_empty() {
                    continue;
                }
                let bad = |message: &str| NetError::Cache { line: no + 1, message: message.into() };
                let (query, count) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
                let count = count.parse().map_err(|_| bad("count is not an integer"))?;
                entries.insert(query.to_owned(), count);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { entries: Mutex::new(entries), file: Some(Mutex::new(file)) })
    }

    pub fn get(&self, query: &str) -> Option<u64> {
        self.entries.lock().unwrap().get(query).copied()
    }

    pub fn insert(&self, query: &str, count: u64) -> Result<(), NetError> {
        if let Some(file) = &self.file {
            let mut f = file.lock().unwrap();
            writeln!(f, "{query}\t{count}")?;
            f.flush()?;
        }
        self.entries.lock().unwrap().insert(query.to_owned(), count);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persists_and_last_entry_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.tsv");
        {
            let cache = CountCache::open(&path).unwrap();
            cache.insert("abc", 3).unwrap();
            cache.insert("xyz", 0).unwrap();
            cache.insert("abc", 5).unwrap();
        }
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "abc\t3\nxyz\t0\nabc\t5\n");
        let cache = CountCache::open(&path).unwrap();
        assert_eq!(cache.get("abc"), Some(5));
        assert_eq!(cache.get("xyz"), Some(0));
        assert_eq!(cache.get("nope"), None);
    }

    #[test]
    fn malformed_line_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.tsv");
        std::fs::write(&path, "abc\t3\nbroken\n").unwrap();
        assert!(matches!(CountCache::open(&path), Err(NetError::Cache { line: 2, .. })));
    }
}
