//! Append-only JSON-lines result cache.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use strutforge::{Mode, Space};

use crate::record::ResultRecord;

pub const CACHE_ENV: &str = "STRUTFORGE_CACHE_DIR";
pub const CACHE_FILE: &str = "results.jsonl";

#[derive(Clone, Debug)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    /// Directory precedence: explicit flag, then `STRUTFORGE_CACHE_DIR`, then `./cache`.
    pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
        match flag {
            Some(dir) => dir.to_path_buf(),
            None => std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from("cache"), PathBuf::from),
        }
    }

    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { path: dir.join(CACHE_FILE) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// First record for the key written by this tool version. Lines that fail
    /// to parse (for instance a torn final write) are skipped.
    pub fn lookup(&self, mode: Mode, space: Space, k: u8) -> Result<Option<ResultRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).with_context(|| format!("reading {}", self.path.display())),
        };
        for line in BufReader::new(file).lines() {
            let line = line.with_context(|| format!("reading {}", self.path.display()))?;
            if let Ok(rec) = serde_json::from_str::<ResultRecord>(&line) {
                if rec.matches(mode, space, k) {
                    return Ok(Some(rec));
                }
            }
        }
        Ok(None)
    }

    pub fn append(&self, rec: &ResultRecord) -> Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        let mut line = String::new();
        if !ends_with_newline(&mut file)? {
            line.push('\n');
        }
        line.push_str(&serde_json::to_string(rec)?);
        line.push('\n');
        file.write_all(line.as_bytes())?;
        file.flush()?;
        Ok(())
    }
}

fn ends_with_newline(file: &mut File) -> Result<bool> {
    let len = file.seek(SeekFrom::End(0))?;
    if len == 0 {
        return Ok(true);
    }
    file.seek(SeekFrom::End(-1))?;
    let mut last = [0u8; 1];
    file.read_exact(&mut last)?;
    Ok(last[0] == b'\n')
}
