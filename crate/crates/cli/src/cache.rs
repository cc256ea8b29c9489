//! Content-addressed store of command outputs.
//!
//! Keys hash the input file bytes, the command and its parameters (and the
//! tool version). Only successful outputs are stored, so a hit is always the
//! byte-identical output of a fresh run.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

/// Environment variable that relocates the cache directory.
pub const CACHE_DIR_VAR: &str = "TANNAKA_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct ResultCache {
    dir: Option<PathBuf>,
}

impl ResultCache {
    /// A cache that never stores anything.
    pub fn disabled() -> ResultCache {
        ResultCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> ResultCache {
        ResultCache { dir: Some(dir.into()) }
    }

    /// `$TANNAKA_CACHE_DIR`, else `$XDG_CACHE_HOME/tannaka`, else `~/.cache/tannaka`.
    pub fn from_env() -> ResultCache {
        let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = var(CACHE_DIR_VAR)
            .or_else(|| var("XDG_CACHE_HOME").map(|d| d.join("tannaka")))
            .or_else(|| var("HOME").map(|d| d.join(".cache").join("tannaka")));
        ResultCache { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(input: &[u8], command: &str, params: &[String]) -> String {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update([0]);
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
        h.update(command.as_bytes());
        for p in params {
            h.update([0]);
            h.update(p.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(&key[..2]).join(format!("{key}.out")))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)?).ok()
    }

    /// Stores `value`; failures to write are ignored, the cache being an optimization.
    pub fn put(&self, key: &str, value: &str) {
        let Some(path) = self.path(key) else { return };
        let Some(parent) = path.parent() else { return };
        if fs::create_dir_all(parent).is_err() {
            return;
        }
        let tmp = parent.join(format!("{key}.{}.tmp", std::process::id()));
        let written = fs::File::create(&tmp).and_then(|mut f| f.write_all(value.as_bytes()));
        if written.is_err() || fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}
