use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::Settings;
use crate::error::{CliError, Result};

/// Writes `contents` to a temporary file next to `path`, then renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Where a command's files go, and which ones it wrote.
#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    pub fn new(dir: PathBuf) -> Self {
        Self { dir, written: Vec::new() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, contents)?;
        self.written.push(name.to_string());
        Ok(path)
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Seed, config hash, toolkit version, and wall-clock time. Only
/// `wall_clock_seconds` varies between identical runs.
pub fn provenance(settings: &Settings, seed: Option<u64>, seconds: f64) -> Value {
    serde_json::json!({
        "config": settings.entries(),
        "config_hash": settings.hash(),
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_clock_seconds": seconds,
    })
}

/// Drops the timing field so that two reports can be compared byte for byte.
pub fn strip_timing(mut report: Value) -> Value {
    if let Some(p) = report.get_mut("provenance").and_then(Value::as_object_mut) {
        p.remove("wall_clock_seconds");
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/a.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path().join("sub")).unwrap().count(), 1);
    }

    #[test]
    fn timing_is_stripped() {
        let s = Settings::default();
        let a = serde_json::json!({"provenance": provenance(&s, Some(1), 0.5)});
        let b = serde_json::json!({"provenance": provenance(&s, Some(1), 9.0)});
        assert_ne!(a, b);
        assert_eq!(strip_timing(a), strip_timing(b));
    }
}
