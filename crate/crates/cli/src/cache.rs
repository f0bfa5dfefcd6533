//! On-disk memo of vtm prefixes, one file per length.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use vtm_core::{vtm_prefix, Word};

pub const CACHE_ENV: &str = "VTM_CACHE_DIR";

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("vtm-prefix-cache"))
}

/// The vtm prefix of length `len`, read from the cache when a valid entry
/// exists and written back otherwise. Cache failures fall back to
/// generating in memory.
pub fn cached_vtm_prefix(len: usize) -> Word {
    let dir = cache_dir();
    let path = dir.join(format!("vtm-{len}.txt"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(w) = Word::parse(text.trim_end(), 3) {
            if w.len() == len {
                return w;
            }
        }
    }
    let w = vtm_prefix(len);
    let _ = store(&dir, &path, &w);
    w
}

fn store(dir: &std::path::Path, path: &std::path::Path, w: &Word) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(w.to_line().as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
