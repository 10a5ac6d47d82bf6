//! Persistent cache of constructed CG isometries, keyed by (d, k).
//!
//! Entries live under `$SCHUR_CG_CACHE_DIR` (default `.schur-cg-cache/` in
//! the working directory) in the same JSON format as `export-cg` output and
//! are re-verified on load, so a corrupted entry aborts with a message
//! naming the file instead of silently feeding bad coefficients into a run.
//! Writes go through a temporary file and rename, so concurrent
//! invocations never observe partial entries.

use std::path::PathBuf;

use schur_compress::{build_cg_symmetric, compressor::preload_isometry, CgIsometry};

use crate::formats::MatrixFile;
use crate::{CliError, CliResult};

pub const CACHE_DIR_ENV: &str = "SCHUR_CG_CACHE_DIR";
const DEFAULT_DIR: &str = ".schur-cg-cache";

/// Entries larger than this are rebuilt per run instead of cached; the
/// dense JSON form grows quadratically in the register size.
const MAX_CACHED_ENTRIES: usize = 1 << 18;

pub fn cache_dir() -> PathBuf {
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(DEFAULT_DIR),
    }
}

pub fn isometry_path(d: usize, k: usize) -> PathBuf {
    cache_dir().join(format!("cg_d{d}_k{k}_isometry.json"))
}

/// Loads the step-k isometry from the cache, building and storing it on a
/// miss. The result is also seeded into the in-run cache used by
/// `compress`.
pub fn load_or_build(d: usize, k: usize) -> CliResult<CgIsometry> {
    let path = isometry_path(d, k);
    if path.exists() {
        let w = MatrixFile::load(&path)?.to_isometry().map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!(
                "cache entry {} is corrupt ({msg}); delete it and retry",
                path.display()
            )),
            other => other,
        })?;
        if w.d() != d || w.k() != k {
            return Err(CliError::Usage(format!(
                "cache entry {} holds (d={}, k={}), expected (d={d}, k={k})",
                path.display(),
                w.d(),
                w.k()
            )));
        }
        preload_isometry(w.clone());
        return Ok(w);
    }
    let w = build_cg_symmetric(d, k).map_err(|e| CliError::Usage(e.to_string()))?;
    store(&w)?;
    preload_isometry(w.clone());
    Ok(w)
}

/// Seeds the in-run cache with every isometry a length-n cascade needs.
pub fn warm_for_cascade(d: usize, n: usize) -> CliResult<()> {
    for k in 1..n {
        load_or_build(d, k)?;
    }
    Ok(())
}

fn store(w: &CgIsometry) -> CliResult<()> {
    if w.rows() * w.cols() > MAX_CACHED_ENTRIES {
        return Ok(());
    }
    let dir = cache_dir();
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let file = MatrixFile::from_isometry(w);
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    text.push('\n');
    let tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| CliError::Usage(format!("cannot create temp file in {}: {e}", dir.display())))?;
    std::fs::write(tmp.path(), text)
        .map_err(|e| CliError::Usage(format!("cannot write cache entry: {e}")))?;
    let path = isometry_path(w.d(), w.k());
    tmp.persist(&path)
        .map_err(|e| CliError::Usage(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}
