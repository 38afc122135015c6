//! On-disk cache of computed zero tables, keyed by range, grid step and the
//! number of Riemann-Siegel correction terms.

use std::fs;
use std::path::{Path, PathBuf};

use zetaline::io::{decode, save_zero_table};
use zetaline::zeros::default_grid_step;
use zetaline::{scan_zeros, verify_completeness, EvalConfig, Result, Source, ZeroTable};

pub const CACHE_ENV: &str = "ZETALINE_CACHE_DIR";

/// Flag, then environment, then a directory under the system temp dir.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => std::env::temp_dir().join("zetaline-cache"),
    }
}

/// Rounds up to two significant digits so nearby requests share a table.
pub fn canonical_height(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return x;
    }
    let p = 10f64.powf(x.log10().floor() - 1.0);
    (x / p).ceil() * p
}

pub struct TableCache {
    dir: Option<PathBuf>,
    cfg: EvalConfig,
    pub warnings: Vec<String>,
}

impl TableCache {
    /// `dir = None` disables persistence.
    pub fn new(dir: Option<PathBuf>, cfg: EvalConfig) -> Self {
        Self {
            dir,
            cfg,
            warnings: Vec::new(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn config(&self) -> &EvalConfig {
        &self.cfg
    }

    fn path_for(&self, dir: &Path, lo: f64, hi: f64, step: f64) -> PathBuf {
        dir.join(format!(
            "zeros-{:016x}-{:016x}-{:016x}-r{}.ztbl",
            lo.to_bits(),
            hi.to_bits(),
            step.to_bits(),
            self.cfg.rs_corrections
        ))
    }

    fn load(&self, path: &Path) -> Option<ZeroTable> {
        let bytes = fs::read(path).ok()?;
        let (header, ords) = decode(&bytes).ok()?;
        if header.source_label != Source::Computed.as_str() {
            return None;
        }
        let mut table = ZeroTable::new(header.range_lo, header.range_hi, ords, Source::Computed).ok()?;
        table.complete = verify_completeness(&table).passed;
        table.complete.then_some(table)
    }

    /// Zeros in `(lo, hi]`, from the cache when present.
    pub fn zeros(&mut self, lo: f64, hi: f64, step: Option<f64>) -> Result<ZeroTable> {
        let step = step.unwrap_or_else(|| default_grid_step(hi));
        let path = self.dir.as_ref().map(|d| self.path_for(d, lo, hi, step));
        if let Some(table) = path.as_deref().and_then(|p| self.load(p)) {
            return Ok(table);
        }
        let table = scan_zeros(lo, hi, &self.cfg, Some(step))?;
        if let (Some(dir), Some(path)) = (&self.dir, &path) {
            let saved = fs::create_dir_all(dir)
                .map_err(Into::into)
                .and_then(|_| save_zero_table(&table, path));
            if let Err(e) = saved {
                self.warnings
                    .push(format!("could not write cache {}: {e}", path.display()));
            }
        }
        Ok(table)
    }

    /// A complete table from 0 through at least `needed`.
    pub fn zeros_through(&mut self, needed: f64) -> Result<ZeroTable> {
        self.zeros(0.0, canonical_height(needed), None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_heights() {
        assert_eq!(canonical_height(1010.0), 1100.0);
        assert_eq!(canonical_height(100_010.0), 110_000.0);
        assert_eq!(canonical_height(25.0), 25.0);
        assert_eq!(canonical_height(1911.0), 2000.0);
    }

    #[test]
    fn second_request_is_served_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let mut cache = TableCache::new(Some(dir.path().to_path_buf()), EvalConfig::default());
        let first = cache.zeros(0.0, 120.0, None).unwrap();
        let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 1);
        let second = cache.zeros(0.0, 120.0, None).unwrap();
        assert_eq!(first, second);
        assert!(second.complete && second.source == Source::Computed);
    }

    #[test]
    fn corrupt_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let mut cache = TableCache::new(Some(dir.path().to_path_buf()), EvalConfig::default());
        let first = cache.zeros(0.0, 60.0, None).unwrap();
        let path = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
        let mut bytes = fs::read(&path).unwrap();
        bytes[40] ^= 0xff;
        fs::write(&path, bytes).unwrap();
        assert_eq!(cache.zeros(0.0, 60.0, None).unwrap(), first);
    }

    #[test]
    fn flag_beats_environment() {
        // the only test in this crate that touches the variable
        std::env::set_var(CACHE_ENV, "/from/env");
        assert_eq!(resolve_dir(None), PathBuf::from("/from/env"));
        assert_eq!(resolve_dir(Some(Path::new("/x/y"))), PathBuf::from("/x/y"));
        std::env::remove_var(CACHE_ENV);
        assert_eq!(resolve_dir(None), std::env::temp_dir().join("zetaline-cache"));
    }
}
