//! On-disk cache: one directory per (family, parameter) holding `group.bin`,
//! `chartab.json` and `meta.json`. Entries are invalidated when the schema or
//! engine version changes. A lock file serializes writers.

use std::fs;
use std::path::{Path, PathBuf};

use whitney::chartab::{dixon_table, io as chartab_io, CharacterTable};
use whitney::error::{Error, Result};
use whitney::group::{GroupData, GroupSpec};

const META_SCHEMA: u32 = 1;

pub struct Cache {
    dir: PathBuf,
}

pub struct LockGuard {
    path: PathBuf,
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn spec_label(spec: &GroupSpec) -> String {
    match *spec {
        GroupSpec::Cyclic { n } => format!("cyclic-{n}"),
        GroupSpec::CyclicPower { n, k } => format!("cyclic_power-{n}x{k}"),
        _ => format!("{}-{}", spec.family_name(), spec.q().unwrap_or(0)),
    }
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    fn entry_dir(&self, spec: &GroupSpec) -> PathBuf {
        self.dir.join(spec_label(spec))
    }

    /// Exclusive writer lock for the whole cache directory.
    pub fn lock(&self) -> Result<LockGuard> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(".lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(LockGuard { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(Error::ImportRejected(format!(
                    "cache is locked by another process (remove {} if stale)",
                    path.display()
                )))
            }
            Err(e) => Err(e.into()),
        }
    }

    fn meta_ok(&self, dir: &Path, spec: &GroupSpec) -> bool {
        let Ok(text) = fs::read_to_string(dir.join("meta.json")) else {
            return false;
        };
        let Ok(meta) = serde_json::from_str::<serde_json::Value>(&text) else {
            return false;
        };
        meta["schema_version"] == META_SCHEMA
            && meta["engine_version"] == env!("CARGO_PKG_VERSION")
            && meta["label"] == spec_label(spec).as_str()
    }

    fn write_meta(&self, dir: &Path, spec: &GroupSpec) -> Result<()> {
        let meta = serde_json::json!({
            "schema_version": META_SCHEMA,
            "engine_version": env!("CARGO_PKG_VERSION"),
            "label": spec_label(spec),
        });
        fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    pub fn load_group(&self, spec: &GroupSpec) -> Option<GroupData> {
        let dir = self.entry_dir(spec);
        if !self.meta_ok(&dir, spec) {
            return None;
        }
        let bytes = fs::read(dir.join("group.bin")).ok()?;
        GroupData::from_cache_bytes(&bytes).ok()
    }

    pub fn load_or_build_group(&self, spec: GroupSpec, budget: u64) -> Result<GroupData> {
        if let Some(g) = self.load_group(&spec) {
            return Ok(g);
        }
        let g = GroupData::build_with_budget(spec, budget)?;
        let _guard = self.lock()?;
        let dir = self.entry_dir(&spec);
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("group.bin"), g.to_cache_bytes())?;
        self.write_meta(&dir, &spec)?;
        Ok(g)
    }

    pub fn load_table(&self, spec: &GroupSpec) -> Option<CharacterTable> {
        let dir = self.entry_dir(spec);
        if !self.meta_ok(&dir, spec) {
            return None;
        }
        let text = fs::read_to_string(dir.join("chartab.json")).ok()?;
        chartab_io::import_json(&text).ok()
    }

    pub fn load_or_compute_table(
        &self,
        spec: GroupSpec,
        budget: u64,
    ) -> Result<CharacterTable> {
        if let Some(t) = self.load_table(&spec) {
            return Ok(t);
        }
        let g = self.load_or_build_group(spec, budget)?;
        let t = dixon_table(&g)?;
        self.store_table(&t)?;
        Ok(t)
    }

    pub fn store_table(&self, t: &CharacterTable) -> Result<PathBuf> {
        let _guard = self.lock()?;
        let dir = self.entry_dir(&t.group);
        fs::create_dir_all(&dir)?;
        let path = dir.join("chartab.json");
        fs::write(&path, chartab_io::export_json(t))?;
        self.write_meta(&dir, &t.group)?;
        Ok(path)
    }
}
