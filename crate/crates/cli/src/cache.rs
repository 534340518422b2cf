//! Per-level result cache keyed by `(config digest, level)`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use towerlim::tower::{LevelData, LevelRecord, TowerEngine, TowerSpec};

use crate::VERSION;

/// The fields that determine level data; `n_max` and guards do not.
#[derive(Serialize)]
struct DigestInput<'a> {
    ell: u64,
    q: &'a [Vec<i64>],
    f: &'a [towerlim::tower::Term],
    precision: u32,
}

pub fn config_digest(spec: &TowerSpec) -> String {
    let input = DigestInput {
        ell: spec.ell,
        q: &spec.q,
        f: &spec.f,
        precision: spec.precision,
    };
    let canonical = serde_json::to_vec(&input).expect("digest input serializes");
    hex::encode(Sha256::digest(&canonical))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    digest: String,
    level: u32,
    record: LevelRecord,
}

pub struct Cache {
    dir: PathBuf,
    digest: String,
}

impl Cache {
    pub fn new(dir: &Path, digest: &str) -> Self {
        Cache {
            dir: dir.to_path_buf(),
            digest: digest.to_string(),
        }
    }

    fn path(&self, level: u32) -> PathBuf {
        self.dir.join(format!("{}-n{level}.json", self.digest))
    }

    /// A validated entry, or `None` for anything missing, stale or corrupt.
    pub fn load(&self, engine: &TowerEngine, level: u32) -> Option<LevelData> {
        let bytes = std::fs::read(self.path(level)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        if entry.version != VERSION || entry.digest != self.digest || entry.level != level {
            return None;
        }
        if entry.record.level != level {
            return None;
        }
        LevelData::from_record(&entry.record, engine.modulus()).ok()
    }

    pub fn store(&self, data: &LevelData) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            version: VERSION.to_string(),
            digest: self.digest.clone(),
            level: data.level,
            record: data.record(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(data.level)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Cache,
    Computed,
}

/// Make level `n` available in the engine, preferring a valid cache entry.
pub fn ensure_level(
    engine: &TowerEngine,
    cache: Option<&Cache>,
    n: u32,
) -> towerlim::Result<Source> {
    if let Some(c) = cache {
        if let Some(data) = c.load(engine, n) {
            if engine.insert_level(data).is_ok() {
                return Ok(Source::Cache);
            }
        }
    }
    let data = engine.level(n)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(&data) {
            eprintln!("warning: could not write cache entry for n={n}: {e}");
        }
    }
    Ok(Source::Computed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use towerlim::tower::Term;

    fn spec(n_max: u32) -> TowerSpec {
        TowerSpec::new(
            5,
            vec![vec![6]],
            vec![Term::scalar(vec![0], 1), Term::scalar(vec![1], 1)],
            n_max,
            Some(10),
        )
        .unwrap()
    }

    #[test]
    fn digest_ignores_n_max() {
        assert_eq!(config_digest(&spec(2)), config_digest(&spec(3)));
        let other = TowerSpec::new(5, vec![vec![11]], spec(2).f, 2, Some(10)).unwrap();
        assert_ne!(config_digest(&spec(2)), config_digest(&other));
    }

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let s = spec(2);
        let cache = Cache::new(dir.path(), &config_digest(&s));
        let eng = TowerEngine::new(s.clone()).unwrap();
        assert_eq!(ensure_level(&eng, Some(&cache), 2).unwrap(), Source::Computed);
        let fresh = TowerEngine::new(s.clone()).unwrap();
        assert_eq!(ensure_level(&fresh, Some(&cache), 2).unwrap(), Source::Cache);
        assert_eq!(fresh.r_poly(2).unwrap(), eng.r_poly(2).unwrap());

        // a tampered r_n is rejected by the engine and recomputed
        let path = cache.path(2);
        let mut entry: serde_json::Value =
            serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        let c1: u64 = entry["record"]["r_poly"][1].as_str().unwrap().parse().unwrap();
        entry["record"]["r_poly"][1] = serde_json::json!((c1 + 1).to_string());
        std::fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        let again = TowerEngine::new(s.clone()).unwrap();
        assert_eq!(ensure_level(&again, Some(&cache), 2).unwrap(), Source::Computed);

        // garbage and version mismatches are ignored
        std::fs::write(&path, b"{not json").unwrap();
        assert!(cache.load(&again, 2).is_none());
        entry["version"] = serde_json::json!("0.0.0-other");
        std::fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        assert!(cache.load(&again, 2).is_none());
    }
}
