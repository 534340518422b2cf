//! Experiment configuration files (TOML).
//!
//! ```toml
//! ell = 3
//! b = 2
//! r = 1
//! q = [4, 0, 3, 4]        # row-major b×b
//! n_max = 3
//! precision = 12          # optional, defaults to b·n_max + 6
//! cache_dir = "cache"     # optional, relative to the config file
//!
//! [guards]                # optional
//! orbit_cap = 10000000
//! field_cap = 10000000
//!
//! [[f]]
//! exponents = [0, 0]
//! matrix = [1]            # row-major r×r
//!
//! [[f]]
//! exponents = [3, 1]
//! matrix = [1]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use towerlim::char_sums::FIELD_GUARD;
use towerlim::tower::spec::DEFAULT_ORBIT_CAP;
use towerlim::tower::{Term, TowerSpec};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub exponents: Vec<i64>,
    pub matrix: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Guards {
    #[serde(default = "default_orbit_cap")]
    pub orbit_cap: u64,
    #[serde(default = "default_field_cap")]
    pub field_cap: u64,
}

fn default_orbit_cap() -> u64 {
    DEFAULT_ORBIT_CAP
}

fn default_field_cap() -> u64 {
    FIELD_GUARD
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            orbit_cap: DEFAULT_ORBIT_CAP,
            field_cap: FIELD_GUARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ell: u64,
    pub b: usize,
    pub r: usize,
    pub q: Vec<i64>,
    pub f: Vec<TermConfig>,
    pub n_max: u32,
    pub precision: Option<u32>,
    #[serde(default)]
    pub guards: Guards,
    pub cache_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        if let Some(dir) = &cfg.cache_dir {
            if dir.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.cache_dir = Some(base.join(dir));
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.check_shapes()?;
        Ok(cfg)
    }

    fn check_shapes(&self) -> Result<(), String> {
        if self.b == 0 || self.r == 0 {
            return Err("field `b` and field `r` must be positive".into());
        }
        if self.q.len() != self.b * self.b {
            return Err(format!(
                "field `q`: expected {} entries (b×b row-major), found {}",
                self.b * self.b,
                self.q.len()
            ));
        }
        if self.f.is_empty() {
            return Err("field `f`: at least one term is required".into());
        }
        for (i, t) in self.f.iter().enumerate() {
            if t.exponents.len() != self.b {
                return Err(format!(
                    "field `f[{i}].exponents`: expected {} entries, found {}",
                    self.b,
                    t.exponents.len()
                ));
            }
            if t.matrix.len() != self.r * self.r {
                return Err(format!(
                    "field `f[{i}].matrix`: expected {} entries (r×r row-major), found {}",
                    self.r * self.r,
                    t.matrix.len()
                ));
            }
        }
        if self.guards.field_cap > FIELD_GUARD {
            return Err(format!(
                "field `guards.field_cap`: at most {FIELD_GUARD} is supported"
            ));
        }
        Ok(())
    }

    fn rows(flat: &[i64], size: usize) -> Vec<Vec<i64>> {
        flat.chunks(size).map(|c| c.to_vec()).collect()
    }

    /// The engine spec, with `n_max` optionally overridden.
    pub fn tower_spec(&self, n_max: Option<u32>) -> Result<TowerSpec, CliError> {
        let f = self
            .f
            .iter()
            .map(|t| Term {
                exponents: t.exponents.clone(),
                matrix: Self::rows(&t.matrix, self.r),
            })
            .collect();
        let spec = TowerSpec::new(
            self.ell,
            Self::rows(&self.q, self.b),
            f,
            n_max.unwrap_or(self.n_max),
            self.precision,
        )?;
        Ok(spec.with_orbit_cap(self.guards.orbit_cap))
    }

    /// `TOWERLIM_CACHE` wins over the config field.
    pub fn cache_dir(&self) -> Option<PathBuf> {
        match std::env::var_os("TOWERLIM_CACHE") {
            Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
            _ => self.cache_dir.clone(),
        }
    }
}
