//! On-disk cache of fitted tensors.
//!
//! Entries are JSON files named by the pair, the twist, `2K` and the
//! convention version. Writes go through a temporary file and a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::gamma::{self, FittedTensor, TwistKind, CONVENTION_VERSION};
use crate::halfint::HalfInt;
use crate::linalg::max_diff;
use crate::lorentz::FieldRep;
use crate::sampling::Sampler;

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "SPINSUM_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct TensorCache {
    dir: PathBuf,
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .filter_map(|ch| match ch {
            '(' | ')' => None,
            '/' => Some("_".to_string()),
            ',' => Some("-".to_string()),
            c if c.is_ascii_alphanumeric() || c == '.' || c == '_' || c == '-' => Some(c.to_string()),
            _ => Some("x".to_string()),
        })
        .collect()
}

/// File stem for one tensor.
pub fn cache_key(left: &FieldRep, right: &FieldRep, twist: TwistKind, k: HalfInt) -> String {
    format!(
        "{}__{}__{}__K{}__v{}",
        sanitize(&left.key()),
        sanitize(&right.key()),
        twist.as_str(),
        k.twice(),
        CONVENTION_VERSION
    )
}

impl TensorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TensorCache { dir: dir.into() }
    }

    /// `$SPINSUM_CACHE_DIR`, or `spinsum-cache` under the system temp dir.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(std::env::temp_dir().join("spinsum-cache")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A cached tensor, or `None` when missing or unreadable.
    pub fn load(&self, key: &str) -> Option<FittedTensor> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let t: FittedTensor = serde_json::from_str(&text).ok()?;
        (t.convention == CONVENTION_VERSION).then_some(t)
    }

    pub fn store(&self, key: &str, t: &FittedTensor) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile_in(&self.dir, key)?;
        tmp.1.write_all(serde_json::to_string(t)?.as_bytes())?;
        tmp.1.sync_all()?;
        drop(tmp.1);
        fs::rename(&tmp.0, self.path(key))?;
        Ok(())
    }

    /// All tensors of a pair, fitting and storing the missing ones.
    pub fn get_or_build(&self, left: &FieldRep, right: &FieldRep, twist: TwistKind) -> Result<Vec<FittedTensor>> {
        gamma::invariant_seeds(left, right, twist)?
            .into_iter()
            .map(|s| {
                let key = cache_key(left, right, twist, s.k);
                if let Some(t) = self.load(&key) {
                    return Ok(t);
                }
                let t = gamma::build_t(left, right, twist, s.k, &s.matrix)?;
                self.store(&key, &t)?;
                Ok(t)
            })
            .collect()
    }

    pub fn keys(&self) -> Vec<String> {
        let mut out: Vec<String> = fs::read_dir(&self.dir)
            .into_iter()
            .flatten()
            .flatten()
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                name.strip_suffix(".json").map(str::to_string)
            })
            .collect();
        out.sort();
        out
    }
}

fn tempfile_in(dir: &Path, key: &str) -> Result<(PathBuf, fs::File)> {
    let path = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    let f = fs::File::create(&path)?;
    Ok((path, f))
}

/// Outcome of refitting one cached entry.
#[derive(Clone, Debug)]
pub struct SpotCheck {
    pub key: String,
    pub deviation: f64,
}

/// Refits the cached tensor for one of `candidates`, chosen by `seed`, and
/// reports the largest component deviation. Returns `None` when none of
/// them is cached.
pub fn spot_check(
    cache: &TensorCache,
    candidates: &[(FieldRep, FieldRep, TwistKind)],
    seed: u64,
) -> Result<Option<SpotCheck>> {
    let mut entries = Vec::new();
    for (l, r, tw) in candidates {
        for s in gamma::invariant_seeds(l, r, *tw)? {
            let key = cache_key(l, r, *tw, s.k);
            if cache.path(&key).exists() {
                entries.push((key, l, r, *tw, s));
            }
        }
    }
    if entries.is_empty() {
        return Ok(None);
    }
    let pick = Sampler::new(seed).index(entries.len());
    let (key, l, r, tw, s) = &entries[pick];
    let cached = match cache.load(key) {
        Some(t) => t,
        None => return Ok(Some(SpotCheck { key: key.clone(), deviation: f64::INFINITY })),
    };
    let fresh = gamma::build_t(l, r, *tw, s.k, &s.matrix)?;
    let mut deviation = max_diff(&cached.seed, &fresh.seed);
    for (idx, m) in &fresh.tensor.components {
        deviation = match cached.tensor.components.get(idx) {
            Some(c) => deviation.max(max_diff(c, m)),
            None => f64::INFINITY,
        };
    }
    Ok(Some(SpotCheck { key: key.clone(), deviation }))
}
