//! On-disk character cache: one JSON file per entry, named by the SHA-256 of
//! the canonical key.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use qchar_core::cache::{CacheKey, CharacterCache, CharacterKind};
use qchar_core::{CartanDatum, Character, DrinfeldPoly, SpectralSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::format::{self, CharacterDoc, Header, RootJson, TermJson, FORMAT_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("corrupt cache entry {}: {reason}", path.display())]
    CorruptEntry { path: PathBuf, reason: String },
    #[error("cache i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Cache key as stored in the file and hashed into the file name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyJson {
    pub cartan: String,
    pub kind: String,
    pub drinfeld: Vec<RootJson>,
    pub epsilon_order: u32,
}

impl KeyJson {
    pub fn new(key: &CacheKey) -> Self {
        KeyJson {
            cartan: key.cartan.to_string(),
            kind: key.kind.to_string(),
            drinfeld: key
                .drinfeld
                .iter()
                .map(|&(node, shift, mult)| RootJson { node, shift, mult })
                .collect(),
            epsilon_order: key.epsilon_order,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Entry {
    format_version: u32,
    key: KeyJson,
    checksum: String,
    payload: CharacterDoc,
}

fn checksum(terms: &[TermJson]) -> String {
    let bytes = serde_json::to_vec(terms).expect("terms serialize");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    /// Uses `dir`, creating it if needed.
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        let canonical = serde_json::to_vec(&KeyJson::new(key)).expect("key serializes");
        let name = hex::encode(Sha256::digest(canonical));
        self.dir.join(format!("{name}.json"))
    }

    /// Reads and validates an entry; `Ok(None)` if there is none.
    pub fn load(&self, key: &CacheKey) -> Result<Option<Character>, StoreError> {
        let path = self.path_for(key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| StoreError::CorruptEntry {
            path: path.clone(),
            reason,
        };
        let entry: Entry = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
        if entry.format_version != FORMAT_VERSION {
            return Err(corrupt(format!("format version {}", entry.format_version)));
        }
        if entry.key != KeyJson::new(key) {
            return Err(corrupt("key does not match".into()));
        }
        if entry.checksum != checksum(&entry.payload.terms) {
            return Err(corrupt("checksum mismatch".into()));
        }
        let (_, x) =
            format::character_from_doc(&entry.payload).map_err(|e| corrupt(e.to_string()))?;
        let spec = SpectralSpec::with_order(key.epsilon_order);
        let top = DrinfeldPoly::from_roots(spec, key.drinfeld.iter().copied()).top();
        if !x.coeff(&top).is_one() {
            return Err(corrupt("top coefficient is not 1".into()));
        }
        Ok(Some(x))
    }

    /// Writes an entry through a temporary file and an atomic rename.
    pub fn store(&self, key: &CacheKey, x: &Character) -> Result<(), StoreError> {
        let header = Header {
            cartan: key.cartan.to_string(),
            spec: SpectralSpec::with_order(key.epsilon_order),
            kind: key.kind,
            drinfeld: DrinfeldPoly::from_roots(
                SpectralSpec::with_order(key.epsilon_order),
                key.drinfeld.iter().copied(),
            ),
        };
        let payload = format::character_doc(&header, x, false);
        let entry = Entry {
            format_version: FORMAT_VERSION,
            key: KeyJson::new(key),
            checksum: checksum(&payload.terms),
            payload,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, &entry).map_err(io::Error::from)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

impl CharacterCache for DiskCache {
    fn get(&mut self, key: &CacheKey) -> Option<Character> {
        match self.load(key) {
            Ok(x) => x,
            Err(e) => {
                log::warn!("{e}; ignoring it");
                None
            }
        }
    }

    fn put(&mut self, key: &CacheKey, value: &Character) {
        if let Err(e) = self.store(key, value) {
            log::warn!("could not write cache entry: {e}");
        }
    }
}

/// Key of the fundamental character `W_{i,0}`.
pub fn fundamental_key(cartan: &CartanDatum, node: u8) -> CacheKey {
    CacheKey {
        cartan: cartan.label(),
        kind: CharacterKind::Fundamental,
        drinfeld: vec![(node, 0, 1)],
        epsilon_order: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qchar_core::Session;

    fn a1_fundamental() -> (CartanDatum, CacheKey, Character) {
        let c = CartanDatum::parse("A1").unwrap();
        let x = Session::new(c.clone())
            .fundamental_character(1, 0, SpectralSpec::generic())
            .unwrap();
        let key = fundamental_key(&c, 1);
        (c, key, x)
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::open(dir.path()).unwrap();
        let (_, key, x) = a1_fundamental();
        assert!(cache.load(&key).unwrap().is_none());
        cache.store(&key, &x).unwrap();
        assert_eq!(cache.load(&key).unwrap(), Some(x.clone()));
        // rewriting gives identical bytes
        let first = fs::read(cache.path_for(&key)).unwrap();
        cache.store(&key, &x).unwrap();
        assert_eq!(fs::read(cache.path_for(&key)).unwrap(), first);
    }

    #[test]
    fn tampered_entry_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut cache = DiskCache::open(dir.path()).unwrap();
        let (_, key, x) = a1_fundamental();
        cache.store(&key, &x).unwrap();
        let path = cache.path_for(&key);
        let mut entry: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        entry["payload"]["terms"][1]["v"][0][2] = 2.into();
        fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        assert!(matches!(cache.load(&key), Err(StoreError::CorruptEntry { .. })));
        assert_eq!(CharacterCache::get(&mut cache, &key), None);
    }

    #[test]
    fn wrong_top_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::open(dir.path()).unwrap();
        let (c, _, x) = a1_fundamental();
        let other = CacheKey {
            drinfeld: vec![(1, 4, 1)],
            ..fundamental_key(&c, 1)
        };
        cache.store(&other, &x).unwrap();
        assert!(matches!(cache.load(&other), Err(StoreError::CorruptEntry { .. })));
    }

    #[test]
    fn session_uses_the_disk() {
        let dir = tempfile::tempdir().unwrap();
        let c = CartanDatum::parse("D4").unwrap();
        let fresh = {
            let cache = DiskCache::open(dir.path()).unwrap();
            let mut s = Session::with_cache(c.clone(), Box::new(cache));
            s.fundamental_character(2, 0, SpectralSpec::generic()).unwrap()
        };
        let cache = DiskCache::open(dir.path()).unwrap();
        let cached = cache.load(&fundamental_key(&c, 2)).unwrap().unwrap();
        assert_eq!(cached, fresh);
    }
}
