//! Keys and the storage interface for computed characters.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::cartan::{CartanType, Node};
use crate::yring::Character;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharacterKind {
    Fundamental,
    Standard,
    Simple,
}

impl CharacterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CharacterKind::Fundamental => "fundamental",
            CharacterKind::Standard => "standard",
            CharacterKind::Simple => "simple",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fundamental" => Some(CharacterKind::Fundamental),
            "standard" => Some(CharacterKind::Standard),
            "simple" => Some(CharacterKind::Simple),
            _ => None,
        }
    }
}

impl fmt::Display for CharacterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifies a cached character: Dynkin type, kind, Drinfeld data as sorted
/// `(node, shift, multiplicity)` and the order of `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub cartan: CartanType,
    pub kind: CharacterKind,
    pub drinfeld: Vec<(Node, i32, u32)>,
    pub epsilon_order: u32,
}

/// Storage for characters. Implementations may fail silently: a miss only
/// costs a recomputation.
pub trait CharacterCache {
    fn get(&mut self, key: &CacheKey) -> Option<Character>;
    fn put(&mut self, key: &CacheKey, value: &Character);
}

/// In-process cache.
#[derive(Clone, Debug, Default)]
pub struct MemoryCache {
    entries: BTreeMap<CacheKey, Character>,
}

impl MemoryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl CharacterCache for MemoryCache {
    fn get(&mut self, key: &CacheKey) -> Option<Character> {
        self.entries.get(key).cloned()
    }

    fn put(&mut self, key: &CacheKey, value: &Character) {
        self.entries.insert(key.clone(), value.clone());
    }
}

/// Discards everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCache;

impl CharacterCache for NoCache {
    fn get(&mut self, _: &CacheKey) -> Option<Character> {
        None
    }

    fn put(&mut self, _: &CacheKey, _: &Character) {}
}
