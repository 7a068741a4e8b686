#![no_std]

//! Exact symbolic computation of t-analogs of q-characters for quantum loop
//! algebras of simply-laced type, and of the Kazhdan-Lusztig type polynomials
//! `Z_{PQ}(t)` relating standard and simple modules.
//!
//! Everything here is pure computation over `alloc`; file formats, the
//! on-disk cache and the command-line frontend live in the `qchar` crate.
//!
//! The pieces, bottom-up:
//!
//! - [`cartan`]: ADE Dynkin data with a fixed node numbering.
//! - [`tpoly`]: Laurent polynomials in `t` with big-integer coefficients.
//! - [`yring`]: monomials in `W_{i,n}`, `V_{i,n}`, the pairing `d`, the twisted
//!   product, the bar involution and the `E_i` blocks.
//! - [`engine`]: level-by-level coefficient determination for modules whose
//!   character has a single l-dominant monomial (l-fundamental modules).
//! - [`standard`]: standard modules as ordered twisted products, the membership
//!   verifier, and specialization at roots of unity.
//! - [`kl`]: the index set of l-dominant monomials, the matrices `c`, `u`, `Z`,
//!   multiplicities and simple characters.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cache;
pub mod cartan;
pub mod engine;
mod error;
pub mod kl;
pub mod standard;
pub mod tpoly;
pub mod yring;

pub use crate::cache::{CacheKey, CharacterCache, CharacterKind, MemoryCache};
pub use crate::cartan::{CartanDatum, CartanType, Node};
pub use crate::engine::EngineOptions;
pub use crate::error::{Error, Result};
pub use crate::kl::KLTable;
pub use crate::standard::{DrinfeldPoly, MembershipReport, Session};
pub use crate::tpoly::TPoly;
pub use crate::yring::{Character, SpectralSpec, VWMonomial, YCharacter, YMonomial};
