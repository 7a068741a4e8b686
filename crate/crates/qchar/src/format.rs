//! JSON documents and plain-text rendering.
//!
//! Characters are written as
//!
//! ```json
//! {"format_version":1,"cartan":"A1","epsilon_order":0,"kind":"fundamental",
//!  "drinfeld":[{"node":1,"shift":0,"mult":1}],
//!  "terms":[{"w":[[1,0,1]],"v":[[1,1,1]],"coeff":[[0,1]]}]}
//! ```
//!
//! with terms in monomial order and exponent lists sorted, so equal values
//! serialize to identical bytes. Characters in the `Y`-variables use a `"y"`
//! list of `[node, shift, exponent]` instead of `"w"`/`"v"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use qchar_core::cache::CharacterKind;
use qchar_core::kl::Matrix;
use qchar_core::{
    CartanDatum, Character, DrinfeldPoly, KLTable, SpectralSpec, TPoly, VWMonomial, YCharacter,
    YMonomial,
};
use serde::{Deserialize, Serialize};
use serde_json::Number;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Core(#[from] qchar_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn malformed(what: impl Into<String>) -> FormatError {
    FormatError::Malformed(what.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    pub node: u8,
    pub shift: i32,
    pub mult: u32,
}

/// `[[exponent, coefficient], ...]` sorted by exponent.
pub type PolyJson = Vec<(i32, Number)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<(u8, i32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<(u8, i32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<(u8, i32, i64)>>,
    pub coeff: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDoc {
    pub format_version: u32,
    pub cartan: String,
    pub epsilon_order: u32,
    pub kind: String,
    pub drinfeld: Vec<RootJson>,
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &TPoly) -> PolyJson {
    p.terms()
        .iter()
        .map(|(e, c)| (*e, Number::from_str(&c.to_string()).expect("integer literal")))
        .collect()
}

pub fn poly_from_json(p: &PolyJson) -> Result<TPoly, FormatError> {
    let mut terms = Vec::with_capacity(p.len());
    for (e, c) in p {
        let c = BigInt::from_str(&c.to_string())
            .map_err(|_| malformed(format!("coefficient {c} is not an integer")))?;
        terms.push((*e, c));
    }
    Ok(TPoly::from_terms(terms))
}

pub fn roots_to_json(p: &DrinfeldPoly) -> Vec<RootJson> {
    p.roots()
        .map(|(node, shift, mult)| RootJson { node, shift, mult })
        .collect()
}

pub fn roots_from_json(spec: SpectralSpec, roots: &[RootJson]) -> DrinfeldPoly {
    DrinfeldPoly::from_roots(spec, roots.iter().map(|r| (r.node, r.shift, r.mult)))
}

type Triples = Vec<(u8, i32, u32)>;

fn vw_lists(m: &VWMonomial) -> (Triples, Triples) {
    let w = m
        .entries()
        .iter()
        .filter(|e| e.w != 0)
        .map(|e| (e.node, e.shift, e.w))
        .collect();
    let v = m
        .entries()
        .iter()
        .filter(|e| e.v != 0)
        .map(|e| (e.node, e.shift, e.v))
        .collect();
    (w, v)
}

pub fn monomial_to_json(m: &VWMonomial) -> TermJson {
    let (w, v) = vw_lists(m);
    TermJson {
        w: Some(w),
        v: Some(v),
        y: None,
        coeff: Vec::new(),
    }
}

fn check_node(cartan: &CartanDatum, node: u8) -> Result<u8, FormatError> {
    Ok(cartan.check_node(node as u32)?)
}

pub fn monomial_from_json(
    cartan: &CartanDatum,
    spec: SpectralSpec,
    t: &TermJson,
) -> Result<VWMonomial, FormatError> {
    let (Some(w), Some(v)) = (&t.w, &t.v) else {
        return Err(malformed("term without \"w\" and \"v\" lists"));
    };
    let mut items = Vec::with_capacity(w.len() + v.len());
    for &(i, n, e) in w {
        items.push((check_node(cartan, i)?, n, e, 0));
    }
    for &(i, n, e) in v {
        items.push((check_node(cartan, i)?, n, 0, e));
    }
    Ok(VWMonomial::from_entries(spec, items))
}

fn y_monomial_from_json(
    cartan: &CartanDatum,
    spec: SpectralSpec,
    t: &TermJson,
) -> Result<YMonomial, FormatError> {
    let Some(y) = &t.y else {
        return Err(malformed("term without a \"y\" list"));
    };
    let mut items = Vec::with_capacity(y.len());
    for &(i, n, u) in y {
        items.push((check_node(cartan, i)?, n, u));
    }
    Ok(YMonomial::from_entries(spec, items))
}

fn y_list(y: &YMonomial) -> Vec<(u8, i32, i64)> {
    y.entries().to_vec()
}

fn at_one(c: &TPoly, at_t_one: bool) -> TPoly {
    if at_t_one {
        TPoly::from(c.eval_at_one())
    } else {
        c.clone()
    }
}

/// Header fields shared by every document.
#[derive(Clone, Debug)]
pub struct Header {
    pub cartan: String,
    pub spec: SpectralSpec,
    pub kind: CharacterKind,
    pub drinfeld: DrinfeldPoly,
}

pub fn character_doc(h: &Header, x: &Character, at_t_one: bool) -> CharacterDoc {
    let terms = x
        .iter()
        .filter_map(|(m, c)| {
            let c = at_one(c, at_t_one);
            (!c.is_zero()).then(|| TermJson {
                coeff: poly_to_json(&c),
                ..monomial_to_json(m)
            })
        })
        .collect();
    CharacterDoc {
        format_version: FORMAT_VERSION,
        cartan: h.cartan.clone(),
        epsilon_order: h.spec.order(),
        kind: h.kind.to_string(),
        drinfeld: roots_to_json(&h.drinfeld),
        terms,
    }
}

pub fn y_character_doc(h: &Header, x: &YCharacter, at_t_one: bool) -> CharacterDoc {
    let terms = x
        .iter()
        .filter_map(|(y, c)| {
            let c = at_one(c, at_t_one);
            (!c.is_zero()).then(|| TermJson {
                w: None,
                v: None,
                y: Some(y_list(y)),
                coeff: poly_to_json(&c),
            })
        })
        .collect();
    CharacterDoc {
        format_version: FORMAT_VERSION,
        cartan: h.cartan.clone(),
        epsilon_order: h.spec.order(),
        kind: h.kind.to_string(),
        drinfeld: roots_to_json(&h.drinfeld),
        terms,
    }
}

fn header_of(doc: &CharacterDoc) -> Result<(CartanDatum, Header), FormatError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(FormatError::Version(doc.format_version));
    }
    let cartan = CartanDatum::parse(&doc.cartan)?;
    let spec = SpectralSpec::with_order(doc.epsilon_order);
    let kind = CharacterKind::parse(&doc.kind)
        .ok_or_else(|| malformed(format!("unknown kind `{}`", doc.kind)))?;
    for r in &doc.drinfeld {
        check_node(&cartan, r.node)?;
    }
    let drinfeld = roots_from_json(spec, &doc.drinfeld);
    let header = Header {
        cartan: doc.cartan.clone(),
        spec,
        kind,
        drinfeld,
    };
    Ok((cartan, header))
}

pub fn character_from_doc(doc: &CharacterDoc) -> Result<(Header, Character), FormatError> {
    let (cartan, h) = header_of(doc)?;
    let mut x = Character::zero(h.spec);
    for t in &doc.terms {
        x.add_term(monomial_from_json(&cartan, h.spec, t)?, &poly_from_json(&t.coeff)?);
    }
    Ok((h, x))
}

pub fn y_character_from_doc(doc: &CharacterDoc) -> Result<(Header, YCharacter), FormatError> {
    let (cartan, h) = header_of(doc)?;
    let mut x = YCharacter::zero(h.spec);
    for t in &doc.terms {
        x.add_term(y_monomial_from_json(&cartan, h.spec, t)?, &poly_from_json(&t.coeff)?);
    }
    Ok((h, x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub w: Vec<(u8, i32, u32)>,
    pub v: Vec<(u8, i32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLDoc {
    pub format_version: u32,
    pub cartan: String,
    pub epsilon_order: u32,
    pub drinfeld: Vec<RootJson>,
    pub index: Vec<MonomialJson>,
    pub c: Vec<(usize, usize, PolyJson)>,
    pub u: Vec<(usize, usize, PolyJson)>,
    pub z: Vec<(usize, usize, PolyJson)>,
}

fn sparse(m: &Matrix, at_t_one: bool) -> Vec<(usize, usize, PolyJson)> {
    KLTable::triples(m)
        .into_iter()
        .filter_map(|(p, q, e)| {
            let e = at_one(e, at_t_one);
            (!e.is_zero()).then(|| (p, q, poly_to_json(&e)))
        })
        .collect()
}

pub fn kl_doc(cartan: &CartanDatum, p: &DrinfeldPoly, t: &KLTable, at_t_one: bool) -> KLDoc {
    KLDoc {
        format_version: FORMAT_VERSION,
        cartan: cartan.label_string(),
        epsilon_order: t.spec.order(),
        drinfeld: roots_to_json(p),
        index: t
            .index
            .iter()
            .map(|m| {
                let (w, v) = vw_lists(m);
                MonomialJson { w, v }
            })
            .collect(),
        c: sparse(&t.c, at_t_one),
        u: sparse(&t.u, at_t_one),
        z: sparse(&t.z, at_t_one),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityJson {
    pub y: Vec<(u8, i32, i64)>,
    pub mult: Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityDoc {
    pub format_version: u32,
    pub cartan: String,
    pub epsilon_order: u32,
    pub drinfeld: Vec<RootJson>,
    pub multiplicities: Vec<MultiplicityJson>,
}

pub fn multiplicity_doc(
    cartan: &CartanDatum,
    p: &DrinfeldPoly,
    mult: &BTreeMap<YMonomial, BigInt>,
) -> MultiplicityDoc {
    MultiplicityDoc {
        format_version: FORMAT_VERSION,
        cartan: cartan.label_string(),
        epsilon_order: p.spec().order(),
        drinfeld: roots_to_json(p),
        multiplicities: mult
            .iter()
            .map(|(y, k)| MultiplicityJson {
                y: y_list(y),
                mult: Number::from_str(&k.to_string()).expect("integer literal"),
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// text

fn coeff_text(c: &TPoly) -> String {
    if c.terms().len() == 1 && c.min_exp() == Some(0) {
        c.to_string()
    } else {
        format!("({c})")
    }
}

/// One `coefficient monomial` line per term, in the same order as the JSON.
pub fn character_text(x: &Character, at_t_one: bool) -> String {
    let mut out = String::new();
    for (m, c) in x.iter() {
        let c = at_one(c, at_t_one);
        if !c.is_zero() {
            writeln!(out, "{} {}", coeff_text(&c), m).unwrap();
        }
    }
    out
}

pub fn y_character_text(x: &YCharacter, at_t_one: bool) -> String {
    let mut out = String::new();
    for (y, c) in x.iter() {
        let c = at_one(c, at_t_one);
        if !c.is_zero() {
            writeln!(out, "{} {}", coeff_text(&c), y).unwrap();
        }
    }
    out
}

fn matrix_text(out: &mut String, name: &str, m: &Matrix, at_t_one: bool) {
    writeln!(out, "{name}:").unwrap();
    for (p, q, e) in KLTable::triples(m) {
        let e = at_one(e, at_t_one);
        if !e.is_zero() {
            writeln!(out, "  {p} {q} {e}").unwrap();
        }
    }
}

pub fn kl_text(t: &KLTable, at_t_one: bool) -> String {
    let mut out = String::from("index:\n");
    for (k, m) in t.index.iter().enumerate() {
        writeln!(out, "  {k} {m}").unwrap();
    }
    matrix_text(&mut out, "c", &t.c, at_t_one);
    matrix_text(&mut out, "u", &t.u, at_t_one);
    matrix_text(&mut out, "z", &t.z, at_t_one);
    out
}

/// `multiplicity Y-monomial` per line.
pub fn multiplicity_text(mult: &BTreeMap<YMonomial, BigInt>) -> String {
    let mut out = String::new();
    for (y, k) in mult {
        writeln!(out, "{k} {y}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qchar_core::Session;

    fn header(label: &str, roots: &str, kind: CharacterKind) -> (CartanDatum, Header) {
        let c = CartanDatum::parse(label).unwrap();
        let spec = SpectralSpec::generic();
        let drinfeld = DrinfeldPoly::parse(&c, roots, spec).unwrap();
        let h = Header {
            cartan: label.into(),
            spec,
            kind,
            drinfeld,
        };
        (c, h)
    }

    #[test]
    fn fundamental_json_layout() {
        let (c, h) = header("A1", "1:0", CharacterKind::Fundamental);
        let x = Session::new(c).fundamental_character(1, 0, h.spec).unwrap();
        let json = serde_json::to_string(&character_doc(&h, &x, false)).unwrap();
        assert_eq!(
            json,
            r#"{"format_version":1,"cartan":"A1","epsilon_order":0,"kind":"fundamental","drinfeld":[{"node":1,"shift":0,"mult":1}],"terms":[{"w":[[1,0,1]],"v":[],"coeff":[[0,1]]},{"w":[[1,0,1]],"v":[[1,1,1]],"coeff":[[0,1]]}]}"#
        );
    }

    #[test]
    fn character_round_trip() {
        let (c, h) = header("A2", "1:0,2:1,1:3", CharacterKind::Standard);
        let x = Session::new(c).standard_character(&h.drinfeld).unwrap();
        let doc = character_doc(&h, &x, false);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CharacterDoc = serde_json::from_str(&text).unwrap();
        let (h2, y) = character_from_doc(&back).unwrap();
        assert_eq!(y, x);
        assert_eq!(h2.drinfeld, h.drinfeld);
        assert_eq!(serde_json::to_string(&character_doc(&h2, &y, false)).unwrap(), text);
    }

    #[test]
    fn big_coefficients_survive() {
        let (_, h) = header("A1", "1:0", CharacterKind::Fundamental);
        let big = BigInt::from(7).pow(60);
        let x = Character::from_monomial(h.drinfeld.top()).scale(&TPoly::from(big.clone()));
        let text = serde_json::to_string(&character_doc(&h, &x, false)).unwrap();
        assert!(text.contains(&big.to_string()));
        let (_, y) = character_from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn rejects_bad_documents() {
        let (c, h) = header("A1", "1:0", CharacterKind::Fundamental);
        let x = Session::new(c).fundamental_character(1, 0, h.spec).unwrap();
        let mut doc = character_doc(&h, &x, false);
        doc.format_version = 7;
        assert!(matches!(character_from_doc(&doc), Err(FormatError::Version(7))));
        let mut doc = character_doc(&h, &x, false);
        doc.terms[0].w = Some(vec![(3, 0, 1)]);
        assert!(matches!(character_from_doc(&doc), Err(FormatError::Core(_))));
        let mut doc = character_doc(&h, &x, false);
        doc.kind = "weird".into();
        assert!(matches!(character_from_doc(&doc), Err(FormatError::Malformed(_))));
    }

    #[test]
    fn text_rendering() {
        let (c, h) = header("A1", "1:0:2", CharacterKind::Standard);
        let x = Session::new(c).standard_character(&h.drinfeld).unwrap();
        assert_eq!(
            character_text(&x, false),
            "1 W_{1,0}^2\n(t^2 + 1) W_{1,0}^2 V_{1,1}\n1 W_{1,0}^2 V_{1,1}^2\n"
        );
        assert_eq!(
            character_text(&x, true),
            "1 W_{1,0}^2\n2 W_{1,0}^2 V_{1,1}\n1 W_{1,0}^2 V_{1,1}^2\n"
        );
    }
}
