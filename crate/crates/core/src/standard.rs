//! Standard modules, the membership test and specialization at roots of unity.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::cache::{CacheKey, CharacterCache, CharacterKind, MemoryCache};
use crate::cartan::{CartanDatum, Node};
use crate::engine::{special_character, EngineOptions};
use crate::error::{Error, Result};
use crate::tpoly::TPoly;
use crate::yring::{
    e_expansion, is_i_dominant, pair, star_product, Character, SpectralSpec, VWMonomial,
    YMonomial,
};

/// Drinfeld polynomials with all roots in one `ε`-orbit: a multiset of
/// `(node, shift)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DrinfeldPoly {
    spec: SpectralSpec,
    roots: BTreeMap<(Node, i32), u32>,
}

impl DrinfeldPoly {
    /// The trivial datum (all `P_i = 1`).
    pub fn trivial(spec: SpectralSpec) -> Self {
        DrinfeldPoly {
            spec,
            roots: BTreeMap::new(),
        }
    }

    /// Collects `(node, shift, multiplicity)` items; shifts are reduced and
    /// zero multiplicities dropped.
    pub fn from_roots<I>(spec: SpectralSpec, items: I) -> Self
    where
        I: IntoIterator<Item = (Node, i32, u32)>,
    {
        let mut roots = BTreeMap::new();
        for (i, n, k) in items {
            if k > 0 {
                *roots.entry((i, spec.reduce(n))).or_insert(0) += k;
            }
        }
        DrinfeldPoly { spec, roots }
    }

    /// Parses `"i:n[:mult]"` items joined by commas, e.g. `"1:0,1:2"` or
    /// `"1:0:2"`.
    pub fn parse(cartan: &CartanDatum, text: &str, spec: SpectralSpec) -> Result<Self> {
        let bad = |why: &str| Error::ParseDrinfeld(format!("`{text}`: {why}"));
        if text.trim().is_empty() {
            return Err(bad("no roots given"));
        }
        let mut items = Vec::new();
        for item in text.split(',') {
            let fields: Vec<&str> = item.trim().split(':').collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(bad("expected items of the form i:n or i:n:mult"));
            }
            let node: u32 = fields[0]
                .parse()
                .map_err(|_| bad(&format!("bad node `{}`", fields[0])))?;
            let node = cartan.check_node(node)?;
            let shift: i32 = fields[1]
                .parse()
                .map_err(|_| bad(&format!("bad shift `{}`", fields[1])))?;
            let mult: u32 = match fields.get(2) {
                Some(m) => m.parse().map_err(|_| bad(&format!("bad multiplicity `{m}`")))?,
                None => 1,
            };
            if mult == 0 {
                return Err(bad("multiplicities must be positive"));
            }
            items.push((node, shift, mult));
        }
        Ok(DrinfeldPoly::from_roots(spec, items))
    }

    /// The datum with `P_i` having roots given by the exponents of a dominant
    /// `Y`-monomial.
    pub fn from_y(y: &YMonomial) -> Result<Self> {
        let mut items = Vec::new();
        for &(i, n, u) in y.entries() {
            if u < 0 {
                return Err(Error::InternalInconsistency(format!(
                    "{y} is not l-dominant"
                )));
            }
            items.push((i, n, u as u32));
        }
        Ok(DrinfeldPoly::from_roots(y.spec(), items))
    }

    pub fn spec(&self) -> SpectralSpec {
        self.spec
    }

    pub fn is_trivial(&self) -> bool {
        self.roots.is_empty()
    }

    /// `(node, shift, multiplicity)` sorted by node, then shift.
    pub fn roots(&self) -> impl Iterator<Item = (Node, i32, u32)> + '_ {
        self.roots.iter().map(|(&(i, n), &k)| (i, n, k))
    }

    pub fn degree(&self) -> u32 {
        self.roots.values().sum()
    }

    /// `e^P = prod W_{i,n}^{mult}`.
    pub fn top(&self) -> VWMonomial {
        VWMonomial::from_entries(self.spec, self.roots().map(|(i, n, k)| (i, n, k, 0)))
    }

    /// Single roots ordered by shift, then node, repeated by multiplicity.
    pub fn ordered_factors(&self) -> Vec<(Node, i32)> {
        let mut out: Vec<(Node, i32)> = Vec::with_capacity(self.degree() as usize);
        for (i, n, k) in self.roots() {
            out.extend(core::iter::repeat_n((i, n), k as usize));
        }
        out.sort_by_key(|&(i, n)| (n, i));
        out
    }

    pub fn shifted(&self, k: i32) -> Self {
        DrinfeldPoly::from_roots(self.spec, self.roots().map(|(i, n, m)| (i, n + k, m)))
    }

    /// The same roots read at another `ε`.
    pub fn with_spec(&self, spec: SpectralSpec) -> Self {
        DrinfeldPoly::from_roots(spec, self.roots())
    }

    fn min_shift(&self) -> i32 {
        self.roots.keys().map(|&(_, n)| n).min().unwrap_or(0)
    }

    fn key(&self, cartan: &CartanDatum, kind: CharacterKind) -> CacheKey {
        CacheKey {
            cartan: cartan.label(),
            kind,
            drinfeld: self.roots().collect(),
            epsilon_order: self.spec.order(),
        }
    }
}

impl fmt::Display for DrinfeldPoly {
    /// The CLI syntax; multiplicity 1 is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, n, m)) in self.roots().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}:{n}")?;
            if m != 1 {
                write!(f, ":{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DrinfeldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{self}]")?;
        if !self.spec.is_generic() {
            write!(f, "/{}", self.spec.order())?;
        }
        Ok(())
    }
}

/// Computation context: Dynkin data, engine options and caches.
pub struct Session {
    cartan: CartanDatum,
    options: EngineOptions,
    cache: Box<dyn CharacterCache>,
    standards: BTreeMap<DrinfeldPoly, Character>,
}

impl Session {
    pub fn new(cartan: CartanDatum) -> Self {
        Session::with_cache(cartan, Box::new(MemoryCache::new()))
    }

    pub fn with_cache(cartan: CartanDatum, cache: Box<dyn CharacterCache>) -> Self {
        Session {
            cartan,
            options: EngineOptions::default(),
            cache,
            standards: BTreeMap::new(),
        }
    }

    pub fn with_options(mut self, options: EngineOptions) -> Self {
        self.options = options;
        self
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    /// `χ̂(W_{i,n})`, computed once at shift 0 and translated.
    pub fn fundamental_character(&mut self, i: Node, n: i32, spec: SpectralSpec) -> Result<Character> {
        let i = self.cartan.check_node(i as u32)?;
        if !spec.is_generic() {
            let p = DrinfeldPoly::from_roots(spec, [(i, n, 1)]);
            return self.standard_character_at_root(&p);
        }
        let key = CacheKey {
            cartan: self.cartan.label(),
            kind: CharacterKind::Fundamental,
            drinfeld: alloc::vec![(i, 0, 1)],
            epsilon_order: 0,
        };
        let base = match self.cache.get(&key) {
            Some(x) => x,
            None => {
                let x = special_character(&self.cartan, &VWMonomial::w(spec, i, 0), self.options)?;
                self.cache.put(&key, &x);
                x
            }
        };
        Ok(base.shifted(n))
    }

    /// `χ̂(M(P))`: the ordered twisted product of fundamental characters.
    /// At a root of unity this is [`Session::standard_character_at_root`].
    pub fn standard_character(&mut self, p: &DrinfeldPoly) -> Result<Character> {
        if !p.spec.is_generic() {
            return self.standard_character_at_root(p);
        }
        let offset = p.min_shift();
        let base = p.shifted(-offset);
        if let Some(x) = self.standards.get(&base) {
            return Ok(x.shifted(offset));
        }
        let factors = base.ordered_factors();
        let x = if factors.len() == 1 {
            self.fundamental_character(factors[0].0, factors[0].1, base.spec)?
        } else {
            let key = base.key(&self.cartan, CharacterKind::Standard);
            match self.cache.get(&key) {
                Some(x) => x,
                None => {
                    let mut acc = Character::trivial(base.spec);
                    for (i, n) in factors {
                        let f = self.fundamental_character(i, n, base.spec)?;
                        acc = star_product(&self.cartan, &acc, &f)?;
                    }
                    self.cache.put(&key, &acc);
                    acc
                }
            }
        };
        self.standards.insert(base, x.clone());
        Ok(x.shifted(offset))
    }

    /// Lifts the roots to shifts in `[0, s)`, computes the generic standard
    /// character and specializes it.
    pub fn standard_character_at_root(&mut self, p: &DrinfeldPoly) -> Result<Character> {
        let s = p.spec.order();
        if s == 0 {
            return self.standard_character(p);
        }
        let lifted = p.with_spec(SpectralSpec::generic());
        let x = self.standard_character(&lifted)?;
        Ok(specialize(&self.cartan, &x, s))
    }
}

/// Outcome of [`membership_check`]: the final residual for every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub residuals: Vec<(Node, Character)>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// Nodes whose residual did not vanish.
    pub fn failing_nodes(&self) -> Vec<Node> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(i, _)| *i)
            .collect()
    }
}

/// Greedy `E_i`-decomposition for every node: repeatedly strip a maximal
/// monomial `m` by subtracting its coefficient times `E_i(m)`; fails at the
/// first maximal monomial that is not `i`-dominant.
pub fn membership_check(cartan: &CartanDatum, x: &Character) -> MembershipReport {
    let residuals = cartan
        .nodes()
        .map(|i| (i, residual_for_node(cartan, x, i)))
        .collect();
    MembershipReport { residuals }
}

fn residual_for_node(cartan: &CartanDatum, x: &Character, i: Node) -> Character {
    // keyed by v-degree first, so the first key is maximal for the order
    let mut rest: BTreeMap<(u32, VWMonomial), TPoly> = x
        .iter()
        .map(|(m, c)| ((m.total_v_degree(), m.clone()), c.clone()))
        .collect();
    while let Some(((_, m), c)) = rest.first_key_value() {
        if !is_i_dominant(cartan, m, i) {
            break;
        }
        let (m, c) = (m.clone(), c.clone());
        let block = e_expansion(cartan, &m, i).expect("dominance checked");
        for (n, b) in block.iter() {
            let key = (n.total_v_degree(), n.clone());
            let entry = rest.entry(key.clone()).or_default();
            *entry -= &(b * &c);
            if entry.is_zero() {
                rest.remove(&key);
            }
        }
    }
    let mut out = Character::zero(x.spec());
    for ((_, m), c) in rest {
        out.add_term(m, &c);
    }
    out
}

/// Translates every shift by `n`.
pub fn shift_by(x: &Character, n: i32) -> Character {
    x.shifted(n)
}

/// `d(m, m[ks])` at generic `ε`, where `m[k]` has at shift `n` the exponents
/// of `m` at `n + k`.
pub fn d_shifted_overlap(cartan: &CartanDatum, m: &VWMonomial, k: i32, s: u32) -> i64 {
    pair(cartan, m, &m.shifted(-k * s as i32))
}

/// `D⁻(m) = sum_{k < 0} d(m, m[ks])`; only `|ks| <= width + 1` can contribute.
pub fn d_minus(cartan: &CartanDatum, m: &VWMonomial, s: u32) -> i64 {
    let reach = m.width() as i64 + 1;
    let mut total = 0;
    let mut k = -1i32;
    while (k as i64 * s as i64).abs() <= reach {
        total += d_shifted_overlap(cartan, m, k, s);
        k -= 1;
    }
    total
}

/// Specialization of a generic character at a primitive `s`-th root of unity:
/// `a_m(t) m -> t^{2 D⁻(m)} a_m(t) m|_{q=ε}`.
pub fn specialize(cartan: &CartanDatum, x: &Character, s: u32) -> Character {
    debug_assert!(x.spec().is_generic() && s >= 1);
    let mut out = Character::zero(SpectralSpec::with_order(s));
    for (m, c) in x.iter() {
        let d = d_minus(cartan, m, s);
        out.add_term(m.fold(s), &c.shift(2 * d as i32));
    }
    out
}
