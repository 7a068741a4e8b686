//! Monomials in `W_{i,n}`, `V_{i,n}` and their images in the `Y`-variables.
//!
//! Spectral parameters are restricted to one orbit `a ε^Z`, so a parameter is
//! an integer shift `n` standing for `a ε^n`. For a primitive `s`-th root of
//! unity the shifts live in `Z/s` and are stored in `[0, s)`.
//!
//! The exponent functional
//!
//! ```text
//! u_{i,n}(m) = w_{i,n}(m) - v_{i,n-1}(m) - v_{i,n+1}(m) + sum_{j ~ i} v_{j,n}(m)
//! ```
//!
//! drives everything: dominance, the `E_i` blocks, the pairing `d` and the
//! projection to `Y`-monomials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::AddAssign;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cartan::{CartanDatum, Node};
use crate::error::{Error, Result};
use crate::tpoly::{binomial_row, TPoly};

/// Which `ε` the spectral shifts refer to: `order == 0` is a generic `ε`,
/// `order == s >= 1` a primitive `s`-th root of unity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectralSpec {
    order: u32,
}

impl SpectralSpec {
    pub const GENERIC: SpectralSpec = SpectralSpec { order: 0 };

    pub fn generic() -> Self {
        SpectralSpec::GENERIC
    }

    /// `s = 0` gives the generic specification.
    pub fn with_order(s: u32) -> Self {
        SpectralSpec { order: s }
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn is_generic(self) -> bool {
        self.order == 0
    }

    /// Canonical representative of a shift.
    pub fn reduce(self, shift: i32) -> i32 {
        if self.order == 0 {
            shift
        } else {
            shift.rem_euclid(self.order as i32)
        }
    }

    fn check_same(self, other: SpectralSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpecMismatch(self.order, other.order))
        }
    }
}

/// Exponents of `W_{node,shift}` and `V_{node,shift}` in a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VWEntry {
    pub node: Node,
    pub shift: i32,
    pub w: u32,
    pub v: u32,
}

/// A monomial of the ring `Z[t^±, V_{i,n}, W_{i,n}]`, without its coefficient.
///
/// Entries are sorted by `(node, shift)` and never `(0, 0)`, which makes the
/// derived `Eq`, `Ord` and `Hash` canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VWMonomial {
    spec: SpectralSpec,
    entries: Vec<VWEntry>,
}

impl VWMonomial {
    pub fn one(spec: SpectralSpec) -> Self {
        VWMonomial {
            spec,
            entries: Vec::new(),
        }
    }

    /// `W_{node,shift}`.
    pub fn w(spec: SpectralSpec, node: Node, shift: i32) -> Self {
        VWMonomial::from_entries(spec, [(node, shift, 1, 0)])
    }

    /// `V_{node,shift}`.
    pub fn v(spec: SpectralSpec, node: Node, shift: i32) -> Self {
        VWMonomial::from_entries(spec, [(node, shift, 0, 1)])
    }

    /// Builds a monomial from `(node, shift, w, v)` items; shifts are reduced
    /// and repeated positions multiply.
    pub fn from_entries<I>(spec: SpectralSpec, items: I) -> Self
    where
        I: IntoIterator<Item = (Node, i32, u32, u32)>,
    {
        let mut acc: BTreeMap<(Node, i32), (u32, u32)> = BTreeMap::new();
        for (node, shift, w, v) in items {
            let slot = acc.entry((node, spec.reduce(shift))).or_default();
            slot.0 += w;
            slot.1 += v;
        }
        VWMonomial {
            spec,
            entries: acc
                .into_iter()
                .filter(|(_, (w, v))| *w != 0 || *v != 0)
                .map(|((node, shift), (w, v))| VWEntry { node, shift, w, v })
                .collect(),
        }
    }

    pub fn spec(&self) -> SpectralSpec {
        self.spec
    }

    pub fn entries(&self) -> &[VWEntry] {
        &self.entries
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    fn find(&self, node: Node, shift: i32) -> Option<&VWEntry> {
        let shift = self.spec.reduce(shift);
        self.entries
            .binary_search_by(|e| (e.node, e.shift).cmp(&(node, shift)))
            .ok()
            .map(|k| &self.entries[k])
    }

    pub fn w_at(&self, node: Node, shift: i32) -> u32 {
        self.find(node, shift).map_or(0, |e| e.w)
    }

    pub fn v_at(&self, node: Node, shift: i32) -> u32 {
        self.find(node, shift).map_or(0, |e| e.v)
    }

    pub fn total_v_degree(&self) -> u32 {
        self.entries.iter().map(|e| e.v).sum()
    }

    pub fn is_pure_w(&self) -> bool {
        self.entries.iter().all(|e| e.v == 0)
    }

    /// The monomial with all `V`-exponents removed.
    pub fn w_part(&self) -> Self {
        self.filter_map(|e| VWEntry { v: 0, ..e })
    }

    /// The monomial with all `W`-exponents removed.
    pub fn v_part(&self) -> Self {
        self.filter_map(|e| VWEntry { w: 0, ..e })
    }

    fn filter_map(&self, f: impl Fn(VWEntry) -> VWEntry) -> Self {
        VWMonomial {
            spec: self.spec,
            entries: self
                .entries
                .iter()
                .map(|e| f(*e))
                .filter(|e| e.w != 0 || e.v != 0)
                .collect(),
        }
    }

    /// Ordinary product; the result carries `self`'s spec.
    pub(crate) fn mul_unchecked(&self, other: &VWMonomial) -> VWMonomial {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match (x.node, x.shift).cmp(&(y.node, y.shift)) {
                    core::cmp::Ordering::Less => entries.push(*a.next().unwrap()),
                    core::cmp::Ordering::Greater => entries.push(*b.next().unwrap()),
                    core::cmp::Ordering::Equal => {
                        let (x, y) = (a.next().unwrap(), b.next().unwrap());
                        entries.push(VWEntry {
                            w: x.w + y.w,
                            v: x.v + y.v,
                            ..*x
                        });
                    }
                },
                (Some(_), None) => entries.push(*a.next().unwrap()),
                (None, Some(_)) => entries.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        VWMonomial {
            spec: self.spec,
            entries,
        }
    }

    pub fn mul(&self, other: &VWMonomial) -> Result<VWMonomial> {
        self.spec.check_same(other.spec)?;
        Ok(self.mul_unchecked(other))
    }

    /// Multiplies by `V_{node,shift}^r`.
    pub fn times_v(&self, node: Node, shift: i32, r: u32) -> VWMonomial {
        if r == 0 {
            return self.clone();
        }
        let shift = self.spec.reduce(shift);
        let mut out = self.clone();
        match out
            .entries
            .binary_search_by(|e| (e.node, e.shift).cmp(&(node, shift)))
        {
            Ok(k) => out.entries[k].v += r,
            Err(k) => out.entries.insert(
                k,
                VWEntry {
                    node,
                    shift,
                    w: 0,
                    v: r,
                },
            ),
        }
        out
    }

    /// Quotient `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &VWMonomial) -> Option<VWMonomial> {
        if self.spec != other.spec {
            return None;
        }
        for e in &other.entries {
            let mine = self.find(e.node, e.shift)?;
            if mine.w < e.w || mine.v < e.v {
                return None;
            }
        }
        Some(VWMonomial::from_entries(
            self.spec,
            self.entries
                .iter()
                .map(|e| (e.node, e.shift, e.w, e.v))
                .chain(other.entries.iter().map(|e| (e.node, e.shift, 0, 0))),
        ))
        .map(|m| {
            // subtract `other` entrywise
            VWMonomial {
                spec: m.spec,
                entries: m
                    .entries
                    .iter()
                    .map(|e| {
                        let o = other.find(e.node, e.shift);
                        VWEntry {
                            w: e.w - o.map_or(0, |o| o.w),
                            v: e.v - o.map_or(0, |o| o.v),
                            ..*e
                        }
                    })
                    .filter(|e| e.w != 0 || e.v != 0)
                    .collect(),
            }
        })
    }

    /// Translates every shift by `k` (reduced mod `s` at a root of unity).
    pub fn shifted(&self, k: i32) -> VWMonomial {
        VWMonomial::from_entries(
            self.spec,
            self.entries.iter().map(|e| (e.node, e.shift + k, e.w, e.v)),
        )
    }

    /// `m|_{q=ε}`: the same exponents with shifts read in `Z/s`.
    pub fn fold(&self, s: u32) -> VWMonomial {
        VWMonomial::from_entries(
            SpectralSpec::with_order(s),
            self.entries.iter().map(|e| (e.node, e.shift, e.w, e.v)),
        )
    }

    /// Smallest and largest shift carrying a nonzero exponent.
    pub fn shift_range(&self) -> Option<(i32, i32)> {
        let lo = self.entries.iter().map(|e| e.shift).min()?;
        let hi = self.entries.iter().map(|e| e.shift).max()?;
        Some((lo, hi))
    }

    pub fn width(&self) -> i32 {
        self.shift_range().map_or(0, |(lo, hi)| hi - lo)
    }
}

impl fmt::Display for VWMonomial {
    /// `W_{1,0}^2 V_{1,1}`; `1` for the empty monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut factor = |f: &mut fmt::Formatter<'_>, var: char, e: &VWEntry, k: u32| {
            if k == 0 {
                return Ok(());
            }
            if !core::mem::take(&mut first) {
                f.write_str(" ")?;
            }
            write!(f, "{var}_{{{},{}}}", e.node, e.shift)?;
            if k != 1 {
                write!(f, "^{k}")?;
            }
            Ok(())
        };
        for e in &self.entries {
            factor(f, 'W', e, e.w)?;
        }
        for e in &self.entries {
            factor(f, 'V', e, e.v)?;
        }
        Ok(())
    }
}

impl fmt::Debug for VWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)?;
        if !self.spec.is_generic() {
            write!(f, "/{}", self.spec.order)?;
        }
        Ok(())
    }
}

/// A Laurent monomial `prod Y_{i,n}^{u_{i,n}}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YMonomial {
    spec: SpectralSpec,
    entries: Vec<(Node, i32, i64)>,
}

impl YMonomial {
    pub fn one(spec: SpectralSpec) -> Self {
        YMonomial {
            spec,
            entries: Vec::new(),
        }
    }

    /// Builds a monomial from `(node, shift, exponent)` items; repeated
    /// positions add up.
    pub fn from_entries<I>(spec: SpectralSpec, items: I) -> Self
    where
        I: IntoIterator<Item = (Node, i32, i64)>,
    {
        let mut acc: BTreeMap<(Node, i32), i64> = BTreeMap::new();
        for (node, shift, u) in items {
            *acc.entry((node, spec.reduce(shift))).or_default() += u;
        }
        YMonomial {
            spec,
            entries: acc
                .into_iter()
                .filter(|(_, u)| *u != 0)
                .map(|((i, n), u)| (i, n, u))
                .collect(),
        }
    }

    pub fn spec(&self) -> SpectralSpec {
        self.spec
    }

    /// `(node, shift, exponent)` sorted by `(node, shift)`.
    pub fn entries(&self) -> &[(Node, i32, i64)] {
        &self.entries
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exponent(&self, node: Node, shift: i32) -> i64 {
        let shift = self.spec.reduce(shift);
        self.entries
            .binary_search_by(|&(i, n, _)| (i, n).cmp(&(node, shift)))
            .map_or(0, |k| self.entries[k].2)
    }

    pub fn is_dominant(&self) -> bool {
        self.entries.iter().all(|&(_, _, u)| u >= 0)
    }

    pub fn mul(&self, other: &YMonomial) -> YMonomial {
        YMonomial::from_entries(
            self.spec,
            self.entries.iter().chain(other.entries.iter()).copied(),
        )
    }

    pub fn shifted(&self, k: i32) -> YMonomial {
        YMonomial::from_entries(
            self.spec,
            self.entries.iter().map(|&(i, n, u)| (i, n + k, u)),
        )
    }

    /// Weight `sum_i (sum_n u_{i,n}) Λ_i` as coordinates in the fundamental
    /// weight basis.
    pub fn weight(&self, rank: usize) -> Vec<i64> {
        let mut out = vec![0; rank];
        for &(i, _, u) in &self.entries {
            out[i as usize - 1] += u;
        }
        out
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        for (k, &(i, n, u)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "Y_{{{i},{n}}}")?;
            if u != 1 {
                write!(f, "^{u}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)
    }
}

/// Finite `Z[t^±]`-linear combination of monomials sharing one spectral spec.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Combination<M: Ord> {
    spec: SpectralSpec,
    terms: BTreeMap<M, TPoly>,
}

/// An element of the ring spanned by `W`/`V` monomials.
pub type Character = Combination<VWMonomial>;
/// An element of the ring spanned by `Y` monomials.
pub type YCharacter = Combination<YMonomial>;

impl<M: Ord + Clone> Combination<M> {
    pub fn zero(spec: SpectralSpec) -> Self {
        Combination {
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> SpectralSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in monomial order.
    pub fn iter(&self) -> impl Iterator<Item = (&M, &TPoly)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &M> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &M) -> TPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: M, coeff: &TPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &TPoly) -> Self {
        let mut out = Combination::zero(self.spec);
        if !k.is_zero() {
            for (m, c) in &self.terms {
                out.add_term(m.clone(), &(c * k));
            }
        }
        out
    }

    /// Coefficients evaluated at `t = 1`, zeros dropped.
    pub fn at_t_one(&self) -> BTreeMap<M, BigInt> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.eval_at_one()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Sum of all coefficients at `t = 1`.
    pub fn size_at_t_one(&self) -> BigInt {
        self.terms.values().map(|c| c.eval_at_one()).sum()
    }

    /// Applies `f` to every coefficient, dropping the terms that vanish.
    pub fn map_coeffs(&self, f: impl Fn(&M, &TPoly) -> TPoly) -> Self {
        let mut out = Combination::zero(self.spec);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(m, c));
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<M, TPoly> {
        self.terms
    }
}

impl<M: Ord + Clone> FromIterator<(M, TPoly)> for Combination<M>
where
    M: HasSpec,
{
    /// Collects terms; the spec is taken from the first monomial (generic if
    /// empty).
    fn from_iter<I: IntoIterator<Item = (M, TPoly)>>(iter: I) -> Self {
        let mut iter = iter.into_iter().peekable();
        let spec = iter.peek().map_or(SpectralSpec::GENERIC, |(m, _)| m.spec());
        let mut out = Combination::zero(spec);
        for (m, c) in iter {
            out.add_term(m, &c);
        }
        out
    }
}

/// Monomial types that know their spectral spec.
pub trait HasSpec {
    fn spec(&self) -> SpectralSpec;
}

impl HasSpec for VWMonomial {
    fn spec(&self) -> SpectralSpec {
        self.spec
    }
}

impl HasSpec for YMonomial {
    fn spec(&self) -> SpectralSpec {
        self.spec
    }
}

impl<M: Ord + Clone + HasSpec> Combination<M> {
    pub fn from_monomial(m: M) -> Self {
        let mut out = Combination::zero(m.spec());
        out.add_term(m, &TPoly::one());
        out
    }

    /// Checked addition.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(other.spec)?;
        let mut out = self.clone();
        out += other;
        Ok(out)
    }
}

impl Character {
    /// The character of the trivial module: the empty monomial.
    pub fn trivial(spec: SpectralSpec) -> Self {
        Combination::from_monomial(VWMonomial::one(spec))
    }

    /// Translates all shifts by `n`.
    pub fn shifted(&self, n: i32) -> Self {
        let mut out = Combination::zero(self.spec);
        for (m, c) in &self.terms {
            out.add_term(m.shifted(n), c);
        }
        out
    }
}

impl<M: Ord + Clone> AddAssign<&Combination<M>> for Combination<M> {
    /// Panics if the spectral specs differ; see [`Combination::try_add`].
    fn add_assign(&mut self, rhs: &Combination<M>) {
        assert_eq!(self.spec, rhs.spec, "adding combinations with different specs");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl<M: Ord + Clone + fmt::Display> fmt::Display for Combination<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

impl<M: Ord + Clone + fmt::Debug> fmt::Debug for Combination<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

// ---------------------------------------------------------------------------
// exponent functionals

/// `u_{i,n}(m)`.
pub fn u_exponent(cartan: &CartanDatum, m: &VWMonomial, i: Node, n: i32) -> i64 {
    let mut u = m.w_at(i, n) as i64 - m.v_at(i, n - 1) as i64 - m.v_at(i, n + 1) as i64;
    for &j in cartan.neighbors(i) {
        u += m.v_at(j, n) as i64;
    }
    u
}

/// All nonzero `u_{i,n}(m)`, i.e. the `Y`-monomial `Π̂(m)` without its power of `t`.
pub fn u_exponents(cartan: &CartanDatum, m: &VWMonomial) -> YMonomial {
    let spec = m.spec;
    let mut items = Vec::with_capacity(m.entries.len() * 4);
    for e in &m.entries {
        if e.w != 0 {
            items.push((e.node, e.shift, e.w as i64));
        }
        if e.v != 0 {
            let v = e.v as i64;
            items.push((e.node, e.shift - 1, -v));
            items.push((e.node, e.shift + 1, -v));
            for &j in cartan.neighbors(e.node) {
                items.push((j, e.shift, v));
            }
        }
    }
    YMonomial::from_entries(spec, items)
}

/// The exponents `w_{i,n}(m)` as a `Y`-style exponent list.
fn w_exponents(m: &VWMonomial) -> YMonomial {
    YMonomial::from_entries(
        m.spec,
        m.entries.iter().map(|e| (e.node, e.shift, e.w as i64)),
    )
}

pub fn is_i_dominant(cartan: &CartanDatum, m: &VWMonomial, i: Node) -> bool {
    u_exponents(cartan, m)
        .entries
        .iter()
        .all(|&(j, _, u)| j != i || u >= 0)
}

pub fn is_l_dominant(cartan: &CartanDatum, m: &VWMonomial) -> bool {
    u_exponents(cartan, m).is_dominant()
}

/// `d(m1, m2) = sum_{i,n} v_{i,n+1}(m1) u_{i,n}(m2) + w_{i,n+1}(m1) v_{i,n}(m2)`
/// without checking specs.
pub(crate) fn pair(cartan: &CartanDatum, m1: &VWMonomial, m2: &VWMonomial) -> i64 {
    let mut d = 0i64;
    for e in &m1.entries {
        let n = e.shift - 1;
        if e.v != 0 {
            d += e.v as i64 * u_exponent(cartan, m2, e.node, n);
        }
        if e.w != 0 {
            d += e.w as i64 * m2.v_at(e.node, n) as i64;
        }
    }
    d
}

/// The bilinear pairing `d(m1, m2)`.
pub fn pairing_d(cartan: &CartanDatum, m1: &VWMonomial, m2: &VWMonomial) -> Result<i64> {
    m1.spec.check_same(m2.spec)?;
    Ok(pair(cartan, m1, m2))
}

/// Twisted product `x ∗ y`, the bilinear extension of
/// `m1 ∗ m2 = t^{2 d(m1, m2)} m1 m2`.
pub fn star_product(cartan: &CartanDatum, x: &Character, y: &Character) -> Result<Character> {
    x.spec.check_same(y.spec)?;
    let mut out = Character::zero(x.spec);
    for (m1, a) in &x.terms {
        for (m2, b) in &y.terms {
            let d = pair(cartan, m1, m2);
            out.add_term(m1.mul_unchecked(m2), &(a * b).shift(2 * d as i32));
        }
    }
    Ok(out)
}

/// The bar involution: `t -> t^-1`, `m -> t^{2 d(m,m)} m`.
pub fn bar(cartan: &CartanDatum, x: &Character) -> Character {
    x.map_coeffs(|m, c| c.bar().shift(2 * pair(cartan, m, m) as i32))
}

/// The bar involution on `Y`-characters: `t -> t^-1`, `Y` fixed.
pub fn bar_y(x: &YCharacter) -> YCharacter {
    x.map_coeffs(|_, c| c.bar())
}

/// `E_i(m)` for an `i`-dominant monomial `m`:
/// `m prod_n sum_r t^{r(u-r)} [u choose r]_t V_{i,n+1}^r` with `u = u_{i,n}(m)`.
pub fn e_expansion(cartan: &CartanDatum, m: &VWMonomial, i: Node) -> Result<Character> {
    let u = u_exponents(cartan, m);
    let mut factors = Vec::new();
    for &(j, n, k) in u.entries() {
        if j != i {
            continue;
        }
        if k < 0 {
            return Err(Error::NotIDominant {
                node: i as u32,
                monomial: format!("{m}"),
            });
        }
        factors.push((n + 1, k as u32));
    }
    let mut terms: Vec<(VWMonomial, TPoly)> = vec![(m.clone(), TPoly::one())];
    for (shift, k) in factors {
        let row: Vec<TPoly> = binomial_row(k)
            .into_iter()
            .enumerate()
            .map(|(r, b)| b.shift(r as i32 * (k as i32 - r as i32)))
            .collect();
        let mut next = Vec::with_capacity(terms.len() * row.len());
        for (mono, coeff) in &terms {
            for (r, b) in row.iter().enumerate() {
                next.push((mono.times_v(i, shift, r as u32), coeff * b));
            }
        }
        terms = next;
    }
    let mut out = Character::zero(m.spec);
    for (mono, c) in terms {
        out.add_term(mono, &c);
    }
    Ok(out)
}

/// `m <= m2`: same `W`-part and `m / m2` is a monomial in the `V`'s.
pub fn leq(m: &VWMonomial, m2: &VWMonomial) -> Result<bool> {
    m.spec.check_same(m2.spec)?;
    Ok(leq_unchecked(m, m2))
}

pub(crate) fn leq_unchecked(m: &VWMonomial, m2: &VWMonomial) -> bool {
    if m.w_part() != m2.w_part() {
        return false;
    }
    m2.entries.iter().all(|e| m.v_at(e.node, e.shift) >= e.v)
}

/// Strict variant of [`leq`].
pub fn lt(m: &VWMonomial, m2: &VWMonomial) -> Result<bool> {
    Ok(leq(m, m2)? && m != m2)
}

/// `Π̂(m) = t^{-d(m,m)} prod Y_{i,n}^{u_{i,n}(m)}`, returned as the pair
/// `(Y-monomial, t^{-d(m,m)})`.
pub fn project_pi(cartan: &CartanDatum, m: &VWMonomial) -> (YMonomial, TPoly) {
    (u_exponents(cartan, m), TPoly::t_pow(-pair(cartan, m, m) as i32))
}

/// Linear extension of [`project_pi`] to characters.
pub fn project_character(cartan: &CartanDatum, x: &Character) -> YCharacter {
    let mut out = YCharacter::zero(x.spec);
    for (m, c) in &x.terms {
        let (y, scalar) = project_pi(cartan, m);
        out.add_term(y, &(c * &scalar));
    }
    out
}

/// Collapses shifts: the ordinary character as weight (in the fundamental
/// weight basis) to multiplicity at `t = 1`.
pub fn weight_project(cartan: &CartanDatum, x: &Character) -> BTreeMap<Vec<i64>, BigInt> {
    weight_project_y(cartan, &project_character(cartan, x))
}

pub fn weight_project_y(cartan: &CartanDatum, x: &YCharacter) -> BTreeMap<Vec<i64>, BigInt> {
    let mut out: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for (y, c) in x.iter() {
        *out.entry(y.weight(cartan.rank())).or_default() += c.eval_at_one();
    }
    out.retain(|_, c| !c.is_zero());
    out
}

// ---------------------------------------------------------------------------
// tilde variants (generic ε only)

/// Solution `x̃` of `x_{i,n} = x̃_{i,n-1} + x̃_{i,n+1} - sum_{j ~ i} x̃_{j,n}`
/// vanishing below the support of `x`, tabulated lazily up to a shift bound.
struct TildeTable<'a> {
    cartan: &'a CartanDatum,
    source: &'a YMonomial,
    /// `x̃` vanishes at every shift `<= floor`.
    floor: i32,
    /// `levels[k]` holds `x̃_{·, floor + k}` indexed by node - 1.
    levels: Vec<Vec<i64>>,
}

impl<'a> TildeTable<'a> {
    fn new(cartan: &'a CartanDatum, source: &'a YMonomial) -> Self {
        let floor = source.entries.iter().map(|e| e.1).min().unwrap_or(0);
        let rank = cartan.rank();
        TildeTable {
            cartan,
            source,
            floor,
            levels: vec![vec![0; rank], vec![0; rank]],
        }
    }

    fn get(&mut self, i: Node, n: i32) -> i64 {
        if n <= self.floor {
            return 0;
        }
        // levels[0] is the (all-zero) shift floor - 1 slot
        let want = (n - self.floor + 1) as usize;
        while self.levels.len() <= want {
            let k = self.levels.len();
            let shift = self.floor + k as i32 - 2; // shift of levels[k - 1]
            let (prev, cur) = (&self.levels[k - 2], &self.levels[k - 1]);
            let next: Vec<i64> = self
                .cartan
                .nodes()
                .map(|j| {
                    let idx = j as usize - 1;
                    let adj: i64 = self
                        .cartan
                        .neighbors(j)
                        .iter()
                        .map(|&l| cur[l as usize - 1])
                        .sum();
                    self.source.exponent(j, shift) - prev[idx] + adj
                })
                .collect();
            self.levels.push(next);
        }
        self.levels[want][i as usize - 1]
    }
}

/// `-sum_{i,n} left_{i,n} right̃_{i,n-1}`.
fn tilde_pairing(cartan: &CartanDatum, left: &YMonomial, right: &YMonomial) -> i64 {
    let mut table = TildeTable::new(cartan, right);
    -left
        .entries
        .iter()
        .map(|&(i, n, x)| x * table.get(i, n - 1))
        .sum::<i64>()
}

fn require_generic(spec: SpectralSpec) -> Result<()> {
    if spec.is_generic() {
        Ok(())
    } else {
        Err(Error::RootOfUnityUnsupported)
    }
}

/// `ũ_{i,n}(m)`.
pub fn u_tilde(cartan: &CartanDatum, m: &VWMonomial, i: Node, n: i32) -> Result<i64> {
    require_generic(m.spec)?;
    let u = u_exponents(cartan, m);
    Ok(TildeTable::new(cartan, &u).get(i, n))
}

/// `d̃(m1, m2) = -sum u_{i,n}(m1) ũ_{i,n-1}(m2)`.
pub fn tilde_d(cartan: &CartanDatum, m1: &VWMonomial, m2: &VWMonomial) -> Result<i64> {
    require_generic(m1.spec)?;
    m1.spec.check_same(m2.spec)?;
    Ok(tilde_pairing(
        cartan,
        &u_exponents(cartan, m1),
        &u_exponents(cartan, m2),
    ))
}

/// `d̃_W(m1, m2)`: `d̃` with `u` replaced by `w`.
pub fn tilde_d_w(cartan: &CartanDatum, m1: &VWMonomial, m2: &VWMonomial) -> Result<i64> {
    require_generic(m1.spec)?;
    m1.spec.check_same(m2.spec)?;
    Ok(tilde_pairing(cartan, &w_exponents(m1), &w_exponents(m2)))
}

/// `d̃` on `Y`-monomials; it only depends on the exponents `u`.
pub fn tilde_d_y(cartan: &CartanDatum, y1: &YMonomial, y2: &YMonomial) -> Result<i64> {
    require_generic(y1.spec)?;
    y1.spec.check_same(y2.spec)?;
    Ok(tilde_pairing(cartan, y1, y2))
}

/// `x ∗̃ y` on `W`/`V` monomials: `m1 ∗̃ m2 = t^{d̃(m1,m2) - d̃(m2,m1)} m1 m2`.
pub fn tilde_product(cartan: &CartanDatum, x: &Character, y: &Character) -> Result<Character> {
    require_generic(x.spec)?;
    x.spec.check_same(y.spec)?;
    let mut out = Character::zero(x.spec);
    for (m1, a) in &x.terms {
        let u1 = u_exponents(cartan, m1);
        for (m2, b) in &y.terms {
            let u2 = u_exponents(cartan, m2);
            let e = tilde_pairing(cartan, &u1, &u2) - tilde_pairing(cartan, &u2, &u1);
            out.add_term(m1.mul_unchecked(m2), &(a * b).shift(e as i32));
        }
    }
    Ok(out)
}

/// `x ∗̃ y` on `Y`-monomials, with the same exponent `d̃(y1,y2) - d̃(y2,y1)`.
pub fn tilde_product_y(cartan: &CartanDatum, x: &YCharacter, y: &YCharacter) -> Result<YCharacter> {
    require_generic(x.spec)?;
    x.spec.check_same(y.spec)?;
    let mut out = YCharacter::zero(x.spec);
    for (y1, a) in &x.terms {
        for (y2, b) in &y.terms {
            let e = tilde_pairing(cartan, y1, y2) - tilde_pairing(cartan, y2, y1);
            out.add_term(y1.mul(y2), &(a * b).shift(e as i32));
        }
    }
    Ok(out)
}

/// Shorthand used by diagnostics.
pub(crate) fn describe(m: &VWMonomial) -> String {
    format!("{m}")
}
