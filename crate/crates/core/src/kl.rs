//! The index set of l-dominant monomials below `e^P` and the matrices
//! `c`, `u`, `Z` relating standard and simple modules.
//!
//! Row and column `k` of every matrix refer to `index[k]`. The index starts
//! with `e^P` and lists monomials by increasing `v`-degree, so all matrices
//! are upper unitriangular.

#![allow(clippy::needless_range_loop)]

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::standard::{DrinfeldPoly, Session};
use crate::tpoly::TPoly;
use crate::yring::{
    is_l_dominant, pair, project_character, u_exponents, SpectralSpec, VWMonomial, YCharacter,
    YMonomial,
};

pub type Matrix = Vec<Vec<TPoly>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLTable {
    pub spec: SpectralSpec,
    pub index: Vec<VWMonomial>,
    pub c: Matrix,
    pub u: Matrix,
    pub z: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|p| {
            (0..n)
                .map(|q| if p == q { TPoly::one() } else { TPoly::zero() })
                .collect()
        })
        .collect()
}

/// `P_m`: the Drinfeld datum whose top monomial has the `Y`-image of `m`.
fn drinfeld_of(session: &Session, m: &VWMonomial) -> Result<DrinfeldPoly> {
    DrinfeldPoly::from_y(&u_exponents(session.cartan(), m))
}

/// Rows of `c` keyed by monomial, together with the closed index set.
struct Closure {
    index: Vec<VWMonomial>,
    rows: BTreeMap<VWMonomial, Vec<(VWMonomial, TPoly)>>,
}

fn closure(session: &mut Session, p: &DrinfeldPoly) -> Result<Closure> {
    let top = p.top();
    let mut seen: BTreeSet<VWMonomial> = BTreeSet::from([top.clone()]);
    let mut queue = vec![top];
    let mut rows = BTreeMap::new();
    while let Some(m) = queue.pop() {
        let pm = drinfeld_of(session, &m)?;
        let top_m = pm.top();
        let chi = session.standard_character(&pm)?;
        let mut row = Vec::new();
        for (n, a) in chi.iter() {
            if !is_l_dominant(session.cartan(), n) {
                continue;
            }
            let star = n.checked_div(&top_m).ok_or_else(|| {
                Error::InternalInconsistency(format!("{n} does not lie below {top_m}"))
            })?;
            let target = m.mul(&star)?;
            let d = pair(session.cartan(), n, n);
            row.push((target.clone(), a.shift(-d as i32)));
            if seen.insert(target.clone()) {
                queue.push(target);
            }
        }
        rows.insert(m, row);
    }
    let mut index: Vec<VWMonomial> = seen.into_iter().collect();
    index.sort_by(|a, b| (a.total_v_degree(), a).cmp(&(b.total_v_degree(), b)));
    Ok(Closure { index, rows })
}

/// The closed set of l-dominant monomials reachable from `e^P`, as a linear
/// extension of the partial order starting at `e^P`.
pub fn build_index_set(session: &mut Session, p: &DrinfeldPoly) -> Result<Vec<VWMonomial>> {
    Ok(closure(session, p)?.index)
}

/// The table with `c` filled and `u`, `Z` set to the identity.
pub fn c_matrix(session: &mut Session, p: &DrinfeldPoly) -> Result<KLTable> {
    let Closure { index, rows } = closure(session, p)?;
    let position: BTreeMap<&VWMonomial, usize> =
        index.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let n = index.len();
    let mut c = vec![vec![TPoly::zero(); n]; n];
    for (m, row) in &rows {
        let pm = position[m];
        for (target, entry) in row {
            let q = *position.get(target).ok_or_else(|| {
                Error::InternalInconsistency(format!("{target} is outside the index set"))
            })?;
            if q < pm {
                return Err(Error::InternalInconsistency(format!(
                    "{target} lies above {m} in the index order"
                )));
            }
            c[pm][q] += entry;
        }
    }
    for (k, row) in c.iter().enumerate() {
        if !row[k].is_one() {
            return Err(Error::InternalInconsistency(format!(
                "diagonal entry {} at {}",
                row[k], index[k]
            )));
        }
    }
    Ok(KLTable {
        spec: p.spec(),
        index,
        c,
        u: identity(n),
        z: identity(n),
    })
}

/// Inverse of an upper unitriangular matrix.
pub fn unitriangular_inverse(c: &Matrix) -> Matrix {
    let n = c.len();
    let mut inv = identity(n);
    for q in 0..n {
        for p in (0..q).rev() {
            let mut acc = TPoly::zero();
            for s in p + 1..=q {
                if !c[p][s].is_zero() && !inv[s][q].is_zero() {
                    acc -= &(&c[p][s] * &inv[s][q]);
                }
            }
            inv[p][q] = acc;
        }
    }
    inv
}

/// `u = c̄ c^{-1}`, where `c̄` is `c` with `t -> t^{-1}`.
pub fn u_matrix(table: &mut KLTable) {
    let inv = unitriangular_inverse(&table.c);
    let n = table.c.len();
    let mut u = identity(n);
    for p in 0..n {
        for q in p + 1..n {
            let mut acc = TPoly::zero();
            for s in p..=q {
                if !table.c[p][s].is_zero() && !inv[s][q].is_zero() {
                    acc += &(&table.c[p][s].bar() * &inv[s][q]);
                }
            }
            u[p][q] = acc;
        }
    }
    table.u = u;
}

/// `F_{pq} = sum_{p < s <= q} u_{ps} Z_{sq}`.
fn f_entry(table: &KLTable, p: usize, q: usize) -> TPoly {
    let mut f = TPoly::zero();
    for s in p + 1..=q {
        if !table.u[p][s].is_zero() && !table.z[s][q].is_zero() {
            f += &(&table.u[p][s] * &table.z[s][q]);
        }
    }
    f
}

/// Solves for `Z`: `Z_{pq} = -(negative part of F_{pq})`, column by column.
pub fn kl_solve(table: &mut KLTable) -> Result<()> {
    let n = table.index.len();
    table.z = identity(n);
    for q in 0..n {
        for p in (0..q).rev() {
            let f = f_entry(table, p, q);
            if f.bar() != -&f {
                return Err(Error::AntisymmetryViolation { row: p, col: q });
            }
            table.z[p][q] = -f.negative_part();
        }
    }
    Ok(())
}

impl KLTable {
    /// Index set, `c`, `u` and `Z` for `P`.
    pub fn build(session: &mut Session, p: &DrinfeldPoly) -> Result<KLTable> {
        let mut table = c_matrix(session, p)?;
        u_matrix(&mut table);
        kl_solve(&mut table)?;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// `F_{pq}` recomputed from `u` and `Z`.
    pub fn f(&self, p: usize, q: usize) -> TPoly {
        f_entry(self, p, q)
    }

    /// `[M(P) : L(Q)]` for every `Q` met in the table, keyed by `e^Q` as a
    /// `Y`-monomial.
    pub fn multiplicities(&self, cartan: &crate::cartan::CartanDatum) -> BTreeMap<YMonomial, BigInt> {
        let mut out: BTreeMap<YMonomial, BigInt> = BTreeMap::new();
        for (q, m) in self.index.iter().enumerate() {
            *out.entry(u_exponents(cartan, m)).or_default() += self.z[0][q].eval_at_one();
        }
        out.retain(|_, k| !k.is_zero());
        out
    }

    /// Every off-diagonal entry of `c` lies in `t^{-1} Z[t^{-1}]`.
    pub fn is_small(&self) -> bool {
        self.c.iter().enumerate().all(|(p, row)| {
            row.iter()
                .enumerate()
                .all(|(q, e)| p == q || e.in_negative_span())
        })
    }

    /// Every entry of `c` lies in `Z[t^{-1}]`.
    pub fn is_semismall(&self) -> bool {
        self.c.iter().flatten().all(TPoly::in_nonpositive_span)
    }

    /// Sparse `(row, col, entry)` triples of a matrix, skipping zeros.
    pub fn triples(m: &Matrix) -> Vec<(usize, usize, &TPoly)> {
        let mut out = Vec::new();
        for (p, row) in m.iter().enumerate() {
            for (q, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    out.push((p, q, e));
                }
            }
        }
        out
    }
}

/// `[M(P) : L(Q)]` at `t = 1`.
pub fn multiplicities(session: &mut Session, p: &DrinfeldPoly) -> Result<BTreeMap<YMonomial, BigInt>> {
    let table = KLTable::build(session, p)?;
    Ok(table.multiplicities(session.cartan()))
}

/// `χ_{ε,t}(L(P))` in the `Y`-variables, generic `ε` only.
///
/// Works bottom-up through the index: `χ(L_q) = Π̂ χ̂(M(P_q)) - sum_{r > q}
/// Z_{qr} χ(L_r)`.
pub fn simple_character(session: &mut Session, p: &DrinfeldPoly) -> Result<YCharacter> {
    if !p.spec().is_generic() {
        return Err(Error::RootOfUnityUnsupported);
    }
    let table = KLTable::build(session, p)?;
    simple_characters_of(session, &table).map(|mut all| all.swap_remove(0))
}

/// Simple characters for every monomial of a generic table, in index order.
pub fn simple_characters_of(session: &mut Session, table: &KLTable) -> Result<Vec<YCharacter>> {
    if !table.spec.is_generic() {
        return Err(Error::RootOfUnityUnsupported);
    }
    let n = table.len();
    let mut simples: Vec<Option<YCharacter>> = vec![None; n];
    for q in (0..n).rev() {
        let pq = drinfeld_of(session, &table.index[q])?;
        let standard = session.standard_character(&pq)?;
        let mut chi = project_character(session.cartan(), &standard);
        for r in q + 1..n {
            let z = &table.z[q][r];
            if !z.is_zero() {
                let lower = simples[r].as_ref().expect("filled bottom-up");
                chi += &lower.scale(&-z);
            }
        }
        simples[q] = Some(chi);
    }
    Ok(simples.into_iter().map(|x| x.expect("filled")).collect())
}

/// The simple character has exactly one l-dominant monomial.
pub fn is_special(session: &mut Session, p: &DrinfeldPoly) -> Result<bool> {
    let chi = simple_character(session, p)?;
    Ok(chi.monomials().filter(|y| y.is_dominant()).count() == 1)
}

pub fn is_small(session: &mut Session, p: &DrinfeldPoly) -> Result<bool> {
    Ok(c_matrix(session, p)?.is_small())
}

pub fn is_semismall(session: &mut Session, p: &DrinfeldPoly) -> Result<bool> {
    Ok(c_matrix(session, p)?.is_semismall())
}
