//! Characters with a single l-dominant monomial.
//!
//! Monomials are resolved in order of increasing total `v`-degree. Each
//! already resolved `i`-dominant monomial `m'` carries a source `a_i(m')`, and
//! contributes `a_i(m') E_i(m')` to the `i`-decomposition of the character. A
//! new monomial `m` collects `c_i(m)` from every node. If `m` is not
//! `i`-dominant its coefficient must be `c_i(m)`; for the nodes `j` where it is
//! dominant the difference becomes its own source `a_j(m)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::tpoly::TPoly;
use crate::yring::{describe, e_expansion, u_exponents, Character, VWMonomial};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineOptions {
    /// Largest total `v`-degree explored; `None` uses [`default_cap`].
    pub cap: Option<u32>,
    /// Check that every non-dominant node yields the same coefficient.
    pub cross_check: bool,
}

/// Four times the number of positive roots.
pub fn default_cap(cartan: &CartanDatum) -> u32 {
    4 * cartan.positive_root_count() as u32
}

/// Contributions waiting for a monomial, one slot per node.
type Pending = BTreeMap<(u32, VWMonomial), Vec<TPoly>>;

struct Engine<'a> {
    cartan: &'a CartanDatum,
    pending: Pending,
    determined: Character,
}

impl Engine<'_> {
    /// Registers `a_i(m) = source` and pushes `source * E_i(m)` below `m`.
    fn add_source(&mut self, m: &VWMonomial, i: u8, source: &TPoly) -> Result<()> {
        let rank = self.cartan.rank();
        for (n, coeff) in e_expansion(self.cartan, m, i)?.iter() {
            if n == m {
                continue;
            }
            let slot = self
                .pending
                .entry((n.total_v_degree(), n.clone()))
                .or_insert_with(|| vec![TPoly::zero(); rank]);
            slot[i as usize - 1] += &(coeff * source);
        }
        Ok(())
    }
}

/// The unique character with `top` as its only l-dominant monomial, if it
/// exists; `top` must be a pure `W`-monomial at generic `ε`.
pub fn special_character(
    cartan: &CartanDatum,
    top: &VWMonomial,
    opts: EngineOptions,
) -> Result<Character> {
    if !top.spec().is_generic() {
        return Err(Error::RootOfUnityUnsupported);
    }
    if !top.is_pure_w() {
        return Err(Error::NotPureW(describe(top)));
    }
    let cap = opts.cap.unwrap_or_else(|| default_cap(cartan));
    let mut engine = Engine {
        cartan,
        pending: BTreeMap::new(),
        determined: Character::from_monomial(top.clone()),
    };
    for i in cartan.nodes() {
        engine.add_source(top, i, &TPoly::one())?;
    }

    while let Some(((level, m), contributions)) = engine.pending.pop_first() {
        if level > cap {
            return Err(Error::CapExceeded(cap));
        }
        let u = u_exponents(cartan, &m);
        let mut dominant = vec![true; cartan.rank()];
        for &(i, _, k) in u.entries() {
            if k < 0 {
                dominant[i as usize - 1] = false;
            }
        }
        let Some(first_bad) = dominant.iter().position(|d| !d) else {
            if contributions.iter().any(|c| !c.is_zero()) {
                return Err(Error::NotSpecial(describe(&m)));
            }
            continue;
        };
        let coeff = contributions[first_bad].clone();
        if opts.cross_check {
            for (k, c) in contributions.iter().enumerate() {
                if !dominant[k] && *c != coeff {
                    return Err(Error::InternalInconsistency(alloc::format!(
                        "coefficient of {} differs between nodes {} and {}",
                        describe(&m),
                        first_bad + 1,
                        k + 1
                    )));
                }
            }
        }
        engine.determined.add_term(m.clone(), &coeff);
        for (k, c) in contributions.iter().enumerate() {
            if dominant[k] {
                let source = &coeff - c;
                if !source.is_zero() {
                    engine.add_source(&m, k as u8 + 1, &source)?;
                }
            }
        }
    }
    Ok(engine.determined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yring::{is_l_dominant, project_character, SpectralSpec, YMonomial};

    const G: SpectralSpec = SpectralSpec::GENERIC;

    fn checked() -> EngineOptions {
        EngineOptions {
            cap: None,
            cross_check: true,
        }
    }

    #[test]
    fn a1_fundamental() {
        let c = CartanDatum::parse("A1").unwrap();
        let w = VWMonomial::w(G, 1, 0);
        let x = special_character(&c, &w, checked()).unwrap();
        assert_eq!(x.len(), 2);
        assert!(x.coeff(&w).is_one());
        assert!(x.coeff(&w.times_v(1, 1, 1)).is_one());
    }

    #[test]
    fn a2_fundamental_y_forms() {
        let c = CartanDatum::parse("A2").unwrap();
        let x = special_character(&c, &VWMonomial::w(G, 1, 0), checked()).unwrap();
        let y = project_character(&c, &x);
        let expect = [
            YMonomial::from_entries(G, [(1, 0, 1)]),
            YMonomial::from_entries(G, [(1, 2, -1), (2, 1, 1)]),
            YMonomial::from_entries(G, [(2, 3, -1)]),
        ];
        assert_eq!(y.len(), 3);
        for m in &expect {
            assert!(y.coeff(m).is_one(), "{m}");
        }
    }

    #[test]
    fn non_special_top_is_rejected() {
        let c = CartanDatum::parse("A1").unwrap();
        let top = VWMonomial::from_entries(G, [(1, 0, 1, 0), (1, 2, 1, 0)]);
        assert!(matches!(
            special_character(&c, &top, checked()),
            Err(Error::NotSpecial(_))
        ));
    }

    #[test]
    fn separated_roots_give_a_special_top() {
        // on A1 the strings below W_{1,0} and W_{1,4} never meet
        let c = CartanDatum::parse("A1").unwrap();
        let top = VWMonomial::from_entries(G, [(1, 0, 1, 0), (1, 4, 1, 0)]);
        let x = special_character(&c, &top, checked()).unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(x.monomials().filter(|m| is_l_dominant(&c, m)).count(), 1);
    }

    #[test]
    fn cap_and_input_errors() {
        let c = CartanDatum::parse("A3").unwrap();
        let opts = EngineOptions {
            cap: Some(1),
            cross_check: false,
        };
        assert_eq!(
            special_character(&c, &VWMonomial::w(G, 2, 0), opts),
            Err(Error::CapExceeded(1))
        );
        assert!(matches!(
            special_character(&c, &VWMonomial::v(G, 1, 0), checked()),
            Err(Error::NotPureW(_))
        ));
        let root = VWMonomial::w(SpectralSpec::with_order(2), 1, 0);
        assert_eq!(
            special_character(&c, &root, checked()),
            Err(Error::RootOfUnityUnsupported)
        );
    }

    #[test]
    fn coefficients_lie_in_n_t_squared() {
        for label in ["A3", "D4"] {
            let c = CartanDatum::parse(label).unwrap();
            for i in c.nodes() {
                let x = special_character(&c, &VWMonomial::w(G, i, 0), checked()).unwrap();
                for (_, coeff) in x.iter() {
                    assert!(coeff.is_nonneg_poly_in_t2(), "{label} node {i}: {coeff}");
                }
            }
        }
    }
}
