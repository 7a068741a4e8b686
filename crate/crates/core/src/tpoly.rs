//! Laurent polynomials in `t` with arbitrary-precision integer coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse element of `Z[t, t^-1]`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so the empty
/// term list is the zero polynomial and structural equality is ring equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TPoly {
    terms: Vec<(i32, BigInt)>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        TPoly::monomial(0, 1)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        TPoly::monomial(1, 1)
    }

    /// `coeff * t^exp`.
    pub fn monomial(exp: i32, coeff: impl Into<BigInt>) -> Self {
        let coeff = coeff.into();
        if coeff.is_zero() {
            TPoly::zero()
        } else {
            TPoly {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// `t^exp`.
    pub fn t_pow(exp: i32) -> Self {
        TPoly::monomial(exp, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs in any order;
    /// repeated exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut acc: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_default() += c.into();
        }
        TPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// `(exponent, coefficient)` pairs sorted by exponent.
    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        TPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return TPoly::zero();
        }
        TPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// The substitution `t -> t^-1`.
    pub fn bar(&self) -> Self {
        TPoly {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, c.clone()))
                .collect(),
        }
    }

    /// Sum of the terms with strictly negative exponent.
    pub fn negative_part(&self) -> Self {
        TPoly {
            terms: self.terms.iter().filter(|(e, _)| *e < 0).cloned().collect(),
        }
    }

    /// Value at `t = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Whether the polynomial lies in `t^-1 Z[t^-1]`.
    pub fn in_negative_span(&self) -> bool {
        self.max_exp().is_none_or(|e| e < 0)
    }

    /// Whether the polynomial lies in `Z[t^-1]`.
    pub fn in_nonpositive_span(&self) -> bool {
        self.max_exp().is_none_or(|e| e <= 0)
    }

    /// Whether the polynomial lies in `N[t^2]`.
    pub fn is_nonneg_poly_in_t2(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| *e >= 0 && e % 2 == 0 && c.is_positive())
    }

    fn add_scaled(&mut self, other: &TPoly, negate: bool) {
        if other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = core::mem::take(&mut self.terms).into_iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ea, _)), Some((eb, _))) if ea == eb => {
                    let (e, ca) = a.next().unwrap();
                    let (_, cb) = b.next().unwrap();
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((e, c));
                    }
                }
                (Some((ea, _)), Some((eb, _))) if ea < eb => out.push(a.next().unwrap()),
                (Some(_), Some(_)) | (None, Some(_)) => {
                    let (e, c) = b.next().unwrap();
                    out.push((*e, if negate { -c } else { c.clone() }));
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, None) => break,
            }
        }
        self.terms = out;
    }

    fn mul_ref(&self, other: &TPoly) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        if other.terms.len() == 1 {
            let (k, c) = &other.terms[0];
            return TPoly {
                terms: self.terms.iter().map(|(e, a)| (e + k, a * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return other.mul_ref(self);
        }
        let lo = self.min_exp().unwrap() + other.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + other.max_exp().unwrap();
        let span = (hi - lo) as usize + 1;
        if span <= 4096 {
            let mut dense = vec![BigInt::zero(); span];
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    dense[(ea + eb - lo) as usize] += ca * cb;
                }
            }
            TPoly {
                terms: dense
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (lo + k as i32, c))
                    .collect(),
            }
        } else {
            TPoly::from_terms(
                self.terms
                    .iter()
                    .flat_map(|(ea, ca)| other.terms.iter().map(move |(eb, cb)| (ea + eb, ca * cb))),
            )
        }
    }

    /// The balanced Gaussian binomial `[n choose r]_t`, invariant under
    /// `t -> t^-1`.
    pub fn t_binomial(n: u32, r: u32) -> Result<Self> {
        if r > n {
            return Err(Error::ArgumentOutOfRange { n, r });
        }
        Ok(binomial_row(n).swap_remove(r as usize))
    }

    /// `t^{r(n-r)} [n choose r]_t`, the coefficient appearing in the `E_i`
    /// blocks; always an element of `N[t^2]`.
    pub fn shifted_binomial(n: u32, r: u32) -> Result<Self> {
        Ok(TPoly::t_binomial(n, r)?.shift((r * (n - r)) as i32))
    }
}

/// Row `n` of the balanced Gaussian Pascal triangle, built with
/// `[n, r] = t^r [n-1, r] + t^{r-n} [n-1, r-1]`.
pub(crate) fn binomial_row(n: u32) -> Vec<TPoly> {
    let mut row = vec![TPoly::one()];
    for k in 1..=n as i32 {
        let mut next = Vec::with_capacity(row.len() + 1);
        for r in 0..=k {
            let mut entry = TPoly::zero();
            if r < k {
                entry += &row[r as usize].shift(r);
            }
            if r > 0 {
                entry += &row[r as usize - 1].shift(r - k);
            }
            next.push(entry);
        }
        row = next;
    }
    row
}

impl From<i64> for TPoly {
    fn from(c: i64) -> Self {
        TPoly::monomial(0, c)
    }
}

impl From<BigInt> for TPoly {
    fn from(c: BigInt) -> Self {
        TPoly::monomial(0, c)
    }
}

impl AddAssign<&TPoly> for TPoly {
    fn add_assign(&mut self, rhs: &TPoly) {
        self.add_scaled(rhs, false);
    }
}

impl AddAssign for TPoly {
    fn add_assign(&mut self, rhs: TPoly) {
        self.add_scaled(&rhs, false);
    }
}

impl SubAssign<&TPoly> for TPoly {
    fn sub_assign(&mut self, rhs: &TPoly) {
        self.add_scaled(rhs, true);
    }
}

impl SubAssign for TPoly {
    fn sub_assign(&mut self, rhs: TPoly) {
        self.add_scaled(&rhs, true);
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for TPoly {
    type Output = TPoly;
    fn add(mut self, rhs: TPoly) -> TPoly {
        self += &rhs;
        self
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for TPoly {
    type Output = TPoly;
    fn sub(mut self, rhs: TPoly) -> TPoly {
        self -= &rhs;
        self
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        self.mul_ref(rhs)
    }
}

impl Mul for TPoly {
    type Output = TPoly;
    fn mul(self, rhs: TPoly) -> TPoly {
        self.mul_ref(&rhs)
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -self.clone()
    }
}

impl fmt::Display for TPoly {
    /// Highest exponent first, e.g. `t^2 + 2 + t^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{abs}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{abs}t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{abs}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn p(terms: &[(i32, i64)]) -> TPoly {
        TPoly::from_terms(terms.iter().copied())
    }

    fn t_plus_inv() -> TPoly {
        p(&[(1, 1), (-1, 1)])
    }

    #[test]
    fn ring_examples() {
        assert!((&TPoly::t() + &-TPoly::t()).is_zero());
        assert!((TPoly::t() * TPoly::t_pow(-1)).is_one());
        assert_eq!(t_plus_inv() * t_plus_inv(), p(&[(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p(&[(2, 1), (0, 1)]).bar(), p(&[(-2, 1), (0, 1)]));
        assert!(TPoly::zero().bar().is_zero());
        assert_eq!(p(&[(1, 1), (-1, -1)]).bar(), p(&[(-1, 1), (1, -1)]));
    }

    #[test]
    fn negative_part_examples() {
        assert_eq!(p(&[(1, 1), (-1, -1)]).negative_part(), p(&[(-1, -1)]));
        assert!(TPoly::from(5).negative_part().is_zero());
        assert_eq!(p(&[(-2, 1), (0, 1), (2, 1)]).negative_part(), p(&[(-2, 1)]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(t_plus_inv().eval_at_one(), BigInt::from(2));
        assert_eq!(TPoly::zero().eval_at_one(), BigInt::from(0));
        assert_eq!(p(&[(2, 1), (0, 2), (-2, 1)]).eval_at_one(), BigInt::from(4));
    }

    /// `[n]_t = (t^n - t^-n) / (t - t^-1)` written out termwise.
    fn quantum_integer(n: u32) -> TPoly {
        TPoly::from_terms((0..n).map(|k| (n as i32 - 1 - 2 * k as i32, 1)))
    }

    fn quantum_factorial(n: u32) -> TPoly {
        (1..=n).fold(TPoly::one(), |acc, k| acc * quantum_integer(k))
    }

    #[test]
    fn binomial_examples() {
        assert!(TPoly::t_binomial(1, 1).unwrap().is_one());
        assert_eq!(TPoly::t_binomial(2, 1).unwrap(), t_plus_inv());
        assert_eq!(TPoly::t_binomial(3, 1).unwrap(), p(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(
            TPoly::t_binomial(1, 2),
            Err(Error::ArgumentOutOfRange { n: 1, r: 2 })
        );
    }

    #[test]
    fn binomial_matches_factorial_oracle() {
        // [n choose r] [r]! [n-r]! = [n]!
        for n in 0..=9 {
            for r in 0..=n {
                let lhs = TPoly::t_binomial(n, r).unwrap()
                    * quantum_factorial(r)
                    * quantum_factorial(n - r);
                assert_eq!(lhs, quantum_factorial(n), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn shifted_binomial_is_in_n_t2() {
        for n in 0..=8 {
            for r in 0..=n {
                assert!(TPoly::shifted_binomial(n, r).unwrap().is_nonneg_poly_in_t2());
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(2, 1), (0, 2), (-2, 1)]).to_string(), "t^2 + 2 + t^-2");
        assert_eq!(p(&[(1, 1), (-1, -1)]).to_string(), "t - t^-1");
        assert_eq!(p(&[(1, -3)]).to_string(), "-3t");
        assert_eq!(TPoly::zero().to_string(), "0");
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let mut x = TPoly::from_terms([(0, 3), (1, 5)]);
        for _ in 0..6 {
            x = &x * &x;
        }
        // (3 + 5t)^64 at t = 1 is 8^64
        assert_eq!(x.eval_at_one(), BigInt::from(8).pow(64));
    }

    fn arb_poly() -> impl Strategy<Value = TPoly> {
        proptest::collection::vec((-6i32..=6, -5i64..=5), 0..6).prop_map(|v| p(&v))
    }

    proptest! {
        #[test]
        fn bar_is_involutive(x in arb_poly()) {
            prop_assert_eq!(x.bar().bar(), x);
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!(&(&a - &b) + &b, a);
        }

        #[test]
        fn binomial_symmetries(n in 0u32..12, r in 0u32..12) {
            prop_assume!(r <= n);
            let b = TPoly::t_binomial(n, r).unwrap();
            prop_assert_eq!(b.bar(), b.clone());
            prop_assert_eq!(TPoly::t_binomial(n, n - r).unwrap(), b.clone());
            if n >= 1 {
                let mut pascal = TPoly::zero();
                if r < n {
                    pascal += TPoly::t_binomial(n - 1, r).unwrap().shift(r as i32);
                }
                if r >= 1 {
                    pascal += TPoly::t_binomial(n - 1, r - 1).unwrap().shift(r as i32 - n as i32);
                }
                prop_assert_eq!(pascal, b);
            }
        }
    }
}
