#![allow(dead_code)]

use num_bigint::BigInt;
use qchar_core::cartan::CartanDatum;
use qchar_core::yring::u_exponent;
use qchar_core::VWMonomial;

/// Positive roots in the simple-root basis, by closing the simple roots under
/// reflections.
pub fn positive_roots(c: &CartanDatum) -> Vec<Vec<i64>> {
    let rank = c.rank();
    let mut roots: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|k| (k == i) as i64).collect())
        .collect();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for j in c.nodes() {
            let pairing: i64 = (0..rank)
                .map(|l| beta[l] * c.entry(l as u8 + 1, j) as i64)
                .sum();
            let mut image = beta.clone();
            image[j as usize - 1] -= pairing;
            if image.iter().all(|&x| x >= 0) && image.iter().any(|&x| x > 0) && !roots.contains(&image) {
                roots.push(image);
            }
        }
        k += 1;
    }
    roots
}

/// Weyl dimension of the irreducible module with highest weight
/// `sum lambda_i Λ_i` (simply-laced, so coroots and roots agree).
pub fn weyl_dimension(c: &CartanDatum, lambda: &[i64]) -> BigInt {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for alpha in positive_roots(c) {
        let height: i64 = alpha.iter().sum();
        let shifted: i64 = height + alpha.iter().zip(lambda).map(|(a, l)| a * l).sum::<i64>();
        num *= shifted;
        den *= height;
    }
    assert_eq!(&num % &den, BigInt::from(0));
    num / den
}

/// `d(m1, m2)` straight from its double sum over a window of shifts.
pub fn brute_force_d(c: &CartanDatum, m1: &VWMonomial, m2: &VWMonomial) -> i64 {
    let mut d = 0;
    for i in c.nodes() {
        for n in -20..40 {
            d += m1.v_at(i, n + 1) as i64 * u_exponent(c, m2, i, n)
                + m1.w_at(i, n + 1) as i64 * m2.v_at(i, n) as i64;
        }
    }
    d
}
