mod common;

use num_bigint::BigInt;
use qchar_core::kl::{simple_characters_of, KLTable};
use qchar_core::standard::{membership_check, specialize};
use qchar_core::yring::{is_l_dominant, leq, project_character, weight_project};
use qchar_core::{CartanDatum, DrinfeldPoly, EngineOptions, Session, SpectralSpec, TPoly};

const G: SpectralSpec = SpectralSpec::GENERIC;

fn session(label: &str) -> Session {
    Session::new(CartanDatum::parse(label).unwrap()).with_options(EngineOptions {
        cap: None,
        cross_check: true,
    })
}

#[test]
fn oracle_sanity() {
    let c = CartanDatum::parse("E8").unwrap();
    assert_eq!(common::positive_roots(&c).len(), 120);
    assert_eq!(common::weyl_dimension(&c, &[0, 0, 0, 0, 0, 0, 1, 0]), BigInt::from(248));
    let c = CartanDatum::parse("A2").unwrap();
    assert_eq!(common::weyl_dimension(&c, &[1, 1]), BigInt::from(8));
}

#[test]
fn minuscule_fundamentals_have_weyl_dimension() {
    let mut cases: Vec<(&str, u8)> = Vec::new();
    for (label, rank) in [("A1", 1), ("A2", 2), ("A3", 3), ("A4", 4)] {
        cases.extend((1..=rank).map(|i| (label, i)));
    }
    cases.extend([("D4", 1), ("D4", 3), ("D4", 4), ("D5", 1), ("D5", 4), ("D5", 5)]);
    for (label, i) in cases {
        let mut s = session(label);
        let c = s.cartan().clone();
        let x = s.fundamental_character(i, 0, G).unwrap();
        let mut lambda = vec![0; c.rank()];
        lambda[i as usize - 1] = 1;
        assert_eq!(x.size_at_t_one(), common::weyl_dimension(&c, &lambda), "{label} node {i}");
        // minuscule: every weight has multiplicity one and all coefficients are 1
        let weights = weight_project(&c, &x);
        assert!(weights.values().all(|k| *k == BigInt::from(1)));
        assert!(x.iter().all(|(_, k)| k.is_one()));
    }
}

#[test]
fn d4_adjoint_node_fundamental() {
    // V(ω_2) ⊕ trivial at t = 1
    let mut s = session("D4");
    let c = s.cartan().clone();
    let x = s.fundamental_character(2, 0, G).unwrap();
    assert_eq!(x.size_at_t_one(), BigInt::from(29));
    assert_eq!(weight_project(&c, &x)[&vec![0, 0, 0, 0]], BigInt::from(5));
    assert!(x.iter().all(|(_, k)| k.is_nonneg_poly_in_t2()));
    assert!(membership_check(&c, &x).passed());
}

#[test]
fn a3_middle_node() {
    let mut s = session("A3");
    let x = s.fundamental_character(2, 0, G).unwrap();
    assert_eq!(x.len(), 6);
    assert_eq!(x.size_at_t_one(), BigInt::from(6));
}

fn standards() -> Vec<(&'static str, &'static str)> {
    vec![
        ("A1", "1:0:2,1:2"),
        ("A1", "1:0,1:2,1:4"),
        ("A2", "1:0,2:1"),
        ("A2", "1:0,1:2,2:3"),
        ("A3", "2:0,1:1,3:1"),
        ("D4", "1:0,3:2"),
        ("D4", "2:0,1:1"),
        ("A2", "1:0,2:1,1:2,2:3"),
        ("A3", "1:0,2:1,3:2,2:3"),
        ("D4", "2:0,2:2,1:3"),
    ]
}

#[test]
fn standard_modules_satisfy_the_axioms() {
    for (label, roots) in standards() {
        let mut s = session(label);
        let c = s.cartan().clone();
        let p = DrinfeldPoly::parse(&c, roots, G).unwrap();
        let x = s.standard_character(&p).unwrap();
        let top = p.top();
        assert!(x.coeff(&top).is_one());
        for (m, k) in x.iter() {
            assert!(leq(m, &top).unwrap(), "{label} {roots}: {m}");
            assert!(k.is_nonneg_poly_in_t2(), "{label} {roots}: {k}");
        }
        assert!(membership_check(&c, &x).passed(), "{label} {roots}");
        for s_ord in 1..=3 {
            let y = specialize(&c, &x, s_ord);
            assert_eq!(y.size_at_t_one(), x.size_at_t_one());
            assert!(membership_check(&c, &y).passed(), "{label} {roots} at order {s_ord}");
        }
    }
}

#[test]
fn equal_shift_factor_order_is_irrelevant_at_t_one() {
    // the ordinary character of the product does not see the twist
    let mut s = session("A3");
    let c = s.cartan().clone();
    let p = DrinfeldPoly::parse(&c, "1:0,3:0,2:1", G).unwrap();
    let x = s.standard_character(&p).unwrap();
    let mut plain = qchar_core::Character::trivial(G);
    for (i, n) in [(3, 0), (1, 0), (2, 1)] {
        let f = s.fundamental_character(i, n, G).unwrap();
        let mut next = qchar_core::Character::zero(G);
        for (m1, a) in plain.iter() {
            for (m2, b) in f.iter() {
                next.add_term(m1.mul(m2).unwrap(), &TPoly::from(a.eval_at_one() * b.eval_at_one()));
            }
        }
        plain = next;
    }
    let x1 = project_character(&c, &x).at_t_one();
    let p1 = project_character(&c, &plain).at_t_one();
    assert_eq!(x1, p1);
}

fn check_table(t: &KLTable) {
    let n = t.len();
    for p in 0..n {
        for q in 0..n {
            for m in [&t.c, &t.u, &t.z] {
                if q < p {
                    assert!(m[p][q].is_zero());
                }
                if q == p {
                    assert!(m[p][q].is_one());
                }
            }
            if q > p {
                assert!(t.z[p][q].in_negative_span());
                let f = t.f(p, q);
                assert_eq!(f.bar(), -&f);
                // Z(t^{-1}) = sum_{p <= s <= q} u_{ps} Z_{sq}
                let mut rhs = TPoly::zero();
                for s in p..=q {
                    rhs += &(&t.u[p][s] * &t.z[s][q]);
                }
                assert_eq!(t.z[p][q].bar(), rhs);
            }
            // sum_s u_{ps}(t^{-1}) u_{sq}(t) = δ
            let mut acc = TPoly::zero();
            for s in 0..n {
                acc += &(&t.u[p][s].bar() * &t.u[s][q]);
            }
            assert_eq!(acc, if p == q { TPoly::one() } else { TPoly::zero() });
        }
    }
    if t.is_small() {
        assert_eq!(t.z, t.c);
    }
}

#[test]
fn kl_tables_are_consistent() {
    for (label, roots) in standards() {
        let mut s = session(label);
        let c = s.cartan().clone();
        let p = DrinfeldPoly::parse(&c, roots, G).unwrap();
        let t = KLTable::build(&mut s, &p).unwrap();
        check_table(&t);

        // Σ_Q [M(P):L(Q)] dim L(Q) = dim M(P)
        let simples = simple_characters_of(&mut s, &t).unwrap();
        let mut total = BigInt::from(0);
        for (q, chi) in simples.iter().enumerate() {
            total += t.z[0][q].eval_at_one() * chi.size_at_t_one();
        }
        assert_eq!(total, s.standard_character(&p).unwrap().size_at_t_one(), "{label} {roots}");

        // each simple has its top monomial once, with coefficient 1
        for (q, chi) in simples.iter().enumerate() {
            let top = qchar_core::yring::u_exponents(&c, &t.index[q]);
            assert!(chi.coeff(&top).is_one(), "{label} {roots}");
        }
    }
}

#[test]
fn smallness_is_hereditary() {
    for (label, roots) in standards() {
        let mut s = session(label);
        let c = s.cartan().clone();
        let p = DrinfeldPoly::parse(&c, roots, G).unwrap();
        let t = KLTable::build(&mut s, &p).unwrap();
        if !t.is_small() {
            continue;
        }
        for m in &t.index[1..] {
            let pm = DrinfeldPoly::from_y(&qchar_core::yring::u_exponents(&c, m)).unwrap();
            assert!(KLTable::build(&mut s, &pm).unwrap().is_small(), "{label} {roots} below {m}");
        }
    }
}

#[test]
fn order_one_sl2_table_matches_weight_multiplicities() {
    let mut s = session("A1");
    let c = s.cartan().clone();
    let p = DrinfeldPoly::parse(&c, "1:0:2", SpectralSpec::with_order(1)).unwrap();
    let t = KLTable::build(&mut s, &p).unwrap();
    check_table(&t);
    assert!(t.is_semismall());
    // V(2Λ) has weights 2, 0, -2 with multiplicity one
    let top_constants: Vec<BigInt> = t.c[0].iter().map(|e| e.coeff(0)).collect();
    assert_eq!(top_constants, [BigInt::from(1), BigInt::from(1)]);
    assert!(t.index.iter().all(|m| is_l_dominant(&c, m)));
}
