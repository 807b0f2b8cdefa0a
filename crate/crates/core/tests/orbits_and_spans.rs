mod common;

use common::*;
use cyclonic::arith::{divisors, gcd, lcm};
use cyclonic::burnside::{burnside_mul, compose_h, BurnsideElement, HMorphism};
use cyclonic::cyclonic::{check_simplex3, intertwiners, make_orbit_map, pullback_cospan};
use cyclonic::rational::rat;
use cyclonic::supernat::Supernatural;
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #[test]
    fn finite_supernaturals_follow_gcd_and_lcm(a in 1u64..2000, b in 1u64..2000) {
        let (x, y) = (Supernatural::from(a), Supernatural::from(b));
        prop_assert_eq!(x.meet(&y), Supernatural::from(gcd(a, b)));
        prop_assert_eq!(x.join(&y), Supernatural::from(lcm(a, b)));
        prop_assert_eq!(x.divides(&y), b % a == 0);
        prop_assert_eq!(x.nest(b), divisors(a).into_iter().filter(|&d| d <= b).collect::<Vec<_>>());
        prop_assert!(x.divides(&Supernatural::infinity()));
    }

    #[test]
    fn offsets_compose_additively(m in 1u64..5, s in 1u64..4, t in 1u64..4, r in 0i64..60, q in 0i64..60) {
        let inf = Supernatural::infinity();
        let f = make_orbit_map(m, m * s, &rat(r, 60), &inf).unwrap();
        let g = make_orbit_map(m * s, m * s * t, &rat(q, 60), &inf).unwrap();
        let h = g.after(&f).unwrap();
        let expected = make_orbit_map(m, m * s * t, &rat(r + q, 60), &inf).unwrap();
        prop_assert_eq!(h, expected);
    }

    #[test]
    fn simplex_perturbations_fail(seed in 0u64..10_000, face in 0usize..4) {
        let mut rng = rng(seed);
        let s = random_simplex3(&mut rng, 12);
        prop_assert!(check_simplex3(&s).passed());
        let mut bad = s.clone();
        bad.alpha[face] += rat(1, 12);
        prop_assert!(!check_simplex3(&bad).passed());
    }
}

#[test]
fn burnside_products_match_explicit_sets() {
    for m in [1u64, 6, 12, 24, 30] {
        for k in divisors(m) {
            for l in divisors(m) {
                let x = BurnsideElement::basis(m, k).unwrap();
                let y = BurnsideElement::basis(m, l).unwrap();
                let oracle = BurnsideElement::from_pairs(
                    m,
                    coset_pullback(m, k, l, m)
                        .into_iter()
                        .map(|(s, c)| (s, BigInt::from(c))),
                )
                .unwrap();
                assert_eq!(burnside_mul(&x, &y).unwrap(), oracle, "[{k}]·[{l}] at {m}");
            }
        }
    }
}

#[test]
fn marks_are_multiplicative() {
    let x = BurnsideElement::from_pairs(
        12,
        [
            (1, BigInt::from(2)),
            (4, BigInt::from(-1)),
            (6, BigInt::from(3)),
        ],
    )
    .unwrap();
    let y = BurnsideElement::from_pairs(12, [(2, BigInt::from(1)), (12, BigInt::from(5))]).unwrap();
    let p = burnside_mul(&x, &y).unwrap();
    for d in divisors(12) {
        assert_eq!(p.fixed_points(d), x.fixed_points(d) * y.fixed_points(d));
    }
}

#[test]
fn pullbacks_match_coset_enumeration_at_every_offset() {
    let ambient = Supernatural::from(36u64);
    for n in divisors(36) {
        for k in divisors(n) {
            for l in divisors(n) {
                for r in 0..(36 / n) as i64 {
                    let f = make_orbit_map(k, n, &rat(0, 1), &ambient).unwrap();
                    let g = make_orbit_map(l, n, &rat(r, 36), &ambient).unwrap();
                    let p = pullback_cospan(&f, &g).unwrap();
                    let counts = coset_pullback(36, k, l, n);
                    assert_eq!(p.components.len() as u64, counts.values().sum::<u64>());
                    for c in &p.components {
                        assert!(counts.contains_key(&c.apex.level()));
                        // the square commutes on the nose
                        assert_eq!(f.after(&c.left).unwrap(), g.after(&c.right).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn homotopy_composition_is_associative_and_unital() {
    let ds = divisors(12);
    for &a in &ds {
        for &b in &ds {
            for &c in &ds {
                for &d in &[1u64, 4, 6, 12] {
                    for k in divisors(gcd(a, b)) {
                        for l in divisors(gcd(b, c)) {
                            for j in divisors(gcd(c, d)) {
                                let (f, g, h) = (
                                    HMorphism::basis(a, b, k).unwrap(),
                                    HMorphism::basis(b, c, l).unwrap(),
                                    HMorphism::basis(c, d, j).unwrap(),
                                );
                                let left = compose_h(&compose_h(&f, &g).unwrap(), &h).unwrap();
                                let right = compose_h(&f, &compose_h(&g, &h).unwrap()).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                        let f = HMorphism::basis(a, b, k).unwrap();
                        assert_eq!(compose_h(&HMorphism::identity(a), &f).unwrap(), f);
                        assert_eq!(compose_h(&f, &HMorphism::identity(b)).unwrap(), f);
                    }
                }
            }
        }
    }
}

#[test]
fn intertwiners_form_a_coset() {
    let inf = Supernatural::infinity();
    let u = make_orbit_map(2, 6, &rat(1, 12), &inf).unwrap();
    let v = make_orbit_map(2, 6, &rat(1, 4), &inf).unwrap();
    let c = intertwiners(&u, &v).unwrap();
    assert!(c.contains(&rat(1, 6)));
    assert!(c.contains(&rat(1, 3)));
    assert!(!c.contains(&rat(1, 12)));
}
