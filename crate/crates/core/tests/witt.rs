mod common;

use common::*;
use cyclonic::arith::divisors;
use cyclonic::mackey::validate_mackey;
use cyclonic::witt::{
    carrier_coordinates, frobenius, from_carrier, ghost, ghost_solve, restriction, verschiebung,
    witt_add, witt_mackey, witt_mul, witt_neg, Integers, IntegersMod, Rationals, RingTag,
    WittVector,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn level() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 9, 10, 12, 16, 18, 24])
}

fn vector(level: u64) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-30i64..=30, divisors(level).len())
        .prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

fn pair() -> impl Strategy<Value = (u64, Vec<BigInt>, Vec<BigInt>)> {
    level().prop_flat_map(|m| (Just(m), vector(m), vector(m)))
}

fn zw(level: u64, c: Vec<BigInt>) -> WittVector<Integers> {
    WittVector::new(Integers, level, c).unwrap()
}

proptest! {
    #[test]
    fn sum_matches_power_series((m, x, y) in pair()) {
        let s = witt_add(&zw(m, x.clone()), &zw(m, y.clone())).unwrap();
        prop_assert_eq!(s.components(), &series_sum_oracle(m, &x, &y)[..]);
    }

    #[test]
    fn product_matches_rational_ghost_solve((m, x, y) in pair()) {
        let p = witt_mul(&zw(m, x.clone()), &zw(m, y.clone())).unwrap();
        let z: Vec<BigInt> = ghost_oracle(m, &x).iter().zip(ghost_oracle(m, &y)).map(|(a, b)| a * b).collect();
        prop_assert_eq!(Some(p.components().to_vec()), integral(&unghost_oracle(m, &z)));
    }

    #[test]
    fn ring_axioms((m, x, y) in pair(), z in vector(1)) {
        let (x, y) = (zw(m, x), zw(m, y));
        let c = WittVector::from_fn(Integers, m, |k| if k == 1 { z[0].clone() } else { BigInt::from(k as i64 % 3) });
        prop_assert_eq!(witt_add(&x, &y).unwrap(), witt_add(&y, &x).unwrap());
        prop_assert_eq!(witt_mul(&x, &y).unwrap(), witt_mul(&y, &x).unwrap());
        let lhs = witt_mul(&witt_add(&x, &y).unwrap(), &c).unwrap();
        let rhs = witt_add(&witt_mul(&x, &c).unwrap(), &witt_mul(&y, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(witt_add(&x, &witt_neg(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn ghost_solve_inverts_ghost((m, x, _y) in pair()) {
        let w = zw(m, x);
        prop_assert_eq!(ghost_solve(&ghost(&w)).unwrap(), w);
    }

    #[test]
    fn carrier_coordinates_are_additive((m, x, y) in pair()) {
        let (x, y) = (zw(m, x), zw(m, y));
        let s = carrier_coordinates(&witt_add(&x, &y).unwrap()).unwrap();
        let sum: Vec<BigInt> =
            carrier_coordinates(&x).unwrap().iter().zip(carrier_coordinates(&y).unwrap()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(&s, &sum);
        prop_assert_eq!(from_carrier(&Integers, m, &s).unwrap(), witt_add(&x, &y).unwrap());
    }

    #[test]
    fn reduction_mod_n_is_a_ring_map((m, x, y) in pair(), n in 2i64..12) {
        let r = IntegersMod::new(n).unwrap();
        let red = |w: &WittVector<Integers>| w.map(r.clone(), |c| c.mod_floor(&BigInt::from(n)));
        let (x, y) = (zw(m, x), zw(m, y));
        prop_assert_eq!(red(&witt_add(&x, &y).unwrap()), witt_add(&red(&x), &red(&y)).unwrap());
        prop_assert_eq!(red(&witt_mul(&x, &y).unwrap()), witt_mul(&red(&x), &red(&y)).unwrap());
    }

    #[test]
    fn restriction_commutes_with_frobenius((n, x, _y) in pair()) {
        let w = zw(n, x);
        for m in divisors(n) {
            for k in divisors(m) {
                let a = restriction(&frobenius(&w, m).unwrap(), k).unwrap();
                let b = frobenius(&restriction(&w, n / m * k).unwrap(), k).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn verschiebung_scales_ghost_components() {
    let w = zw(6, vec![3.into(), (-2).into(), 5.into(), 1.into()]);
    let v = verschiebung(&w, 12).unwrap();
    let (zv, zw_) = (ghost(&v), ghost(&w));
    for &k in zv.index() {
        let expected = if k % 2 == 0 {
            zw_.value(k / 2).unwrap() * BigInt::from(2)
        } else {
            BigInt::from(0)
        };
        assert_eq!(zv.value(k).unwrap(), &expected);
    }
}

#[test]
fn component_formula_for_verschiebung_is_not_additive() {
    // w ↦ (w, 0) from level 1 to level 2
    let v = |w: &WittVector<Integers>| {
        WittVector::from_fn(Integers, 2, |l| w.component(l).cloned().unwrap_or_default())
    };
    let one = WittVector::one(Integers, 1);
    let two = witt_add(&one, &one).unwrap();
    assert_ne!(v(&two), witt_add(&v(&one), &v(&one)).unwrap());
    assert_eq!(
        verschiebung(&two, 2).unwrap(),
        witt_add(
            &verschiebung(&one, 2).unwrap(),
            &verschiebung(&one, 2).unwrap()
        )
        .unwrap()
    );
}

#[test]
fn rational_vectors_allow_any_ghost() {
    let z = cyclonic::witt::GhostVector::new(
        Rationals,
        2,
        vec![
            BigRational::from_integer(0.into()),
            BigRational::from_integer(1.into()),
        ],
    )
    .unwrap();
    let w = ghost_solve(&z).unwrap();
    assert_eq!(w.component(2), Some(&BigRational::new(1.into(), 2.into())));
}

#[test]
fn witt_functors_are_mackey() {
    for tag in ["Z", "Zmod:2", "Zmod:4", "Zmod:6", "Zmod:9"] {
        let ring: RingTag = tag.parse().unwrap();
        let d = witt_mackey(&ring, 12).unwrap();
        assert!(validate_mackey(&d).is_valid(), "{tag}");
    }
    // |W_<m>(Z/N)| = N^τ(m)
    let d = witt_mackey(&"Zmod:6".parse().unwrap(), 12).unwrap();
    assert_eq!(d.groups()[&12].order(), Some(BigInt::from(6).pow(6)));
}
