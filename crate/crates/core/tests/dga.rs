use cyclonic::arith::divisors;
use cyclonic::dga::{dga_basis, dga_mul, DgaElement, Kind, Symbol};
use cyclonic::witt::{Integers, IntegersMod};
use num_bigint::BigInt;
use proptest::prelude::*;

fn element(bound: u64) -> impl Strategy<Value = DgaElement> {
    let basis = dga_basis(bound);
    prop::collection::vec((prop::sample::select(basis), -5i64..=5), 0..6).prop_map(move |t| {
        DgaElement::from_terms(
            Integers,
            bound,
            t.into_iter().map(|(s, c)| (s, BigInt::from(c))),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn multiplication_is_associative_and_bilinear(x in element(24), y in element(24), z in element(24)) {
        let xy = dga_mul(&x, &y).unwrap();
        prop_assert_eq!(dga_mul(&xy, &z).unwrap(), dga_mul(&x, &dga_mul(&y, &z).unwrap()).unwrap());
        let lhs = dga_mul(&x.add(&y).unwrap(), &z).unwrap();
        prop_assert_eq!(lhs, dga_mul(&x, &z).unwrap().add(&dga_mul(&y, &z).unwrap()).unwrap());
    }

    #[test]
    fn degrees_add(x in element(12), y in element(12)) {
        let (x0, x1) = x.degree_parts();
        let (y0, y1) = y.degree_parts();
        prop_assert!(dga_mul(&x1, &y1).unwrap().is_zero());
        let p = dga_mul(&x0, &y1).unwrap().add(&dga_mul(&x1, &y0).unwrap()).unwrap();
        prop_assert!(p.is_zero() || p.degree() == Some(1));
        let q = dga_mul(&x0, &y0).unwrap();
        prop_assert!(q.is_zero() || q.degree() == Some(0));
    }
}

#[test]
fn unit_over_a_torsion_ring() {
    let r = IntegersMod::new(6).unwrap();
    let unit = DgaElement::unit(r.clone(), 12);
    for s in dga_basis(12) {
        let x = DgaElement::basis(r.clone(), 12, s).unwrap();
        assert_eq!(dga_mul(&unit, &x).unwrap(), x);
        assert_eq!(dga_mul(&x, &unit).unwrap(), x);
    }
}

#[test]
fn basis_counts() {
    // one generator per (a, b, k | gcd(a, b)) in each degree
    let expected: usize = divisors(12)
        .iter()
        .flat_map(|&a| {
            divisors(12)
                .into_iter()
                .map(move |b| divisors(cyclonic::arith::gcd(a, b)).len())
        })
        .sum();
    let basis = dga_basis(12);
    assert_eq!(
        basis.iter().filter(|s| s.kind == Kind::Alpha).count(),
        expected
    );
    assert_eq!(basis.len(), 2 * expected);
    assert!(Symbol::alpha(4, 3, 6).is_err());
}
