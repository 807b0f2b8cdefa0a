//! The isomorphism from the Burnside rings to the integral Witt vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::mackey::{carrier_coordinates, frobenius_matrix, from_carrier, verschiebung_matrix};
use super::ring::Integers;
use super::vector::{ghost_solve, witt_mul, GhostVector, WittVector};
use crate::abgrp::{FGAbelianGroup, GroupMorphism, IntegerMatrix};
use crate::arith::divisors;
use crate::burnside::{burnside_mul, BurnsideElement};
use crate::error::Result;
use crate::mackey::{covering_pairs, BurnsideRule, MackeyRule};

/// The Witt vector whose ghost component `z_k` counts the points of `x` fixed by the subgroup of
/// order `m/k`. Sends `[n]` to the basis vector `u_{m/n}`.
pub fn dress_siebeneicher(x: &BurnsideElement) -> WittVector<Integers> {
    let m = x.level();
    let z = GhostVector::from_fn(Integers, m, |k| x.fixed_points(m / k));
    ghost_solve(&z).expect("fixed point counts satisfy the congruences")
}

/// The map on coordinates, columns indexed by orbits `[n]`.
pub fn ds_matrix(m: u64) -> IntegerMatrix {
    let cols: Vec<Vec<BigInt>> = divisors(m)
        .into_iter()
        .map(|n| {
            let w = dress_siebeneicher(&BurnsideElement::basis(m, n).expect("n | m"));
            carrier_coordinates(&w).expect("integral vector")
        })
        .collect();
    IntegerMatrix::from_columns(cols.len(), &cols).expect("square")
}

pub fn ds_morphism(m: u64) -> GroupMorphism {
    let g = FGAbelianGroup::free(divisors(m).len());
    GroupMorphism::new(g.clone(), g, ds_matrix(m)).expect("free groups")
}

/// A candidate assignment: at level `n`, ghost slot `divisors(n)[i]` counts fixed points of the
/// subgroup of order `slots[n][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsFamily {
    pub slots: BTreeMap<u64, Vec<u64>>,
}

impl DsFamily {
    /// Whether this is the assignment `k ↦ n/k` used by `dress_siebeneicher`.
    pub fn is_standard(&self) -> bool {
        self.slots
            .iter()
            .all(|(&n, s)| divisors(n).iter().zip(s).all(|(&k, &o)| o == n / k))
    }
}

#[derive(Clone, Debug, Default)]
pub struct DsSearch {
    pub families: usize,
    pub survivors: Vec<DsFamily>,
    /// Number of families rejected by each check, keyed by the first check that failed.
    pub rejected: BTreeMap<String, usize>,
}

fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Per-level verdict: the coordinate matrix, or the name of the failed check.
fn level_candidate(n: u64, slots: &[u64]) -> std::result::Result<IntegerMatrix, &'static str> {
    let ds = divisors(n);
    let image = |x: &BurnsideElement| -> Option<WittVector<Integers>> {
        let z = GhostVector::new(
            Integers,
            n,
            slots.iter().map(|&o| x.fixed_points(o)).collect(),
        )
        .ok()?;
        ghost_solve(&z).ok()
    };
    let mut images = Vec::with_capacity(ds.len());
    for &k in &ds {
        images.push(image(&BurnsideElement::basis(n, k).expect("k | n")).ok_or("integrality")?);
    }
    let cols: Vec<Vec<BigInt>> = images
        .iter()
        .map(|w| carrier_coordinates(w).expect("integral"))
        .collect();
    let a = IntegerMatrix::from_columns(ds.len(), &cols).expect("square");
    let det = a.determinant().expect("square");
    if det != BigInt::from(1) && det != BigInt::from(-1) {
        return Err("bijectivity");
    }
    let from =
        |x: &BurnsideElement| from_carrier(&Integers, n, &a.mul_vec(x.coeffs())).expect("integral");
    for &k in &ds {
        for &l in &ds {
            let (x, y) = (
                BurnsideElement::basis(n, k).unwrap(),
                BurnsideElement::basis(n, l).unwrap(),
            );
            let lhs = from(&burnside_mul(&x, &y).expect("same level"));
            let rhs = witt_mul(&from(&x), &from(&y)).expect("same level");
            if lhs != rhs {
                return Err("multiplicativity");
            }
        }
    }
    if from(&BurnsideElement::one(n)) != WittVector::one(Integers, n) {
        return Err("unitality");
    }
    Ok(a)
}

/// A slot permutation's level matrix, or the law it breaks.
type Candidate = std::result::Result<IntegerMatrix, &'static str>;

/// Tries every family of slot permutations on the levels dividing `m` and keeps those that give
/// a unital ring isomorphism at each level intertwining induction with `V` and restriction with `F`.
pub fn ds_uniqueness_search(m: u64) -> Result<DsSearch> {
    let levels = divisors(m);
    let per_level: Vec<Vec<(Vec<u64>, Candidate)>> = levels
        .iter()
        .map(|&n| {
            permutations(&divisors(n))
                .into_iter()
                .map(|s| {
                    let v = level_candidate(n, &s);
                    (s, v)
                })
                .collect()
        })
        .collect();
    let mut push = BTreeMap::new();
    let mut pull = BTreeMap::new();
    for (a, b) in covering_pairs(m) {
        push.insert(
            (a, b),
            (
                BurnsideRule.push(a, b)?.matrix().clone(),
                verschiebung_matrix(a, b)?,
            ),
        );
        pull.insert(
            (a, b),
            (
                BurnsideRule.pull(a, b)?.matrix().clone(),
                frobenius_matrix(a, b)?,
            ),
        );
    }
    let mut search = DsSearch::default();
    let mut choice = vec![0usize; levels.len()];
    loop {
        search.families += 1;
        let verdict = family_verdict(&levels, &per_level, &choice, &push, &pull)?;
        match verdict {
            None => search.survivors.push(DsFamily {
                slots: levels
                    .iter()
                    .zip(&choice)
                    .zip(&per_level)
                    .map(|((&n, &c), p)| (n, p[c].0.clone()))
                    .collect(),
            }),
            Some(reason) => *search.rejected.entry(reason.to_string()).or_default() += 1,
        }
        // odometer over the per-level permutations
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(search);
            }
            choice[i] += 1;
            if choice[i] < per_level[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

type Pair = (IntegerMatrix, IntegerMatrix);

fn family_verdict(
    levels: &[u64],
    per_level: &[Vec<(Vec<u64>, Candidate)>],
    choice: &[usize],
    push: &BTreeMap<(u64, u64), Pair>,
    pull: &BTreeMap<(u64, u64), Pair>,
) -> Result<Option<&'static str>> {
    let mut mats = BTreeMap::new();
    for ((&n, &c), p) in levels.iter().zip(choice).zip(per_level) {
        match &p[c].1 {
            Ok(a) => {
                mats.insert(n, a);
            }
            Err(reason) => return Ok(Some(reason)),
        }
    }
    for (&(a, b), (omega, v)) in push {
        if mats[&b].mul(omega)? != v.mul(mats[&a])? {
            return Ok(Some("push"));
        }
    }
    for (&(a, b), (omega, f)) in pull {
        if mats[&a].mul(omega)? != f.mul(mats[&b])? {
            return Ok(Some("pull"));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            dress_siebeneicher(&BurnsideElement::one(6)),
            WittVector::one(Integers, 6)
        );
        let free = dress_siebeneicher(&BurnsideElement::basis(2, 1).unwrap());
        assert_eq!(free.components(), &[BigInt::from(0), BigInt::from(1)]);
        assert!(ds_morphism(12).is_isomorphism().is_isomorphism());
    }

    #[test]
    fn search_at_four() {
        let s = ds_uniqueness_search(4).unwrap();
        assert_eq!(s.families, 12);
        assert_eq!(s.survivors.len(), 1);
        assert!(s.survivors[0].is_standard());
    }
}
