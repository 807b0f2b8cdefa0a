//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cyclonic::abgrp::{FGAbelianGroup, GroupMorphism, IntegerMatrix};
use cyclonic::arith::divisors;
use cyclonic::cyclonic::{make_orbit_map, OrbitMap, Simplex3};
use cyclonic::mackey::{covering_pairs, MackeyData};
use cyclonic::rational::rat;
use cyclonic::supernat::Supernatural;
use cyclonic::witt::{Integers, WittVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn random_components(rng: &mut StdRng, level: u64, range: i64) -> Vec<BigInt> {
    divisors(level)
        .iter()
        .map(|_| big(rng.gen_range(-range..=range)))
        .collect()
}

pub fn random_witt(rng: &mut StdRng, level: u64, range: i64) -> WittVector<Integers> {
    WittVector::new(Integers, level, random_components(rng, level, range)).unwrap()
}

/// `z_k = Σ_{d|k} d·w_d^{k/d}`, straight from the definition.
pub fn ghost_oracle(level: u64, w: &[BigInt]) -> Vec<BigInt> {
    let ds = divisors(level);
    ds.iter()
        .map(|&k| {
            ds.iter()
                .zip(w)
                .filter(|(&d, _)| k % d == 0)
                .map(|(&d, x)| big(d as i64) * num_traits::pow(x.clone(), (k / d) as usize))
                .sum()
        })
        .collect()
}

/// Solves the ghost equations over the rationals, component by component.
pub fn unghost_oracle(level: u64, z: &[BigInt]) -> Vec<BigRational> {
    let ds = divisors(level);
    let mut w: Vec<BigRational> = Vec::new();
    for (j, &k) in ds.iter().enumerate() {
        let mut rest = BigRational::from_integer(z[j].clone());
        for (i, &d) in ds[..j].iter().enumerate() {
            if k % d == 0 {
                rest -= BigRational::from_integer(big(d as i64))
                    * num_traits::pow(w[i].clone(), (k / d) as usize);
            }
        }
        w.push(rest / BigRational::from_integer(big(k as i64)));
    }
    w
}

pub fn integral(w: &[BigRational]) -> Option<Vec<BigInt>> {
    w.iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

/// Witt sum through the power series `∏_d (1 - w_d t^d)^{-1}`, truncated at degree `level`.
pub fn series_sum_oracle(level: u64, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let m = level as usize;
    let ds = divisors(level);
    let series = |w: &[BigInt]| {
        let mut f = vec![BigInt::zero(); m + 1];
        f[0] = BigInt::one();
        for (&d, c) in ds.iter().zip(w) {
            let d = d as usize;
            // multiply by 1 + c t^d + c^2 t^{2d} + ...
            let mut g = vec![BigInt::zero(); m + 1];
            for (i, fi) in f.iter().enumerate() {
                let mut p = BigInt::one();
                let mut e = i;
                while e <= m {
                    g[e] += fi * &p;
                    p *= c;
                    e += d;
                }
            }
            f = g;
        }
        f
    };
    let (fx, fy) = (series(x), series(y));
    let mut f = vec![BigInt::zero(); m + 1];
    for i in 0..=m {
        for j in 0..=m - i {
            f[i + j] += &fx[i] * &fy[j];
        }
    }
    let mut out = vec![BigInt::zero(); m + 1];
    for d in 1..=m {
        let c = f[d].clone();
        // divide out (1 - c t^d)^{-1}
        for i in (d..=m).rev() {
            let t = &f[i - d] * &c;
            f[i] -= t;
        }
        out[d] = c;
    }
    ds.iter().map(|&d| out[d as usize].clone()).collect()
}

/// A random unimodular matrix and its inverse.
pub fn unimodular(rng: &mut StdRng, n: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| big((i == j) as i64)).collect())
        .collect();
    let mut v = u.clone();
    for _ in 0..3 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = big(rng.gen_range(-2..=2));
        // u ← E u with E = I + c e_ij, v ← v E^{-1}
        let row_j = u[j].clone();
        for (x, y) in u[i].iter_mut().zip(&row_j) {
            *x += y * &c;
        }
        for row in v.iter_mut() {
            let t = &row[i] * &c;
            row[j] -= t;
        }
    }
    for i in 0..n {
        if rng.gen_bool(0.3) {
            for x in u[i].iter_mut() {
                *x = -x.clone();
            }
            for row in v.iter_mut() {
                row[i] = -row[i].clone();
            }
        }
    }
    (
        IntegerMatrix::from_rows(n, u).unwrap(),
        IntegerMatrix::from_rows(n, v).unwrap(),
    )
}

/// Changes the generators at every level by a random unimodular matrix. The result is an
/// isomorphic Mackey functor with different matrices.
pub fn twist(d: &MackeyData, rng: &mut StdRng) -> MackeyData {
    let mut base = BTreeMap::new();
    let mut groups = BTreeMap::new();
    for (&m, g) in d.groups() {
        let (u, v) = unimodular(rng, g.generators());
        let rel = g.relations().mul(&u.transpose()).unwrap();
        groups.insert(m, FGAbelianGroup::presented(g.generators(), rel).unwrap());
        base.insert(m, (u, v));
    }
    let mut push = BTreeMap::new();
    let mut pull = BTreeMap::new();
    for (m, n) in covering_pairs(d.bound()) {
        let p = d.covering_push()[&(m, n)].matrix();
        let q = d.covering_pull()[&(m, n)].matrix();
        let p = base[&n].0.mul(p).unwrap().mul(&base[&m].1).unwrap();
        let q = base[&m].0.mul(q).unwrap().mul(&base[&n].1).unwrap();
        push.insert(
            (m, n),
            GroupMorphism::new(groups[&m].clone(), groups[&n].clone(), p).unwrap(),
        );
        pull.insert(
            (m, n),
            GroupMorphism::new(groups[&n].clone(), groups[&m].clone(), q).unwrap(),
        );
    }
    MackeyData::new(d.bound(), groups, push, pull).unwrap()
}

/// Brute-force pullback of `<k> → <n> ← <l>` inside `C_N`, both maps at offset 0. Points of
/// `<m>` are the residues `j mod N/m`, standing for `j/N`. Returns orbit counts by stabilizer order.
pub fn coset_pullback(ambient: u64, k: u64, l: u64, n: u64) -> BTreeMap<u64, u64> {
    let (sk, sl, sn) = (ambient / k, ambient / l, ambient / n);
    let mut seen = vec![vec![false; sl as usize]; sk as usize];
    let mut out = BTreeMap::new();
    for x in 0..sk {
        for y in 0..sl {
            if x % sn != y % sn || seen[x as usize][y as usize] {
                continue;
            }
            let mut size = 0;
            let (mut a, mut b) = (x, y);
            while !seen[a as usize][b as usize] {
                seen[a as usize][b as usize] = true;
                size += 1;
                a = (a + 1) % sk;
                b = (b + 1) % sl;
            }
            *out.entry(ambient / size).or_insert(0) += 1;
        }
    }
    out
}

/// A random chain of levels dividing `bound`, with random maps and fillers satisfying the cocycle.
pub fn random_simplex3(rng: &mut StdRng, bound: u64) -> Simplex3 {
    let ambient = Supernatural::from(bound);
    let mut levels = vec![*pick(rng, &divisors(bound))];
    for _ in 0..3 {
        let last = *levels.last().unwrap();
        let next: Vec<u64> = divisors(bound)
            .into_iter()
            .filter(|d| d % last == 0)
            .collect();
        levels.push(*pick(rng, &next));
    }
    let b = bound as i64;
    let map = |rng: &mut StdRng, i: usize, j: usize| -> OrbitMap {
        make_orbit_map(levels[i], levels[j], &rat(rng.gen_range(0..b), b), &ambient).unwrap()
    };
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let phi: Vec<OrbitMap> = edges.iter().map(|&(i, j)| map(rng, i, j)).collect();
    let edge = |i: usize, j: usize| &phi[edges.iter().position(|&e| e == (i, j)).unwrap()];
    let filler = |rng: &mut StdRng, i: usize, j: usize, k: usize| -> BigRational {
        let comp = edge(j, k).after(edge(i, j)).unwrap();
        comp.offset() - edge(i, k).offset() + rat(rng.gen_range(-2..=2), levels[k] as i64)
    };
    let a012 = filler(rng, 0, 1, 2);
    let a013 = filler(rng, 0, 1, 3);
    let a123 = filler(rng, 1, 2, 3);
    let a023 = &a013 + &a123 - &a012;
    let objects = levels
        .iter()
        .map(|&m| cyclonic::cyclonic::Orbit::new(m, ambient.clone()).unwrap());
    Simplex3 {
        objects: objects.collect::<Vec<_>>().try_into().unwrap(),
        phi: phi.try_into().unwrap(),
        alpha: [a012, a013, a023, a123],
    }
}

pub fn pick<'a, T>(rng: &mut StdRng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}
