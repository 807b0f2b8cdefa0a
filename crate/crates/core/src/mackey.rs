//! Cyclonic Mackey functors valued in finitely generated abelian groups over the divisor poset.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::abgrp::{FGAbelianGroup, GroupMorphism, IntegerMatrix};
use crate::arith::{
    divides, divisors, gcd, is_prime, lcm, prime_factors_with_multiplicity, prime_to_part,
};
use crate::burnside::HMorphism;
use crate::error::{Error, Result};

/// Groups and structure maps computed on demand at any level.
///
/// `push(m, n)` is the transfer `X<m> → X<n>` and `pull(m, n)` the restriction `X<n> → X<m>`,
/// for `m | n`.
pub trait MackeyRule: Send + Sync {
    fn group(&self, level: u64) -> Result<FGAbelianGroup>;
    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism>;
    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism>;

    fn name(&self) -> String {
        "rule".into()
    }
}

impl<R: MackeyRule + ?Sized> MackeyRule for Arc<R> {
    fn group(&self, level: u64) -> Result<FGAbelianGroup> {
        (**self).group(level)
    }
    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        (**self).push(m, n)
    }
    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        (**self).pull(m, n)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

fn check_pair(m: u64, n: u64) -> Result<()> {
    if m == 0 || !divides(m, n) {
        return Err(Error::not_divisor(m, n));
    }
    Ok(())
}

/// Caches groups and maps of a pure rule; repeated requests return identical presentations.
pub struct Memoized<R> {
    inner: R,
    groups: RwLock<HashMap<u64, FGAbelianGroup>>,
    pushes: RwLock<HashMap<(u64, u64), GroupMorphism>>,
    pulls: RwLock<HashMap<(u64, u64), GroupMorphism>>,
}

impl<R: MackeyRule> Memoized<R> {
    pub fn new(inner: R) -> Self {
        Memoized {
            inner,
            groups: RwLock::default(),
            pushes: RwLock::default(),
            pulls: RwLock::default(),
        }
    }

    pub fn inner(&self) -> &R {
        &self.inner
    }
}

fn cached<K: std::hash::Hash + Eq + Copy, V: Clone>(
    cache: &RwLock<HashMap<K, V>>,
    key: K,
    compute: impl FnOnce() -> Result<V>,
) -> Result<V> {
    if let Some(v) = cache.read().expect("cache lock").get(&key) {
        return Ok(v.clone());
    }
    let v = compute()?;
    Ok(cache
        .write()
        .expect("cache lock")
        .entry(key)
        .or_insert(v)
        .clone())
}

impl<R: MackeyRule> MackeyRule for Memoized<R> {
    fn group(&self, level: u64) -> Result<FGAbelianGroup> {
        cached(&self.groups, level, || self.inner.group(level))
    }
    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        cached(&self.pushes, (m, n), || self.inner.push(m, n))
    }
    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        cached(&self.pulls, (m, n), || self.inner.pull(m, n))
    }
    fn name(&self) -> String {
        self.inner.name()
    }
}

/// Levels `N_bound`, a group at each level, and structure maps on prime-ratio pairs.
#[derive(Clone, Debug)]
pub struct MackeyData {
    bound: u64,
    groups: BTreeMap<u64, FGAbelianGroup>,
    push: BTreeMap<(u64, u64), GroupMorphism>,
    pull: BTreeMap<(u64, u64), GroupMorphism>,
}

/// The pairs `m | n` in `N_bound` with `n/m` prime.
pub fn covering_pairs(bound: u64) -> Vec<(u64, u64)> {
    let ds = divisors(bound);
    let mut out = Vec::new();
    for &m in &ds {
        for &n in &ds {
            if n > m && n % m == 0 && is_prime(n / m) {
                out.push((m, n));
            }
        }
    }
    out
}

impl MackeyData {
    /// Validates shapes: a group at every level and maps on every covering pair between them.
    pub fn new(
        bound: u64,
        groups: BTreeMap<u64, FGAbelianGroup>,
        push: BTreeMap<(u64, u64), GroupMorphism>,
        pull: BTreeMap<(u64, u64), GroupMorphism>,
    ) -> Result<Self> {
        if bound == 0 {
            return Err(Error::parse("bound must be positive"));
        }
        let levels = divisors(bound);
        if groups.keys().copied().collect::<Vec<_>>() != levels {
            return Err(Error::LevelMismatch(format!(
                "groups given at {:?}, expected the divisors of {bound}",
                groups.keys().collect::<Vec<_>>()
            )));
        }
        let pairs = covering_pairs(bound);
        for (name, maps) in [("push", &push), ("pull", &pull)] {
            if maps.keys().copied().collect::<Vec<_>>() != pairs {
                return Err(Error::LevelMismatch(format!(
                    "{name} maps given at {:?}, expected the covering pairs {pairs:?}",
                    maps.keys().collect::<Vec<_>>()
                )));
            }
        }
        for &(m, n) in &pairs {
            let (gm, gn) = (&groups[&m], &groups[&n]);
            let p = &push[&(m, n)];
            if !p.source().same_presentation(gm) || !p.target().same_presentation(gn) {
                return Err(Error::LevelMismatch(format!(
                    "push {m}|{n} has the wrong ends"
                )));
            }
            let q = &pull[&(m, n)];
            if !q.source().same_presentation(gn) || !q.target().same_presentation(gm) {
                return Err(Error::LevelMismatch(format!(
                    "pull {m}|{n} has the wrong ends"
                )));
            }
        }
        Ok(MackeyData {
            bound,
            groups,
            push,
            pull,
        })
    }

    /// Truncates a rule to `N_bound`, keeping only the covering maps.
    pub fn from_rule(rule: &dyn MackeyRule, bound: u64) -> Result<Self> {
        let levels = divisors(bound);
        let groups: Vec<(u64, FGAbelianGroup)> = levels
            .par_iter()
            .map(|&m| rule.group(m).map(|g| (m, g)))
            .collect::<Result<_>>()?;
        let pairs = covering_pairs(bound);
        let maps: Vec<((u64, u64), GroupMorphism, GroupMorphism)> = pairs
            .par_iter()
            .map(|&(m, n)| Ok(((m, n), rule.push(m, n)?, rule.pull(m, n)?)))
            .collect::<Result<_>>()?;
        let groups: BTreeMap<_, _> = groups.into_iter().collect();
        let mut push = BTreeMap::new();
        let mut pull = BTreeMap::new();
        for (k, p, q) in maps {
            // re-seat on the stored group objects so presentations are shared
            push.insert(
                k,
                GroupMorphism::new(
                    groups[&k.0].clone(),
                    groups[&k.1].clone(),
                    p.matrix().clone(),
                )?,
            );
            pull.insert(
                k,
                GroupMorphism::new(
                    groups[&k.1].clone(),
                    groups[&k.0].clone(),
                    q.matrix().clone(),
                )?,
            );
        }
        MackeyData::new(bound, groups, push, pull)
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn levels(&self) -> Vec<u64> {
        self.groups.keys().copied().collect()
    }

    pub fn groups(&self) -> &BTreeMap<u64, FGAbelianGroup> {
        &self.groups
    }

    pub fn covering_push(&self) -> &BTreeMap<(u64, u64), GroupMorphism> {
        &self.push
    }

    pub fn covering_pull(&self) -> &BTreeMap<(u64, u64), GroupMorphism> {
        &self.pull
    }

    /// Replaces the push on a covering pair; the matrix must still be a homomorphism.
    pub fn with_push(&self, m: u64, n: u64, matrix: IntegerMatrix) -> Result<Self> {
        let old = self
            .push
            .get(&(m, n))
            .ok_or_else(|| Error::LevelMismatch(format!("{m}|{n} is not a covering pair")))?;
        let mut out = self.clone();
        out.push.insert(
            (m, n),
            GroupMorphism::new(old.source().clone(), old.target().clone(), matrix)?,
        );
        Ok(out)
    }

    /// Replaces the pull on a covering pair.
    pub fn with_pull(&self, m: u64, n: u64, matrix: IntegerMatrix) -> Result<Self> {
        let old = self
            .pull
            .get(&(m, n))
            .ok_or_else(|| Error::LevelMismatch(format!("{m}|{n} is not a covering pair")))?;
        let mut out = self.clone();
        out.pull.insert(
            (m, n),
            GroupMorphism::new(old.source().clone(), old.target().clone(), matrix)?,
        );
        Ok(out)
    }

    fn check_level(&self, level: u64) -> Result<()> {
        if self.groups.contains_key(&level) {
            Ok(())
        } else {
            Err(Error::OutOfBound {
                level,
                bound: self.bound,
            })
        }
    }

    /// The chain `m = c_0 | c_1 | ... | c_r = n` stepping by primes in ascending order.
    fn chain(m: u64, n: u64) -> Vec<u64> {
        let mut out = vec![m];
        let mut c = m;
        for p in prime_factors_with_multiplicity(n / m) {
            c *= p;
            out.push(c);
        }
        out
    }
}

impl MackeyRule for MackeyData {
    fn group(&self, level: u64) -> Result<FGAbelianGroup> {
        self.check_level(level)?;
        Ok(self.groups[&level].clone())
    }

    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        check_pair(m, n)?;
        self.check_level(n)?;
        let chain = Self::chain(m, n);
        let mut acc = GroupMorphism::identity(&self.groups[&m]);
        for w in chain.windows(2) {
            acc = self.push[&(w[0], w[1])].compose(&acc)?;
        }
        Ok(acc)
    }

    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        check_pair(m, n)?;
        self.check_level(n)?;
        let chain = Self::chain(m, n);
        let mut acc = GroupMorphism::identity(&self.groups[&n]);
        for w in chain.windows(2).rev() {
            acc = self.pull[&(w[0], w[1])].compose(&acc)?;
        }
        Ok(acc)
    }

    fn name(&self) -> String {
        format!("data up to {}", self.bound)
    }
}

/// One failed identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// `"push-transitivity"`, `"pull-transitivity"` or `"double-coset"`.
    pub identity: String,
    /// `(u, v, w)` for transitivity, `(k, l, m)` for the double coset identity.
    pub levels: (u64, u64, u64),
    /// Left side minus right side, on presented generators.
    pub difference: IntegerMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MackeyReport {
    pub violations: Vec<Violation>,
}

impl MackeyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, identity: &str, levels: (u64, u64, u64)) -> bool {
        self.violations
            .iter()
            .any(|v| v.identity == identity && v.levels == levels)
    }
}

fn compare(
    identity: &str,
    levels: (u64, u64, u64),
    lhs: &GroupMorphism,
    rhs: &GroupMorphism,
) -> Option<Violation> {
    if lhs.equals(rhs) {
        None
    } else {
        Some(Violation {
            identity: identity.into(),
            levels,
            difference: lhs.matrix().sub(rhs.matrix()).expect("parallel maps"),
        })
    }
}

/// `pull(l,m)∘push(k,m)` and `(m/lcm(k,l))·push(gcd,l)∘pull(gcd,k)`.
pub fn double_coset_sides(
    d: &dyn MackeyRule,
    k: u64,
    l: u64,
    m: u64,
) -> Result<(GroupMorphism, GroupMorphism)> {
    let g = gcd(k, l);
    let lhs = d.pull(l, m)?.compose(&d.push(k, m)?)?;
    let rhs = d
        .push(g, l)?
        .compose(&d.pull(g, k)?)?
        .scale(&BigInt::from(m / lcm(k, l)));
    Ok((lhs, rhs))
}

/// Checks transitivity along every chain and the double coset identity for every `k, l | m`.
pub fn validate_mackey(d: &MackeyData) -> MackeyReport {
    validate_levels(d, &d.levels())
}

/// Validation of any rule over a divisor-closed set of levels.
pub fn validate_levels(d: &dyn MackeyRule, levels: &[u64]) -> MackeyReport {
    let mut violations: Vec<Violation> = levels
        .par_iter()
        .flat_map_iter(|&w| {
            let mut out = Vec::new();
            let ds = divisors(w);
            for &v in &ds {
                for &u in divisors(v).iter() {
                    let chk = || -> Result<Vec<Violation>> {
                        let mut found = Vec::new();
                        let lhs = d.push(v, w)?.compose(&d.push(u, v)?)?;
                        found.extend(compare(
                            "push-transitivity",
                            (u, v, w),
                            &lhs,
                            &d.push(u, w)?,
                        ));
                        let lhs = d.pull(u, v)?.compose(&d.pull(v, w)?)?;
                        found.extend(compare(
                            "pull-transitivity",
                            (u, v, w),
                            &lhs,
                            &d.pull(u, w)?,
                        ));
                        Ok(found)
                    };
                    out.extend(chk().unwrap_or_else(|e| vec![failed_evaluation((u, v, w), e)]));
                }
            }
            for &k in &ds {
                for &l in &ds {
                    match double_coset_sides(d, k, l, w) {
                        Ok((lhs, rhs)) => {
                            out.extend(compare("double-coset", (k, l, w), &lhs, &rhs))
                        }
                        Err(e) => out.push(failed_evaluation((k, l, w), e)),
                    }
                }
            }
            out
        })
        .collect();
    violations.sort_by(|a, b| {
        (a.levels.2, &a.identity, a.levels).cmp(&(b.levels.2, &b.identity, b.levels))
    });
    MackeyReport { violations }
}

fn failed_evaluation(levels: (u64, u64, u64), e: Error) -> Violation {
    Violation {
        identity: format!("evaluation: {e}"),
        levels,
        difference: IntegerMatrix::zeros(0, 0),
    }
}

/// The Burnside rings `Ω<m> = Z{N_m}`, with induction and restriction of orbits.
#[derive(Clone, Copy, Debug, Default)]
pub struct BurnsideRule;

impl MackeyRule for BurnsideRule {
    fn group(&self, level: u64) -> Result<FGAbelianGroup> {
        Ok(FGAbelianGroup::free(divisors(level).len()))
    }

    /// `[k]_m ↦ [k]_n`.
    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        check_pair(m, n)?;
        let (dm, dn) = (divisors(m), divisors(n));
        let mut a = IntegerMatrix::zeros(dn.len(), dm.len());
        for (j, k) in dm.iter().enumerate() {
            let i = dn.binary_search(k).expect("k | m | n");
            a.set(i, j, BigInt::from(1));
        }
        GroupMorphism::new(self.group(m)?, self.group(n)?, a)
    }

    /// `[k]_n ↦ (n/lcm(m,k))·[gcd(m,k)]_m`.
    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        check_pair(m, n)?;
        let (dm, dn) = (divisors(m), divisors(n));
        let mut a = IntegerMatrix::zeros(dm.len(), dn.len());
        for (j, &k) in dn.iter().enumerate() {
            let i = dm.binary_search(&gcd(m, k)).expect("gcd divides m");
            a.set(i, j, BigInt::from(n / lcm(m, k)));
        }
        GroupMorphism::new(self.group(n)?, self.group(m)?, a)
    }

    fn name(&self) -> String {
        "burnside".into()
    }
}

pub fn burnside_mackey(bound: u64) -> MackeyData {
    MackeyData::from_rule(&BurnsideRule, bound).expect("burnside data")
}

/// `Σ_k c_k push(k,n)∘pull(k,m)` for `h = Σ c_k [k]: m → n`.
pub fn eval_h(d: &dyn MackeyRule, h: &HMorphism) -> Result<GroupMorphism> {
    let (m, n) = (h.source(), h.target());
    let mut acc = GroupMorphism::zero(&d.group(m)?, &d.group(n)?);
    for (k, c) in h.terms() {
        let term = d.push(k, n)?.compose(&d.pull(k, m)?)?.scale(c);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Restriction to the levels prime to `p`.
pub fn j_upper_star(d: &MackeyData, p: u64) -> Result<MackeyData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let bound = prime_to_part(d.bound, p);
    let keep = |m: &u64| divides(*m, bound);
    MackeyData::new(
        bound,
        d.groups
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(&m, g)| (m, g.clone()))
            .collect(),
        d.push
            .iter()
            .filter(|((_, n), _)| keep(n))
            .map(|(&k, f)| (k, f.clone()))
            .collect(),
        d.pull
            .iter()
            .filter(|((_, n), _)| keep(n))
            .map(|(&k, f)| (k, f.clone()))
            .collect(),
    )
}

/// The `p`-constant extension of data on the levels prime to `p` to `N_bound`:
/// `X<n> = D<n(p')>`, push the identity and pull multiplication by `p` along `p`-steps.
pub fn j_lower_shriek(d: &MackeyData, p: u64, bound: u64) -> Result<MackeyData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d.bound != prime_to_part(bound, p) {
        return Err(Error::LevelMismatch(format!(
            "data bound {} is not the prime-to-{p} part of {bound}",
            d.bound
        )));
    }
    let groups: BTreeMap<u64, FGAbelianGroup> = divisors(bound)
        .into_iter()
        .map(|n| (n, d.groups[&prime_to_part(n, p)].clone()))
        .collect();
    let mut push = BTreeMap::new();
    let mut pull = BTreeMap::new();
    for (m, n) in covering_pairs(bound) {
        let (mp, np) = (prime_to_part(m, p), prime_to_part(n, p));
        if n / m == p {
            let g = &groups[&m];
            push.insert((m, n), GroupMorphism::identity(g));
            pull.insert((m, n), GroupMorphism::scalar(g, &BigInt::from(p)));
        } else {
            push.insert((m, n), d.push[&(mp, np)].clone());
            pull.insert((m, n), d.pull[&(mp, np)].clone());
        }
    }
    MackeyData::new(bound, groups, push, pull)
}
