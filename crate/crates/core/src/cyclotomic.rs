//! Geometric fixed points, cyclotomic structures, derived restrictions and the twisted orbit category.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::abgrp::{
    cokernel, induced_on_quotient, FGAbelianGroup, GroupMorphism, IntegerMatrix, IsoCheck,
};
use crate::arith::{
    distinct_orderings, divides, divisors, is_prime, prime_factors_with_multiplicity, prime_to_part,
};
use crate::cyclonic::{intertwiners, make_orbit_map, Orbit, OrbitMap};
use crate::error::{Error, Result};
use crate::mackey::{
    covering_pairs, j_lower_shriek, j_upper_star, MackeyData, MackeyRule, Memoized,
};
use crate::rational::format_rational;
use crate::supernat::Supernatural;
use crate::witt::{extension_matrix, RingTag, WittRule};

/// `(Φ^{C_p} X)<n> = X<np> / push(X<a>)` with `a` the prime-to-`p` part of `n`.
pub struct GeometricFixedPoints {
    base: Arc<dyn MackeyRule>,
    p: u64,
}

impl GeometricFixedPoints {
    pub fn new(base: Arc<dyn MackeyRule>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(GeometricFixedPoints { base, p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn base(&self) -> &Arc<dyn MackeyRule> {
        &self.base
    }

    /// The quotient map `X<np> → (Φ^{C_p} X)<n>`.
    pub fn projection(&self, n: u64) -> Result<GroupMorphism> {
        let a = prime_to_part(n, self.p);
        Ok(cokernel(&self.base.push(a, n * self.p)?).1)
    }
}

impl MackeyRule for GeometricFixedPoints {
    fn group(&self, level: u64) -> Result<FGAbelianGroup> {
        Ok(self.projection(level)?.target().clone())
    }

    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        let p = self.p;
        induced_on_quotient(
            &self.base.push(m * p, n * p)?,
            &self.projection(m)?,
            &self.projection(n)?,
        )
    }

    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        let p = self.p;
        induced_on_quotient(
            &self.base.pull(m * p, n * p)?,
            &self.projection(n)?,
            &self.projection(m)?,
        )
    }

    fn name(&self) -> String {
        format!(
            "geometric fixed points at {} of {}",
            self.p,
            self.base.name()
        )
    }
}

pub fn geometric_fixed_points(base: Arc<dyn MackeyRule>, p: u64) -> Result<GeometricFixedPoints> {
    GeometricFixedPoints::new(base, p)
}

/// Matrix of `r_p<n>: X<n> → (Φ^{C_p} X)<n>` on presented generators, as a function of `(p, n)`.
pub type StructureFn = Arc<dyn Fn(u64, u64) -> Result<IntegerMatrix> + Send + Sync>;

/// A rule with structure isomorphisms `r_p` for a finite set of primes.
#[derive(Clone)]
pub struct CyclotomicData {
    base: Arc<dyn MackeyRule>,
    primes: Vec<u64>,
    gfp: BTreeMap<u64, Arc<Memoized<GeometricFixedPoints>>>,
    structure: StructureFn,
    overrides: BTreeMap<(u64, u64), IntegerMatrix>,
}

impl fmt::Debug for CyclotomicData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclotomicData")
            .field("base", &self.base.name())
            .field("primes", &self.primes)
            .field("overrides", &self.overrides.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl CyclotomicData {
    pub fn new(base: Arc<dyn MackeyRule>, primes: &[u64], structure: StructureFn) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        let mut gfp = BTreeMap::new();
        for &p in &ps {
            gfp.insert(
                p,
                Arc::new(Memoized::new(GeometricFixedPoints::new(base.clone(), p)?)),
            );
        }
        Ok(CyclotomicData {
            base,
            primes: ps,
            gfp,
            structure,
            overrides: BTreeMap::new(),
        })
    }

    /// Replaces the matrix of `r_p<n>`.
    pub fn with_override(mut self, p: u64, n: u64, matrix: IntegerMatrix) -> Self {
        self.overrides.insert((p, n), matrix);
        self
    }

    pub fn base(&self) -> &Arc<dyn MackeyRule> {
        &self.base
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn gfp(&self, p: u64) -> Result<Arc<Memoized<GeometricFixedPoints>>> {
        self.gfp.get(&p).cloned().ok_or_else(|| {
            Error::LevelMismatch(format!("prime {p} is not among {:?}", self.primes))
        })
    }

    pub fn r(&self, p: u64, n: u64) -> Result<GroupMorphism> {
        let phi = self.gfp(p)?;
        let matrix = match self.overrides.get(&(p, n)) {
            Some(m) => m.clone(),
            None => (self.structure)(p, n)?,
        };
        GroupMorphism::new(self.base.group(n)?, phi.group(n)?, matrix)
    }

    /// `ρ_{n|np}`: the quotient `X<np> → (Φ^{C_p} X)<n>` followed by `r_p<n>^{-1}`.
    fn restriction_step(&self, n: u64, p: u64) -> Result<GroupMorphism> {
        let r = self.r(p, n)?;
        let inv = match r.is_isomorphism() {
            IsoCheck::Isomorphism { inverse } => inverse,
            _ => return Err(Error::NotInvertible(format!("r_{p}<{n}>"))),
        };
        let q = self.gfp(p)?.inner().projection(n)?;
        inv.compose(&q)
    }

    fn restriction_along(&self, m: u64, n: u64, order: &[u64]) -> Result<GroupMorphism> {
        let mut level = n;
        let mut acc = GroupMorphism::identity(&self.base.group(n)?);
        for &p in order {
            level /= p;
            acc = self.restriction_step(level, p)?.compose(&acc)?;
        }
        debug_assert_eq!(level, m);
        Ok(acc)
    }
}

/// The restriction `ρ_{m|n}: X<n> → X<m>`, checked to agree along every ordering of the prime
/// factors of `n/m`.
pub fn derived_restrictions(c: &CyclotomicData, m: u64, n: u64) -> Result<GroupMorphism> {
    if m == 0 || !divides(m, n) {
        return Err(Error::not_divisor(m, n));
    }
    let orders = distinct_orderings(&prime_factors_with_multiplicity(n / m));
    let first = c.restriction_along(m, n, &orders[0])?;
    for o in &orders[1..] {
        if !c.restriction_along(m, n, o)?.equals(&first) {
            return Err(Error::OrderDependent { m, n });
        }
    }
    Ok(first)
}

/// The Witt cyclotomic structure: `r_p<n>` inverts truncation `W_<np> → W_<n>` modulo the
/// Verschiebung image, by extending Witt components by zero.
pub fn witt_cyclotomic(ring: &RingTag, primes: &[u64]) -> Result<CyclotomicData> {
    let base: Arc<dyn MackeyRule> = Arc::new(Memoized::new(WittRule::from_tag(ring)?));
    let structure: StructureFn = Arc::new(|p, n| extension_matrix(n, n * p));
    CyclotomicData::new(base, primes, structure)
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub level: u64,
    pub prime: u64,
    pub check: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckEntry {
    fn new(
        level: u64,
        prime: u64,
        check: impl Into<String>,
        outcome: std::result::Result<(), String>,
    ) -> Self {
        let (pass, witness) = match outcome {
            Ok(()) => (true, None),
            Err(w) => (false, Some(w)),
        };
        CheckEntry {
            level,
            prime,
            check: check.into(),
            pass,
            witness,
        }
    }
}

/// Entries sorted by level, then prime.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    fn from_entries(mut entries: Vec<CheckEntry>) -> Self {
        entries.sort_by(|a, b| (a.level, a.prime, &a.check).cmp(&(b.level, b.prime, &b.check)));
        CheckReport { entries }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn find(&self, level: u64, check: &str) -> Option<&CheckEntry> {
        self.entries
            .iter()
            .find(|e| e.level == level && e.check == check)
    }
}

fn same(lhs: Result<GroupMorphism>, rhs: Result<GroupMorphism>) -> std::result::Result<(), String> {
    let (l, r) = (
        lhs.map_err(|e| e.to_string())?,
        rhs.map_err(|e| e.to_string())?,
    );
    if l.equals(&r) {
        Ok(())
    } else {
        let d = l.matrix().sub(r.matrix()).map_err(|e| e.to_string())?;
        Err(format!("difference {d}"))
    }
}

fn iso_outcome(f: Result<GroupMorphism>) -> std::result::Result<(), String> {
    match f.map_err(|e| e.to_string())?.is_isomorphism() {
        IsoCheck::Isomorphism { .. } => Ok(()),
        IsoCheck::NotInjective { kernel_element } => {
            Err(format!("kernel element {kernel_element:?}"))
        }
        IsoCheck::NotSurjective { missed } => Err(format!("missed {missed:?}")),
    }
}

/// The two ways around the square `X → Φ^{p1}X, Φ^{p2}X → Φ^{p1 p2}X` at level `n`, both
/// presented as quotients of `X<n p1 p2>`.
fn compatibility_square(
    c: &CyclotomicData,
    n: u64,
    p1: u64,
    p2: u64,
) -> Result<(GroupMorphism, GroupMorphism)> {
    let path = |first: u64, second: u64| -> Result<GroupMorphism> {
        let phi_first = c.gfp(first)?;
        let phi_second = c.gfp(second)?;
        // r_second at level n·first, descended to the quotient by X<a>
        let r_outer = c.r(second, n * first)?;
        let q_src = phi_first.inner().projection(n)?;
        let (_, q_tgt) = cokernel(&phi_second.push(prime_to_part(n, first), n * first)?);
        let induced = induced_on_quotient(&r_outer, &q_src, &q_tgt)?;
        induced.compose(&c.r(first, n)?)
    };
    let a = path(p1, p2)?;
    let b = path(p2, p1)?;
    // both targets are X<n p1 p2> modulo the images from the two prime-to parts
    let b = GroupMorphism::new(a.source().clone(), a.target().clone(), b.matrix().clone())?;
    Ok((a, b))
}

/// Checks that each `r_p` is an isomorphism commuting with push and pull, and that the squares
/// for pairs of primes commute, at every level dividing `bound`.
pub fn verify_cyclotomic(c: &CyclotomicData, bound: u64) -> CheckReport {
    let levels = divisors(bound);
    let pairs = covering_pairs(bound);
    let tasks: Vec<(u64, u64)> = levels
        .iter()
        .flat_map(|&n| c.primes.iter().map(move |&p| (n, p)))
        .collect();
    let entries: Vec<CheckEntry> = tasks
        .par_iter()
        .flat_map_iter(|&(n, p)| {
            let mut out = vec![CheckEntry::new(n, p, "isomorphism", iso_outcome(c.r(p, n)))];
            for &(m, _) in pairs.iter().filter(|&&(_, t)| t == n) {
                let push = same(
                    (|| c.gfp(p)?.push(m, n)?.compose(&c.r(p, m)?))(),
                    (|| c.r(p, n)?.compose(&c.base.push(m, n)?))(),
                );
                out.push(CheckEntry::new(
                    n,
                    p,
                    format!("push-naturality from {m}"),
                    push,
                ));
                let pull = same(
                    (|| c.gfp(p)?.pull(m, n)?.compose(&c.r(p, n)?))(),
                    (|| c.r(p, m)?.compose(&c.base.pull(m, n)?))(),
                );
                out.push(CheckEntry::new(
                    n,
                    p,
                    format!("pull-naturality from {m}"),
                    pull,
                ));
            }
            for &q in c.primes.iter().filter(|&&q| q > p) {
                let outcome = match compatibility_square(c, n, p, q) {
                    Ok((a, b)) => same(Ok(a), Ok(b)),
                    Err(e) => Err(e.to_string()),
                };
                out.push(CheckEntry::new(
                    n,
                    p,
                    format!("compatibility with {q}"),
                    outcome,
                ));
            }
            out
        })
        .collect();
    CheckReport::from_entries(entries)
}

/// Right exactness of `X<a> → X<n> → X<n>/X<a> → 0` at every level `n = a p^v`, plus naturality
/// of both maps, where the first term carries the structure of `j_{p,!} j_p^* X`.
pub fn recollement_check(d: &MackeyData, p: u64) -> Result<CheckReport> {
    let e = j_lower_shriek(&j_upper_star(d, p)?, p, d.bound())?;
    let levels = d.levels();
    let lambda = |n: u64| d.push(prime_to_part(n, p), n);
    let quotient = |n: u64| -> Result<GroupMorphism> { Ok(cokernel(&lambda(n)?).1) };
    let entries: Vec<CheckEntry> = levels
        .par_iter()
        .flat_map_iter(|&n| {
            let mut out = Vec::new();
            let (l, q) = match (lambda(n), quotient(n)) {
                (Ok(l), Ok(q)) => (l, q),
                (Err(err), _) | (_, Err(err)) => {
                    out.push(CheckEntry::new(n, p, "exact", Err(err.to_string())));
                    return out;
                }
            };
            let composite = q.compose(&l).map(|c| c.is_zero()).unwrap_or(false);
            out.push(CheckEntry::new(
                n,
                p,
                "composite",
                if composite {
                    Ok(())
                } else {
                    Err("quotient after lambda is nonzero".into())
                },
            ));
            out.push(CheckEntry::new(
                n,
                p,
                "surjective",
                if q.is_surjective() {
                    Ok(())
                } else {
                    Err("quotient map misses a generator".into())
                },
            ));
            let missing = q
                .kernel_generators()
                .into_iter()
                .find(|k| l.preimage(k).is_none());
            out.push(CheckEntry::new(
                n,
                p,
                "exact",
                match missing {
                    None => Ok(()),
                    Some(k) => Err(format!("kernel element {k:?} is not in the image")),
                },
            ));
            for &(m, _) in covering_pairs(d.bound()).iter().filter(|&&(_, t)| t == n) {
                let push = same(
                    (|| lambda(n)?.compose(&e.push(m, n)?))(),
                    (|| d.push(m, n)?.compose(&lambda(m)?))(),
                );
                out.push(CheckEntry::new(n, p, format!("lambda-push from {m}"), push));
                let pull = same(
                    (|| lambda(m)?.compose(&e.pull(m, n)?))(),
                    (|| d.pull(m, n)?.compose(&lambda(n)?))(),
                );
                out.push(CheckEntry::new(n, p, format!("lambda-pull from {m}"), pull));
                let qpush =
                    (|| induced_on_quotient(&d.push(m, n)?, &quotient(m)?, &quotient(n)?))();
                out.push(CheckEntry::new(
                    n,
                    p,
                    format!("quotient-push from {m}"),
                    qpush.map(|_| ()).map_err(|e| e.to_string()),
                ));
                let qpull =
                    (|| induced_on_quotient(&d.pull(m, n)?, &quotient(n)?, &quotient(m)?))();
                out.push(CheckEntry::new(
                    n,
                    p,
                    format!("quotient-pull from {m}"),
                    qpull.map(|_| ()).map_err(|e| e.to_string()),
                ));
            }
            out
        })
        .collect();
    Ok(CheckReport::from_entries(entries))
}

/// A 1-morphism `(scale, f)` of the twisted orbit category, `f: ι_scale(S) → T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMorphism {
    scale: u64,
    map: OrbitMap,
}

impl TwistedMorphism {
    pub fn new(scale: u64, map: OrbitMap) -> Result<Self> {
        if scale == 0 || !divides(scale, map.source().level()) {
            return Err(Error::not_divisor(scale, map.source().level()));
        }
        Ok(TwistedMorphism { scale, map })
    }

    pub fn identity(object: &Orbit) -> Self {
        TwistedMorphism {
            scale: 1,
            map: object.identity(),
        }
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn map(&self) -> &OrbitMap {
        &self.map
    }

    /// Level of `S`.
    pub fn source_level(&self) -> u64 {
        self.map.source().level() / self.scale
    }

    pub fn target_level(&self) -> u64 {
        self.map.target().level()
    }
}

impl fmt::Display for TwistedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.scale, self.map)
    }
}

/// `(n, g) ∘ (m, f) = (nm, g ∘ ι_n(f))`.
pub fn twisted_compose(
    first: &TwistedMorphism,
    second: &TwistedMorphism,
) -> Result<TwistedMorphism> {
    let f = first.map.iota(second.scale)?;
    let map = second.map.after(&f)?;
    TwistedMorphism::new(first.scale * second.scale, map)
}

/// Horizontal composition of 2-cells: `r` on the first factor (scale `m`), `s` on the second
/// (scale `n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellRule {
    /// `r/n + s`: the first cell is carried through `ι_n`.
    Whiskered,
    /// `r/m + s`.
    Literal,
}

impl CellRule {
    pub fn apply(self, r: &BigRational, s: &BigRational, m: u64, n: u64) -> BigRational {
        let d = match self {
            CellRule::Whiskered => n,
            CellRule::Literal => m,
        };
        r / BigInt::from(d) + s
    }
}

/// A 2-cell `from ⇒ to` between twisted morphisms of equal scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCell {
    pub from: TwistedMorphism,
    pub to: TwistedMorphism,
    pub value: BigRational,
}

impl TwistedCell {
    pub fn new(from: TwistedMorphism, to: TwistedMorphism, value: BigRational) -> Result<Self> {
        if from.scale != to.scale {
            return Err(Error::LevelMismatch(format!(
                "no 2-cells between scales {} and {}",
                from.scale, to.scale
            )));
        }
        if !intertwiners(&from.map, &to.map)?.contains(&value) {
            return Err(Error::NotAMorphism(format!(
                "{} is not a 2-cell from {from} to {to}",
                format_rational(&value)
            )));
        }
        Ok(TwistedCell { from, to, value })
    }
}

pub fn twisted_compose_cells(
    first: &TwistedCell,
    second: &TwistedCell,
    rule: CellRule,
) -> Result<TwistedCell> {
    let from = twisted_compose(&first.from, &second.from)?;
    let to = twisted_compose(&first.to, &second.to)?;
    let value = rule.apply(
        &first.value,
        &second.value,
        first.from.scale,
        second.from.scale,
    );
    TwistedCell::new(from, to, value)
}

/// Outcome of the associativity audit for one cell rule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleAudit {
    pub triples: usize,
    /// Composites that are not 2-cells between the composite 1-morphisms.
    pub invalid: usize,
    /// Triples where both bracketings are valid but differ.
    pub non_associative: usize,
    pub witness: Option<String>,
}

impl RuleAudit {
    pub fn holds(&self) -> bool {
        self.invalid == 0 && self.non_associative == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedAudit {
    pub whiskered: RuleAudit,
    pub literal: RuleAudit,
    /// The rule adopted by `twisted_compose_cells` callers: the first that holds.
    pub adopted: Option<CellRule>,
}

fn audit_chain(
    a: &[TwistedCell],
    b: &[TwistedCell],
    c: &[TwistedCell],
    rule: CellRule,
    audit: &mut RuleAudit,
) {
    let ab: Vec<Vec<Result<TwistedCell>>> = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| twisted_compose_cells(x, y, rule))
                .collect()
        })
        .collect();
    let bc: Vec<Vec<Result<TwistedCell>>> = b
        .iter()
        .map(|y| {
            c.iter()
                .map(|z| twisted_compose_cells(y, z, rule))
                .collect()
        })
        .collect();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            for (k, z) in c.iter().enumerate() {
                audit.triples += 1;
                let left = ab[i][j]
                    .as_ref()
                    .ok()
                    .map(|xy| twisted_compose_cells(xy, z, rule));
                let right = bc[j][k]
                    .as_ref()
                    .ok()
                    .map(|yz| twisted_compose_cells(x, yz, rule));
                match (left, right) {
                    (Some(Ok(l)), Some(Ok(r))) => {
                        if l.value != r.value {
                            audit.non_associative += 1;
                            audit.witness.get_or_insert_with(|| {
                                format!(
                                    "cells {}, {}, {} at scales {}, {}, {}: {} vs {}",
                                    format_rational(&x.value),
                                    format_rational(&y.value),
                                    format_rational(&z.value),
                                    x.from.scale,
                                    y.from.scale,
                                    z.from.scale,
                                    format_rational(&l.value),
                                    format_rational(&r.value)
                                )
                            });
                        }
                    }
                    _ => audit.invalid += 1,
                }
            }
        }
    }
}

/// Cells from the map `ι_scale<l> → <t>` at offset 0 to the maps at offsets `0` and `1/(2t)`,
/// two values each.
fn cells_between(source_level: u64, scale: u64, target: u64) -> Vec<TwistedCell> {
    let ambient = Supernatural::infinity();
    let zero = BigRational::from_integer(0.into());
    let f = make_orbit_map(source_level * scale, target, &zero, &ambient).expect("valid map");
    let from = TwistedMorphism::new(scale, f.clone()).expect("scale divides the source");
    let mut out = Vec::new();
    for off in [
        zero.clone(),
        BigRational::new(1.into(), BigInt::from(2 * target)),
    ] {
        let g = make_orbit_map(source_level * scale, target, &off, &ambient).expect("valid map");
        let base = intertwiners(&f, &g).expect("parallel").base;
        let to = TwistedMorphism::new(scale, g).expect("scale divides the source");
        for t in 0..2 {
            let v = &base + BigRational::new(t.into(), BigInt::from(target));
            out.push(TwistedCell::new(from.clone(), to.clone(), v).expect("intertwiner"));
        }
    }
    out
}

/// Runs both candidate cell rules over every triple of scales with product at most `max_product`,
/// from source levels 1 and 2, each target being the smallest level the scale allows.
pub fn twisted_audit(max_product: u64) -> TwistedAudit {
    let mut whiskered = RuleAudit::default();
    let mut literal = RuleAudit::default();
    for m in 1..=max_product {
        for n in 1..=max_product / m {
            for k in 1..=max_product / (m * n) {
                for l0 in [1, 2] {
                    let (l1, l2) = (l0 * m, l0 * m * n);
                    let l3 = l2 * k;
                    let (a, b, c) = (
                        cells_between(l0, m, l1),
                        cells_between(l1, n, l2),
                        cells_between(l2, k, l3),
                    );
                    for (rule, audit) in [
                        (CellRule::Whiskered, &mut whiskered),
                        (CellRule::Literal, &mut literal),
                    ] {
                        audit_chain(&a, &b, &c, rule, audit);
                    }
                }
            }
        }
    }
    let adopted = if whiskered.holds() {
        Some(CellRule::Whiskered)
    } else if literal.holds() {
        Some(CellRule::Literal)
    } else {
        None
    };
    TwistedAudit {
        whiskered,
        literal,
        adopted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::BurnsideRule;

    fn witt_z() -> Arc<dyn MackeyRule> {
        Arc::new(WittRule::integers())
    }

    #[test]
    fn gfp_examples() {
        let b = GeometricFixedPoints::new(Arc::new(BurnsideRule), 2).unwrap();
        assert!(b.group(1).unwrap().isomorphic(&FGAbelianGroup::free(1)));
        let w = GeometricFixedPoints::new(witt_z(), 2).unwrap();
        assert!(w.group(1).unwrap().isomorphic(&FGAbelianGroup::free(1)));
        assert!(matches!(
            GeometricFixedPoints::new(witt_z(), 4),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn witt_structure_small() {
        let c = witt_cyclotomic(&RingTag::Z, &[2, 3]).unwrap();
        assert!(verify_cyclotomic(&c, 6).passed());
        let rho = derived_restrictions(&c, 1, 2).unwrap();
        assert_eq!(rho.matrix(), &IntegerMatrix::from_i64(&[&[1, 0]]));
    }

    #[test]
    fn negated_structure_map_breaks_naturality() {
        let c = witt_cyclotomic(&RingTag::Z, &[2]).unwrap();
        let neg = c.r(2, 1).unwrap().matrix().scale(&BigInt::from(-1));
        let c = c.with_override(2, 1, neg);
        let report = verify_cyclotomic(&c, 2);
        assert!(report.find(1, "isomorphism").unwrap().pass);
        assert!(!report.passed());
    }

    #[test]
    fn iota_and_composition() {
        let inf = Supernatural::infinity();
        let f = make_orbit_map(1, 2, &BigRational::new(1.into(), 4.into()), &inf).unwrap();
        let g = f.iota(2).unwrap();
        assert_eq!((g.source().level(), g.target().level()), (2, 4));
        assert_eq!(g.offset(), &BigRational::new(1.into(), 8.into()));
        let a = TwistedMorphism::new(1, f.clone()).unwrap();
        let id = TwistedMorphism::identity(f.target());
        assert_eq!(twisted_compose(&a, &id).unwrap(), a);
    }

    #[test]
    fn audit_prefers_whiskered_rule() {
        let audit = twisted_audit(6);
        assert!(audit.whiskered.holds());
        assert!(!audit.literal.holds());
        assert_eq!(audit.adopted, Some(CellRule::Whiskered));
    }
}
