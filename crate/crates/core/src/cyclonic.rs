//! Cyclonic orbits `<m>_N = (1/N)Z / (1/m)Z`, equivariant maps between them as rational
//! offsets, intertwiners, pullbacks, and coherence of 3-simplices in the nerve.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith;
use crate::error::{Error, Result};
use crate::rational::{
    congruent_mod_inverse_level, format_rational, in_lattice, mod_inverse_level, rat,
};
use crate::supernat::Supernatural;

/// The orbit `<m>_N`; its points have stabilizer of order `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orbit {
    level: u64,
    ambient: Supernatural,
}

impl Orbit {
    pub fn new(level: u64, ambient: Supernatural) -> Result<Self> {
        if !ambient.has_divisor(level) {
            return Err(Error::not_divisor(level, &ambient));
        }
        Ok(Orbit { level, ambient })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ambient(&self) -> &Supernatural {
        &self.ambient
    }

    /// The identity map of this orbit.
    pub fn identity(&self) -> OrbitMap {
        OrbitMap {
            source: self.clone(),
            target: self.clone(),
            offset: BigRational::zero(),
        }
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>@{}", self.level, self.ambient)
    }
}

impl FromStr for Orbit {
    type Err = Error;

    /// `<m>@N`, e.g. `<6>@inf` or `<4>@12`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, ambient) = s
            .split_once('@')
            .ok_or_else(|| Error::parse(format!("orbit {s:?} lacks '@N'")))?;
        let level = head
            .trim()
            .strip_prefix('<')
            .and_then(|h| h.strip_suffix('>'))
            .and_then(|h| h.trim().parse::<u64>().ok())
            .filter(|&m| m > 0)
            .ok_or_else(|| Error::parse(format!("bad orbit level in {s:?}")))?;
        Orbit::new(level, ambient.parse()?)
    }
}

/// The equivariant map `z ↦ z + offset` from `<m>` to `<n>`; requires `m | n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitMap {
    source: Orbit,
    target: Orbit,
    offset: BigRational,
}

pub fn make_orbit_map(m: u64, n: u64, r: &BigRational, ambient: &Supernatural) -> Result<OrbitMap> {
    OrbitMap::new(
        Orbit::new(m, ambient.clone())?,
        Orbit::new(n, ambient.clone())?,
        r,
    )
}

impl OrbitMap {
    pub fn new(source: Orbit, target: Orbit, r: &BigRational) -> Result<Self> {
        if source.ambient != target.ambient {
            return Err(Error::LevelMismatch(format!(
                "ambients {} and {}",
                source.ambient, target.ambient
            )));
        }
        if !arith::divides(source.level, target.level) {
            return Err(Error::not_divisor(source.level, target.level));
        }
        let offset = mod_inverse_level(r, target.level);
        if !in_lattice(&offset, &source.ambient) {
            return Err(Error::BadDenominator(
                format_rational(r),
                source.ambient.to_string(),
            ));
        }
        Ok(OrbitMap {
            source,
            target,
            offset,
        })
    }

    pub fn source(&self) -> &Orbit {
        &self.source
    }

    pub fn target(&self) -> &Orbit {
        &self.target
    }

    /// The image of the basepoint, in `[0, 1/n)`.
    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.offset.is_zero()
    }

    /// `self` after `first`.
    pub fn after(&self, first: &OrbitMap) -> Result<OrbitMap> {
        compose_orbit_maps(first, self)
    }

    /// Rescales levels by `n` and divides the offset by `n`; the ambient becomes `n·N`.
    pub fn iota(&self, n: u64) -> Result<OrbitMap> {
        let ambient = self.source.ambient.mul(&Supernatural::from(n));
        OrbitMap::new(
            Orbit::new(self.source.level * n, ambient.clone())?,
            Orbit::new(self.target.level * n, ambient)?,
            &(&self.offset / num_bigint::BigInt::from(n)),
        )
    }
}

impl fmt::Display for OrbitMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}> -> <{}> +{}",
            self.source.level,
            self.target.level,
            format_rational(&self.offset)
        )
    }
}

/// `g` after `f`.
pub fn compose_orbit_maps(f: &OrbitMap, g: &OrbitMap) -> Result<OrbitMap> {
    if f.target != g.source {
        return Err(Error::LevelMismatch(format!("{} then {}", f, g)));
    }
    Ok(OrbitMap {
        source: f.source.clone(),
        target: g.target.clone(),
        offset: mod_inverse_level(&(&f.offset + &g.offset), g.target.level),
    })
}

/// A 2-cell `u ⇒ v`: a value `r` in `(1/N)Z` with `v ≡ r + u` modulo `1/n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Intertwiner {
    from: OrbitMap,
    to: OrbitMap,
    value: BigRational,
}

impl Intertwiner {
    pub fn new(from: OrbitMap, to: OrbitMap, value: BigRational) -> Result<Self> {
        let coset = intertwiners(&from, &to)?;
        if !coset.contains(&value) {
            return Err(Error::NotAMorphism(format!(
                "{} is not an intertwiner from {from} to {to}",
                format_rational(&value)
            )));
        }
        if !in_lattice(&value, &from.source.ambient) {
            return Err(Error::BadDenominator(
                format_rational(&value),
                from.source.ambient.to_string(),
            ));
        }
        Ok(Intertwiner { from, to, value })
    }

    pub fn from(&self) -> &OrbitMap {
        &self.from
    }

    pub fn to(&self) -> &OrbitMap {
        &self.to
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }
}

/// The intertwiners between a parallel pair: `base + period·Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerCoset {
    pub base: BigRational,
    pub period: BigRational,
}

impl IntertwinerCoset {
    pub fn contains(&self, r: &BigRational) -> bool {
        ((r - &self.base) / &self.period).is_integer()
    }
}

pub fn intertwiners(u: &OrbitMap, v: &OrbitMap) -> Result<IntertwinerCoset> {
    if u.source != v.source || u.target != v.target {
        return Err(Error::LevelMismatch(format!(
            "{u} and {v} are not parallel"
        )));
    }
    let n = u.target.level;
    Ok(IntertwinerCoset {
        base: mod_inverse_level(&(&v.offset - &u.offset), n),
        period: rat(1, n as i64),
    })
}

/// A finite disjoint union of orbits over one ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCyclonicSet {
    ambient: Supernatural,
    orbits: Vec<Orbit>,
}

impl FiniteCyclonicSet {
    pub fn new(ambient: Supernatural, orbits: Vec<Orbit>) -> Result<Self> {
        if let Some(o) = orbits.iter().find(|o| o.ambient != ambient) {
            return Err(Error::LevelMismatch(format!("{o} is not over {ambient}")));
        }
        Ok(FiniteCyclonicSet { ambient, orbits })
    }

    pub fn ambient(&self) -> &Supernatural {
        &self.ambient
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// Number of orbits of each level, ascending by level.
    pub fn level_counts(&self) -> Vec<(u64, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for o in &self.orbits {
            *counts.entry(o.level).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

/// One orbit of a pullback with its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackComponent {
    pub apex: Orbit,
    pub left: OrbitMap,
    pub right: OrbitMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub set: FiniteCyclonicSet,
    pub components: Vec<PullbackComponent>,
}

/// The pullback of `<k> → <m> ← <l>`: `m/lcm(k,l)` orbits of level `gcd(k,l)`.
///
/// The left projection is normalized to offset 0; the right projections run through the
/// classes of `(1/m)Z` modulo `(1/lcm(k,l))Z`.
pub fn pullback_cospan(f: &OrbitMap, g: &OrbitMap) -> Result<Pullback> {
    if f.target != g.target {
        return Err(Error::LevelMismatch(format!(
            "cospan {f} and {g} have different targets"
        )));
    }
    let (k, l, m) = (f.source.level, g.source.level, f.target.level);
    let c = arith::gcd(k, l);
    let count = m / arith::lcm(k, l);
    let ambient = f.source.ambient.clone();
    let apex = Orbit::new(c, ambient.clone())?;
    let base = &f.offset - &g.offset;
    let mut components = Vec::with_capacity(count as usize);
    for j in 0..count {
        let left = OrbitMap::new(apex.clone(), f.source.clone(), &BigRational::zero())?;
        let right = OrbitMap::new(
            apex.clone(),
            g.source.clone(),
            &(&base + rat(j as i64, m as i64)),
        )?;
        components.push(PullbackComponent {
            apex: apex.clone(),
            left,
            right,
        });
    }
    let set = FiniteCyclonicSet::new(ambient, components.iter().map(|c| c.apex.clone()).collect())?;
    Ok(Pullback { set, components })
}

/// The faces of a 2-simplex: maps `φ01, φ02, φ12` and a filler `α012: φ02 ⇒ φ12∘φ01`.
#[derive(Clone, Debug)]
pub struct Simplex2 {
    pub objects: [Orbit; 3],
    pub phi01: OrbitMap,
    pub phi02: OrbitMap,
    pub phi12: OrbitMap,
    pub alpha: BigRational,
}

impl Simplex2 {
    /// The canonical filler `α = off(φ12∘φ01) - off(φ02)` shifted by `twist/n2`.
    pub fn fill(phi01: OrbitMap, phi12: OrbitMap, phi02: OrbitMap, twist: i64) -> Result<Self> {
        let comp = phi12.after(&phi01)?;
        let n2 = phi12.target.level;
        let alpha = comp.offset() - phi02.offset() + rat(twist, n2 as i64);
        let objects = [
            phi01.source.clone(),
            phi01.target.clone(),
            phi12.target.clone(),
        ];
        Ok(Simplex2 {
            objects,
            phi01,
            phi02,
            phi12,
            alpha,
        })
    }

    /// The 3-simplex repeating the last vertex along an identity.
    pub fn degenerate_last(&self) -> Simplex3 {
        let x2 = &self.objects[2];
        Simplex3 {
            objects: [
                self.objects[0].clone(),
                self.objects[1].clone(),
                x2.clone(),
                x2.clone(),
            ],
            phi: [
                self.phi01.clone(),
                self.phi02.clone(),
                self.phi02.clone(),
                self.phi12.clone(),
                self.phi12.clone(),
                x2.identity(),
            ],
            alpha: [
                self.alpha.clone(),
                self.alpha.clone(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }
}

/// Edge order `01, 02, 03, 12, 13, 23`.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Face order `012, 013, 023, 123`.
pub const FACES: [(usize, usize, usize); 4] = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];

/// A 3-simplex of the nerve: four orbits, six maps, four 2-cell fillers.
#[derive(Clone, Debug)]
pub struct Simplex3 {
    pub objects: [Orbit; 4],
    pub phi: [OrbitMap; 6],
    pub alpha: [BigRational; 4],
}

impl Simplex3 {
    pub fn edge(&self, i: usize, j: usize) -> &OrbitMap {
        let idx = EDGES
            .iter()
            .position(|&e| e == (i, j))
            .expect("edge with i < j < 4");
        &self.phi[idx]
    }

    pub fn filler(&self, i: usize, j: usize, k: usize) -> &BigRational {
        let idx = FACES
            .iter()
            .position(|&f| f == (i, j, k))
            .expect("face with i < j < k < 4");
        &self.alpha[idx]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplexReport {
    pub failures: Vec<String>,
}

impl SimplexReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every filler is an intertwiner `φik ⇒ φjk∘φij` and that
/// `α_ikl + α_ijk = α_ijl + α_jkl` exactly.
pub fn check_simplex3(s: &Simplex3) -> SimplexReport {
    let mut failures = Vec::new();
    for (idx, &(i, j)) in EDGES.iter().enumerate() {
        let f = &s.phi[idx];
        if f.source != s.objects[i] || f.target != s.objects[j] {
            failures.push(format!(
                "edge {i}{j}: {f} does not join {} and {}",
                s.objects[i], s.objects[j]
            ));
        }
    }
    if !failures.is_empty() {
        return SimplexReport { failures };
    }
    for &(i, j, k) in &FACES {
        let a = s.filler(i, j, k);
        let name = format!("alpha_{i}{j}{k}");
        if !in_lattice(a, s.objects[0].ambient()) {
            failures.push(format!("{name} = {} is not in (1/N)Z", format_rational(a)));
            continue;
        }
        let comp = s.edge(j, k).after(s.edge(i, j)).expect("edges join");
        let lk = s.objects[k].level;
        if !congruent_mod_inverse_level(comp.offset(), &(a + s.edge(i, k).offset()), lk) {
            failures.push(format!(
                "{name} = {} is not an intertwiner from {} to {}",
                format_rational(a),
                s.edge(i, k),
                comp
            ));
        }
    }
    let lhs = s.filler(0, 2, 3) + s.filler(0, 1, 2);
    let rhs = s.filler(0, 1, 3) + s.filler(1, 2, 3);
    if lhs != rhs {
        failures.push(format!(
            "cocycle: alpha_023 + alpha_012 = {} but alpha_013 + alpha_123 = {}",
            format_rational(&lhs),
            format_rational(&rhs)
        ));
    }
    SimplexReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf() -> Supernatural {
        Supernatural::infinity()
    }

    #[test]
    fn map_construction() {
        let id = make_orbit_map(2, 2, &rat(1, 2), &inf()).unwrap();
        assert!(id.is_identity());
        let f = make_orbit_map(1, 2, &rat(1, 4), &inf()).unwrap();
        assert_eq!(f.offset(), &rat(1, 4));
        assert!(matches!(
            make_orbit_map(4, 2, &rat(0, 1), &inf()),
            Err(Error::NotDivisor(..))
        ));
        assert!(matches!(
            make_orbit_map(1, 2, &rat(1, 8), &Supernatural::from(4)),
            Err(Error::BadDenominator(..))
        ));
    }

    #[test]
    fn composition() {
        let f = make_orbit_map(1, 2, &rat(1, 4), &inf()).unwrap();
        let g = make_orbit_map(2, 4, &rat(1, 8), &inf()).unwrap();
        assert_eq!(compose_orbit_maps(&f, &g).unwrap().offset(), &rat(1, 8));
        assert!(compose_orbit_maps(&g, &f).is_err());
        let o = Orbit::new(3, inf()).unwrap();
        assert!(compose_orbit_maps(&o.identity(), &o.identity())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn intertwiner_cosets() {
        let u = make_orbit_map(1, 4, &rat(0, 1), &inf()).unwrap();
        let v = make_orbit_map(1, 4, &rat(1, 4), &inf()).unwrap();
        let c = intertwiners(&u, &u).unwrap();
        assert_eq!(c.base, rat(0, 1));
        assert_eq!(c.period, rat(1, 4));
        let c = intertwiners(&u, &v).unwrap();
        assert_eq!(c.base, rat(0, 1));
        let u = make_orbit_map(1, 8, &rat(0, 1), &inf()).unwrap();
        let v = make_orbit_map(1, 8, &rat(1, 16), &inf()).unwrap();
        assert_eq!(intertwiners(&u, &v).unwrap().base, rat(1, 16));
        assert!(Intertwiner::new(u.clone(), v.clone(), rat(17, 16)).is_ok());
        assert!(Intertwiner::new(u, v, rat(1, 32)).is_err());
    }

    #[test]
    fn intertwiner_example_offset_quarter() {
        // offsets 0 and 1/4 coincide mod 1/4 at n = 4, so r = 5/4 is valid
        let u = make_orbit_map(4, 4, &rat(0, 1), &inf()).unwrap();
        let v = make_orbit_map(4, 4, &rat(1, 4), &inf()).unwrap();
        let c = intertwiners(&u, &v).unwrap();
        assert!(c.contains(&rat(5, 4)));
        assert!(c.contains(&rat(1, 4)));
    }

    #[test]
    fn pullback_counts() {
        let n = Supernatural::from(12);
        let f = make_orbit_map(2, 12, &rat(0, 1), &n).unwrap();
        let g = make_orbit_map(3, 12, &rat(0, 1), &n).unwrap();
        let p = pullback_cospan(&f, &g).unwrap();
        assert_eq!(p.set.level_counts(), vec![(1, 2)]);
        for c in &p.components {
            assert_eq!(f.after(&c.left).unwrap(), g.after(&c.right).unwrap());
        }
        let o = Orbit::new(5, inf()).unwrap();
        let p = pullback_cospan(&o.identity(), &o.identity()).unwrap();
        assert_eq!(p.set.level_counts(), vec![(5, 1)]);
    }

    #[test]
    fn simplices() {
        let n = Supernatural::from(12);
        let o = Orbit::new(1, n.clone()).unwrap();
        let s = Simplex3 {
            objects: [o.clone(), o.clone(), o.clone(), o.clone()],
            phi: std::array::from_fn(|_| o.identity()),
            alpha: std::array::from_fn(|_| BigRational::zero()),
        };
        assert!(check_simplex3(&s).passed());

        let f01 = make_orbit_map(1, 2, &rat(1, 12), &n).unwrap();
        let f12 = make_orbit_map(2, 6, &rat(1, 12), &n).unwrap();
        let f02 = make_orbit_map(1, 6, &rat(0, 1), &n).unwrap();
        let tri = Simplex2::fill(f01, f12, f02, 3).unwrap();
        let deg = tri.degenerate_last();
        assert!(check_simplex3(&deg).passed());

        let mut bad = deg.clone();
        bad.alpha[1] += rat(1, 12);
        let r = check_simplex3(&bad);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.contains("alpha_013")));
    }

    #[test]
    fn orbit_text() {
        let o: Orbit = "<6>@inf".parse().unwrap();
        assert_eq!(o.to_string(), "<6>@inf");
        let o: Orbit = "<4>@12".parse().unwrap();
        assert_eq!(o.level(), 4);
        assert!("<5>@12".parse::<Orbit>().is_err());
        assert!("<0>@12".parse::<Orbit>().is_err());
    }

    #[test]
    fn iota_scales() {
        let f = make_orbit_map(1, 2, &rat(1, 4), &inf()).unwrap();
        let g = f.iota(2).unwrap();
        assert_eq!((g.source().level(), g.target().level()), (2, 4));
        assert_eq!(g.offset(), &rat(1, 8));
    }
}
