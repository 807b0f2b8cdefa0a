//! Spans of cyclonic orbits, their classes in the homotopy Burnside category, and the
//! Burnside rings `Ω<m> ≅ Z{N_m}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{divides, divisors, gcd, lcm};
use crate::cyclonic::{pullback_cospan, Orbit, OrbitMap};
use crate::error::{Error, Result};
use crate::rational::rat;
use crate::supernat::Supernatural;

/// One summand `source ← apex → target` of a span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanLeg {
    pub apex: Orbit,
    pub left: OrbitMap,
    pub right: OrbitMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    source: Orbit,
    target: Orbit,
    legs: Vec<SpanLeg>,
}

impl Span {
    pub fn new(source: Orbit, target: Orbit, legs: Vec<SpanLeg>) -> Result<Self> {
        for leg in &legs {
            if leg.left.source() != &leg.apex || leg.right.source() != &leg.apex {
                return Err(Error::LevelMismatch(format!(
                    "legs do not start at apex {}",
                    leg.apex
                )));
            }
            if leg.left.target() != &source || leg.right.target() != &target {
                return Err(Error::LevelMismatch(format!(
                    "legs of apex {} do not end at {source} and {target}",
                    leg.apex
                )));
            }
        }
        Ok(Span {
            source,
            target,
            legs,
        })
    }

    /// The span `<m> ← <k> → <n>` with both offsets zero.
    pub fn basic(m: u64, n: u64, k: u64, ambient: &Supernatural) -> Result<Self> {
        let source = Orbit::new(m, ambient.clone())?;
        let target = Orbit::new(n, ambient.clone())?;
        let apex = Orbit::new(k, ambient.clone())?;
        let zero = BigRational::zero();
        let leg = SpanLeg {
            left: OrbitMap::new(apex.clone(), source.clone(), &zero)?,
            right: OrbitMap::new(apex.clone(), target.clone(), &zero)?,
            apex,
        };
        Span::new(source, target, vec![leg])
    }

    pub fn empty(source: Orbit, target: Orbit) -> Self {
        Span {
            source,
            target,
            legs: Vec::new(),
        }
    }

    pub fn source(&self) -> &Orbit {
        &self.source
    }

    pub fn target(&self) -> &Orbit {
        &self.target
    }

    pub fn legs(&self) -> &[SpanLeg] {
        &self.legs
    }

    /// Disjoint union of parallel spans.
    pub fn sum(&self, other: &Span) -> Result<Span> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::LevelMismatch("spans are not parallel".into()));
        }
        let mut legs = self.legs.clone();
        legs.extend(other.legs.iter().cloned());
        Ok(Span {
            source: self.source.clone(),
            target: self.target.clone(),
            legs,
        })
    }
}

/// The class of a span: counts apexes by level.
pub fn span_class(s: &Span) -> HMorphism {
    let mut h = HMorphism::zero(s.source.level(), s.target.level());
    for leg in &s.legs {
        let i = h
            .index_of(leg.apex.level())
            .expect("apex level divides both ends");
        h.coeffs[i] += 1;
    }
    h.effective = true;
    h
}

/// `T` after `S`, by pulling back the inner legs.
pub fn compose_spans(s: &Span, t: &Span) -> Result<Span> {
    if s.target != t.source {
        return Err(Error::LevelMismatch(format!(
            "{} then {}",
            s.target, t.source
        )));
    }
    let mut legs = Vec::new();
    for a in &s.legs {
        for b in &t.legs {
            for c in pullback_cospan(&a.right, &b.left)?.components {
                legs.push(SpanLeg {
                    left: a.left.after(&c.left)?,
                    right: b.right.after(&c.right)?,
                    apex: c.apex,
                });
            }
        }
    }
    Span::new(s.source.clone(), t.target.clone(), legs)
}

/// A morphism `m → n` of the homotopy Burnside category: integers indexed by `N_gcd(m,n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HMorphism {
    source: u64,
    target: u64,
    index: Vec<u64>,
    coeffs: Vec<BigInt>,
    effective: bool,
}

impl HMorphism {
    pub fn zero(source: u64, target: u64) -> Self {
        let index = divisors(gcd(source, target));
        let coeffs = vec![BigInt::zero(); index.len()];
        HMorphism {
            source,
            target,
            index,
            coeffs,
            effective: true,
        }
    }

    /// The class `[k]` of the basic span through `<k>`.
    pub fn basis(source: u64, target: u64, k: u64) -> Result<Self> {
        let mut h = Self::zero(source, target);
        let i = h
            .index_of(k)
            .ok_or_else(|| Error::not_divisor(k, gcd(source, target)))?;
        h.coeffs[i] = BigInt::one();
        Ok(h)
    }

    pub fn identity(m: u64) -> Self {
        Self::basis(m, m, m).expect("m divides m")
    }

    /// From `(divisor, coefficient)` pairs; unlisted divisors get zero.
    pub fn from_pairs(
        source: u64,
        target: u64,
        pairs: impl IntoIterator<Item = (u64, BigInt)>,
    ) -> Result<Self> {
        let mut h = Self::zero(source, target);
        for (k, c) in pairs {
            let i = h
                .index_of(k)
                .ok_or_else(|| Error::not_divisor(k, gcd(source, target)))?;
            h.coeffs[i] += c;
        }
        h.effective = h.coeffs.iter().all(|c| c >= &BigInt::zero());
        Ok(h)
    }

    pub fn source(&self) -> u64 {
        self.source
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    /// The divisors of `gcd(source, target)`, ascending.
    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u64) -> BigInt {
        self.index_of(k)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_default()
    }

    /// Whether this class was built from actual spans (nonnegative coefficients).
    pub fn is_effective(&self) -> bool {
        self.effective
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero `(k, c_k)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.index
            .iter()
            .copied()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
    }

    fn index_of(&self, k: u64) -> Option<usize> {
        self.index.binary_search(&k).ok()
    }

    pub fn add(&self, other: &HMorphism) -> Result<HMorphism> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(Error::LevelMismatch("morphisms are not parallel".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(HMorphism {
            coeffs,
            effective: self.effective && other.effective,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> HMorphism {
        HMorphism {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            effective: self.is_zero(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &BigInt) -> HMorphism {
        let coeffs: Vec<BigInt> = self.coeffs.iter().map(|x| x * c).collect();
        let effective = self.effective && c >= &BigInt::zero();
        HMorphism {
            coeffs,
            effective,
            ..self.clone()
        }
    }
}

impl fmt::Display for HMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms().map(|(k, c)| format!("{c}[{k}]")).collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        write!(f, "{body}: {} -> {}", self.source, self.target)
    }
}

/// `second` after `first`, with `[l]∘[k] = (n/lcm(k,l))·[gcd(k,l)]` over the middle level `n`.
pub fn compose_h(first: &HMorphism, second: &HMorphism) -> Result<HMorphism> {
    if first.target != second.source {
        return Err(Error::LevelMismatch(format!(
            "{} -> {} then {} -> {}",
            first.source, first.target, second.source, second.target
        )));
    }
    let n = first.target;
    let mut out = HMorphism::zero(first.source, second.target);
    for (k, a) in first.terms() {
        for (l, b) in second.terms() {
            let i = out.index_of(gcd(k, l)).expect("gcd divides both ends");
            out.coeffs[i] += a * b * BigInt::from(n / lcm(k, l));
        }
    }
    out.effective = first.effective && second.effective;
    Ok(out)
}

/// Reverses a span class; the index set is symmetric.
pub fn dual(h: &HMorphism) -> HMorphism {
    HMorphism {
        source: h.target,
        target: h.source,
        ..h.clone()
    }
}

/// Automorphisms of a basic span: infinite cyclic, generated by `1/lcm(m,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanAutGroup {
    pub free_rank: usize,
    pub generator: BigRational,
}

impl fmt::Display for SpanAutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "free abelian of rank {} with generator {}",
            self.free_rank,
            crate::rational::format_rational(&self.generator)
        )
    }
}

pub fn span_aut_group(m: u64, n: u64, l: u64) -> Result<SpanAutGroup> {
    if !divides(l, gcd(m, n)) {
        return Err(Error::not_divisor(l, gcd(m, n)));
    }
    Ok(SpanAutGroup {
        free_rank: 1,
        generator: rat(1, lcm(m, n) as i64),
    })
}

/// An element of `Ω<m>`, coefficients indexed by `N_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BurnsideElement {
    level: u64,
    index: Vec<u64>,
    coeffs: Vec<BigInt>,
}

impl BurnsideElement {
    pub fn zero(level: u64) -> Self {
        let index = divisors(level);
        let coeffs = vec![BigInt::zero(); index.len()];
        BurnsideElement {
            level,
            index,
            coeffs,
        }
    }

    /// The orbit `[k]` of `C_m` with stabilizer of order `k`.
    pub fn basis(level: u64, k: u64) -> Result<Self> {
        let mut x = Self::zero(level);
        let i = x
            .index
            .binary_search(&k)
            .map_err(|_| Error::not_divisor(k, level))?;
        x.coeffs[i] = BigInt::one();
        Ok(x)
    }

    /// The one-point orbit `[m]`.
    pub fn one(level: u64) -> Self {
        Self::basis(level, level).expect("m divides m")
    }

    pub fn from_pairs(level: u64, pairs: impl IntoIterator<Item = (u64, BigInt)>) -> Result<Self> {
        let mut x = Self::zero(level);
        for (k, c) in pairs {
            let i = x
                .index
                .binary_search(&k)
                .map_err(|_| Error::not_divisor(k, level))?;
            x.coeffs[i] += c;
        }
        Ok(x)
    }

    /// From a dense vector ordered by ascending divisors.
    pub fn from_vec(level: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        let index = divisors(level);
        if coeffs.len() != index.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for {} divisors of {level}",
                coeffs.len(),
                index.len()
            )));
        }
        Ok(BurnsideElement {
            level,
            index,
            coeffs,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u64) -> BigInt {
        self.index
            .binary_search(&k)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.index
            .iter()
            .copied()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &BurnsideElement) -> Result<BurnsideElement> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(format!(
                "levels {} and {}",
                self.level, other.level
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(BurnsideElement {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &BigInt) -> BurnsideElement {
        BurnsideElement {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Number of points fixed by the subgroup of order `d`.
    pub fn fixed_points(&self, d: u64) -> BigInt {
        self.terms()
            .filter(|&(k, _)| divides(d, k))
            .map(|(k, c)| c * BigInt::from(self.level / k))
            .sum()
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms().map(|(k, c)| format!("{c}[{k}]")).collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `[k]·[l] = (m/lcm(k,l))·[gcd(k,l)]`.
pub fn burnside_mul(x: &BurnsideElement, y: &BurnsideElement) -> Result<BurnsideElement> {
    if x.level != y.level {
        return Err(Error::LevelMismatch(format!(
            "levels {} and {}",
            x.level, y.level
        )));
    }
    let m = x.level;
    let mut out = BurnsideElement::zero(m);
    for (k, a) in x.terms() {
        for (l, b) in y.terms() {
            let i = out.index.binary_search(&gcd(k, l)).expect("gcd divides m");
            out.coeffs[i] += a * b * BigInt::from(m / lcm(k, l));
        }
    }
    Ok(out)
}

/// Rows `(k, l, coefficient, gcd(k,l))` of the multiplication table of `Ω<m>`.
pub fn burnside_table(m: u64) -> Vec<(u64, u64, u64, u64)> {
    let ds = divisors(m);
    let mut rows = Vec::with_capacity(ds.len() * ds.len());
    for &k in &ds {
        for &l in &ds {
            rows.push((k, l, m / lcm(k, l), gcd(k, l)));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf() -> Supernatural {
        Supernatural::infinity()
    }

    fn b(m: u64, k: u64) -> BurnsideElement {
        BurnsideElement::basis(m, k).unwrap()
    }

    #[test]
    fn classes() {
        let s = Span::basic(4, 6, 2, &inf()).unwrap();
        assert_eq!(span_class(&s), HMorphism::basis(4, 6, 2).unwrap());
        let o4 = Orbit::new(4, inf()).unwrap();
        let o6 = Orbit::new(6, inf()).unwrap();
        assert!(span_class(&Span::empty(o4, o6)).is_zero());
        let two = s.sum(&Span::basic(4, 6, 1, &inf()).unwrap()).unwrap();
        let h = span_class(&two);
        assert_eq!(h.coeff(1), BigInt::one());
        assert_eq!(h.coeff(2), BigInt::one());
    }

    #[test]
    fn span_composition_examples() {
        let s = Span::basic(2, 4, 2, &inf()).unwrap();
        let t = Span::basic(4, 2, 2, &inf()).unwrap();
        let c = span_class(&compose_spans(&s, &t).unwrap());
        assert_eq!(
            c,
            HMorphism::basis(2, 2, 2).unwrap().scale(&BigInt::from(2))
        );
        let id = Span::basic(2, 2, 2, &inf()).unwrap();
        assert_eq!(
            span_class(&compose_spans(&s, &Span::basic(4, 4, 4, &inf()).unwrap()).unwrap()),
            span_class(&s)
        );
        assert_eq!(span_class(&compose_spans(&id, &s).unwrap()), span_class(&s));
    }

    #[test]
    fn compose_h_examples() {
        let e2 = HMorphism::basis(4, 4, 2).unwrap();
        assert_eq!(compose_h(&e2, &e2).unwrap(), e2.scale(&BigInt::from(2)));
        let f = HMorphism::basis(2, 6, 2).unwrap();
        let g = HMorphism::basis(6, 3, 3).unwrap();
        assert_eq!(
            compose_h(&f, &g).unwrap(),
            HMorphism::basis(2, 3, 1).unwrap()
        );
        assert!(compose_h(&f, &HMorphism::zero(6, 5)).unwrap().is_zero());
        assert!(compose_h(&f, &f).is_err());
    }

    #[test]
    fn burnside_ring_examples() {
        assert_eq!(
            burnside_mul(&b(4, 2), &b(4, 2)).unwrap(),
            b(4, 2).scale(&BigInt::from(2))
        );
        assert_eq!(burnside_mul(&b(6, 2), &b(6, 3)).unwrap(), b(6, 1));
        let x = b(12, 4).add(&b(12, 6).scale(&BigInt::from(-3))).unwrap();
        assert_eq!(burnside_mul(&BurnsideElement::one(12), &x).unwrap(), x);
        assert!(burnside_mul(&b(4, 2), &b(6, 2)).is_err());
    }

    #[test]
    fn aut_groups() {
        assert_eq!(span_aut_group(2, 3, 1).unwrap().generator, rat(1, 6));
        assert_eq!(span_aut_group(5, 5, 5).unwrap().generator, rat(1, 5));
        assert_eq!(span_aut_group(4, 6, 2).unwrap().generator, rat(1, 12));
        assert!(span_aut_group(4, 6, 3).is_err());
    }

    #[test]
    fn duality() {
        let h = HMorphism::basis(4, 6, 2).unwrap();
        let d = dual(&h);
        assert_eq!((d.source(), d.target()), (6, 4));
        assert_eq!(d.coeff(2), BigInt::one());
        assert_eq!(dual(&d), h);
        assert_eq!(dual(&HMorphism::identity(3)), HMorphism::identity(3));
    }

    #[test]
    fn fixed_point_counts() {
        // [1] in Ω<4> is the free orbit: 4 points, none fixed by C_2
        let x = b(4, 1);
        assert_eq!(x.fixed_points(1), BigInt::from(4));
        assert_eq!(x.fixed_points(2), BigInt::zero());
        assert_eq!(b(4, 4).fixed_points(4), BigInt::one());
    }

    #[test]
    fn mackey_condition_by_cardinality() {
        // <m> ← <m> → <n> followed by <n> ← <m'> → <m'>
        for (m, mp, n) in [(2, 3, 12), (4, 6, 12), (2, 2, 8)] {
            let f = HMorphism::basis(m, n, m).unwrap();
            let g = HMorphism::basis(n, mp, mp).unwrap();
            let c = compose_h(&f, &g).unwrap();
            assert_eq!(c.coeff(gcd(m, mp)), BigInt::from(n / lcm(m, mp)));
        }
    }
}
