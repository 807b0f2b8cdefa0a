//! The graded algebra on symbols `α_{b,k,a}` (degree 0) and `ε_{b,k,a}` (degree 1), with zero
//! differential.
//!
//! `x·y` means `x` after `y`: `α_{c,l,b}·α_{b,k,a}` runs from `a` through `b` to `c`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::arith::{divides, divisors, gcd, lcm};
use crate::error::{Error, Result};
use crate::witt::{ExactRing, Integers};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Alpha,
    Epsilon,
}

/// A generator from `a` to `b` indexed by `k | gcd(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub kind: Kind,
    pub b: u64,
    pub k: u64,
    pub a: u64,
}

impl Symbol {
    pub fn new(kind: Kind, b: u64, k: u64, a: u64) -> Result<Self> {
        if a == 0 || b == 0 || k == 0 || !divides(k, gcd(a, b)) {
            return Err(Error::not_divisor(k, gcd(a, b)));
        }
        Ok(Symbol { kind, b, k, a })
    }

    pub fn alpha(b: u64, k: u64, a: u64) -> Result<Self> {
        Self::new(Kind::Alpha, b, k, a)
    }

    pub fn epsilon(b: u64, k: u64, a: u64) -> Result<Self> {
        Self::new(Kind::Epsilon, b, k, a)
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            Kind::Alpha => 0,
            Kind::Epsilon => 1,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            Kind::Alpha => 'a',
            Kind::Epsilon => 'e',
        };
        write!(f, "{c}[{},{},{}]", self.b, self.k, self.a)
    }
}

impl FromStr for Symbol {
    type Err = Error;

    /// `a[b,k,a]` or `e[b,k,a]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(format!("bad symbol {s:?}, expected a[b,k,a] or e[b,k,a]"));
        let kind = match s.chars().next() {
            Some('a') => Kind::Alpha,
            Some('e') => Kind::Epsilon,
            _ => return Err(bad()),
        };
        let inner = s[1..]
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let nums: Vec<u64> = inner
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match nums[..] {
            [b, k, a] => Symbol::new(kind, b, k, a),
            _ => Err(bad()),
        }
    }
}

/// The product of two generators: a multiple of one generator, or zero.
pub fn mul_basis(x: &Symbol, y: &Symbol) -> Option<(BigInt, Symbol)> {
    if x.a != y.b {
        return None;
    }
    let (l, k, b) = (x.k, y.k, y.b);
    let g = gcd(k, l);
    let (coeff, kind) = match (x.kind, y.kind) {
        (Kind::Epsilon, Kind::Epsilon) => return None,
        (Kind::Alpha, Kind::Alpha) => (b / lcm(k, l), Kind::Alpha),
        (Kind::Epsilon, Kind::Alpha) => (b / k, Kind::Epsilon),
        (Kind::Alpha, Kind::Epsilon) => (b / l, Kind::Epsilon),
    };
    Some((
        BigInt::from(coeff),
        Symbol {
            kind,
            b: x.b,
            k: g,
            a: y.a,
        },
    ))
}

/// A sum of generators with endpoints in `N_bound`, kept by degree.
#[derive(Clone, Debug)]
pub struct DgaElement<R: ExactRing = Integers> {
    ring: R,
    bound: u64,
    parts: [BTreeMap<Symbol, R::Elem>; 2],
}

impl<R: ExactRing> PartialEq for DgaElement<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.tag() == other.ring.tag()
            && self.bound == other.bound
            && self.parts == other.parts
    }
}

impl<R: ExactRing> DgaElement<R> {
    pub fn zero(ring: R, bound: u64) -> Self {
        DgaElement {
            ring,
            bound,
            parts: [BTreeMap::new(), BTreeMap::new()],
        }
    }

    /// `Σ_a α_{a,a,a}`.
    pub fn unit(ring: R, bound: u64) -> Self {
        let one = ring.one();
        let mut x = Self::zero(ring, bound);
        for a in divisors(bound) {
            x.parts[0].insert(
                Symbol {
                    kind: Kind::Alpha,
                    b: a,
                    k: a,
                    a,
                },
                one.clone(),
            );
        }
        x
    }

    pub fn basis(ring: R, bound: u64, s: Symbol) -> Result<Self> {
        let one = ring.one();
        Self::from_terms(ring, bound, [(s, one)])
    }

    pub fn from_terms(
        ring: R,
        bound: u64,
        terms: impl IntoIterator<Item = (Symbol, R::Elem)>,
    ) -> Result<Self> {
        let mut x = Self::zero(ring, bound);
        for (s, c) in terms {
            if !divides(s.a, bound) || !divides(s.b, bound) {
                return Err(Error::OutOfBound {
                    level: s.a.max(s.b),
                    bound,
                });
            }
            x.add_term(s, c);
        }
        Ok(x)
    }

    fn add_term(&mut self, s: Symbol, c: R::Elem) {
        let part = &mut self.parts[s.degree()];
        let sum = match part.get(&s) {
            Some(old) => self.ring.add(old, &c),
            None => c,
        };
        if self.ring.is_zero(&sum) {
            part.remove(&s);
        } else {
            part.insert(s, sum);
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Terms of degree 0 or 1.
    pub fn part(&self, degree: usize) -> Option<&BTreeMap<Symbol, R::Elem>> {
        self.parts.get(degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &R::Elem)> {
        self.parts[0].iter().chain(&self.parts[1])
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(BTreeMap::is_empty)
    }

    /// The homogeneous parts of degrees 0 and 1.
    pub fn degree_parts(&self) -> (Self, Self) {
        let mut lo = Self::zero(self.ring.clone(), self.bound);
        let mut hi = lo.clone();
        lo.parts[0] = self.parts[0].clone();
        hi.parts[1] = self.parts[1].clone();
        (lo, hi)
    }

    /// `Some(d)` for a nonzero homogeneous element of degree `d`.
    pub fn degree(&self) -> Option<usize> {
        match (self.parts[0].is_empty(), self.parts[1].is_empty()) {
            (false, true) => Some(0),
            (true, false) => Some(1),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.tag() != other.ring.tag() {
            return Err(Error::RingMismatch(self.ring.tag(), other.ring.tag()));
        }
        if self.bound != other.bound {
            return Err(Error::LevelMismatch(format!(
                "bounds {} and {}",
                self.bound, other.bound
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut x = self.clone();
        for (s, c) in other.terms() {
            x.add_term(*s, c.clone());
        }
        Ok(x)
    }

    pub fn neg(&self) -> Self {
        let mut x = self.clone();
        for part in &mut x.parts {
            for c in part.values_mut() {
                *c = self.ring.neg(c);
            }
        }
        x
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut x = Self::zero(self.ring.clone(), self.bound);
        for (s, v) in self.terms() {
            x.add_term(*s, self.ring.mul(c, v));
        }
        x
    }
}

impl<R: ExactRing> fmt::Display for DgaElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(s, c)| format!("{}*{s}", self.ring.format_elem(c)))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Bilinear extension of `mul_basis`.
pub fn dga_mul<R: ExactRing>(x: &DgaElement<R>, y: &DgaElement<R>) -> Result<DgaElement<R>> {
    x.check(y)?;
    let r = &x.ring;
    let mut out = DgaElement::zero(r.clone(), x.bound);
    for (s, c) in x.terms() {
        for (t, d) in y.terms() {
            if let Some((n, u)) = mul_basis(s, t) {
                out.add_term(u, r.scale_int(&r.mul(c, d), &n));
            }
        }
    }
    Ok(out)
}

/// Every generator with endpoints in `N_bound`.
pub fn dga_basis(bound: u64) -> Vec<Symbol> {
    let ds = divisors(bound);
    let mut out = Vec::new();
    for kind in [Kind::Alpha, Kind::Epsilon] {
        for &b in &ds {
            for &a in &ds {
                for k in divisors(gcd(a, b)) {
                    out.push(Symbol { kind, b, k, a });
                }
            }
        }
    }
    out
}

/// Rows `(x, y, coefficient, product)` for the nonzero products of generators.
pub fn dga_table(bound: u64) -> Vec<(Symbol, Symbol, BigInt, Symbol)> {
    let basis = dga_basis(bound);
    let mut rows = Vec::new();
    for x in &basis {
        for y in &basis {
            if let Some((c, z)) = mul_basis(x, y) {
                rows.push((*x, *y, c, z));
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(bound: u64, s: &str) -> DgaElement {
        DgaElement::basis(Integers, bound, s.parse().unwrap()).unwrap()
    }

    #[test]
    fn relations() {
        let e1: Symbol = "e[4,2,2]".parse().unwrap();
        let e2: Symbol = "e[2,2,4]".parse().unwrap();
        assert_eq!(mul_basis(&e1, &e2), None);
        assert_eq!(
            mul_basis(&"a[4,1,2]".parse().unwrap(), &"a[3,1,1]".parse().unwrap()),
            None
        );
        let (c, s) = mul_basis(&"a[4,2,2]".parse().unwrap(), &"a[2,2,4]".parse().unwrap()).unwrap();
        assert_eq!(
            (c, s.to_string()),
            (BigInt::from(1), "a[4,2,4]".to_string())
        );
        let (c, s) =
            mul_basis(&"a[12,2,6]".parse().unwrap(), &"a[6,3,12]".parse().unwrap()).unwrap();
        assert_eq!(
            (c, s.to_string()),
            (BigInt::from(1), "a[12,1,12]".to_string())
        );
        let (c, s) = mul_basis(&"e[6,1,6]".parse().unwrap(), &"a[6,2,6]".parse().unwrap()).unwrap();
        assert_eq!(
            (c, s.to_string()),
            (BigInt::from(3), "e[6,1,6]".to_string())
        );
    }

    #[test]
    fn parsing() {
        assert!("a[4,3,2]".parse::<Symbol>().is_err());
        assert!("x[1,1,1]".parse::<Symbol>().is_err());
        assert_eq!(
            "e[6, 3, 3]".parse::<Symbol>().unwrap().to_string(),
            "e[6,3,3]"
        );
    }

    #[test]
    fn unit_and_degrees() {
        let e = DgaElement::unit(Integers, 6);
        let x = el(6, "a[6,2,2]").add(&el(6, "e[3,3,6]")).unwrap();
        assert_eq!(dga_mul(&e, &x).unwrap(), x);
        assert_eq!(dga_mul(&x, &e).unwrap(), x);
        assert_eq!(el(6, "a[6,2,2]").degree(), Some(0));
        assert_eq!(el(6, "e[6,2,2]").degree(), Some(1));
        assert_eq!(x.degree(), None);
        let (lo, hi) = x.degree_parts();
        assert_eq!((lo.degree(), hi.degree()), (Some(0), Some(1)));
        assert!(dga_mul(&x, &DgaElement::zero(Integers, 6))
            .unwrap()
            .is_zero());
        assert!(DgaElement::basis(Integers, 6, "a[12,1,1]".parse().unwrap()).is_err());
    }
}
