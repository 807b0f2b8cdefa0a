//! Exact commutative rings: the integers, residues, rationals, and sparse polynomials over them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Why an exact division by an integer failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivError {
    /// No quotient exists.
    NotDivisible,
    /// More than one quotient exists (the ring has torsion).
    Ambiguous,
}

/// A commutative ring with canonical element representatives, so `==` is ring equality.
pub trait ExactRing: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    /// The ring tag, e.g. `Z`, `Zmod:8`, `PolyQ:x,y`.
    fn tag(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// The unique `x` with `d·x = a`.
    fn exact_div_int(&self, a: &Self::Elem, d: &BigInt) -> Result<Self::Elem, DivError>;
    fn is_torsion_free(&self) -> bool;

    /// A canonical integer representative, for rings that are quotients of `Z`.
    fn integer_lift(&self, _a: &Self::Elem) -> Option<BigInt> {
        None
    }

    fn is_integer_quotient(&self) -> bool {
        false
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn scale_int(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem {
        self.mul(&self.from_int(n), a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn format_elem(&self, a: &Self::Elem) -> String;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl ExactRing for Integers {
    type Elem = BigInt;

    fn tag(&self) -> String {
        "Z".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn exact_div_int(&self, a: &BigInt, d: &BigInt) -> Result<BigInt, DivError> {
        if d.is_zero() {
            return Err(DivError::NotDivisible);
        }
        let (q, r) = a.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(DivError::NotDivisible)
        }
    }
    fn is_torsion_free(&self) -> bool {
        true
    }
    fn integer_lift(&self, a: &BigInt) -> Option<BigInt> {
        Some(a.clone())
    }
    fn is_integer_quotient(&self) -> bool {
        true
    }
    fn pow(&self, a: &BigInt, e: u64) -> BigInt {
        num_traits::pow(a.clone(), e as usize)
    }
    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// `Z/n` with representatives in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegersMod {
    modulus: BigInt,
}

impl IntegersMod {
    pub fn new(n: impl Into<BigInt>) -> Result<Self> {
        let modulus = n.into();
        if modulus < BigInt::from(2) {
            return Err(Error::UnsupportedRing(format!("Zmod:{modulus}")));
        }
        Ok(IntegersMod { modulus })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn reduce(&self, a: BigInt) -> BigInt {
        a.mod_floor(&self.modulus)
    }
}

impl ExactRing for IntegersMod {
    type Elem = BigInt;

    fn tag(&self) -> String {
        format!("Zmod:{}", self.modulus)
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(a + b)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(-a)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(a * b)
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        self.reduce(n.clone())
    }
    fn exact_div_int(&self, a: &BigInt, d: &BigInt) -> Result<BigInt, DivError> {
        let d = self.reduce(d.clone());
        let g = d.gcd(&self.modulus);
        if !a.is_multiple_of(&g) {
            return Err(DivError::NotDivisible);
        }
        if !g.is_one() {
            return Err(DivError::Ambiguous);
        }
        let e = d.extended_gcd(&self.modulus);
        Ok(self.reduce(a * e.x))
    }
    fn is_torsion_free(&self) -> bool {
        false
    }
    fn integer_lift(&self, a: &BigInt) -> Option<BigInt> {
        Some(a.clone())
    }
    fn is_integer_quotient(&self) -> bool {
        true
    }
    fn pow(&self, a: &BigInt, e: u64) -> BigInt {
        a.modpow(&BigInt::from(e), &self.modulus)
    }
    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl ExactRing for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn exact_div_int(&self, a: &BigRational, d: &BigInt) -> Result<BigRational, DivError> {
        if d.is_zero() {
            Err(DivError::NotDivisible)
        } else {
            Ok(a / d)
        }
    }
    fn is_torsion_free(&self) -> bool {
        true
    }
    fn format_elem(&self, a: &BigRational) -> String {
        crate::rational::format_rational(a)
    }
}

/// A sparse polynomial: exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    terms: BTreeMap<Vec<u32>, E>,
}

impl<E> Poly<E> {
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, E> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Polynomials over `base` in the named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomials<R> {
    base: R,
    vars: Vec<String>,
}

impl<R: ExactRing> Polynomials<R> {
    pub fn new(base: R, vars: Vec<String>) -> Self {
        Polynomials { base, vars }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, i: usize) -> Poly<R::Elem> {
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        self.monomial(e, self.base.one())
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.monomial(vec![0; self.vars.len()], c)
    }

    pub fn monomial(&self, exps: Vec<u32>, c: R::Elem) -> Poly<R::Elem> {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !self.base.is_zero(&c) {
            terms.insert(exps, c);
        }
        Poly { terms }
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (Vec<u32>, R::Elem)>,
    ) -> Poly<R::Elem> {
        let mut p = Poly {
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            let m = self.monomial(e, c);
            p = self.add(&p, &m);
        }
        p
    }

    /// Coefficientwise map into another ring; failures propagate.
    pub fn map_coeffs<S: ExactRing>(
        &self,
        p: &Poly<R::Elem>,
        target: &Polynomials<S>,
        f: impl Fn(&R::Elem) -> Result<S::Elem>,
    ) -> Result<Poly<S::Elem>> {
        let mut terms = BTreeMap::new();
        for (e, c) in &p.terms {
            let v = f(c)?;
            if !target.base.is_zero(&v) {
                terms.insert(e.clone(), v);
            }
        }
        Ok(Poly { terms })
    }

    /// Evaluate at `values` in a ring receiving the coefficients through `coeff`.
    pub fn evaluate<S: ExactRing>(
        &self,
        p: &Poly<R::Elem>,
        ring: &S,
        values: &[S::Elem],
        coeff: impl Fn(&R::Elem) -> S::Elem,
    ) -> S::Elem {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        // cache powers per variable
        let mut powers: Vec<Vec<S::Elem>> =
            values.iter().map(|v| vec![ring.one(), v.clone()]).collect();
        let mut acc = ring.zero();
        for (exps, c) in &p.terms {
            let mut t = coeff(c);
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = ring.mul(powers[i].last().expect("nonempty"), &values[i]);
                    powers[i].push(next);
                }
                t = ring.mul(&t, &powers[i][e]);
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    /// Total degree with variable `i` weighted by `weights[i]`.
    pub fn weighted_degree(&self, p: &Poly<R::Elem>, weights: &[u64]) -> Option<u64> {
        p.terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(&a, &w)| a as u64 * w).sum())
            .max()
    }

    pub fn format_poly(&self, p: &Poly<R::Elem>) -> String {
        if p.terms.is_empty() {
            return "0".into();
        }
        // ascending total degree, then descending exponent order
        let mut terms: Vec<(&Vec<u32>, &R::Elem)> = p.terms.iter().rev().collect();
        terms.sort_by_key(|(e, _)| e.iter().sum::<u32>());
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        self.vars[j].clone()
                    } else {
                        format!("{}^{k}", self.vars[j])
                    }
                })
                .collect();
            let cs = self.base.format_elem(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = match (mono.is_empty(), mag == "1") {
                (true, _) => mag,
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            out.push_str(&body);
        }
        out
    }
}

impl<R: ExactRing> ExactRing for Polynomials<R> {
    type Elem = Poly<R::Elem>;

    fn tag(&self) -> String {
        let base = match self.base.tag().as_str() {
            "Z" => "PolyZ".to_string(),
            "Q" => "PolyQ".to_string(),
            other => format!("Poly[{other}]"),
        };
        format!("{base}:{}", self.vars.join(","))
    }
    fn zero(&self) -> Self::Elem {
        Poly {
            terms: BTreeMap::new(),
        }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = a.terms.clone();
        for (e, c) in &b.terms {
            match terms.get_mut(e) {
                Some(x) => {
                    let s = self.base.add(x, c);
                    if self.base.is_zero(&s) {
                        terms.remove(e);
                    } else {
                        *x = s;
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Poly { terms }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.base.neg(c)))
                .collect(),
        }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms: BTreeMap<Vec<u32>, R::Elem> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = self.base.mul(ca, cb);
                match terms.get_mut(&e) {
                    Some(x) => *x = self.base.add(x, &c),
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !self.base.is_zero(c));
        Poly { terms }
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }
    fn exact_div_int(&self, a: &Self::Elem, d: &BigInt) -> Result<Self::Elem, DivError> {
        let mut terms = BTreeMap::new();
        for (e, c) in &a.terms {
            terms.insert(e.clone(), self.base.exact_div_int(c, d)?);
        }
        Ok(Poly { terms })
    }
    fn is_torsion_free(&self) -> bool {
        self.base.is_torsion_free()
    }
    fn scale_int(&self, a: &Self::Elem, n: &BigInt) -> Self::Elem {
        let mut terms = BTreeMap::new();
        for (e, c) in &a.terms {
            let v = self.base.scale_int(c, n);
            if !self.base.is_zero(&v) {
                terms.insert(e.clone(), v);
            }
        }
        Poly { terms }
    }
    fn format_elem(&self, a: &Self::Elem) -> String {
        self.format_poly(a)
    }
}

/// A parsed ring tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingTag {
    Z,
    Zmod(BigInt),
    Q,
    PolyZ(Vec<String>),
    PolyQ(Vec<String>),
}

impl FromStr for RingTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let vars = |v: &str| -> Result<Vec<String>> {
            let out: Vec<String> = v.split(',').map(|x| x.trim().to_string()).collect();
            if out
                .iter()
                .any(|x| x.is_empty() || !x.chars().all(|c| c.is_alphanumeric() || c == '_'))
            {
                return Err(Error::parse(format!("bad variable list {v:?}")));
            }
            Ok(out)
        };
        match s.split_once(':') {
            None if s == "Z" => Ok(RingTag::Z),
            None if s == "Q" => Ok(RingTag::Q),
            Some(("Zmod", n)) => {
                let n: BigInt = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad modulus in {s:?}")))?;
                if n < BigInt::from(2) {
                    return Err(Error::parse(format!("modulus must be at least 2 in {s:?}")));
                }
                Ok(RingTag::Zmod(n))
            }
            Some(("PolyZ", v)) => Ok(RingTag::PolyZ(vars(v)?)),
            Some(("PolyQ", v)) => Ok(RingTag::PolyQ(vars(v)?)),
            _ => Err(Error::parse(format!("unknown ring tag {s:?}"))),
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Z => f.write_str("Z"),
            RingTag::Zmod(n) => write!(f, "Zmod:{n}"),
            RingTag::Q => f.write_str("Q"),
            RingTag::PolyZ(v) => write!(f, "PolyZ:{}", v.join(",")),
            RingTag::PolyQ(v) => write!(f, "PolyQ:{}", v.join(",")),
        }
    }
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad integer {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn residues() {
        let r = IntegersMod::new(8).unwrap();
        assert_eq!(r.add(&z(5), &z(6)), z(3));
        assert_eq!(r.neg(&z(3)), z(5));
        assert_eq!(r.exact_div_int(&z(3), &z(3)), Ok(z(1)));
        assert_eq!(r.exact_div_int(&z(1), &z(3)), Ok(z(3)));
        assert_eq!(r.exact_div_int(&z(1), &z(2)), Err(DivError::NotDivisible));
        assert_eq!(r.exact_div_int(&z(2), &z(2)), Err(DivError::Ambiguous));
        assert_eq!(r.pow(&z(3), 2), z(1));
        assert!(IntegersMod::new(1).is_err());
    }

    #[test]
    fn integers_and_rationals() {
        assert_eq!(Integers.exact_div_int(&z(6), &z(3)), Ok(z(2)));
        assert_eq!(
            Integers.exact_div_int(&z(1), &z(2)),
            Err(DivError::NotDivisible)
        );
        let q = Rationals.exact_div_int(&Rationals.one(), &z(2)).unwrap();
        assert_eq!(Rationals.scale_int(&q, &z(2)), Rationals.one());
    }

    #[test]
    fn polynomials() {
        let r = Polynomials::new(Integers, vec!["x".into(), "y".into()]);
        let (x, y) = (r.var(0), r.var(1));
        let s = r.add(&x, &y);
        let sq = r.mul(&s, &s);
        assert_eq!(sq.len(), 3);
        assert_eq!(r.format_elem(&sq), "x^2 + 2*x*y + y^2");
        let d = r.sub(&sq, &r.mul(&s, &s));
        assert!(r.is_zero(&d));
        assert_eq!(
            r.exact_div_int(&r.scale_int(&sq, &z(2)), &z(2)),
            Ok(sq.clone())
        );
        assert_eq!(r.exact_div_int(&sq, &z(2)), Err(DivError::NotDivisible));
        let v = r.evaluate(&sq, &Integers, &[z(2), z(3)], |c| c.clone());
        assert_eq!(v, z(25));
        assert_eq!(r.format_elem(&r.neg(&x)), "-x");
        assert_eq!(r.tag(), "PolyZ:x,y");
    }

    #[test]
    fn tags() {
        for s in ["Z", "Q", "Zmod:8", "PolyZ:x,y", "PolyQ:t"] {
            assert_eq!(s.parse::<RingTag>().unwrap().to_string(), s);
        }
        for s in ["Zmod:1", "Zmod:x", "R", "PolyZ:", "PolyZ:x y"] {
            assert!(s.parse::<RingTag>().is_err(), "{s}");
        }
    }
}
