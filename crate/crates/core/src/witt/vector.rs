use std::fmt;

use num_bigint::BigInt;

use super::ring::{DivError, ExactRing, Integers};
use super::universal::{universal_polys, WittOp};
use crate::arith::{divides, divisors};
use crate::error::{Error, Result};

/// A big Witt vector over `ring` for the truncation set `N_level`.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVector<R: ExactRing> {
    ring: R,
    level: u64,
    index: Vec<u64>,
    comps: Vec<R::Elem>,
}

/// Ghost components `z_k`, indexed like the Witt components.
#[derive(Clone, Debug, PartialEq)]
pub struct GhostVector<R: ExactRing> {
    ring: R,
    level: u64,
    index: Vec<u64>,
    values: Vec<R::Elem>,
}

fn check_len(level: u64, len: usize) -> Result<Vec<u64>> {
    if level == 0 {
        return Err(Error::parse("level must be positive"));
    }
    let index = divisors(level);
    if index.len() != len {
        return Err(Error::ShapeMismatch(format!(
            "{len} entries for the {} divisors of {level}",
            index.len()
        )));
    }
    Ok(index)
}

impl<R: ExactRing> WittVector<R> {
    /// Components listed in ascending divisor order.
    pub fn new(ring: R, level: u64, comps: Vec<R::Elem>) -> Result<Self> {
        let index = check_len(level, comps.len())?;
        Ok(WittVector {
            ring,
            level,
            index,
            comps,
        })
    }

    pub fn from_fn(ring: R, level: u64, f: impl Fn(u64) -> R::Elem) -> Self {
        let index = divisors(level);
        let comps = index.iter().map(|&d| f(d)).collect();
        WittVector {
            ring,
            level,
            index,
            comps,
        }
    }

    pub fn zero(ring: R, level: u64) -> Self {
        let z = ring.zero();
        Self::from_fn(ring, level, |_| z.clone())
    }

    /// `(1, 0, ..., 0)`.
    pub fn one(ring: R, level: u64) -> Self {
        let (o, z) = (ring.one(), ring.zero());
        Self::from_fn(ring, level, |d| if d == 1 { o.clone() } else { z.clone() })
    }

    /// The vector with a single nonzero component `c` at index `d`.
    pub fn single(ring: R, level: u64, d: u64, c: R::Elem) -> Result<Self> {
        if !divides(d, level) {
            return Err(Error::not_divisor(d, level));
        }
        let z = ring.zero();
        Ok(Self::from_fn(ring, level, |k| {
            if k == d {
                c.clone()
            } else {
                z.clone()
            }
        }))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn components(&self) -> &[R::Elem] {
        &self.comps
    }

    pub fn component(&self, d: u64) -> Option<&R::Elem> {
        self.index.binary_search(&d).ok().map(|i| &self.comps[i])
    }

    pub fn into_components(self) -> Vec<R::Elem> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| self.ring.is_zero(c))
    }

    /// Componentwise image under a ring map.
    pub fn map<S: ExactRing>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> WittVector<S> {
        WittVector {
            ring,
            level: self.level,
            index: self.index.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }
}

impl<R: ExactRing> fmt::Display for WittVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|c| self.ring.format_elem(c))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<R: ExactRing> GhostVector<R> {
    pub fn new(ring: R, level: u64, values: Vec<R::Elem>) -> Result<Self> {
        let index = check_len(level, values.len())?;
        Ok(GhostVector {
            ring,
            level,
            index,
            values,
        })
    }

    pub fn from_fn(ring: R, level: u64, f: impl Fn(u64) -> R::Elem) -> Self {
        let index = divisors(level);
        let values = index.iter().map(|&d| f(d)).collect();
        GhostVector {
            ring,
            level,
            index,
            values,
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn values(&self) -> &[R::Elem] {
        &self.values
    }

    pub fn value(&self, k: u64) -> Option<&R::Elem> {
        self.index.binary_search(&k).ok().map(|i| &self.values[i])
    }

    fn zip(&self, other: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(format!(
                "levels {} and {}",
                self.level, other.level
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(GhostVector {
            values,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| self.ring.add(a, b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| self.ring.mul(a, b))
    }

    pub fn neg(&self) -> Self {
        GhostVector {
            values: self.values.iter().map(|a| self.ring.neg(a)).collect(),
            ..self.clone()
        }
    }
}

/// `z_k = Σ_{l | k} l·w_l^{k/l}`.
pub fn ghost<R: ExactRing>(w: &WittVector<R>) -> GhostVector<R> {
    let r = &w.ring;
    let values = w
        .index
        .iter()
        .map(|&k| {
            let mut z = r.zero();
            for (i, &l) in w.index.iter().enumerate() {
                if l > k {
                    break;
                }
                if k % l == 0 && !r.is_zero(&w.comps[i]) {
                    let t = r.scale_int(&r.pow(&w.comps[i], k / l), &BigInt::from(l));
                    z = r.add(&z, &t);
                }
            }
            z
        })
        .collect();
    GhostVector {
        ring: w.ring.clone(),
        level: w.level,
        index: w.index.clone(),
        values,
    }
}

/// The unique `w` with `ghost(w) = z`, by `w_k = (z_k − Σ_{l|k, l<k} l·w_l^{k/l}) / k`.
pub fn ghost_solve<R: ExactRing>(z: &GhostVector<R>) -> Result<WittVector<R>> {
    let r = &z.ring;
    let mut comps: Vec<R::Elem> = Vec::with_capacity(z.index.len());
    for (j, &k) in z.index.iter().enumerate() {
        let mut rest = z.values[j].clone();
        for (i, &l) in z.index[..j].iter().enumerate() {
            if k % l == 0 && !r.is_zero(&comps[i]) {
                let t = r.scale_int(&r.pow(&comps[i], k / l), &BigInt::from(l));
                rest = r.sub(&rest, &t);
            }
        }
        let d = BigInt::from(k);
        let wk = if k == 1 {
            rest
        } else {
            r.exact_div_int(&rest, &d).map_err(|e| match e {
                DivError::NotDivisible => Error::NonIntegral {
                    index: k,
                    divisor: d.clone(),
                },
                DivError::Ambiguous => Error::TorsionRing {
                    index: k,
                    divisor: d.clone(),
                },
            })?
        };
        comps.push(wk);
    }
    Ok(WittVector {
        ring: z.ring.clone(),
        level: z.level,
        index: z.index.clone(),
        comps,
    })
}

/// How arithmetic is carried out over a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Through ghost components (torsion-free rings).
    Ghost,
    /// Lift components to `Z`, compute there, reduce.
    Lift,
    /// Evaluate the universal integral polynomials.
    Universal,
}

pub fn route<R: ExactRing>(ring: &R) -> Route {
    if ring.is_torsion_free() {
        Route::Ghost
    } else if ring.is_integer_quotient() {
        Route::Lift
    } else {
        Route::Universal
    }
}

fn check_same<R: ExactRing>(x: &WittVector<R>, y: &WittVector<R>) -> Result<()> {
    if x.ring.tag() != y.ring.tag() {
        return Err(Error::RingMismatch(x.ring.tag(), y.ring.tag()));
    }
    if x.level != y.level {
        return Err(Error::LevelMismatch(format!(
            "levels {} and {}",
            x.level, y.level
        )));
    }
    Ok(())
}

fn lift<R: ExactRing>(w: &WittVector<R>) -> WittVector<Integers> {
    w.map(Integers, |c| {
        w.ring.integer_lift(c).expect("integer quotient ring")
    })
}

fn reduce<R: ExactRing>(ring: &R, w: &WittVector<Integers>) -> WittVector<R> {
    w.map(ring.clone(), |c| ring.from_int(c))
}

/// Evaluates a universal operation on the concatenated components of the inputs.
pub fn apply_universal<R: ExactRing>(
    op: WittOp,
    level: u64,
    ring: &R,
    inputs: &[&WittVector<R>],
) -> Result<WittVector<R>> {
    let polys = universal_polys(level, op)?;
    let values: Vec<R::Elem> = inputs
        .iter()
        .flat_map(|w| w.comps.iter().cloned())
        .collect();
    let comps = polys
        .polys()
        .iter()
        .map(|p| {
            polys
                .ring()
                .evaluate(p, ring, &values, |c| ring.from_int(c))
        })
        .collect();
    WittVector::new(ring.clone(), level, comps)
}

fn binary<R: ExactRing>(
    x: &WittVector<R>,
    y: &WittVector<R>,
    op: WittOp,
    ghostwise: fn(&GhostVector<R>, &GhostVector<R>) -> Result<GhostVector<R>>,
    integral: fn(&WittVector<Integers>, &WittVector<Integers>) -> Result<WittVector<Integers>>,
) -> Result<WittVector<R>> {
    check_same(x, y)?;
    match route(&x.ring) {
        Route::Ghost => ghost_solve(&ghostwise(&ghost(x), &ghost(y))?),
        Route::Lift => Ok(reduce(&x.ring, &integral(&lift(x), &lift(y))?)),
        Route::Universal => apply_universal(op, x.level, &x.ring, &[x, y]),
    }
}

pub fn witt_add<R: ExactRing>(x: &WittVector<R>, y: &WittVector<R>) -> Result<WittVector<R>> {
    binary(x, y, WittOp::Sum, |a, b| a.add(b), witt_add)
}

pub fn witt_mul<R: ExactRing>(x: &WittVector<R>, y: &WittVector<R>) -> Result<WittVector<R>> {
    binary(x, y, WittOp::Product, |a, b| a.mul(b), witt_mul)
}

pub fn witt_neg<R: ExactRing>(x: &WittVector<R>) -> Result<WittVector<R>> {
    match route(&x.ring) {
        Route::Ghost => ghost_solve(&ghost(x).neg()),
        Route::Lift => Ok(reduce(&x.ring, &witt_neg(&lift(x))?)),
        Route::Universal => apply_universal(WittOp::Negation, x.level, &x.ring, &[x]),
    }
}

pub fn witt_sub<R: ExactRing>(x: &WittVector<R>, y: &WittVector<R>) -> Result<WittVector<R>> {
    witt_add(x, &witt_neg(y)?)
}

/// `n·x` by repeated doubling.
pub fn witt_scale<R: ExactRing>(x: &WittVector<R>, n: i64) -> Result<WittVector<R>> {
    let mut base = if n < 0 { witt_neg(x)? } else { x.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = WittVector::zero(x.ring.clone(), x.level);
    while e > 0 {
        if e & 1 == 1 {
            acc = witt_add(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = witt_add(&base, &base)?;
        }
    }
    Ok(acc)
}

/// `F_{m|n}: W_n → W_m`, with ghost components `z'_k = z_{kn/m}`.
pub fn frobenius<R: ExactRing>(w: &WittVector<R>, m: u64) -> Result<WittVector<R>> {
    let n = w.level;
    if !divides(m, n) {
        return Err(Error::not_divisor(m, n));
    }
    if m == n {
        return Ok(w.clone());
    }
    match route(&w.ring) {
        Route::Ghost => {
            let z = ghost(w);
            let zf = GhostVector::from_fn(w.ring.clone(), m, |k| {
                z.value(k * n / m).expect("kn/m | n").clone()
            });
            ghost_solve(&zf)
        }
        Route::Lift => Ok(reduce(&w.ring, &frobenius(&lift(w), m)?)),
        Route::Universal => apply_universal(WittOp::Frobenius { source: n }, m, &w.ring, &[w]),
    }
}

/// `V_{m|n}: W_m → W_n`, `(Vw)_l = w_{lm/n}` when `(n/m) | l`, else `0`.
pub fn verschiebung<R: ExactRing>(w: &WittVector<R>, n: u64) -> Result<WittVector<R>> {
    let m = w.level;
    if !divides(m, n) {
        return Err(Error::not_divisor(m, n));
    }
    let s = n / m;
    let zero = w.ring.zero();
    Ok(WittVector::from_fn(w.ring.clone(), n, |l| {
        if l % s == 0 {
            w.component(l / s).expect("l/s divides m").clone()
        } else {
            zero.clone()
        }
    }))
}

/// Truncation `W_n → W_m` to the components indexed by `N_m`.
pub fn restriction<R: ExactRing>(w: &WittVector<R>, m: u64) -> Result<WittVector<R>> {
    if !divides(m, w.level) {
        return Err(Error::not_divisor(m, w.level));
    }
    Ok(WittVector::from_fn(w.ring.clone(), m, |k| {
        w.component(k).expect("k | m | n").clone()
    }))
}
