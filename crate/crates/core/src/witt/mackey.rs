//! The Witt Mackey functor `<m> ↦ W_<m>(R)` for `R = Z` and `R = Z/N`.
//!
//! The additive group of `W_<m>(Z)` is free on `u_d`, the vector with a single component `1`
//! at index `d`. Coordinates in this basis are read off from ghost components, which turns the
//! nonlinear Witt addition into vector addition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ring::{ExactRing, Integers, IntegersMod, RingTag};
use super::vector::{ghost, ghost_solve, GhostVector, WittVector};
use crate::abgrp::{FGAbelianGroup, GroupMorphism, IntegerMatrix};
use crate::arith::{divides, divisors};
use crate::error::{Error, Result};
use crate::mackey::{MackeyData, MackeyRule};

/// Basis coordinates `c` with `z_k = Σ_{d|k} d·c_d`.
pub fn ghost_to_carrier(z: &GhostVector<Integers>) -> Result<Vec<BigInt>> {
    let index = z.index();
    let mut c: Vec<BigInt> = Vec::with_capacity(index.len());
    for (j, &k) in index.iter().enumerate() {
        let mut rest = z.values()[j].clone();
        for (i, &d) in index[..j].iter().enumerate() {
            if k % d == 0 {
                rest -= &c[i] * BigInt::from(d);
            }
        }
        let (q, r) = rest.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::NonIntegral {
                index: k,
                divisor: BigInt::from(k),
            });
        }
        c.push(q);
    }
    Ok(c)
}

/// Coordinates of `w` in the basis `u_d`. Over `Z/N` the components are lifted to `[0, N)` first,
/// so the result is one representative of the class.
pub fn carrier_coordinates<R: ExactRing>(w: &WittVector<R>) -> Result<Vec<BigInt>> {
    let lifted: Option<Vec<BigInt>> = w
        .components()
        .iter()
        .map(|c| w.ring().integer_lift(c))
        .collect();
    let lifted = lifted.ok_or_else(|| Error::UnsupportedRing(w.ring().tag()))?;
    ghost_to_carrier(&ghost(&WittVector::new(Integers, w.level(), lifted)?))
}

/// The Witt vector `Σ c_d u_d`, reduced into `ring`.
pub fn from_carrier<R: ExactRing>(
    ring: &R,
    level: u64,
    coords: &[BigInt],
) -> Result<WittVector<R>> {
    let index = divisors(level);
    if coords.len() != index.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} coordinates for the {} divisors of {level}",
            coords.len(),
            index.len()
        )));
    }
    let z = GhostVector::from_fn(Integers, level, |k| {
        index
            .iter()
            .zip(coords)
            .filter(|(&d, _)| k % d == 0)
            .map(|(&d, c)| c * BigInt::from(d))
            .sum()
    });
    let w = ghost_solve(&z)?;
    Ok(w.map(ring.clone(), |c| ring.from_int(c)))
}

/// The Witt Mackey functor over `Z` (`modulus = None`) or `Z/N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittRule {
    modulus: Option<BigInt>,
}

impl WittRule {
    pub fn integers() -> Self {
        WittRule { modulus: None }
    }

    pub fn modulo(n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        IntegersMod::new(n.clone())?;
        Ok(WittRule { modulus: Some(n) })
    }

    pub fn from_tag(tag: &RingTag) -> Result<Self> {
        match tag {
            RingTag::Z => Ok(Self::integers()),
            RingTag::Zmod(n) => Self::modulo(n.clone()),
            other => Err(Error::UnsupportedRing(other.to_string())),
        }
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    /// Rows generating the coordinates of `W_<m>(NZ)`: the vectors `V_d[N·a]` for `a ≤ m/d`,
    /// and `N^τ` times each basis vector.
    pub fn relations(&self, level: u64) -> Result<IntegerMatrix> {
        let index = divisors(level);
        let tau = index.len();
        let Some(n) = &self.modulus else {
            return Ok(IntegerMatrix::zeros(0, tau));
        };
        let order = n.pow(tau as u32);
        let mut rows = Vec::new();
        for &d in &index {
            for a in 1..=level / d {
                let x = n * BigInt::from(a);
                let w = WittVector::from_fn(Integers, level, |k| {
                    if k == d {
                        x.clone()
                    } else {
                        BigInt::zero()
                    }
                });
                let c = carrier_coordinates(&w)?;
                rows.push(c.into_iter().map(|e| e.mod_floor(&order)).collect());
            }
        }
        for i in 0..tau {
            let mut r = vec![BigInt::zero(); tau];
            r[i] = order.clone();
            rows.push(r);
        }
        IntegerMatrix::from_rows(tau, rows)
    }
}

fn check(m: u64, n: u64) -> Result<()> {
    if m == 0 || !divides(m, n) {
        return Err(Error::not_divisor(m, n));
    }
    Ok(())
}

/// `V_{m|n}` on coordinates: `u_d ↦ u_{dn/m}`.
pub fn verschiebung_matrix(m: u64, n: u64) -> Result<IntegerMatrix> {
    check(m, n)?;
    let (dm, dn) = (divisors(m), divisors(n));
    let mut a = IntegerMatrix::zeros(dn.len(), dm.len());
    for (j, &d) in dm.iter().enumerate() {
        let i = dn.binary_search(&(d * (n / m))).expect("dn/m divides n");
        a.set(i, j, BigInt::one());
    }
    Ok(a)
}

/// `F_{m|n}` on coordinates.
pub fn frobenius_matrix(m: u64, n: u64) -> Result<IntegerMatrix> {
    check(m, n)?;
    let dn = divisors(n);
    let cols = dn
        .iter()
        .map(|&d| {
            let z = GhostVector::from_fn(Integers, m, |k| {
                if (k * (n / m)).is_multiple_of(d) {
                    BigInt::from(d)
                } else {
                    BigInt::zero()
                }
            });
            ghost_to_carrier(&z)
        })
        .collect::<Result<Vec<_>>>()?;
    IntegerMatrix::from_columns(divisors(m).len(), &cols)
}

/// Truncation `W_<n> → W_<m>` on coordinates: `u_d ↦ u_d` if `d | m`, else `0`.
pub fn restriction_matrix(m: u64, n: u64) -> Result<IntegerMatrix> {
    check(m, n)?;
    let (dm, dn) = (divisors(m), divisors(n));
    let mut a = IntegerMatrix::zeros(dm.len(), dn.len());
    for (j, d) in dn.iter().enumerate() {
        if let Ok(i) = dm.binary_search(d) {
            a.set(i, j, BigInt::one());
        }
    }
    Ok(a)
}

/// Extension by zero `W_<m> → W_<n>` on each basis vector, in coordinates. Not additive on its own;
/// it is a section of truncation and additive modulo the Verschiebung image from `<a>`.
pub fn extension_matrix(m: u64, n: u64) -> Result<IntegerMatrix> {
    check(m, n)?;
    let tau = divisors(m).len();
    let cols = (0..tau)
        .map(|i| {
            let mut e = vec![BigInt::zero(); tau];
            e[i] = BigInt::one();
            let w = from_carrier(&Integers, m, &e)?;
            let x =
                WittVector::from_fn(Integers, n, |k| w.component(k).cloned().unwrap_or_default());
            carrier_coordinates(&x)
        })
        .collect::<Result<Vec<_>>>()?;
    IntegerMatrix::from_columns(divisors(n).len(), &cols)
}

impl MackeyRule for WittRule {
    fn group(&self, level: u64) -> Result<FGAbelianGroup> {
        if level == 0 {
            return Err(Error::parse("level must be positive"));
        }
        let tau = divisors(level).len();
        match self.modulus {
            None => Ok(FGAbelianGroup::free(tau)),
            Some(_) => FGAbelianGroup::presented(tau, self.relations(level)?),
        }
    }

    fn push(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        GroupMorphism::new(self.group(m)?, self.group(n)?, verschiebung_matrix(m, n)?)
    }

    fn pull(&self, m: u64, n: u64) -> Result<GroupMorphism> {
        GroupMorphism::new(self.group(n)?, self.group(m)?, frobenius_matrix(m, n)?)
    }

    fn name(&self) -> String {
        match &self.modulus {
            None => "witt over Z".into(),
            Some(n) => format!("witt over Z/{n}"),
        }
    }
}

/// Push is the Verschiebung, pull the Frobenius.
pub fn witt_mackey(ring: &RingTag, bound: u64) -> Result<MackeyData> {
    MackeyData::from_rule(&WittRule::from_tag(ring)?, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::validate_mackey;
    use crate::witt::vector::{frobenius, verschiebung, witt_add};

    fn zv(level: u64, c: &[i64]) -> WittVector<Integers> {
        WittVector::new(
            Integers,
            level,
            c.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn coordinates_linearize_addition() {
        let x = zv(6, &[3, -1, 2, 5]);
        let y = zv(6, &[-2, 4, 0, 1]);
        let s = witt_add(&x, &y).unwrap();
        let (cx, cy, cs) = (
            carrier_coordinates(&x).unwrap(),
            carrier_coordinates(&y).unwrap(),
            carrier_coordinates(&s).unwrap(),
        );
        let sum: Vec<BigInt> = cx.iter().zip(&cy).map(|(a, b)| a + b).collect();
        assert_eq!(sum, cs);
        assert_eq!(from_carrier(&Integers, 6, &cs).unwrap(), s);
    }

    #[test]
    fn matrices_match_vector_operations() {
        let w = zv(2, &[3, -7]);
        let c = carrier_coordinates(&w).unwrap();
        let fw = frobenius_matrix(1, 2).unwrap().mul_vec(&c);
        assert_eq!(
            from_carrier(&Integers, 1, &fw).unwrap(),
            frobenius(&w, 1).unwrap()
        );
        let vw = verschiebung_matrix(2, 6).unwrap().mul_vec(&c);
        assert_eq!(
            from_carrier(&Integers, 6, &vw).unwrap(),
            verschiebung(&w, 6).unwrap()
        );
    }

    #[test]
    fn integral_functor() {
        let d = witt_mackey(&RingTag::Z, 6).unwrap();
        assert_eq!(d.groups()[&6].free_rank(), 4);
        assert!(validate_mackey(&d).is_valid());
    }

    #[test]
    fn mod_two_functor() {
        let d = witt_mackey(&"Zmod:2".parse().unwrap(), 2).unwrap();
        // W_<2>(F_2) has order 4
        assert_eq!(d.groups()[&2].order(), Some(BigInt::from(4)));
        assert!(validate_mackey(&d).is_valid());
        // F(w1, w2) = w1^2 + 2 w2 ≡ w1^2
        let r = IntegersMod::new(2).unwrap();
        let w = WittVector::new(r.clone(), 2, vec![BigInt::from(1), BigInt::from(1)]).unwrap();
        let c = carrier_coordinates(&w).unwrap();
        let img = d.covering_pull()[&(1, 2)].apply(&c);
        let fw = from_carrier(&r, 1, &img).unwrap();
        assert_eq!(fw.components(), &[BigInt::from(1)]);
    }

    #[test]
    fn unsupported_rings() {
        assert!(matches!(
            witt_mackey(&RingTag::Q, 2),
            Err(Error::UnsupportedRing(_))
        ));
    }
}
