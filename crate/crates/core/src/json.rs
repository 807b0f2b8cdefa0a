//! JSON encodings. Objects are emitted with sorted keys; integers that do not fit in `i64` are
//! written as decimal strings, rationals as `"p/q"`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::abgrp::{FGAbelianGroup, GroupMorphism, IntegerMatrix};
use crate::arith::divisors;
use crate::burnside::{BurnsideElement, HMorphism};
use crate::cyclonic::{make_orbit_map, Orbit, OrbitMap, Pullback, Simplex3, EDGES, FACES};
use crate::cyclotomic::{CheckReport, RuleAudit, TwistedAudit};
use crate::dga::{DgaElement, Symbol};
use crate::error::{Error, Result};
use crate::mackey::{MackeyData, MackeyReport};
use crate::rational::{format_rational, parse_rational};
use crate::supernat::Supernatural;
use crate::witt::{
    ExactRing, GhostVector, Integers, IntegersMod, Polynomials, Rationals, UniversalPolys,
    WittVector,
};

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => Value::String(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(n.to_string().parse().expect("integral number"))
        }
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad integer {s:?}"))),
        other => Err(Error::parse(format!("expected an integer, found {other}"))),
    }
}

pub fn u64_from_json(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::parse(format!("{what}: expected a positive integer, found {v}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::parse(format!("missing field {key:?}")))
}

/// Ring elements with a JSON form.
pub trait JsonElem: ExactRing {
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
}

impl JsonElem for Integers {
    fn elem_to_json(&self, a: &BigInt) -> Value {
        int_to_json(a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        int_from_json(v)
    }
}

impl JsonElem for IntegersMod {
    fn elem_to_json(&self, a: &BigInt) -> Value {
        int_to_json(a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        Ok(self.from_int(&int_from_json(v)?))
    }
}

impl JsonElem for Rationals {
    fn elem_to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            int_to_json(&a.to_integer())
        } else {
            Value::String(format_rational(a))
        }
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::String(s) => parse_rational(s),
            other => Ok(BigRational::from_integer(int_from_json(other)?)),
        }
    }
}

/// Sparse maps from monomials such as `"x^2*y"` (or `"1"`) to coefficients.
impl<R: JsonElem> JsonElem for Polynomials<R> {
    fn elem_to_json(&self, a: &Self::Elem) -> Value {
        let mut out = Map::new();
        for (e, c) in a.terms() {
            out.insert(self.format_monomial(e), self.base().elem_to_json(c));
        }
        Value::Object(out)
    }
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem> {
        let obj = match v {
            Value::Object(o) => o,
            other => return Ok(self.constant(self.base().elem_from_json(other)?)),
        };
        let mut terms = Vec::new();
        for (mono, c) in obj {
            terms.push((self.parse_monomial(mono)?, self.base().elem_from_json(c)?));
        }
        Ok(self.from_terms(terms))
    }
}

impl<R: ExactRing> Polynomials<R> {
    pub fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = self
            .vars()
            .iter()
            .zip(e)
            .filter(|(_, &x)| x > 0)
            .map(|(v, &x)| {
                if x == 1 {
                    v.clone()
                } else {
                    format!("{v}^{x}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Vec<u32>> {
        let mut e = vec![0u32; self.nvars()];
        let s = s.trim();
        if s == "1" {
            return Ok(e);
        }
        for factor in s.split('*') {
            let (name, exp) = match factor.trim().split_once('^') {
                Some((n, x)) => (
                    n.trim(),
                    x.trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad exponent in {s:?}")))?,
                ),
                None => (factor.trim(), 1u32),
            };
            let i = self
                .vars()
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::parse(format!("unknown variable {name:?}")))?;
            e[i] += exp;
        }
        Ok(e)
    }
}

fn indexed<E>(index: &[u64], values: &[E], f: impl Fn(&E) -> Value) -> Value {
    let mut out = Map::new();
    for (k, v) in index.iter().zip(values) {
        out.insert(k.to_string(), f(v));
    }
    Value::Object(out)
}

/// Reads a dense array in ascending divisor order, or a sparse map keyed by divisor.
fn read_indexed<E: Clone>(
    level: u64,
    v: &Value,
    zero: E,
    f: impl Fn(&Value) -> Result<E>,
) -> Result<Vec<E>> {
    let index = divisors(level);
    match v {
        Value::Array(items) => {
            if items.len() != index.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} entries for the {} divisors of {level}",
                    items.len(),
                    index.len()
                )));
            }
            items.iter().map(f).collect()
        }
        Value::Object(map) => {
            let mut out = vec![zero; index.len()];
            for (k, x) in map {
                let d: u64 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad index {k:?}")))?;
                let i = index
                    .binary_search(&d)
                    .map_err(|_| Error::not_divisor(d, level))?;
                out[i] = f(x)?;
            }
            Ok(out)
        }
        other => Err(Error::parse(format!(
            "expected an array or object, found {other}"
        ))),
    }
}

pub fn witt_to_json<R: JsonElem>(w: &WittVector<R>) -> Value {
    json!({
        "level": w.level(),
        "ring": w.ring().tag(),
        "components": indexed(w.index(), w.components(), |c| w.ring().elem_to_json(c)),
    })
}

/// Accepts `{"level": m, "components": ...}`; the ring comes from the caller.
pub fn witt_from_json<R: JsonElem>(ring: &R, v: &Value) -> Result<WittVector<R>> {
    let level = u64_from_json(field(v, "level")?, "level")?;
    let comps = read_indexed(level, field(v, "components")?, ring.zero(), |x| {
        ring.elem_from_json(x)
    })?;
    WittVector::new(ring.clone(), level, comps)
}

/// A Witt vector given either as an object or as a bare component array at `level`.
pub fn witt_from_json_at<R: JsonElem>(ring: &R, level: u64, v: &Value) -> Result<WittVector<R>> {
    match v {
        Value::Array(_) => WittVector::new(
            ring.clone(),
            level,
            read_indexed(level, v, ring.zero(), |x| ring.elem_from_json(x))?,
        ),
        _ => {
            let w = witt_from_json(ring, v)?;
            if w.level() != level {
                return Err(Error::LevelMismatch(format!(
                    "vector at level {} given for level {level}",
                    w.level()
                )));
            }
            Ok(w)
        }
    }
}

pub fn ghost_to_json<R: JsonElem>(z: &GhostVector<R>) -> Value {
    json!({
        "level": z.level(),
        "ring": z.ring().tag(),
        "ghost": indexed(z.index(), z.values(), |c| z.ring().elem_to_json(c)),
    })
}

pub fn polys_to_json(p: &UniversalPolys) -> Value {
    let ring = p.ring();
    let index = divisors(p.level());
    let mut comps = Map::new();
    for (k, poly) in index.iter().zip(p.polys()) {
        comps.insert(
            k.to_string(),
            json!({ "text": ring.format_poly(poly), "terms": ring.elem_to_json(poly) }),
        );
    }
    json!({ "level": p.level(), "op": p.op().to_string(), "components": comps })
}

fn sparse(terms: impl Iterator<Item = (u64, BigInt)>) -> Value {
    let mut out = Map::new();
    for (k, c) in terms {
        out.insert(k.to_string(), int_to_json(&c));
    }
    Value::Object(out)
}

pub fn burnside_to_json(x: &BurnsideElement) -> Value {
    json!({ "level": x.level(), "coeffs": sparse(x.terms().map(|(k, c)| (k, c.clone()))) })
}

pub fn burnside_from_json(v: &Value) -> Result<BurnsideElement> {
    let level = u64_from_json(field(v, "level")?, "level")?;
    let coeffs = read_indexed(level, field(v, "coeffs")?, BigInt::default(), int_from_json)?;
    BurnsideElement::from_vec(level, coeffs)
}

/// Parses `"[2]"`, `"3[1] - [6]"` or `"2*[3] + [1]"` at the given level.
pub fn burnside_from_str(level: u64, s: &str) -> Result<BurnsideElement> {
    let mut pairs = Vec::new();
    let cleaned = s.replace(' ', "").replace('-', "+-");
    for term in cleaned.split('+').filter(|t| !t.is_empty()) {
        let (coeff, orbit) = term
            .split_once('[')
            .ok_or_else(|| Error::parse(format!("bad Burnside term {term:?}")))?;
        let orbit = orbit
            .strip_suffix(']')
            .ok_or_else(|| Error::parse(format!("bad Burnside term {term:?}")))?;
        let coeff = coeff.trim_end_matches('*');
        let c: BigInt = match coeff {
            "" => 1.into(),
            "-" => (-1).into(),
            _ => coeff
                .parse()
                .map_err(|_| Error::parse(format!("bad coefficient in {term:?}")))?,
        };
        let k: u64 = orbit
            .parse()
            .map_err(|_| Error::parse(format!("bad orbit in {term:?}")))?;
        pairs.push((k, c));
    }
    BurnsideElement::from_pairs(level, pairs)
}

pub fn hmorphism_to_json(h: &HMorphism) -> Value {
    json!({
        "src": h.source(),
        "tgt": h.target(),
        "coeffs": sparse(h.terms().map(|(k, c)| (k, c.clone()))),
    })
}

pub fn hmorphism_from_json(v: &Value) -> Result<HMorphism> {
    let src = u64_from_json(field(v, "src")?, "src")?;
    let tgt = u64_from_json(field(v, "tgt")?, "tgt")?;
    let mut pairs = Vec::new();
    match field(v, "coeffs")? {
        Value::Object(map) => {
            for (k, c) in map {
                let k: u64 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad index {k:?}")))?;
                pairs.push((k, int_from_json(c)?));
            }
        }
        other => {
            return Err(Error::parse(format!(
                "coeffs: expected an object, found {other}"
            )))
        }
    }
    HMorphism::from_pairs(src, tgt, pairs)
}

pub fn matrix_to_json(m: &IntegerMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(cols: usize, v: &Value) -> Result<IntegerMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse("matrix: expected an array of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::parse("matrix row: expected an array"))?
                .iter()
                .map(int_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IntegerMatrix::from_rows(cols, rows)
}

pub fn group_to_json(g: &FGAbelianGroup) -> Value {
    json!({
        "generators": g.generators(),
        "relations": matrix_to_json(g.relations()),
        "torsion": g.torsion().iter().map(int_to_json).collect::<Vec<_>>(),
        "rank": g.free_rank(),
        "description": g.to_string(),
    })
}

/// Presented form `{"generators", "relations"}` or canonical form `{"rank", "torsion"}`.
pub fn group_from_json(v: &Value) -> Result<FGAbelianGroup> {
    if v.get("generators").is_none() {
        let rank = u64_from_json(field(v, "rank")?, "rank")? as usize;
        let torsion = match v.get("torsion") {
            Some(Value::Array(t)) => t.iter().map(int_from_json).collect::<Result<Vec<_>>>()?,
            Some(other) => {
                return Err(Error::parse(format!(
                    "torsion: expected an array, found {other}"
                )))
            }
            None => Vec::new(),
        };
        let n = rank + torsion.len();
        let rows = torsion
            .iter()
            .enumerate()
            .map(|(i, d)| {
                (0..n)
                    .map(|j| {
                        if j == rank + i {
                            d.clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        return FGAbelianGroup::presented(n, IntegerMatrix::from_rows(n, rows)?);
    }
    let n = u64_from_json(field(v, "generators")?, "generators")? as usize;
    let rel = match v.get("relations") {
        Some(r) => matrix_from_json(n, r)?,
        None => IntegerMatrix::zeros(0, n),
    };
    FGAbelianGroup::presented(n, rel)
}

pub fn morphism_to_json(f: &GroupMorphism) -> Value {
    json!({
        "source": f.source().to_string(),
        "target": f.target().to_string(),
        "matrix": matrix_to_json(f.matrix()),
    })
}

fn pair_key(m: u64, n: u64) -> String {
    format!("{m}|{n}")
}

fn parse_pair(s: &str) -> Result<(u64, u64)> {
    let (a, b) = s
        .split_once('|')
        .ok_or_else(|| Error::parse(format!("bad pair {s:?}, expected m|n")))?;
    let p = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(format!("bad pair {s:?}")))
    };
    Ok((p(a)?, p(b)?))
}

/// `{"bound", "groups": {"m": group}, "push": {"m|n": matrix}, "pull": {"m|n": matrix}}`.
pub fn mackey_to_json(d: &MackeyData) -> Value {
    let groups: Map<String, Value> = d
        .groups()
        .iter()
        .map(|(m, g)| (m.to_string(), group_to_json(g)))
        .collect();
    let maps = |src: &BTreeMap<(u64, u64), GroupMorphism>| -> Map<String, Value> {
        src.iter()
            .map(|(&(m, n), f)| (pair_key(m, n), matrix_to_json(f.matrix())))
            .collect()
    };
    json!({
        "bound": d.bound(),
        "groups": groups,
        "push": maps(d.covering_push()),
        "pull": maps(d.covering_pull()),
    })
}

pub fn mackey_from_json(v: &Value) -> Result<MackeyData> {
    let bound = u64_from_json(field(v, "bound")?, "bound")?;
    let mut groups = BTreeMap::new();
    for (k, g) in field(v, "groups")?
        .as_object()
        .ok_or_else(|| Error::parse("groups: expected an object"))?
    {
        let m: u64 = k
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad level {k:?}")))?;
        groups.insert(m, group_from_json(g)?);
    }
    let read = |key: &str, forward: bool| -> Result<BTreeMap<(u64, u64), GroupMorphism>> {
        let mut out = BTreeMap::new();
        let obj = field(v, key)?
            .as_object()
            .ok_or_else(|| Error::parse(format!("{key}: expected an object")))?;
        for (k, mat) in obj {
            let (m, n) = parse_pair(k)?;
            let (src, tgt) = if forward { (m, n) } else { (n, m) };
            let gs = groups
                .get(&src)
                .ok_or(Error::OutOfBound { level: src, bound })?;
            let gt = groups
                .get(&tgt)
                .ok_or(Error::OutOfBound { level: tgt, bound })?;
            out.insert(
                (m, n),
                GroupMorphism::new(
                    gs.clone(),
                    gt.clone(),
                    matrix_from_json(gs.generators(), mat)?,
                )?,
            );
        }
        Ok(out)
    };
    let push = read("push", true)?;
    let pull = read("pull", false)?;
    MackeyData::new(bound, groups, push, pull)
}

pub fn mackey_report_to_json(r: &MackeyReport) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "identity": v.identity,
                "levels": [v.levels.0, v.levels.1, v.levels.2],
                "difference": matrix_to_json(&v.difference),
            })
        })
        .collect();
    json!({ "valid": r.is_valid(), "violations": violations })
}

pub fn check_report_to_json(r: &CheckReport) -> Value {
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| json!({ "level": e.level, "prime": e.prime, "check": e.check, "pass": e.pass, "witness": e.witness }))
        .collect();
    json!({ "pass": r.passed(), "entries": entries })
}

fn rule_audit_to_json(a: &RuleAudit) -> Value {
    json!({
        "triples": a.triples,
        "invalid": a.invalid,
        "non_associative": a.non_associative,
        "holds": a.holds(),
        "witness": a.witness,
    })
}

pub fn twisted_audit_to_json(a: &TwistedAudit) -> Value {
    json!({
        "r/n + s": rule_audit_to_json(&a.whiskered),
        "r/m + s": rule_audit_to_json(&a.literal),
        "adopted": a.adopted.map(|r| match r {
            crate::cyclotomic::CellRule::Whiskered => "r/n + s",
            crate::cyclotomic::CellRule::Literal => "r/m + s",
        }),
    })
}

pub fn orbit_map_to_json(f: &OrbitMap) -> Value {
    json!({
        "src": f.source().level(),
        "tgt": f.target().level(),
        "offset": format_rational(f.offset()),
        "ambient": f.source().ambient().to_string(),
    })
}

/// Endpoint of an orbit map: a level, or an orbit string `<m>@N` which also fixes the ambient.
fn orbit_end(v: &Value, keys: [&str; 2], ambient: &mut Option<Supernatural>) -> Result<u64> {
    let x = v
        .get(keys[0])
        .or_else(|| v.get(keys[1]))
        .ok_or_else(|| Error::parse(format!("missing field {:?}", keys[0])))?;
    match x {
        Value::String(s) if s.contains('@') => {
            let o: Orbit = s.parse()?;
            *ambient = Some(o.ambient().clone());
            Ok(o.level())
        }
        _ => u64_from_json(x, keys[0]),
    }
}

/// Accepts the output of `orbit_map_to_json`; `ambient` falls back to the caller's.
pub fn orbit_map_from_json(v: &Value, ambient: &Supernatural) -> Result<OrbitMap> {
    let mut from_orbit = None;
    let source = orbit_end(v, ["src", "source"], &mut from_orbit)?;
    let target = orbit_end(v, ["tgt", "target"], &mut from_orbit)?;
    let ambient = &from_orbit.unwrap_or_else(|| ambient.clone());
    let offset = match v.get("offset") {
        None => BigRational::from_integer(0.into()),
        Some(Value::String(s)) => parse_rational(s)?,
        Some(x) => BigRational::from_integer(int_from_json(x)?),
    };
    let ambient = match v.get("ambient") {
        Some(Value::String(s)) => s.parse()?,
        Some(other) => {
            return Err(Error::parse(format!(
                "ambient: expected a string, found {other}"
            )))
        }
        None => ambient.clone(),
    };
    make_orbit_map(source, target, &offset, &ambient)
}

/// `{"ambient", "levels": [4 levels], "maps": {"01": offset, ...}, "fillers": {"012": value, ...}}`.
pub fn simplex3_to_json(s: &Simplex3) -> Value {
    let maps: Map<String, Value> = EDGES
        .iter()
        .zip(&s.phi)
        .map(|(&(i, j), f)| (format!("{i}{j}"), json!(format_rational(f.offset()))))
        .collect();
    let fillers: Map<String, Value> = FACES
        .iter()
        .zip(&s.alpha)
        .map(|(&(i, j, k), a)| (format!("{i}{j}{k}"), json!(format_rational(a))))
        .collect();
    json!({
        "ambient": s.objects[0].ambient().to_string(),
        "levels": s.objects.iter().map(|o| o.level()).collect::<Vec<_>>(),
        "maps": maps,
        "fillers": fillers,
    })
}

pub fn simplex3_from_json(v: &Value, ambient: &Supernatural) -> Result<Simplex3> {
    let ambient: Supernatural = match v.get("ambient") {
        Some(Value::String(s)) => s.parse()?,
        _ => ambient.clone(),
    };
    let levels = field(v, "levels")?
        .as_array()
        .ok_or_else(|| Error::parse("levels: expected an array"))?;
    if levels.len() != 4 {
        return Err(Error::parse(format!(
            "levels: expected 4 entries, found {}",
            levels.len()
        )));
    }
    let levels = levels
        .iter()
        .map(|x| u64_from_json(x, "level"))
        .collect::<Result<Vec<_>>>()?;
    let objects = levels
        .iter()
        .map(|&m| Orbit::new(m, ambient.clone()))
        .collect::<Result<Vec<_>>>()?;
    let rational = |x: &Value, what: &str| -> Result<BigRational> {
        match x {
            Value::String(s) => parse_rational(s),
            Value::Number(_) => Ok(BigRational::from_integer(int_from_json(x)?)),
            other => Err(Error::parse(format!(
                "{what}: expected a rational, found {other}"
            ))),
        }
    };
    let maps = field(v, "maps")?;
    let phi = EDGES
        .iter()
        .map(|&(i, j)| {
            let key = format!("{i}{j}");
            let r = rational(field(maps, &key)?, &key)?;
            OrbitMap::new(objects[i].clone(), objects[j].clone(), &r)
        })
        .collect::<Result<Vec<_>>>()?;
    let fillers = field(v, "fillers")?;
    let alpha = FACES
        .iter()
        .map(|&(i, j, k)| {
            let key = format!("{i}{j}{k}");
            rational(field(fillers, &key)?, &key)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Simplex3 {
        objects: objects.try_into().expect("four objects"),
        phi: phi.try_into().expect("six edges"),
        alpha: alpha.try_into().expect("four faces"),
    })
}

pub fn pullback_to_json(p: &Pullback) -> Value {
    let comps: Vec<Value> = p
        .components
        .iter()
        .map(|c| {
            json!({
                "apex": c.apex.level(),
                "left": orbit_map_to_json(&c.left),
                "right": orbit_map_to_json(&c.right),
            })
        })
        .collect();
    json!({ "orbits": comps.len(), "components": comps })
}

pub fn dga_to_json<R: JsonElem>(x: &DgaElement<R>) -> Value {
    let mut out = Map::new();
    for (s, c) in x.terms() {
        out.insert(s.to_string(), x.ring().elem_to_json(c));
    }
    Value::Object(out)
}

pub fn dga_from_json<R: JsonElem>(ring: &R, bound: u64, v: &Value) -> Result<DgaElement<R>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse("expected a map from symbols to coefficients"))?;
    let terms = obj
        .iter()
        .map(|(s, c)| Ok((s.parse::<Symbol>()?, ring.elem_from_json(c)?)))
        .collect::<Result<Vec<_>>>()?;
    DgaElement::from_terms(ring.clone(), bound, terms)
}
