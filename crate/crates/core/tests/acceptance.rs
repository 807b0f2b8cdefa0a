//! The acceptance suite: one line per criterion, exact comparisons, wall-clock limits where given.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use cyclonic::abgrp::{GroupMorphism, IntegerMatrix};
use cyclonic::arith::{divides, divisors, gcd};
use cyclonic::burnside::{
    burnside_mul, compose_h, compose_spans, span_class, BurnsideElement, HMorphism, Span,
};
use cyclonic::cyclonic::check_simplex3;
use cyclonic::cyclotomic::{
    derived_restrictions, recollement_check, twisted_audit, verify_cyclotomic, witt_cyclotomic,
    CellRule,
};
use cyclonic::dga::{dga_basis, dga_mul, mul_basis, DgaElement, Kind, Symbol};
use cyclonic::mackey::{
    burnside_mackey, double_coset_sides, validate_mackey, BurnsideRule, MackeyData, MackeyRule,
};
use cyclonic::rational::rat;
use cyclonic::supernat::Supernatural;
use cyclonic::witt::{
    dress_siebeneicher, ds_morphism, ds_uniqueness_search, frobenius, ghost, restriction_matrix,
    universal_polys, verschiebung, witt_add, witt_mackey, witt_mul, witt_scale, ExactRing,
    Integers, IntegersMod, RingTag, WittOp, WittRule, WittVector,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ghost_homomorphism() -> Outcome {
    let mut rng = rng(1);
    let mut pairs = 0;
    for m in divisors(24) {
        for _ in 0..200 {
            let (x, y) = (random_witt(&mut rng, m, 20), random_witt(&mut rng, m, 20));
            let (gx, gy) = (
                ghost_oracle(m, x.components()),
                ghost_oracle(m, y.components()),
            );
            let s = witt_add(&x, &y).map_err(err)?;
            let p = witt_mul(&x, &y).map_err(err)?;
            let sum: Vec<BigInt> = gx.iter().zip(&gy).map(|(a, b)| a + b).collect();
            let prod: Vec<BigInt> = gx.iter().zip(&gy).map(|(a, b)| a * b).collect();
            ensure!(
                ghost_oracle(m, s.components()) == sum,
                "ghost of {x} + {y} at level {m}"
            );
            ensure!(
                ghost_oracle(m, p.components()) == prod,
                "ghost of {x} * {y} at level {m}"
            );
            ensure!(
                ghost(&x).values() == &gx[..],
                "ghost map disagrees with its definition at {x}"
            );
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs over the levels dividing 24"))
}

fn universal_integrality() -> Outcome {
    let mut rng = rng(2);
    let mut polys = 0;
    for m in 1..=12u64 {
        for op in [WittOp::Sum, WittOp::Product, WittOp::Negation] {
            let u = universal_polys(m, op).map_err(|e| format!("{op} at level {m}: {e}"))?;
            polys += u.polys().len();
            for _ in 0..4 {
                let x = random_components(&mut rng, m, 6);
                let y = random_components(&mut rng, m, 6);
                let (gx, gy) = (ghost_oracle(m, &x), ghost_oracle(m, &y));
                let z: Vec<BigInt> = match op {
                    WittOp::Sum => gx.iter().zip(&gy).map(|(a, b)| a + b).collect(),
                    WittOp::Product => gx.iter().zip(&gy).map(|(a, b)| a * b).collect(),
                    _ => gx.iter().map(|a| -a).collect(),
                };
                let expected = integral(&unghost_oracle(m, &z))
                    .ok_or(format!("oracle not integral at {m}"))?;
                let mut values = x.clone();
                if op != WittOp::Negation {
                    values.extend(y.iter().cloned());
                }
                let got: Vec<BigInt> = u
                    .polys()
                    .iter()
                    .map(|p| u.ring().evaluate(p, &Integers, &values, |c| c.clone()))
                    .collect();
                ensure!(
                    got == expected,
                    "{op} polynomials at level {m} evaluate wrongly at {values:?}"
                );
            }
        }
    }
    let s = universal_polys(2, WittOp::Sum).map_err(err)?;
    let r = s.ring();
    let s2 = r.from_terms([
        (vec![0, 1, 0, 0], big(1)),
        (vec![0, 0, 0, 1], big(1)),
        (vec![1, 0, 1, 0], big(-1)),
    ]);
    ensure!(
        s.component(2) == Some(&s2),
        "s2 = {}",
        s.format_component(2).unwrap_or_default()
    );
    Ok(format!(
        "{polys} integral polynomials; s2 = {}",
        s.format_component(2).unwrap()
    ))
}

/// The component formula `(Vw)_l = w_l` for `l | m`, zero otherwise.
fn literal_verschiebung(w: &WittVector<Integers>, n: u64) -> WittVector<Integers> {
    WittVector::from_fn(Integers, n, |l| w.component(l).cloned().unwrap_or_default())
}

fn fv_laws<R: ExactRing + PartialEq>(
    ring: &R,
    sample: impl Fn(&mut StdRng, u64) -> WittVector<R>,
) -> Result<usize, String> {
    let mut rng = rng(3);
    let mut pairs = 0;
    for n in 1..=24u64 {
        for m in divisors(n) {
            for _ in 0..2 {
                let (x, y) = (sample(&mut rng, n), sample(&mut rng, n));
                let f = |w: &WittVector<R>| frobenius(w, m).map_err(err);
                let tag = format!("{m}|{n} over {}", ring.tag());
                ensure!(
                    f(&witt_add(&x, &y).map_err(err)?)?
                        == witt_add(&f(&x)?, &f(&y)?).map_err(err)?,
                    "F additive {tag}"
                );
                ensure!(
                    f(&witt_mul(&x, &y).map_err(err)?)?
                        == witt_mul(&f(&x)?, &f(&y)?).map_err(err)?,
                    "F multiplicative {tag}"
                );
                ensure!(
                    f(&WittVector::one(ring.clone(), n))? == WittVector::one(ring.clone(), m),
                    "F unital {tag}"
                );
                let (a, b) = (sample(&mut rng, m), sample(&mut rng, m));
                let v = |w: &WittVector<R>| verschiebung(w, n).map_err(err);
                ensure!(
                    v(&witt_add(&a, &b).map_err(err)?)?
                        == witt_add(&v(&a)?, &v(&b)?).map_err(err)?,
                    "V additive {tag}"
                );
                let fv = frobenius(&v(&a)?, m).map_err(err)?;
                ensure!(
                    fv == witt_scale(&a, (n / m) as i64).map_err(err)?,
                    "FV = n/m fails {tag} at {a}"
                );
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn frobenius_verschiebung() -> Outcome {
    let pairs = fv_laws(&Integers, |rng, level| random_witt(rng, level, 9))?;
    let z8 = IntegersMod::new(8).map_err(err)?;
    let r = z8.clone();
    fv_laws(&z8, move |rng, level| {
        let c = divisors(level)
            .iter()
            .map(|_| big(rng.gen_range(0..8)))
            .collect();
        WittVector::new(r.clone(), level, c).unwrap()
    })?;
    let one = WittVector::one(Integers, 1);
    let lhs = literal_verschiebung(&witt_add(&one, &one).map_err(err)?, 2);
    let rhs = witt_add(
        &literal_verschiebung(&one, 2),
        &literal_verschiebung(&one, 2),
    )
    .map_err(err)?;
    ensure!(
        lhs != rhs,
        "the component formula for V passed additivity at 1|2"
    );
    Ok(format!(
        "{pairs} pairs over Z and Z/8; component-formula V fails at 1|2: {lhs} vs {rhs}"
    ))
}

fn double_coset_all(d: &MackeyData) -> Result<usize, String> {
    let mut count = 0;
    for m in d.levels() {
        for k in divisors(m) {
            for l in divisors(m) {
                let (lhs, rhs) = double_coset_sides(d, k, l, m).map_err(err)?;
                ensure!(
                    lhs.matrix() == rhs.matrix(),
                    "({k}, {l}, {m}) in {}: {} vs {}",
                    d.name(),
                    lhs.matrix(),
                    rhs.matrix()
                );
                count += 1;
            }
        }
    }
    Ok(count)
}

fn double_coset() -> Outcome {
    let b = double_coset_all(&burnside_mackey(60))?;
    let w = double_coset_all(&witt_mackey(&RingTag::Z, 24).map_err(err)?)?;
    Ok(format!(
        "{b} triples for the Burnside functor on 60, {w} for Witt vectors on 24"
    ))
}

fn span_oracle() -> Outcome {
    let ambient = Supernatural::from(24u64);
    let ds = divisors(24);
    let mut count = 0;
    for &m in &ds {
        for &n in &ds {
            for &p in &ds {
                for k in divisors(gcd(m, n)) {
                    for l in divisors(gcd(n, p)) {
                        let first = HMorphism::basis(m, n, k).map_err(err)?;
                        let second = HMorphism::basis(n, p, l).map_err(err)?;
                        let h = compose_h(&first, &second).map_err(err)?;
                        let counts = coset_pullback(24, k, l, n);
                        let oracle = HMorphism::from_pairs(
                            m,
                            p,
                            counts.into_iter().map(|(s, c)| (s, big(c as i64))),
                        )
                        .map_err(err)?;
                        ensure!(
                            h.coeffs() == oracle.coeffs(),
                            "[{l}] after [{k}] through {n}: {h} vs {oracle}"
                        );
                        let s = compose_spans(
                            &Span::basic(m, n, k, &ambient).map_err(err)?,
                            &Span::basic(n, p, l, &ambient).map_err(err)?,
                        )
                        .map_err(err)?;
                        ensure!(
                            span_class(&s).coeffs() == oracle.coeffs(),
                            "span pullback [{l}] after [{k}] through {n}"
                        );
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{count} composable pairs of basic spans at ambient 24"
    ))
}

fn burnside_image(f: &GroupMorphism, x: &BurnsideElement, level: u64) -> BurnsideElement {
    BurnsideElement::from_vec(level, f.apply(x.coeffs())).unwrap()
}

fn dress_siebeneicher_check() -> Outcome {
    for m in 1..=24u64 {
        ensure!(
            ds_morphism(m).is_isomorphism().is_isomorphism(),
            "not an isomorphism at {m}"
        );
        ensure!(
            dress_siebeneicher(&BurnsideElement::one(m)) == WittVector::one(Integers, m),
            "not unital at {m}"
        );
        for k in divisors(m) {
            for l in divisors(m) {
                let (x, y) = (
                    BurnsideElement::basis(m, k).unwrap(),
                    BurnsideElement::basis(m, l).unwrap(),
                );
                let lhs = dress_siebeneicher(&burnside_mul(&x, &y).map_err(err)?);
                let rhs =
                    witt_mul(&dress_siebeneicher(&x), &dress_siebeneicher(&y)).map_err(err)?;
                ensure!(lhs == rhs, "[{k}]·[{l}] at level {m}");
            }
        }
        for n in (1..=24u64).filter(|&n| divides(m, n)) {
            let push = BurnsideRule.push(m, n).map_err(err)?;
            let pull = BurnsideRule.pull(m, n).map_err(err)?;
            for k in divisors(m) {
                let x = BurnsideElement::basis(m, k).unwrap();
                let lhs = dress_siebeneicher(&burnside_image(&push, &x, n));
                ensure!(
                    lhs == verschiebung(&dress_siebeneicher(&x), n).map_err(err)?,
                    "V at {m}|{n} on [{k}]"
                );
            }
            for k in divisors(n) {
                let x = BurnsideElement::basis(n, k).unwrap();
                let lhs = dress_siebeneicher(&burnside_image(&pull, &x, m));
                ensure!(
                    lhs == frobenius(&dress_siebeneicher(&x), m).map_err(err)?,
                    "F at {m}|{n} on [{k}]"
                );
            }
        }
    }
    let mut families = 0;
    for m in 1..=6u64 {
        let s = ds_uniqueness_search(m).map_err(err)?;
        ensure!(
            s.survivors.len() == 1 && s.survivors[0].is_standard(),
            "{} survivors at {m}",
            s.survivors.len()
        );
        families += s.families;
    }
    Ok(format!(
        "isomorphism at every level up to 24; unique among {families} candidate families up to 6"
    ))
}

fn cyclotomic_witt() -> Outcome {
    let mut checks = 0;
    for tag in ["Z", "Zmod:4", "Zmod:2", "Zmod:3"] {
        let ring: RingTag = tag.parse().map_err(err)?;
        let c = witt_cyclotomic(&ring, &[2, 3]).map_err(err)?;
        let report = verify_cyclotomic(&c, 36);
        if let Some(f) = report.failures().next() {
            return Err(format!(
                "{tag}: {} at level {} for p = {}: {:?}",
                f.check, f.level, f.prime, f.witness
            ));
        }
        checks += report.entries.len();
        let rule = WittRule::from_tag(&ring).map_err(err)?;
        for n in divisors(36) {
            for m in divisors(n) {
                let rho =
                    derived_restrictions(&c, m, n).map_err(|e| format!("{tag} {m}|{n}: {e}"))?;
                let trunc = GroupMorphism::new(
                    rule.group(n).map_err(err)?,
                    rule.group(m).map_err(err)?,
                    restriction_matrix(m, n).map_err(err)?,
                )
                .map_err(err)?;
                ensure!(
                    rho.equals(&trunc),
                    "{tag}: derived restriction {m}|{n} is not truncation"
                );
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} checks over Z, Z/4, F_2, F_3 at levels dividing 36"
    ))
}

fn recollement() -> Outcome {
    let mut data = vec![
        witt_mackey(&RingTag::Z, 24).map_err(err)?,
        burnside_mackey(24),
    ];
    let mut rng = rng(8);
    let seeds = [
        burnside_mackey(12),
        burnside_mackey(18),
        witt_mackey(&RingTag::Z, 12).map_err(err)?,
        witt_mackey(&"Zmod:2".parse().unwrap(), 12).map_err(err)?,
        witt_mackey(&"Zmod:3".parse().unwrap(), 6).map_err(err)?,
        witt_mackey(&"Zmod:4".parse().unwrap(), 6).map_err(err)?,
    ];
    for i in 0..20 {
        let d = twist(&seeds[i % seeds.len()], &mut rng);
        ensure!(
            validate_mackey(&d).is_valid(),
            "random datum {i} is not a Mackey functor"
        );
        data.push(d);
    }
    let mut checks = 0;
    for (i, d) in data.iter().enumerate() {
        for p in [2, 3] {
            let report = recollement_check(d, p).map_err(err)?;
            if let Some(f) = report.failures().next() {
                return Err(format!(
                    "datum {i} at p = {p}: {} at level {}: {:?}",
                    f.check, f.level, f.witness
                ));
            }
            checks += report.entries.len();
        }
    }
    let bad = burnside_mackey(12)
        .with_push(1, 2, IntegerMatrix::zeros(2, 1))
        .map_err(err)?;
    let report = recollement_check(&bad, 2).map_err(err)?;
    let f = report.failures().next().ok_or("corrupted datum passed")?;
    Ok(format!(
        "{checks} checks on 22 data; corrupted push 1|2 fails {} at level {} ({})",
        f.check,
        f.level,
        f.witness.clone().unwrap_or_default()
    ))
}

fn dga() -> Outcome {
    let basis = dga_basis(12);
    let times = |x: Option<(BigInt, Symbol)>, z: &Symbol, left: bool| {
        x.and_then(|(c, s)| {
            let r = if left {
                mul_basis(&s, z)
            } else {
                mul_basis(z, &s)
            };
            r.map(|(d, t)| (c * d, t))
        })
    };
    let mut triples = 0usize;
    for x in &basis {
        for y in &basis {
            let xy = mul_basis(x, y);
            for z in &basis {
                let l = times(xy.clone(), z, true);
                let r = times(mul_basis(y, z), x, false);
                let norm = |v: Option<(BigInt, Symbol)>| v.filter(|(c, _)| !c.is_zero());
                ensure!(norm(l) == norm(r), "({x}·{y})·{z} != {x}·({y}·{z})");
                triples += 1;
            }
        }
    }
    for x in basis.iter().filter(|s| s.kind == Kind::Epsilon) {
        for y in basis.iter().filter(|s| s.kind == Kind::Epsilon) {
            ensure!(mul_basis(x, y).is_none(), "{x}·{y} is nonzero");
        }
    }
    let mut pairs = 0;
    for bound in divisors(24) {
        let basis = dga_basis(bound);
        for x in basis.iter().filter(|s| s.kind == Kind::Alpha) {
            for y in basis.iter().filter(|s| s.kind == Kind::Alpha && s.b == x.a) {
                let (c, z) = mul_basis(x, y).ok_or(format!("{x}·{y} vanished"))?;
                let first = HMorphism::basis(y.a, y.b, y.k).map_err(err)?;
                let second = HMorphism::basis(x.a, x.b, x.k).map_err(err)?;
                let h = compose_h(&first, &second).map_err(err)?;
                let expected = HMorphism::from_pairs(z.a, z.b, [(z.k, c.clone())]).map_err(err)?;
                ensure!(
                    h.coeffs() == expected.coeffs(),
                    "{x}·{y} = {c}{z} but compose_h gives {h}"
                );
                pairs += 1;
            }
        }
        let unit = DgaElement::unit(Integers, bound);
        let sum = DgaElement::from_terms(
            Integers,
            bound,
            divisors(bound)
                .into_iter()
                .map(|a| (Symbol::alpha(a, a, a).unwrap(), big(1))),
        )
        .map_err(err)?;
        ensure!(unit == sum, "unit at {bound}");
        for s in &basis {
            let x = DgaElement::basis(Integers, bound, *s).map_err(err)?;
            ensure!(
                dga_mul(&unit, &x).map_err(err)? == x && dga_mul(&x, &unit).map_err(err)? == x,
                "unit fails on {s}"
            );
        }
    }
    Ok(format!("{triples} associativity triples at 12; {pairs} degree-0 products checked against compose_h"))
}

fn nerve() -> Outcome {
    let mut rng = rng(10);
    for i in 0..100 {
        let s = random_simplex3(&mut rng, 12);
        let report = check_simplex3(&s);
        ensure!(report.passed(), "simplex {i}: {:?}", report.failures);
        for f in 0..4 {
            let mut bad = s.clone();
            bad.alpha[f] += rat(1, 12);
            ensure!(
                !check_simplex3(&bad).passed(),
                "simplex {i} with filler {f} perturbed passed"
            );
        }
    }
    Ok("100 simplices pass; 400 perturbations fail".into())
}

fn twisted() -> Outcome {
    let audit = twisted_audit(24);
    let (w, l) = (&audit.whiskered, &audit.literal);
    ensure!(
        w.holds() != l.holds(),
        "whiskered holds: {}, literal holds: {}",
        w.holds(),
        l.holds()
    );
    ensure!(
        audit.adopted
            == Some(if w.holds() {
                CellRule::Whiskered
            } else {
                CellRule::Literal
            }),
        "adopted {:?}",
        audit.adopted
    );
    let status = |a: &cyclonic::cyclotomic::RuleAudit| {
        if a.holds() {
            "associative".to_string()
        } else {
            format!(
                "fails ({} invalid, {} non-associative)",
                a.invalid, a.non_associative
            )
        }
    };
    Ok(format!(
        "{} triples; r/n + s {}; r/m + s as stated {}; adopted {:?}",
        w.triples,
        status(w),
        status(l),
        audit.adopted.unwrap()
    ))
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "ghost homomorphism",
            ghost_homomorphism,
            Some(Duration::from_secs(10)),
        ),
        (
            "universal polynomial integrality",
            universal_integrality,
            None,
        ),
        (
            "Frobenius and Verschiebung laws",
            frobenius_verschiebung,
            None,
        ),
        ("Mackey double coset identity", double_coset, None),
        (
            "span composition against coset enumeration",
            span_oracle,
            None,
        ),
        (
            "Dress-Siebeneicher isomorphism",
            dress_siebeneicher_check,
            Some(Duration::from_secs(30)),
        ),
        (
            "cyclotomic Witt vectors",
            cyclotomic_witt,
            Some(Duration::from_secs(60)),
        ),
        ("recollement right exactness", recollement, None),
        ("graded algebra", dga, None),
        ("nerve coherence", nerve, None),
        ("twisted composition audit", twisted, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed >= *l => Err(format!(
                "took {:.2} s, limit {} s",
                elapsed.as_secs_f64(),
                l.as_secs()
            )),
            (o, _) => o,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{tag}] {:>2}. {name}: {detail} ({:.2} s)",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
