use std::sync::Arc;

use cyclonic::arith::{divides, prime_factors_with_multiplicity};
use cyclonic::burnside::BurnsideElement;
use cyclonic::burnside::{burnside_mul, burnside_table, compose_h};
use cyclonic::cyclonic::{check_simplex3, pullback_cospan};
use cyclonic::cyclotomic::{
    derived_restrictions, geometric_fixed_points, recollement_check, twisted_audit,
    verify_cyclotomic, witt_cyclotomic, CheckReport,
};
use cyclonic::dga::{dga_mul, dga_table};
use cyclonic::json::*;
use cyclonic::mackey::{
    burnside_mackey, eval_h, validate_mackey, BurnsideRule, MackeyData, MackeyRule,
};
use cyclonic::supernat::Supernatural;
use cyclonic::witt::{
    frobenius, ghost, restriction, restriction_matrix, universal_polys, verschiebung, witt_add,
    witt_mackey, witt_mul, Integers, IntegersMod, Polynomials, Rationals, RingTag, WittOp,
    WittRule, WittVector,
};
use serde_json::{json, Value};

use crate::io::*;
use crate::{
    BurnsideVerb, CyclotomicVerb, DgaVerb, Functor, MackeyVerb, Opts, OrbitVerb, OutFormat, PolyOp,
    SupernatVerb, WittVerb,
};

/// Runs `$body` with `$r` bound to the ring named by the tag.
macro_rules! with_ring {
    ($tag:expr, |$r:ident| $body:expr) => {
        match $tag {
            RingTag::Z => {
                let $r = Integers;
                $body
            }
            RingTag::Zmod(n) => {
                let $r = IntegersMod::new(n.clone()).at("--ring")?;
                $body
            }
            RingTag::Q => {
                let $r = Rationals;
                $body
            }
            RingTag::PolyZ(v) => {
                let $r = Polynomials::new(Integers, v.clone());
                $body
            }
            RingTag::PolyQ(v) => {
                let $r = Polynomials::new(Rationals, v.clone());
                $body
            }
        }
    };
}

fn ring_tag(opts: &Opts) -> CliResult<RingTag> {
    opts.ring.parse().at("--ring")
}

fn ambient(opts: &Opts) -> CliResult<Supernatural> {
    opts.ambient.parse().at("--N")
}

fn supernat_operand(v: &Value, location: &str) -> CliResult<Supernatural> {
    match v {
        Value::String(s) => s.parse().at(location),
        Value::Number(n) => n.to_string().parse().at(location),
        other => Err(CliError::input(format!(
            "{location}: expected a supernatural number, found {other}"
        ))),
    }
}

pub fn supernat(verb: SupernatVerb, opts: &Opts) -> CliResult<Output> {
    json_only(opts, "supernat")?;
    match verb {
        SupernatVerb::Gcd | SupernatVerb::Lcm => {
            let ops = operands(opts, 2)?;
            let a = supernat_operand(&ops[0], "payload[0]")?;
            let b = supernat_operand(&ops[1], "payload[1]")?;
            let r = if matches!(verb, SupernatVerb::Gcd) {
                a.meet(&b)
            } else {
                a.join(&b)
            };
            Ok(Output::json(json!({ "result": r.to_string() })))
        }
        SupernatVerb::Nest => {
            let n = match optional_payload(opts)? {
                Some(v) => supernat_operand(&v, "payload")?,
                None => ambient(opts)?,
            };
            let bound = require(opts.bound, "bound")?;
            Ok(Output::json(
                json!({ "N": n.to_string(), "bound": bound, "nest": n.nest(bound) }),
            ))
        }
    }
}

pub fn orbit(verb: OrbitVerb, opts: &Opts) -> CliResult<Output> {
    json_only(opts, "orbit")?;
    let n = ambient(opts)?;
    match verb {
        OrbitVerb::Compose | OrbitVerb::Pullback => {
            let ops = operands(opts, 2)?;
            let f = orbit_map_from_json(&ops[0], &n).at("payload[0]")?;
            let g = orbit_map_from_json(&ops[1], &n).at("payload[1]")?;
            if matches!(verb, OrbitVerb::Compose) {
                Ok(Output::json(orbit_map_to_json(&g.after(&f).at("payload")?)))
            } else {
                Ok(Output::json(pullback_to_json(
                    &pullback_cospan(&f, &g).at("payload")?,
                )))
            }
        }
        OrbitVerb::SimplexCheck => {
            let s = simplex3_from_json(&payload(opts)?, &n).at("payload")?;
            let report = check_simplex3(&s);
            let passed = report.passed();
            Ok(Output::verdict(
                json!({ "pass": passed, "failures": report.failures }),
                passed,
            ))
        }
    }
}

fn burnside_operand(v: &Value, level: Option<u64>, location: &str) -> CliResult<BurnsideElement> {
    match (v, level) {
        (Value::Object(o), _) if o.contains_key("level") => burnside_from_json(v).at(location),
        (Value::String(s), Some(m)) => burnside_from_str(m, s).at(location),
        (Value::Object(_) | Value::Array(_), Some(m)) => {
            burnside_from_json(&json!({ "level": m, "coeffs": v })).at(location)
        }
        _ => Err(CliError::input(format!(
            "{location}: give --level or a {{\"level\", \"coeffs\"}} object"
        ))),
    }
}

pub fn burnside(verb: BurnsideVerb, opts: &Opts) -> CliResult<Output> {
    match verb {
        BurnsideVerb::Compose => {
            json_only(opts, "burnside compose")?;
            let ops = operands(opts, 2)?;
            let first = hmorphism_from_json(&ops[0]).at("payload[0]")?;
            let second = hmorphism_from_json(&ops[1]).at("payload[1]")?;
            Ok(Output::json(hmorphism_to_json(
                &compose_h(&first, &second).at("payload")?,
            )))
        }
        BurnsideVerb::Mul => {
            json_only(opts, "burnside mul")?;
            let ops = operands(opts, 2)?;
            let x = burnside_operand(&ops[0], opts.level, "payload[0]")?;
            let y = burnside_operand(&ops[1], opts.level, "payload[1]")?;
            Ok(Output::json(burnside_to_json(
                &burnside_mul(&x, &y).at("payload")?,
            )))
        }
        BurnsideVerb::Table => {
            let m = require(opts.level, "level")?;
            let rows = burnside_table(m);
            if opts.out == OutFormat::Csv {
                let body = csv(
                    &["x", "y", "coefficient", "orbit"],
                    rows.iter().map(|&(k, l, c, g)| {
                        vec![k.to_string(), l.to_string(), c.to_string(), g.to_string()]
                    }),
                );
                return Ok(Output {
                    body: Body::Csv(body),
                    passed: true,
                });
            }
            let rows: Vec<Value> = rows
                .iter()
                .map(|&(k, l, c, g)| json!({ "x": k, "y": l, "coefficient": c, "orbit": g }))
                .collect();
            Ok(Output::json(json!({ "level": m, "rows": rows })))
        }
    }
}

/// Mackey data from the payload (`data` field or the whole document), or from `--functor`.
fn mackey_source(
    opts: &Opts,
    payload: Option<&Value>,
    fallback_bound: Option<u64>,
) -> CliResult<MackeyData> {
    if let Some(v) = payload {
        let doc = v.get("data").unwrap_or(v);
        if doc.get("groups").is_some() {
            return mackey_from_json(doc).at("payload data");
        }
    }
    let bound = opts
        .bound
        .or(fallback_bound)
        .ok_or_else(|| CliError::input("missing --bound or Mackey data"))?;
    match opts.functor {
        Functor::Burnside => Ok(burnside_mackey(bound)),
        Functor::Witt => witt_mackey(&ring_tag(opts)?, bound).at("--ring"),
    }
}

fn report_output(opts: &Opts, report: &CheckReport) -> Output {
    let passed = report.passed();
    if opts.out == OutFormat::Csv {
        let body = csv(
            &["level", "prime", "check", "pass", "witness"],
            report.entries.iter().map(|e| {
                vec![
                    e.level.to_string(),
                    e.prime.to_string(),
                    e.check.clone(),
                    e.pass.to_string(),
                    e.witness.clone().unwrap_or_default(),
                ]
            }),
        );
        return Output {
            body: Body::Csv(body),
            passed,
        };
    }
    Output::verdict(check_report_to_json(report), passed)
}

pub fn mackey(verb: MackeyVerb, opts: &Opts) -> CliResult<Output> {
    json_only(opts, "mackey")?;
    match verb {
        MackeyVerb::Validate => {
            let d = mackey_source(opts, optional_payload(opts)?.as_ref(), None)?;
            let report = validate_mackey(&d);
            Ok(Output::verdict(
                mackey_report_to_json(&report),
                report.is_valid(),
            ))
        }
        MackeyVerb::Eval => {
            let v = payload(opts)?;
            let span = v
                .get("span")
                .ok_or_else(|| CliError::input("payload: missing field \"span\""))?;
            let h = hmorphism_from_json(span).at("payload span")?;
            let d = mackey_source(
                opts,
                Some(&v),
                Some(cyclonic::arith::lcm(h.source(), h.target())),
            )?;
            Ok(Output::json(morphism_to_json(
                &eval_h(&d, &h).at("payload span")?,
            )))
        }
        MackeyVerb::Burnside => Ok(Output::json(mackey_to_json(&burnside_mackey(require(
            opts.bound, "bound",
        )?)))),
        MackeyVerb::Witt => {
            let d = witt_mackey(&ring_tag(opts)?, require(opts.bound, "bound")?).at("--ring")?;
            Ok(Output::json(mackey_to_json(&d)))
        }
    }
}

fn witt_operand<R: JsonElem>(
    ring: &R,
    level: Option<u64>,
    v: &Value,
    location: &str,
) -> CliResult<WittVector<R>> {
    match level {
        Some(m) => witt_from_json_at(ring, m, v).at(location),
        None => witt_from_json(ring, v).at(location),
    }
}

fn witt_verb<R: JsonElem>(ring: &R, verb: WittVerb, opts: &Opts) -> CliResult<Output> {
    match verb {
        WittVerb::Add | WittVerb::Mul => {
            let ops = operands(opts, 2)?;
            let x = witt_operand(ring, opts.level, &ops[0], "payload[0]")?;
            let y = witt_operand(ring, Some(x.level()), &ops[1], "payload[1]")?;
            let r = if matches!(verb, WittVerb::Add) {
                witt_add(&x, &y)
            } else {
                witt_mul(&x, &y)
            };
            Ok(Output::json(witt_to_json(&r.at("payload")?)))
        }
        WittVerb::Frob | WittVerb::Versch | WittVerb::Restrict => {
            let x = witt_operand(ring, opts.level, &payload(opts)?, "payload")?;
            let to = require(opts.to, "to")?;
            let r = match verb {
                WittVerb::Frob => frobenius(&x, to),
                WittVerb::Versch => verschiebung(&x, to),
                _ => restriction(&x, to),
            };
            Ok(Output::json(witt_to_json(&r.at("--to")?)))
        }
        WittVerb::Ghost => {
            let x = witt_operand(ring, opts.level, &payload(opts)?, "payload")?;
            Ok(Output::json(ghost_to_json(&ghost(&x))))
        }
        WittVerb::Polys => unreachable!("handled without a ring"),
    }
}

pub fn witt(verb: WittVerb, opts: &Opts) -> CliResult<Output> {
    json_only(opts, "witt")?;
    if let WittVerb::Polys = verb {
        let op = match opts.op {
            PolyOp::Sum => WittOp::Sum,
            PolyOp::Product => WittOp::Product,
            PolyOp::Negation => WittOp::Negation,
        };
        let p = universal_polys(require(opts.level, "level")?, op).at("--level")?;
        return Ok(Output::json(polys_to_json(&p)));
    }
    with_ring!(&ring_tag(opts)?, |r| witt_verb(&r, verb, opts))
}

fn primes(opts: &Opts) -> CliResult<Vec<u64>> {
    if opts.primes.is_empty() {
        return Err(CliError::input("missing --primes"));
    }
    Ok(opts.primes.clone())
}

pub fn cyclotomic(verb: CyclotomicVerb, opts: &Opts) -> CliResult<Output> {
    match verb {
        CyclotomicVerb::Gfp => {
            json_only(opts, "cyclotomic gfp")?;
            let base: Arc<dyn MackeyRule> = match opts.functor {
                Functor::Witt => Arc::new(WittRule::from_tag(&ring_tag(opts)?).at("--ring")?),
                Functor::Burnside => Arc::new(BurnsideRule),
            };
            let p = require(opts.p, "p")?;
            let n = require(opts.level, "level")?;
            let phi = geometric_fixed_points(base.clone(), p).at("--p")?;
            let q = phi.projection(n).at("--level")?;
            Ok(Output::json(json!({
                "functor": base.name(),
                "p": p,
                "level": n,
                "group": group_to_json(q.target()),
                "projection": morphism_to_json(&q),
                "isomorphic_to_base": q.target().isomorphic(&base.group(n).at("--level")?),
            })))
        }
        CyclotomicVerb::VerifyWitt => {
            let c = witt_cyclotomic(&ring_tag(opts)?, &primes(opts)?).at("--ring")?;
            Ok(report_output(
                opts,
                &verify_cyclotomic(&c, require(opts.bound, "bound")?),
            ))
        }
        CyclotomicVerb::Recollement => {
            let d = mackey_source(opts, optional_payload(opts)?.as_ref(), None)?;
            let report = recollement_check(&d, require(opts.p, "p")?).at("--p")?;
            Ok(report_output(opts, &report))
        }
        CyclotomicVerb::Restrictions => {
            json_only(opts, "cyclotomic restrictions")?;
            let (m, n) = (require(opts.level, "level")?, require(opts.to, "to")?);
            if !divides(m, n) {
                return Err(CliError::input(format!(
                    "--level {m} does not divide --to {n}"
                )));
            }
            let ps = if opts.primes.is_empty() {
                let mut ps = prime_factors_with_multiplicity(n / m);
                ps.dedup();
                ps
            } else {
                opts.primes.clone()
            };
            let tag = ring_tag(opts)?;
            let c = witt_cyclotomic(&tag, &ps).at("--ring")?;
            let rho = derived_restrictions(&c, m, n).at("--primes")?;
            let trunc = restriction_matrix(m, n).at("--level")?;
            let truncation = rho.equals(
                &cyclonic::abgrp::GroupMorphism::new(
                    rho.source().clone(),
                    rho.target().clone(),
                    trunc,
                )
                .at("--level")?,
            );
            Ok(Output::json(json!({
                "m": m,
                "n": n,
                "ring": tag.to_string(),
                "matrix": matrix_to_json(rho.matrix()),
                "truncation": truncation,
            })))
        }
        CyclotomicVerb::TwistedAssoc => {
            json_only(opts, "cyclotomic twisted-assoc")?;
            let audit = twisted_audit(opts.bound.unwrap_or(24));
            let passed = audit.adopted.is_some();
            Ok(Output::verdict(twisted_audit_to_json(&audit), passed))
        }
    }
}

fn dga_product<R: JsonElem>(ring: &R, bound: u64, opts: &Opts) -> CliResult<Output> {
    let ops = operands(opts, 2)?;
    let x = dga_from_json(ring, bound, &ops[0]).at("payload[0]")?;
    let y = dga_from_json(ring, bound, &ops[1]).at("payload[1]")?;
    Ok(Output::json(dga_to_json(&dga_mul(&x, &y).at("payload")?)))
}

pub fn dga(verb: DgaVerb, opts: &Opts) -> CliResult<Output> {
    let bound = opts
        .bound
        .or(opts.level)
        .ok_or_else(|| CliError::input("missing --bound"))?;
    match verb {
        DgaVerb::Mul => {
            json_only(opts, "dga mul")?;
            with_ring!(&ring_tag(opts)?, |r| dga_product(&r, bound, opts))
        }
        DgaVerb::Table => {
            let rows = dga_table(bound);
            if opts.out == OutFormat::Csv {
                let body = csv(
                    &["x", "y", "coefficient", "product"],
                    rows.iter().map(|(x, y, c, z)| {
                        vec![x.to_string(), y.to_string(), c.to_string(), z.to_string()]
                    }),
                );
                return Ok(Output {
                    body: Body::Csv(body),
                    passed: true,
                });
            }
            let rows: Vec<Value> = rows
                .iter()
                .map(|(x, y, c, z)| {
                    json!({ "x": x.to_string(), "y": y.to_string(), "coefficient": int_to_json(c), "product": z.to_string() })
                })
                .collect();
            Ok(Output::json(json!({ "bound": bound, "rows": rows })))
        }
    }
}
