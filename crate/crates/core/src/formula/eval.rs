use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Formula, FormulaError, Term};
use crate::atoms::semantics;
use crate::base::Base;
use crate::group::QFraction;

pub(super) fn holds(
    phi: &Formula,
    values: &BTreeMap<String, BigInt>,
    q: Base,
    bound: u64,
) -> Result<bool, FormulaError> {
    let mut env = values.clone();
    eval(phi, &mut env, q, bound)
}

fn value(t: &Term, env: &BTreeMap<String, BigInt>, q: Base) -> Result<QFraction, FormulaError> {
    t.eval(env, q).ok_or_else(|| {
        let v = t
            .vars()
            .find(|v| !env.contains_key(*v))
            .cloned()
            .unwrap_or_default();
        FormulaError::UnboundVariable(v)
    })
}

fn integer(
    t: &Term,
    env: &BTreeMap<String, BigInt>,
    q: Base,
) -> Result<Option<BigInt>, FormulaError> {
    Ok(value(t, env, q)?.to_integer().cloned())
}

fn eval(
    phi: &Formula,
    env: &mut BTreeMap<String, BigInt>,
    q: Base,
    bound: u64,
) -> Result<bool, FormulaError> {
    Ok(match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(l, r) => value(l, env, q)?.sub(&value(r, env, q)?, q).is_zero(),
        Formula::Geq(l, r) => !value(l, env, q)?
            .sub(&value(r, env, q)?, q)
            .numerator()
            .is_negative(),
        Formula::Shift { ell, x, y } => match (integer(x, env, q)?, integer(y, env, q)?) {
            (Some(x), Some(y)) => semantics::shift(*ell, &x, &y, q),
            _ => false,
        },
        Formula::Power { ell, x } => {
            integer(x, env, q)?.is_some_and(|x| semantics::is_power(&x, *ell, q))
        }
        Formula::Vq { x, y } => match (integer(x, env, q)?, integer(y, env, q)?) {
            (Some(x), Some(y)) => semantics::vq(&x, &y, q),
            _ => false,
        },
        Formula::Not(f) => !eval(f, env, q, bound)?,
        Formula::And(fs) => {
            for f in fs {
                if !eval(f, env, q, bound)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for f in fs {
                if eval(f, env, q, bound)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists(v, body) => {
            let saved = env.remove(v);
            let result = match candidates(v, body, env, q) {
                Some(cands) => try_values(v, body, env, q, bound, cands.into_iter(), true),
                None => try_values(v, body, env, q, bound, range(bound), true),
            };
            restore(env, v, saved);
            result?
        }
        Formula::Forall(v, body) => {
            let saved = env.remove(v);
            let result = try_values(v, body, env, q, bound, range(bound), false);
            restore(env, v, saved);
            result?
        }
    })
}

fn range(bound: u64) -> impl Iterator<Item = BigInt> {
    let b = bound as i128;
    (-b..=b).map(BigInt::from)
}

fn restore(env: &mut BTreeMap<String, BigInt>, v: &str, saved: Option<BigInt>) {
    match saved {
        Some(x) => env.insert(v.to_string(), x),
        None => env.remove(v),
    };
}

/// Existential: true iff some value satisfies the body. Universal: true iff all do.
fn try_values(
    v: &str,
    body: &Formula,
    env: &mut BTreeMap<String, BigInt>,
    q: Base,
    bound: u64,
    values: impl Iterator<Item = BigInt>,
    existential: bool,
) -> Result<bool, FormulaError> {
    for x in values {
        env.insert(v.to_string(), x);
        let b = eval(body, env, q, bound)?;
        if b == existential {
            return Ok(existential);
        }
    }
    Ok(!existential)
}

/// Values of `v` forced by top-level conjuncts of `body` whose other variables are
/// assigned: an equation with a nonzero coefficient on `v`, or `V_q(x, v)`. `None` when
/// no conjunct pins `v`; an empty list when a conjunct rules out every integer.
fn candidates(
    v: &str,
    body: &Formula,
    env: &BTreeMap<String, BigInt>,
    q: Base,
) -> Option<Vec<BigInt>> {
    let mut conjuncts = Vec::new();
    flatten(body, &mut conjuncts);
    for c in conjuncts {
        match c {
            Formula::Eq(l, r) => {
                let d = l.minus(r, q);
                let coeff = d.coeff(v);
                if coeff.is_zero() {
                    continue;
                }
                let rest = d.minus(&Term::var(v).scale(&coeff, q), q);
                let Some(rest) = rest.eval(env, q) else {
                    continue;
                };
                // coeff * v + rest = 0
                let e = coeff.den_exp().max(rest.den_exp());
                let num = -rest.mul_q_pow(e as i64, q).to_integer().cloned().unwrap();
                let den = coeff.mul_q_pow(e as i64, q).to_integer().cloned().unwrap();
                let (quot, rem) = num.div_rem(&den);
                return Some(if rem.is_zero() {
                    vec![quot]
                } else {
                    Vec::new()
                });
            }
            Formula::Vq { x, y } if y.as_var() == Some(v) && !x.vars().any(|w| w == v) => {
                let Some(x) = x.eval(env, q) else { continue };
                let forced = x.to_integer().and_then(|x| semantics::valuation(x, q));
                return Some(forced.into_iter().collect());
            }
            _ => {}
        }
    }
    None
}

fn flatten<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(fs) => fs.iter().for_each(|g| flatten(g, out)),
        g => out.push(g),
    }
}
