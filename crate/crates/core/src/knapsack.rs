//! Knapsack for `BS(1,q)`: does `g_1^{x_1} ... g_n^{x_n} = g` have a solution in naturals?
//!
//! The instance is reduced to a chain of integral matrices `h_0, ..., h_n`, each encoded
//! by its corner entry `U_i` and diagonal entry `M_i = q^{k_i}`, with
//! `h_i = h_{i-1} g_i^{x_i}` for some `x_i` and `h_n = h_0 g`. Scaling by a large enough
//! power of `t` makes every prefix product integral, so the chain exists iff the
//! instance is solvable. The chain constraints are a formula over the integers with
//! `S_l`, `P_q` and `V_q`, decided by automata.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::base::Base;
use crate::formula::{Compiler, Formula, FormulaError, Stage, Term};
use crate::group::{integral_shift, log_exact, power_product, GroupElement, QFraction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub q: Base,
    pub generators: Vec<GroupElement>,
    pub target: GroupElement,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnapsackError {
    #[error("group element {0} is not in canonical form for the instance base")]
    NonCanonical(GroupElement),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    /// A recovered witness failed a consistency check; this indicates a solver bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl KnapsackInstance {
    pub fn new(
        q: Base,
        generators: Vec<GroupElement>,
        target: GroupElement,
    ) -> Result<Self, KnapsackError> {
        for g in generators.iter().chain([&target]) {
            if !g.is_canonical(q) {
                return Err(KnapsackError::NonCanonical(g.clone()));
            }
        }
        Ok(KnapsackInstance {
            q,
            generators,
            target,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Corner and diagonal entries of one integral matrix `(M, U; 0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub u: BigInt,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub m: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HChain(pub Vec<ChainEntry>);

impl HChain {
    pub fn elements(&self, q: Base) -> Option<Vec<GroupElement>> {
        self.0
            .iter()
            .map(|e| GroupElement::from_integral_pair(&e.u, &e.m, q))
            .collect()
    }

    /// Variable assignment matching [`knapsack_formula`].
    pub fn assignment(&self) -> BTreeMap<String, BigInt> {
        let mut out = BTreeMap::new();
        for (i, e) in self.0.iter().enumerate() {
            out.insert(u_var(i), e.u.clone());
            out.insert(m_var(i), e.m.clone());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackResult {
    pub decision: Decision,
    pub exponents: Option<Vec<u64>>,
    pub chain: Option<HChain>,
    /// Whether the exponents were re-checked by group arithmetic; always true on SAT.
    pub verified: bool,
    pub stages: Vec<Stage>,
}

pub fn u_var(i: usize) -> String {
    format!("u{i}")
}

pub fn m_var(i: usize) -> String {
    format!("m{i}")
}

/// `(U', M')` is the integral pair of `h g^s` for some natural `s`, where `(U, M)` is that
/// of `h`. Bound variables are suffixed with `tag`.
pub fn m_star_formula(
    g: &GroupElement,
    from: (&str, &str),
    to: (&str, &str),
    q: Base,
    tag: &str,
) -> Formula {
    let (u, m) = from;
    let (u2, m2) = to;
    let v = g.coeff();
    let ell = g.t_exp();
    if ell != 0 {
        let x = format!("x{tag}");
        let qk = q.pow(ell.unsigned_abs());
        let one = BigInt::from(1);
        let (c, d) = if ell > 0 {
            (&qk - &one, one)
        } else {
            (&one - &qk, qk)
        };
        return Formula::exists(
            &x,
            Formula::And(vec![
                Formula::shift(ell, m, m2),
                Formula::eq(Term::var(u2), Term::var(u).plus(&coeff_term(&x, v, q), q)),
                Formula::eq(
                    Term::scaled(&x, c),
                    Term::scaled(m2, d.clone()).minus(&Term::scaled(m, d), q),
                ),
            ]),
        );
    }
    if v.is_zero() {
        return Formula::And(vec![
            Formula::eq(Term::var(u2), Term::var(u)),
            Formula::eq(Term::var(m2), Term::var(m)),
        ]);
    }
    // U' = U + v s M; y = s M is zero or a multiple of M
    let y = format!("y{tag}");
    let z = format!("z{tag}");
    Formula::exists(
        &y,
        Formula::And(vec![
            Formula::geq(Term::var(&y), Term::int(0)),
            Formula::eq(Term::var(u2), Term::var(u).plus(&coeff_term(&y, v, q), q)),
            Formula::eq(Term::var(m2), Term::var(m)),
            Formula::Or(vec![
                Formula::eq(Term::var(&y), Term::int(0)),
                Formula::exists(
                    &z,
                    Formula::And(vec![
                        Formula::vq(&y, &z),
                        Formula::geq(Term::var(&z), Term::var(m)),
                    ]),
                ),
            ]),
        ]),
    )
}

fn coeff_term(var: &str, c: &QFraction, q: Base) -> Term {
    Term::new([(var.to_string(), c.clone())], QFraction::zero(), q)
}

/// `h_n = h_0 g` on integral pairs.
pub fn closing_formula(g: &GroupElement, h0: (&str, &str), hn: (&str, &str), q: Base) -> Formula {
    let (u0, m0) = h0;
    let (un, mn) = hn;
    let k = g.t_exp();
    let qk = q.pow(k.unsigned_abs());
    let diagonal = if k >= 0 {
        Formula::eq(Term::var(mn), Term::scaled(m0, qk))
    } else {
        Formula::eq(Term::scaled(mn, qk), Term::var(m0))
    };
    let corner = Formula::eq(
        Term::var(un),
        Term::var(u0).plus(
            &Term::new([(m0.to_string(), g.coeff().clone())], QFraction::zero(), q),
            q,
        ),
    );
    Formula::And(vec![diagonal, corner])
}

/// `h_n g^{-1} = h_0`, algebraically the same constraint as [`closing_formula`].
pub fn closing_formula_literal(
    g: &GroupElement,
    h0: (&str, &str),
    hn: (&str, &str),
    q: Base,
) -> Formula {
    let inv = g.inverse(q);
    let (u0, m0) = h0;
    let (un, mn) = hn;
    let k = inv.t_exp();
    let qk = q.pow(k.unsigned_abs());
    let diagonal = if k >= 0 {
        Formula::eq(Term::var(m0), Term::scaled(mn, qk))
    } else {
        Formula::eq(Term::scaled(m0, qk), Term::var(mn))
    };
    let corner = Formula::eq(
        Term::var(u0),
        Term::var(un).plus(
            &Term::new(
                [(mn.to_string(), inv.coeff().clone())],
                QFraction::zero(),
                q,
            ),
            q,
        ),
    );
    Formula::And(vec![diagonal, corner])
}

/// Conjunction over the free variables `u_i`, `m_i` for `0 <= i <= n`.
pub fn knapsack_formula(inst: &KnapsackInstance) -> Formula {
    let q = inst.q;
    let n = inst.len();
    let names: Vec<(String, String)> = (0..=n).map(|i| (u_var(i), m_var(i))).collect();
    let pair = |i: usize| (names[i].0.as_str(), names[i].1.as_str());
    let mut parts: Vec<Formula> = (0..=n).map(|i| Formula::power(1, &names[i].1)).collect();
    for (i, g) in inst.generators.iter().enumerate() {
        parts.push(m_star_formula(
            g,
            pair(i),
            pair(i + 1),
            q,
            &(i + 1).to_string(),
        ));
    }
    parts.push(closing_formula(&inst.target, pair(0), pair(n), q));
    Formula::And(parts)
}

/// The track layout used by [`solve`].
pub fn chain_env(n: usize) -> Vec<String> {
    let mut env: Vec<String> = (0..=n).flat_map(|i| [u_var(i), m_var(i)]).collect();
    env.sort();
    env
}

pub fn solve(inst: &KnapsackInstance) -> Result<KnapsackResult, KnapsackError> {
    solve_with(inst, &mut Compiler::new(inst.q))
}

pub fn solve_with(
    inst: &KnapsackInstance,
    compiler: &mut Compiler,
) -> Result<KnapsackResult, KnapsackError> {
    let q = inst.q;
    let env = chain_env(inst.len());
    let automaton = compiler.compile(&knapsack_formula(inst), &env)?;
    let stages = compiler.stages().to_vec();
    let Some(word) = automaton.shortest_accepted() else {
        return Ok(KnapsackResult {
            decision: Decision::Unsat,
            exponents: None,
            chain: None,
            verified: false,
            stages,
        });
    };
    let values: BTreeMap<String, BigInt> = env
        .iter()
        .cloned()
        .zip(crate::automata::decode(&word, q))
        .collect();
    let chain = HChain(
        (0..=inst.len())
            .map(|i| ChainEntry {
                u: values[&u_var(i)].clone(),
                m: values[&m_var(i)].clone(),
            })
            .collect(),
    );
    let exponents = recover_exponents(&chain, inst)?;
    if !verify_witness(inst, &exponents) {
        return Err(KnapsackError::Inconsistent(format!(
            "exponents {exponents:?} do not reach the target"
        )));
    }
    Ok(KnapsackResult {
        decision: Decision::Sat,
        exponents: Some(exponents),
        chain: Some(chain),
        verified: true,
        stages,
    })
}

/// `x_i` with `h_i = h_{i-1} g_i^{x_i}`; identity generators get `0`.
pub fn recover_exponents(
    chain: &HChain,
    inst: &KnapsackInstance,
) -> Result<Vec<u64>, KnapsackError> {
    let q = inst.q;
    if chain.0.len() != inst.len() + 1 {
        return Err(KnapsackError::Inconsistent(format!(
            "chain has {} entries for {} generators",
            chain.0.len(),
            inst.len()
        )));
    }
    let bad = |i: usize, why: &str| KnapsackError::Inconsistent(format!("step {}: {why}", i + 1));
    let mut out = Vec::with_capacity(inst.len());
    for (i, g) in inst.generators.iter().enumerate() {
        let (prev, next) = (&chain.0[i], &chain.0[i + 1]);
        let ell = g.t_exp();
        let x = if ell != 0 {
            let a = log_exact(&prev.m, q)
                .ok_or_else(|| bad(i, "diagonal entry is not a power of q"))?;
            let b = log_exact(&next.m, q)
                .ok_or_else(|| bad(i, "diagonal entry is not a power of q"))?;
            let diff = b as i128 - a as i128;
            if diff % ell as i128 != 0 || diff / (ell as i128) < 0 {
                return Err(bad(i, "diagonal exponents differ by a non-multiple of l"));
            }
            BigInt::from(diff / ell as i128)
        } else if g.coeff().is_zero() {
            BigInt::zero()
        } else {
            let v = g.coeff();
            let num = (&next.u - &prev.u) * q.pow(v.den_exp());
            let den = v.numerator() * &prev.m;
            let (x, rem) = num.div_rem(&den);
            if !rem.is_zero() || x < BigInt::zero() {
                return Err(bad(i, "corner difference is not a natural multiple of v M"));
            }
            x
        };
        out.push(
            x.to_u64()
                .ok_or_else(|| bad(i, "exponent exceeds 64 bits"))?,
        );
    }
    Ok(out)
}

pub fn verify_witness(inst: &KnapsackInstance, xs: &[u64]) -> bool {
    xs.len() == inst.len() && power_product(&inst.generators, xs, inst.q) == inst.target
}

/// The chain `h_i = (k, 0) g_1^{x_1} ... g_i^{x_i}` with the least `k` making every
/// prefix integral.
pub fn canonical_chain(inst: &KnapsackInstance, xs: &[u64]) -> HChain {
    let q = inst.q;
    let powers: Vec<GroupElement> = inst
        .generators
        .iter()
        .zip(xs)
        .map(|(g, &x)| g.power(x, q))
        .collect();
    let k = integral_shift(&powers, q);
    let mut h = GroupElement::new(k as i64, QFraction::zero());
    let mut out = vec![h.clone()];
    for p in &powers {
        h = h.multiply(p, q);
        out.push(h.clone());
    }
    HChain(
        out.iter()
            .map(|e| {
                let (u, m) = e
                    .to_integral_pair(q)
                    .expect("shifted prefixes are integral");
                ChainEntry { u, m }
            })
            .collect(),
    )
}
