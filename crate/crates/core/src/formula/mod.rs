//! First-order formulas over linear atoms with `Z[1/q]` coefficients, the shift
//! predicates `S_l`, the power predicates `P_{q^l}` and `V_q`, and their compilation to
//! automata.

mod compile;
mod eval;
mod normalize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::atoms::{LinearAtom, Relation};
use crate::automata::AutomatonError;
use crate::base::Base;
use crate::group::QFraction;

pub use compile::{compile, is_satisfiable, model, Compiler, Stage, DEFAULT_TRACK_LIMIT};
pub use normalize::normalize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("free variable `{0}` is not in the environment")]
    UnboundVariable(String),
    #[error("variable `{0}` appears twice in the environment")]
    DuplicateVariable(String),
    #[error("formula needs {needed} tracks but the limit is {limit}")]
    TrackLimit { needed: usize, limit: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// `sum coeff * var + constant` with coefficients in `Z[1/q]`; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    coeffs: BTreeMap<String, QFraction>,
    constant: QFraction,
}

impl Term {
    pub fn new(
        coeffs: impl IntoIterator<Item = (String, QFraction)>,
        constant: QFraction,
        q: Base,
    ) -> Term {
        let mut t = Term::constant(constant);
        for (v, c) in coeffs {
            let sum = t.coeff(&v).add(&c, q);
            t.set(v, sum);
        }
        t
    }

    pub fn var(name: &str) -> Term {
        Term::scaled(name, BigInt::one())
    }

    pub fn scaled(name: &str, coeff: BigInt) -> Term {
        let mut t = Term::zero();
        t.set(name.to_string(), QFraction::from_integer(coeff));
        t
    }

    pub fn int(value: i64) -> Term {
        Term::constant(QFraction::from_integer(BigInt::from(value)))
    }

    pub fn constant(value: QFraction) -> Term {
        Term {
            coeffs: BTreeMap::new(),
            constant: value,
        }
    }

    pub fn zero() -> Term {
        Term::constant(QFraction::zero())
    }

    fn set(&mut self, v: String, c: QFraction) {
        if c.is_zero() {
            self.coeffs.remove(&v);
        } else {
            self.coeffs.insert(v, c);
        }
    }

    pub fn coeff(&self, v: &str) -> QFraction {
        self.coeffs.get(v).cloned().unwrap_or_else(QFraction::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<String, QFraction> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &QFraction {
        &self.constant
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.coeffs.keys()
    }

    /// The variable if the term is exactly `1 * v`.
    pub fn as_var(&self) -> Option<&str> {
        if !self.constant.is_zero() || self.coeffs.len() != 1 {
            return None;
        }
        let (v, c) = self.coeffs.iter().next()?;
        (c == &QFraction::one()).then_some(v.as_str())
    }

    pub fn is_canonical(&self, q: Base) -> bool {
        self.constant.is_canonical(q)
            && self
                .coeffs
                .values()
                .all(|c| c.is_canonical(q) && !c.is_zero())
    }

    pub fn plus(&self, other: &Term, q: Base) -> Term {
        let mut t = self.clone();
        t.constant = t.constant.add(&other.constant, q);
        for (v, c) in &other.coeffs {
            let sum = t.coeff(v).add(c, q);
            t.set(v.clone(), sum);
        }
        t
    }

    pub fn minus(&self, other: &Term, q: Base) -> Term {
        self.plus(&other.scale(&QFraction::from_integer(-BigInt::one()), q), q)
    }

    pub fn scale(&self, factor: &QFraction, q: Base) -> Term {
        let mut t = Term::constant(self.constant.mul(factor, q));
        for (v, c) in &self.coeffs {
            t.set(v.clone(), c.mul(factor, q));
        }
        t
    }

    pub fn rename(&self, map: &dyn Fn(&str) -> String) -> Term {
        Term {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (map(v), c.clone()))
                .collect(),
            constant: self.constant.clone(),
        }
    }

    /// Value under `values`; `None` if a variable is unassigned.
    pub fn eval(&self, values: &BTreeMap<String, BigInt>, q: Base) -> Option<QFraction> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc = acc.add(&c.mul_int(values.get(v)?, q), q);
        }
        Some(acc)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_var() {
            return write!(f, "{v}");
        }
        if self.coeffs.is_empty() {
            return write!(f, "{}", self.constant);
        }
        if self.coeffs.len() == 1 && self.constant.is_zero() {
            let (v, c) = self.coeffs.iter().next().unwrap();
            return write!(f, "(* {c} {v})");
        }
        write!(f, "(+")?;
        for (v, c) in &self.coeffs {
            if c == &QFraction::one() {
                write!(f, " {v}")?;
            } else {
                write!(f, " (* {c} {v})")?;
            }
        }
        if !self.constant.is_zero() {
            write!(f, " {}", self.constant)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Geq(Term, Term),
    /// `x S_l y`: `x = q^r`, `y = q^{r + l s}` for some `s >= 0`.
    Shift {
        ell: i64,
        x: Term,
        y: Term,
    },
    /// `x = q^{l s}` for some `s >= 0`.
    Power {
        ell: u32,
        x: Term,
    },
    /// `x != 0` and `y` is the largest power of `q` dividing `x`.
    Vq {
        x: Term,
        y: Term,
    },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn geq(lhs: Term, rhs: Term) -> Formula {
        Formula::Geq(lhs, rhs)
    }

    pub fn leq(lhs: Term, rhs: Term) -> Formula {
        Formula::Geq(rhs, lhs)
    }

    pub fn shift(ell: i64, x: &str, y: &str) -> Formula {
        Formula::Shift {
            ell,
            x: Term::var(x),
            y: Term::var(y),
        }
    }

    pub fn power(ell: u32, x: &str) -> Formula {
        Formula::Power {
            ell,
            x: Term::var(x),
        }
    }

    pub fn vq(x: &str, y: &str) -> Formula {
        Formula::Vq {
            x: Term::var(x),
            y: Term::var(y),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<String>| {
            for v in t.vars() {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(l, r)
            | Formula::Geq(l, r)
            | Formula::Shift { x: l, y: r, .. }
            | Formula::Vq { x: l, y: r } => {
                term(l, bound);
                term(r, bound);
            }
            Formula::Power { x, .. } => term(x, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of nodes, for diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Ground truth value under `values`, which must assign every free variable.
    ///
    /// Quantified variables are resolved from equations and `V_q` atoms of the body that
    /// determine them; otherwise they range over `[-search_bound, search_bound]`.
    pub fn holds(
        &self,
        values: &BTreeMap<String, BigInt>,
        q: Base,
        search_bound: u64,
    ) -> Result<bool, FormulaError> {
        eval::holds(self, values, q, search_bound)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Eq(l, r) => write!(f, "(= {l} {r})"),
            Formula::Geq(l, r) => write!(f, "(>= {l} {r})"),
            Formula::Shift { ell, x, y } => write!(f, "(shift {ell} {x} {y})"),
            Formula::Power { ell, x } => write!(f, "(power {ell} {x})"),
            Formula::Vq { x, y } => write!(f, "(vq {x} {y})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(fs) | Formula::Or(fs) => {
                write!(
                    f,
                    "({}",
                    if matches!(self, Formula::And(_)) {
                        "and"
                    } else {
                        "or"
                    }
                )?;
                for g in fs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

/// `lhs (= | >=) rhs` multiplied through by `q^E` so every coefficient is an integer.
pub fn clear_denominators(lhs: &Term, rhs: &Term, relation: Relation, q: Base) -> LinearAtom {
    let diff = lhs.minus(rhs, q);
    let e = diff
        .coeffs
        .values()
        .chain([&diff.constant])
        .map(QFraction::den_exp)
        .max()
        .unwrap_or(0);
    let lift = |c: &QFraction| -> BigInt {
        c.mul_q_pow(e as i64, q)
            .to_integer()
            .cloned()
            .expect("q^E clears every denominator")
    };
    let constant = -lift(&diff.constant);
    LinearAtom::new(
        diff.coeffs.iter().map(|(v, c)| (v.clone(), lift(c))),
        constant,
        relation,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(q: u32) -> Base {
        Base::new(q).unwrap()
    }

    #[test]
    fn clears_denominators() {
        let q = b(2);
        let w = Term::var("w");
        let rhs = Term::var("u").plus(
            &Term::new(
                [("x".to_string(), QFraction::new(3.into(), 1, q))],
                QFraction::zero(),
                q,
            ),
            q,
        );
        let atom = clear_denominators(&w, &rhs, Relation::Eq, q);
        assert_eq!(atom, LinearAtom::eq(&[("w", 2), ("u", -2), ("x", -3)], 0));

        let q = b(3);
        let rhs = Term::new(
            [("y".to_string(), QFraction::new(1.into(), 2, q))],
            QFraction::zero(),
            q,
        );
        let atom = clear_denominators(&Term::var("x"), &rhs, Relation::Geq, q);
        assert_eq!(atom, LinearAtom::geq(&[("x", 9), ("y", -1)], 0));

        let atom = clear_denominators(
            &Term::var("x").plus(&Term::int(4), q),
            &Term::int(1),
            Relation::Eq,
            q,
        );
        assert_eq!(atom, LinearAtom::eq(&[("x", 1)], -3));
    }

    #[test]
    fn cancelling_terms_drop_variables() {
        let q = b(2);
        let t = Term::var("x").minus(&Term::var("x"), q);
        assert_eq!(t, Term::zero());
        assert_eq!(
            Formula::eq(Term::var("x"), Term::var("x"))
                .free_vars()
                .len(),
            1
        );
    }

    #[test]
    fn display_is_an_s_expression() {
        let q = b(2);
        let f = Formula::exists(
            "y",
            Formula::And(vec![
                Formula::eq(Term::var("x"), Term::var("y").plus(&Term::var("y"), q)),
                Formula::power(1, "y"),
            ]),
        );
        assert_eq!(f.to_string(), "(exists y (and (= x (* 2 y)) (power 1 y)))");
        assert_eq!(
            f.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["x".to_string()]
        );
    }
}
