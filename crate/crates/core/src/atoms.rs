//! Relation automata for the atomic predicates: linear (in)equations over `Z`, the shift
//! predicates `S_l`, the power predicates `P_{q^l}` and the graph of `V_q`.
//!
//! Every builder is a small digit machine that reads the least significant digit first
//! and decides acceptance as if the current letter were the last one, i.e. with the
//! top digit read as the sign. Acceptance therefore depends only on the decoded tuple,
//! which makes the automata closed under sign padding by construction.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::automata::encoding::last_digit_value;
use crate::automata::machine::{materialize, DigitMachine};
use crate::automata::Automaton;
use crate::base::Base;
use crate::formula::{normalize, Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Geq,
}

/// `sum coeffs[v] * v  (= | >=)  constant` over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearAtom {
    pub coeffs: BTreeMap<String, BigInt>,
    pub constant: BigInt,
    pub relation: Relation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtomError {
    #[error("variable `{0}` is not in the track environment")]
    UnknownVariable(String),
}

impl LinearAtom {
    pub fn new(
        coeffs: impl IntoIterator<Item = (String, BigInt)>,
        constant: BigInt,
        relation: Relation,
    ) -> Self {
        let mut map: BTreeMap<String, BigInt> = BTreeMap::new();
        for (v, c) in coeffs {
            *map.entry(v).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        LinearAtom {
            coeffs: map,
            constant,
            relation,
        }
    }

    pub fn eq(coeffs: &[(&str, i64)], constant: i64) -> Self {
        Self::from_small(coeffs, constant, Relation::Eq)
    }

    pub fn geq(coeffs: &[(&str, i64)], constant: i64) -> Self {
        Self::from_small(coeffs, constant, Relation::Geq)
    }

    fn from_small(coeffs: &[(&str, i64)], constant: i64, relation: Relation) -> Self {
        LinearAtom::new(
            coeffs
                .iter()
                .map(|(v, c)| (v.to_string(), BigInt::from(*c))),
            BigInt::from(constant),
            relation,
        )
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn holds(&self, values: &BTreeMap<String, BigInt>) -> Option<bool> {
        let mut lhs = BigInt::zero();
        for (v, c) in &self.coeffs {
            lhs += c * values.get(v)?;
        }
        Some(match self.relation {
            Relation::Eq => lhs == self.constant,
            Relation::Geq => lhs >= self.constant,
        })
    }
}

impl fmt::Display for LinearAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Eq => "=",
            Relation::Geq => ">=",
        };
        write!(f, "({op} (+")?;
        for (v, c) in &self.coeffs {
            write!(f, " (* {c} {v})")?;
        }
        write!(f, ") {})", self.constant)
    }
}

/// Carry automaton for a linear atom; the carry `r` after `j` digits satisfies
/// `lhs - constant = q^j (r + rest)`.
#[derive(Debug, Clone)]
pub(crate) struct LinearMachine {
    coeffs: Vec<BigInt>,
    constant: BigInt,
    relation: Relation,
    q: Base,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Carry {
    carry: Option<BigInt>,
    accepting: bool,
}

impl LinearMachine {
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt, relation: Relation, q: Base) -> Self {
        LinearMachine {
            coeffs,
            constant,
            relation,
            q,
        }
    }

    /// The machine for `atom`, reading variables in the order of `vars`.
    pub fn for_atom(atom: &LinearAtom, vars: &[String], q: Base) -> Self {
        let coeffs = vars
            .iter()
            .map(|v| atom.coeffs.get(v).cloned().unwrap_or_default())
            .collect();
        LinearMachine::new(coeffs, atom.constant.clone(), atom.relation, q)
    }
}

impl DigitMachine for LinearMachine {
    type State = Carry;

    fn arity(&self) -> usize {
        self.coeffs.len()
    }

    fn start(&self) -> Carry {
        Carry {
            carry: Some(-&self.constant),
            accepting: false,
        }
    }

    fn step(&self, s: &Carry, digits: &[u32]) -> Carry {
        let Some(r) = &s.carry else {
            return Carry {
                carry: None,
                accepting: false,
            };
        };
        let mut t = r.clone();
        let mut last = r.clone();
        for (c, &d) in self.coeffs.iter().zip(digits) {
            if d != 0 {
                t += c * d;
                last += c * last_digit_value(d, self.q);
            }
        }
        let accepting = match self.relation {
            Relation::Eq => last.is_zero(),
            Relation::Geq => !last.is_negative(),
        };
        let qb = self.q.big();
        let carry = match self.relation {
            Relation::Eq => {
                let (quot, rem) = t.div_rem(&qb);
                rem.is_zero().then_some(quot)
            }
            Relation::Geq => Some(t.div_floor(&qb)),
        };
        Carry { carry, accepting }
    }

    fn accepting(&self, s: &Carry) -> bool {
        s.accepting
    }

    fn is_dead(&self, s: &Carry) -> bool {
        s.carry.is_none() && !s.accepting
    }
}

/// `x` is `q^{l s}` for some natural `s`.
#[derive(Debug, Clone)]
pub(crate) struct PowerMachine {
    ell: u32,
    q: Base,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum PowerState {
    /// Only zeros so far; the next position modulo `l`.
    Zeros(u32),
    /// The single one digit has been read.
    One(bool),
    Dead,
}

impl PowerMachine {
    pub fn new(ell: u32, q: Base) -> Self {
        assert!(ell >= 1);
        PowerMachine { ell, q }
    }
}

impl DigitMachine for PowerMachine {
    type State = PowerState;

    fn arity(&self) -> usize {
        1
    }

    fn start(&self) -> PowerState {
        PowerState::Zeros(0)
    }

    fn step(&self, s: &PowerState, digits: &[u32]) -> PowerState {
        let one_is_positive = self.q.get() > 2;
        match (*s, digits[0]) {
            (PowerState::Zeros(j), 0) => PowerState::Zeros((j + 1) % self.ell),
            (PowerState::Zeros(0), 1) => PowerState::One(one_is_positive),
            (PowerState::One(_), 0) => PowerState::One(true),
            _ => PowerState::Dead,
        }
    }

    fn accepting(&self, s: &PowerState) -> bool {
        matches!(s, PowerState::One(true))
    }

    fn is_dead(&self, s: &PowerState) -> bool {
        *s == PowerState::Dead
    }
}

/// `x = q^r` and `y = q^{r + l s}` with `r >= 0`, `s >= 0`, `l >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct ShiftMachine {
    ell: u32,
    swapped: bool,
    q: Base,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum ShiftState {
    Zeros,
    /// `x` has its one digit; the next position's offset from it, modulo `l`.
    Counting(u32),
    Done(bool),
    Dead,
}

impl ShiftMachine {
    /// Negative `l` swaps the tracks of `S_{|l|}`.
    pub fn new(ell: i64, q: Base) -> Self {
        ShiftMachine {
            ell: ell.unsigned_abs() as u32,
            swapped: ell < 0,
            q,
        }
    }
}

impl DigitMachine for ShiftMachine {
    type State = ShiftState;

    fn arity(&self) -> usize {
        2
    }

    fn start(&self) -> ShiftState {
        ShiftState::Zeros
    }

    fn step(&self, s: &ShiftState, digits: &[u32]) -> ShiftState {
        let (x, y) = if self.swapped {
            (digits[1], digits[0])
        } else {
            (digits[0], digits[1])
        };
        let one_is_positive = self.q.get() > 2;
        match (*s, x, y) {
            (ShiftState::Zeros, 0, 0) => ShiftState::Zeros,
            (ShiftState::Zeros, 1, 1) => ShiftState::Done(one_is_positive),
            (ShiftState::Zeros, 1, 0) if self.ell > 0 => ShiftState::Counting(1 % self.ell),
            (ShiftState::Counting(c), 0, 0) => ShiftState::Counting((c + 1) % self.ell),
            (ShiftState::Counting(0), 0, 1) => ShiftState::Done(one_is_positive),
            (ShiftState::Done(_), 0, 0) => ShiftState::Done(true),
            _ => ShiftState::Dead,
        }
    }

    fn accepting(&self, s: &ShiftState) -> bool {
        matches!(s, ShiftState::Done(true))
    }

    fn is_dead(&self, s: &ShiftState) -> bool {
        *s == ShiftState::Dead
    }
}

/// Graph of `V_q`: `x != 0` and `y` is the largest power of `q` dividing `x`.
#[derive(Debug, Clone)]
pub(crate) struct ValuationMachine {
    q: Base,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum ValuationState {
    Zeros,
    Found(bool),
    Dead,
}

impl ValuationMachine {
    pub fn new(q: Base) -> Self {
        ValuationMachine { q }
    }
}

impl DigitMachine for ValuationMachine {
    type State = ValuationState;

    fn arity(&self) -> usize {
        2
    }

    fn start(&self) -> ValuationState {
        ValuationState::Zeros
    }

    fn step(&self, s: &ValuationState, digits: &[u32]) -> ValuationState {
        match (*s, digits[0], digits[1]) {
            (ValuationState::Zeros, 0, 0) => ValuationState::Zeros,
            (ValuationState::Zeros, x, 1) if x != 0 => ValuationState::Found(self.q.get() > 2),
            (ValuationState::Found(_), _, 0) => ValuationState::Found(true),
            _ => ValuationState::Dead,
        }
    }

    fn accepting(&self, s: &ValuationState) -> bool {
        matches!(s, ValuationState::Found(true))
    }

    fn is_dead(&self, s: &ValuationState) -> bool {
        *s == ValuationState::Dead
    }
}

/// Automaton over `env`'s tracks accepting the solutions of `atom`.
pub fn linear_automaton(
    atom: &LinearAtom,
    env: &[String],
    q: Base,
) -> Result<Automaton, AtomError> {
    if let Some(v) = atom.coeffs.keys().find(|v| !env.contains(v)) {
        return Err(AtomError::UnknownVariable(v.clone()));
    }
    Ok(materialize(&LinearMachine::for_atom(atom, env, q), q).minimize())
}

/// `S_l` over tracks `(x, y)`.
pub fn shift_automaton(ell: i64, q: Base) -> Automaton {
    materialize(&ShiftMachine::new(ell, q), q).minimize()
}

/// `P_{q^l}`, `l >= 1`.
pub fn power_automaton(ell: u32, q: Base) -> Automaton {
    materialize(&PowerMachine::new(ell, q), q).minimize()
}

/// Graph of `V_q` over tracks `(x, y)`.
pub fn vq_automaton(q: Base) -> Automaton {
    materialize(&ValuationMachine::new(q), q).minimize()
}

/// `y >= x  and  OR_{i<l} ( P_{q^l}(q^i x) and P_{q^l}(q^i y) )` over free `x`, `y`.
pub fn step_two_shift_formula(ell: u32, q: Base) -> Formula {
    assert!(ell >= 1);
    let cases = (0..ell)
        .map(|i| {
            let scale = q.pow(i as u64);
            Formula::And(vec![
                Formula::Power {
                    ell,
                    x: Term::scaled("x", scale.clone()),
                },
                Formula::Power {
                    ell,
                    x: Term::scaled("y", scale),
                },
            ])
        })
        .collect();
    normalize(&Formula::And(vec![
        Formula::geq(Term::var("y"), Term::var("x")),
        Formula::Or(cases),
    ]))
}

/// Arithmetic definitions used by tests and ground evaluation.
pub mod semantics {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    use crate::base::Base;
    use crate::group::log_exact;

    pub fn is_power(x: &BigInt, ell: u32, q: Base) -> bool {
        log_exact(x, q).is_some_and(|e| e % ell as u64 == 0)
    }

    /// `x S_l y` restricted to integers.
    pub fn shift(ell: i64, x: &BigInt, y: &BigInt, q: Base) -> bool {
        let (Some(a), Some(b)) = (log_exact(x, q), log_exact(y, q)) else {
            return false;
        };
        let diff = b as i128 - a as i128;
        match ell {
            0 => diff == 0,
            l if l > 0 => diff >= 0 && diff % l as i128 == 0,
            l => diff <= 0 && diff % l as i128 == 0,
        }
    }

    /// Largest power of `q` dividing a nonzero `x`.
    pub fn valuation(x: &BigInt, q: Base) -> Option<BigInt> {
        if x.is_zero() {
            return None;
        }
        let qb = q.big();
        let mut x = x.abs();
        let mut p = BigInt::one();
        loop {
            let (quot, rem) = x.div_rem(&qb);
            if !rem.is_zero() {
                return Some(p);
            }
            x = quot;
            p *= &qb;
        }
    }

    pub fn vq(x: &BigInt, y: &BigInt, q: Base) -> bool {
        valuation(x, q).is_some_and(|v| &v == y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::encoding::encode_i64;

    fn b(q: u32) -> Base {
        Base::new(q).unwrap()
    }

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn linear_examples() {
        let q = b(2);
        let a = linear_automaton(
            &LinearAtom::eq(&[("x", 1), ("y", -1)], 0),
            &vars(&["x", "y"]),
            q,
        )
        .unwrap();
        assert!(a.accepts(&encode_i64(&[5, 5], q)).unwrap());
        assert!(!a.accepts(&encode_i64(&[5, 6], q)).unwrap());
        let pos = linear_automaton(&LinearAtom::geq(&[("x", 1)], 0), &vars(&["x"]), q).unwrap();
        for v in 0..=50 {
            assert!(pos.accepts(&encode_i64(&[v], q)).unwrap());
            assert!(!pos.accepts(&encode_i64(&[-v - 1], q)).unwrap());
        }
        let err = linear_automaton(&LinearAtom::eq(&[("z", 1)], 0), &vars(&["x"]), q).unwrap_err();
        assert_eq!(err, AtomError::UnknownVariable("z".into()));
    }

    #[test]
    fn shift_examples() {
        let q = b(2);
        let s2 = shift_automaton(2, q);
        assert!(s2.accepts(&encode_i64(&[2, 32], q)).unwrap());
        assert!(!s2.accepts(&encode_i64(&[2, 16], q)).unwrap());
        assert!(!shift_automaton(1, q)
            .accepts(&encode_i64(&[3, 8], q))
            .unwrap());
        for qq in [2, 3, 5] {
            for ell in -3..=3 {
                let a = shift_automaton(ell, b(qq));
                assert!(a
                    .accepts(&encode_i64(&[qq as i64, qq as i64], b(qq)))
                    .unwrap());
            }
        }
    }

    #[test]
    fn power_and_valuation_examples() {
        let q = b(2);
        let p = power_automaton(2, q);
        for v in [1, 4, 16, 64] {
            assert!(p.accepts(&encode_i64(&[v], q)).unwrap());
        }
        for v in [2, 8, 32] {
            assert!(!p.accepts(&encode_i64(&[v], q)).unwrap());
        }
        let p3 = power_automaton(1, b(3));
        assert!(!p3.accepts(&encode_i64(&[0], b(3))).unwrap());
        for v in -30..0 {
            assert!(!p3.accepts(&encode_i64(&[v], b(3))).unwrap());
        }
        let vq = vq_automaton(q);
        assert!(vq.accepts(&encode_i64(&[12, 4], q)).unwrap());
        assert!(!vq.accepts(&encode_i64(&[12, 2], q)).unwrap());
        assert!(vq.accepts(&encode_i64(&[-12, 4], q)).unwrap());
        let vq3 = vq_automaton(b(3));
        for y in -10..=10 {
            assert!(!vq3.accepts(&encode_i64(&[0, y], b(3))).unwrap());
        }
    }
}
