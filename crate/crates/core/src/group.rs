//! Exact arithmetic in `BS(1,q) = <a, t | t a t^-1 = a^q>`.
//!
//! Elements are represented by the upper-triangular matrices `(q^k, u; 0, 1)` with
//! `k` an integer and `u` in `Z[1/q]`. The product law is
//! `(k, u) * (l, v) = (k + l, u + v * q^k)`, and the generators map to
//! `a = (0, 1)` and `t = (1, 0)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::base::Base;

/// An element `numerator / q^den_exp` of `Z[1/q]`, kept in lowest terms.
///
/// Canonical form: a zero numerator has exponent zero, and a positive exponent
/// implies `q` does not divide the numerator. The base is supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QFraction {
    numerator: BigInt,
    den_exp: u64,
}

impl QFraction {
    pub fn new(numerator: BigInt, den_exp: u64, q: Base) -> Self {
        let mut f = QFraction { numerator, den_exp };
        f.canonicalize(q);
        f
    }

    pub fn zero() -> Self {
        QFraction {
            numerator: BigInt::zero(),
            den_exp: 0,
        }
    }

    pub fn one() -> Self {
        QFraction::from_integer(BigInt::one())
    }

    pub fn from_integer(n: BigInt) -> Self {
        QFraction {
            numerator: n,
            den_exp: 0,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn den_exp(&self) -> u64 {
        self.den_exp
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den_exp == 0
    }

    pub fn to_integer(&self) -> Option<&BigInt> {
        self.is_integer().then_some(&self.numerator)
    }

    pub fn is_canonical(&self, q: Base) -> bool {
        if self.numerator.is_zero() {
            return self.den_exp == 0;
        }
        self.den_exp == 0 || !self.numerator.is_multiple_of(&q.big())
    }

    fn canonicalize(&mut self, q: Base) {
        if self.numerator.is_zero() {
            self.den_exp = 0;
            return;
        }
        let qb = q.big();
        while self.den_exp > 0 {
            let (quot, rem) = self.numerator.div_rem(&qb);
            if !rem.is_zero() {
                break;
            }
            self.numerator = quot;
            self.den_exp -= 1;
        }
    }

    pub fn add(&self, other: &QFraction, q: Base) -> QFraction {
        let e = self.den_exp.max(other.den_exp);
        let a = &self.numerator * q.pow(e - self.den_exp);
        let b = &other.numerator * q.pow(e - other.den_exp);
        QFraction::new(a + b, e, q)
    }

    pub fn neg(&self) -> QFraction {
        QFraction {
            numerator: -&self.numerator,
            den_exp: self.den_exp,
        }
    }

    pub fn sub(&self, other: &QFraction, q: Base) -> QFraction {
        self.add(&other.neg(), q)
    }

    pub fn mul(&self, other: &QFraction, q: Base) -> QFraction {
        QFraction::new(
            &self.numerator * &other.numerator,
            self.den_exp + other.den_exp,
            q,
        )
    }

    pub fn mul_int(&self, n: &BigInt, q: Base) -> QFraction {
        QFraction::new(&self.numerator * n, self.den_exp, q)
    }

    /// Multiplies by `q^k` for any integer `k`.
    pub fn mul_q_pow(&self, k: i64, q: Base) -> QFraction {
        if self.is_zero() {
            return QFraction::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if self.den_exp >= k {
                QFraction {
                    numerator: self.numerator.clone(),
                    den_exp: self.den_exp - k,
                }
            } else {
                QFraction {
                    numerator: &self.numerator * q.pow(k - self.den_exp),
                    den_exp: 0,
                }
            }
        } else {
            QFraction::new(self.numerator.clone(), self.den_exp + k.unsigned_abs(), q)
        }
    }
}

impl fmt::Display for QFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_exp == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/q^{}", self.numerator, self.den_exp)
        }
    }
}

/// The matrix `(q^t_exp, coeff; 0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    t_exp: i64,
    coeff: QFraction,
}

impl GroupElement {
    pub fn new(t_exp: i64, coeff: QFraction) -> Self {
        GroupElement { t_exp, coeff }
    }

    /// Builds `(k, numerator / q^den_exp)`, normalizing the coefficient.
    pub fn from_parts(t_exp: i64, numerator: BigInt, den_exp: u64, q: Base) -> Self {
        GroupElement {
            t_exp,
            coeff: QFraction::new(numerator, den_exp, q),
        }
    }

    pub fn identity() -> Self {
        GroupElement {
            t_exp: 0,
            coeff: QFraction::zero(),
        }
    }

    pub fn gen_a() -> Self {
        GroupElement {
            t_exp: 0,
            coeff: QFraction::one(),
        }
    }

    pub fn gen_t() -> Self {
        GroupElement {
            t_exp: 1,
            coeff: QFraction::zero(),
        }
    }

    pub fn t_exp(&self) -> i64 {
        self.t_exp
    }

    pub fn coeff(&self) -> &QFraction {
        &self.coeff
    }

    pub fn is_identity(&self) -> bool {
        self.t_exp == 0 && self.coeff.is_zero()
    }

    pub fn is_canonical(&self, q: Base) -> bool {
        self.coeff.is_canonical(q)
    }

    /// `(k, u) * (l, v) = (k + l, u + v q^k)`.
    pub fn multiply(&self, other: &GroupElement, q: Base) -> GroupElement {
        GroupElement {
            t_exp: self.t_exp + other.t_exp,
            coeff: self.coeff.add(&other.coeff.mul_q_pow(self.t_exp, q), q),
        }
    }

    /// `(k, u)^-1 = (-k, -u q^-k)`.
    pub fn inverse(&self, q: Base) -> GroupElement {
        GroupElement {
            t_exp: -self.t_exp,
            coeff: self.coeff.mul_q_pow(-self.t_exp, q).neg(),
        }
    }

    /// Closed-form `g^s`: `(l s, v (q^{ls} - 1) / (q^l - 1))`, or `(0, s v)` when `l = 0`.
    pub fn power(&self, s: u64, q: Base) -> GroupElement {
        if s == 0 {
            return GroupElement::identity();
        }
        let ell = self.t_exp;
        if ell == 0 {
            return GroupElement {
                t_exp: 0,
                coeff: self.coeff.mul_int(&BigInt::from(s), q),
            };
        }
        let step = ell.unsigned_abs();
        // sum_{j<s} q^{|l| j} is an exact integer
        let geometric = (q.pow(step * s) - 1u32) / (q.pow(step) - 1u32);
        let mut factor = QFraction::new(geometric, 0, q);
        if ell < 0 {
            // sum_{j<s} q^{-|l| j} = (sum_{j<s} q^{|l| j}) / q^{|l| (s - 1)}
            factor = factor.mul_q_pow(-((step * (s - 1)) as i64), q);
        }
        GroupElement {
            t_exp: ell * s as i64,
            coeff: self.coeff.mul(&factor, q),
        }
    }

    /// Membership in the integral part: `k >= 0` and an integer corner entry.
    pub fn is_integral(&self) -> bool {
        self.t_exp >= 0 && self.coeff.is_integer()
    }

    /// The integral pair `(U, M) = (u, q^k)` for an integral element.
    pub fn to_integral_pair(&self, q: Base) -> Option<(BigInt, BigInt)> {
        if !self.is_integral() {
            return None;
        }
        Some((self.coeff.numerator.clone(), q.pow(self.t_exp as u64)))
    }

    /// Inverse of [`GroupElement::to_integral_pair`]; `m` must be a positive power of `q`.
    pub fn from_integral_pair(u: &BigInt, m: &BigInt, q: Base) -> Option<GroupElement> {
        let k = log_exact(m, q)?;
        Some(GroupElement {
            t_exp: k as i64,
            coeff: QFraction::from_integer(u.clone()),
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t_exp, self.coeff)
    }
}

/// `Some(e)` when `m = q^e` for a natural `e`.
pub fn log_exact(m: &BigInt, q: Base) -> Option<u64> {
    if !m.is_positive() {
        return None;
    }
    let qb = q.big();
    let mut m = m.clone();
    let mut e = 0;
    while !m.is_one() {
        let (quot, rem) = m.div_rem(&qb);
        if !rem.is_zero() {
            return None;
        }
        m = quot;
        e += 1;
    }
    Some(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    T,
    TInv,
}

impl Letter {
    pub fn image(self, q: Base) -> GroupElement {
        match self {
            Letter::A => GroupElement::gen_a(),
            Letter::AInv => GroupElement::gen_a().inverse(q),
            Letter::T => GroupElement::gen_t(),
            Letter::TInv => GroupElement::gen_t().inverse(q),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::AInv => "a^-1",
            Letter::T => "t",
            Letter::TInv => "t^-1",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(pub Vec<Letter>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unexpected token `{token}` at token {index} (column {column})")]
pub struct WordError {
    /// 1-based token index.
    pub index: usize,
    /// 1-based character column.
    pub column: usize,
    pub token: String,
}

impl GroupWord {
    /// Tokenizes whitespace-separated `a`, `t`, `a^-1`, `t^-1`; `A` and `T` are the inverses.
    pub fn parse(text: &str) -> Result<GroupWord, WordError> {
        let mut letters = Vec::new();
        let mut index = 0;
        let mut column = 0;
        let mut rest = text;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            column += rest[..start].chars().count();
            rest = &rest[start..];
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let token = &rest[..end];
            index += 1;
            let letter = match token {
                "a" => Letter::A,
                "t" => Letter::T,
                "a^-1" | "A" => Letter::AInv,
                "t^-1" | "T" => Letter::TInv,
                _ => {
                    return Err(WordError {
                        index,
                        column: column + 1,
                        token: token.to_string(),
                    })
                }
            };
            letters.push(letter);
            column += token.chars().count();
            rest = &rest[end..];
        }
        Ok(GroupWord(letters))
    }

    /// Left-to-right product of the letter images.
    pub fn eval(&self, q: Base) -> GroupElement {
        self.0.iter().fold(GroupElement::identity(), |acc, l| {
            acc.multiply(&l.image(q), q)
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.token())?;
        }
        Ok(())
    }
}

/// Least `k` such that `(k, 0) * p` is integral for every prefix product `p` of `elems`,
/// the empty prefix included.
pub fn integral_shift(elems: &[GroupElement], q: Base) -> u64 {
    let mut prefix = GroupElement::identity();
    let mut k = 0u64;
    for g in std::iter::once(None).chain(elems.iter().map(Some)) {
        if let Some(g) = g {
            prefix = prefix.multiply(g, q);
        }
        let need_t = if prefix.t_exp < 0 {
            prefix.t_exp.unsigned_abs()
        } else {
            0
        };
        k = k.max(need_t).max(prefix.coeff.den_exp);
    }
    k
}

/// Product `g_1^{x_1} ... g_n^{x_n}` using closed-form powers.
pub fn power_product(gens: &[GroupElement], exps: &[u64], q: Base) -> GroupElement {
    gens.iter()
        .zip(exps)
        .fold(GroupElement::identity(), |acc, (g, &x)| {
            acc.multiply(&g.power(x, q), q)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    fn el(k: i64, num: i64, e: u64, b: Base) -> GroupElement {
        GroupElement::from_parts(k, BigInt::from(num), e, b)
    }

    #[test]
    fn parse_tokens() {
        let w = GroupWord::parse("t a t^-1").unwrap();
        assert_eq!(w.0, vec![Letter::T, Letter::A, Letter::TInv]);
        assert!(GroupWord::parse("").unwrap().is_empty());
        assert!(GroupWord::parse("   ").unwrap().is_empty());
        assert_eq!(
            GroupWord::parse("A T").unwrap().0,
            vec![Letter::AInv, Letter::TInv]
        );
        let err = GroupWord::parse("a b").unwrap_err();
        assert_eq!(err.index, 2);
        assert_eq!(err.column, 3);
        assert_eq!(err.token, "b");
    }

    #[test]
    fn eval_examples() {
        let b2 = q(2);
        let e = GroupWord::parse("t a t^-1").unwrap().eval(b2);
        assert_eq!(e, el(0, 2, 0, b2));
        let b3 = q(3);
        assert_eq!(GroupWord::parse("a t").unwrap().eval(b3), el(1, 1, 0, b3));
        assert!(GroupWord::parse("t t^-1").unwrap().eval(b3).is_identity());
    }

    #[test]
    fn multiply_inverse_power() {
        let b = q(2);
        assert_eq!(el(1, 0, 0, b).multiply(&el(0, 1, 0, b), b), el(1, 2, 0, b));
        assert_eq!(el(1, 1, 0, b).multiply(&el(1, 1, 0, b), b), el(2, 3, 0, b));
        assert_eq!(el(1, 1, 0, b).inverse(b), el(-1, -1, 1, b));
        assert_eq!(
            el(1, 1, 0, b).inverse(b).coeff().numerator(),
            &BigInt::from(-1)
        );
        assert_eq!(el(1, 0, 0, b).inverse(b), el(-1, 0, 0, b));
        assert_eq!(el(1, 1, 0, b).power(3, b), el(3, 7, 0, b));
        assert!(el(5, 3, 1, b).power(0, b).is_identity());
        assert_eq!(el(0, 2, 0, q(3)).power(5, q(3)), el(0, 10, 0, q(3)));
    }

    #[test]
    fn canonical_fraction() {
        let b = q(3);
        let f = QFraction::new(BigInt::from(9), 3, b);
        assert_eq!((f.numerator().clone(), f.den_exp()), (BigInt::from(1), 1));
        assert_eq!(QFraction::new(BigInt::zero(), 4, b).den_exp(), 0);
        assert!(QFraction::new(BigInt::from(6), 0, b).is_canonical(b));
    }

    #[test]
    fn integrality() {
        let b = q(2);
        assert!(el(0, 1, 0, b).is_integral());
        assert!(!el(-1, 0, 0, b).is_integral());
        assert!(!el(1, -1, 1, b).is_integral());
        assert_eq!(integral_shift(&[el(0, 1, 0, b)], b), 0);
        assert_eq!(integral_shift(&[el(-1, 0, 0, b)], b), 1);
        assert_eq!(integral_shift(&[el(0, 1, 0, b), el(-2, 0, 0, b)], b), 2);
    }

    #[test]
    fn exact_log() {
        let b = q(5);
        assert_eq!(log_exact(&BigInt::from(125), b), Some(3));
        assert_eq!(log_exact(&BigInt::from(1), b), Some(0));
        assert_eq!(log_exact(&BigInt::from(0), b), None);
        assert_eq!(log_exact(&BigInt::from(-5), b), None);
        assert_eq!(log_exact(&BigInt::from(50), b), None);
    }
}
