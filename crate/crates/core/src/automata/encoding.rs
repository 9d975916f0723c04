//! Least-significant-digit-first `q`-complement encoding of integer tuples.
//!
//! A track `d_0 d_1 ... d_{n-1}` denotes `sum_{i<n-1} d_i q^i + z(d_{n-1}) q^{n-1}` where
//! `z(d) = d` for `d <= q - 2` and `z(q - 1) = -1`. Appending the sign digit (`0` for a
//! nonnegative value, `q - 1` for a negative one) leaves the value unchanged. All tracks
//! of a word share one length.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::base::Base;

/// A nonempty word of digit tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodedWord {
    arity: usize,
    letters: Vec<Box<[u32]>>,
}

impl EncodedWord {
    /// Panics if `letters` is empty or a letter has the wrong width.
    pub fn new(arity: usize, letters: Vec<Vec<u32>>) -> Self {
        assert!(!letters.is_empty(), "encoded words are nonempty");
        assert!(
            letters.iter().all(|l| l.len() == arity),
            "letter width must equal the arity"
        );
        EncodedWord {
            arity,
            letters: letters.into_iter().map(Vec::into_boxed_slice).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = &[u32]> {
        self.letters.iter().map(|l| &l[..])
    }

    pub fn last(&self) -> &[u32] {
        self.letters.last().expect("nonempty")
    }

    /// The word extended by its padding letter.
    pub fn padded(&self, q: Base) -> EncodedWord {
        let mut letters = self.letters.clone();
        letters.push(pad_letter(self.last(), q).into_boxed_slice());
        EncodedWord {
            arity: self.arity,
            letters,
        }
    }

    /// Digits of one track, least significant first.
    pub fn track(&self, i: usize) -> Vec<u32> {
        self.letters.iter().map(|l| l[i]).collect()
    }

    pub fn digits_in_range(&self, q: Base) -> bool {
        self.letters.iter().all(|l| l.iter().all(|&d| d < q.get()))
    }
}

impl fmt::Display for EncodedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("[")?;
            for (j, d) in l.iter().enumerate() {
                if j > 0 {
                    f.write_str(":")?;
                }
                write!(f, "{d}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// The letter whose digits are each track's sign digit after reading `letter` last.
pub fn pad_letter(letter: &[u32], q: Base) -> Vec<u32> {
    letter.iter().map(|&d| sign_digit(d, q)).collect()
}

#[inline]
pub(crate) fn sign_digit(d: u32, q: Base) -> u32 {
    if d == q.top_digit() {
        d
    } else {
        0
    }
}

/// Value of a digit read in the most significant (sign) position.
#[inline]
pub(crate) fn last_digit_value(d: u32, q: Base) -> i64 {
    if d == q.top_digit() {
        -1
    } else {
        d as i64
    }
}

/// Shortest single-track digit string denoting `value`.
pub fn encode_track(value: &BigInt, q: Base) -> Vec<u32> {
    let qb = q.big();
    let top = BigInt::from(q.top_digit());
    let mut v = value.clone();
    let mut digits = Vec::new();
    loop {
        if !v.is_negative() && v < top {
            digits.push(v.to_u32_digits().1.first().copied().unwrap_or(0));
            return digits;
        }
        if v == -BigInt::one() {
            digits.push(q.top_digit());
            return digits;
        }
        let d = v.mod_floor(&qb);
        digits.push(d.to_u32_digits().1.first().copied().unwrap_or(0));
        v = (v - d) / &qb;
    }
}

/// Shortest word denoting `values`; the empty tuple encodes as one empty letter.
pub fn encode(values: &[BigInt], q: Base) -> EncodedWord {
    let tracks: Vec<Vec<u32>> = values.iter().map(|v| encode_track(v, q)).collect();
    let len = tracks.iter().map(Vec::len).max().unwrap_or(1);
    let letters = (0..len)
        .map(|i| {
            tracks
                .iter()
                .map(|t| {
                    if i < t.len() {
                        t[i]
                    } else {
                        sign_digit(*t.last().unwrap(), q)
                    }
                })
                .collect()
        })
        .collect();
    EncodedWord::new(values.len(), letters)
}

pub fn decode_track(digits: &[u32], q: Base) -> BigInt {
    let (last, rest) = digits.split_last().expect("nonempty track");
    let qb = q.big();
    let mut value = BigInt::from(last_digit_value(*last, q));
    for &d in rest.iter().rev() {
        value = value * &qb + d;
    }
    value
}

pub fn decode(word: &EncodedWord, q: Base) -> Vec<BigInt> {
    (0..word.arity())
        .map(|i| decode_track(&word.track(i), q))
        .collect()
}

pub fn encode_i64(values: &[i64], q: Base) -> EncodedWord {
    let v: Vec<BigInt> = values.iter().map(|&x| BigInt::from(x)).collect();
    encode(&v, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(q: u32) -> Base {
        Base::new(q).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(encode_i64(&[0], b(2)).track(0), vec![0]);
        assert_eq!(encode_i64(&[3], b(2)).track(0), vec![1, 1, 0]);
        assert_eq!(encode_i64(&[-2], b(3)).track(0), vec![1, 2]);
        assert_eq!(decode_track(&[1], b(2)), BigInt::from(-1));
        assert_eq!(decode_track(&[1, 1, 0], b(2)), BigInt::from(3));
        assert_eq!(decode_track(&[0], b(5)), BigInt::from(0));
    }

    #[test]
    fn tracks_share_length() {
        let w = encode_i64(&[3, -1], b(2));
        assert_eq!(w.len(), 3);
        assert_eq!(w.track(1), vec![1, 1, 1]);
        assert_eq!(decode(&w, b(2)), vec![BigInt::from(3), BigInt::from(-1)]);
    }

    #[test]
    fn empty_tuple() {
        let w = encode(&[], b(3));
        assert_eq!(w.len(), 1);
        assert_eq!(w.arity(), 0);
        assert!(decode(&w, b(3)).is_empty());
    }
}
