use std::fmt;

use num_bigint::BigInt;
use num_traits::pow::Pow;
use thiserror::Error;

/// The parameter `q >= 2` shared by the group `BS(1,q)` and the base-`q` digit encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base(u32);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("base must be at least 2, got {0}")]
pub struct InvalidBase(pub u64);

impl Base {
    pub fn new(q: u32) -> Result<Self, InvalidBase> {
        if q < 2 {
            Err(InvalidBase(q as u64))
        } else {
            Ok(Base(q))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Largest digit, which doubles as the negative sign digit.
    #[inline]
    pub fn top_digit(self) -> u32 {
        self.0 - 1
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `q^e` as an arbitrary-precision integer.
    pub fn pow(self, e: u64) -> BigInt {
        Pow::pow(self.big(), e)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for Base {
    type Error = InvalidBase;

    fn try_from(q: u32) -> Result<Self, Self::Error> {
        Base::new(q)
    }
}
