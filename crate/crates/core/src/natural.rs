//! Positive naturals, the Collatz step, and the two-adic split into
//! odd part `O(n)` and even part `E(n) = 2^v`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision integer `>= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(BigUint);

impl Natural {
    pub fn new(value: BigUint) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::Zero);
        }
        Ok(Natural(value))
    }

    pub fn from_u64(value: u64) -> Result<Self> {
        Self::new(BigUint::from(value))
    }

    pub fn one() -> Self {
        Natural(BigUint::one())
    }

    /// `base^exp`; `base` must be nonzero.
    pub fn pow(base: u32, exp: u32) -> Result<Self> {
        Self::new(BigUint::from(base).pow(exp))
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn is_odd(&self) -> bool {
        self.0.bit(0)
    }

    pub fn is_even(&self) -> bool {
        !self.is_odd()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }

    /// Exact 2-adic valuation.
    pub fn valuation(&self) -> u64 {
        // never None: the value is nonzero
        self.0.trailing_zeros().unwrap_or(0)
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Natural {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a natural number: {s:?}")));
        }
        let value = BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| Error::Parse(format!("not a natural number: {s:?}")))?;
        Natural::new(value)
    }
}

impl TryFrom<u64> for Natural {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Natural::from_u64(value)
    }
}

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n` factored as `odd_part * 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoAdicSplit {
    pub odd_part: Natural,
    pub exponent: u64,
}

impl TwoAdicSplit {
    pub fn even_part(&self) -> Natural {
        Natural(BigUint::one() << self.exponent)
    }

    pub fn reconstruct(&self) -> Natural {
        Natural(self.odd_part.as_biguint() << self.exponent)
    }
}

/// One application of the Collatz map: `n/2` for even `n`, `3n+1` for odd `n`.
pub fn collatz_step(n: &Natural) -> Natural {
    Natural(step_biguint(&n.0))
}

pub(crate) fn step_biguint(n: &BigUint) -> BigUint {
    if n.bit(0) {
        n * 3u32 + 1u32
    } else {
        n >> 1u32
    }
}

pub(crate) fn step_in_place(n: &mut BigUint) {
    if n.bit(0) {
        *n *= 3u32;
        *n += 1u32;
    } else {
        *n >>= 1u32;
    }
}

pub fn two_adic_split(n: &Natural) -> TwoAdicSplit {
    let exponent = n.valuation();
    TwoAdicSplit {
        odd_part: Natural(n.as_biguint() >> exponent),
        exponent,
    }
}

/// `O(n)`: `n` with every factor of 2 removed.
pub fn odd_part(n: &Natural) -> Natural {
    two_adic_split(n).odd_part
}

/// `E(n)`: the largest power of 2 dividing `n`.
pub fn even_part(n: &Natural) -> Natural {
    two_adic_split(n).even_part()
}
