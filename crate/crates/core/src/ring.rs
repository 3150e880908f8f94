//! Coefficient rings: exact integers or integers modulo `m`.
//!
//! Series types pick their arithmetic at runtime through [`CoeffRing`]. The
//! inner loops are written once against the [`Arith`] trait and instantiated
//! for `BigInt` and for canonical `u64` residues.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus `m >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Modulus(m))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(m: u64) -> Result<Self> {
        Modulus::new(m)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

/// Arithmetic semantics of series coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffRing {
    /// Arbitrary-precision signed integers.
    Exact,
    /// Integers modulo `m`, stored as canonical residues `0 <= c < m`.
    Mod(Modulus),
}

impl CoeffRing {
    /// Shorthand for `CoeffRing::Mod(Modulus::new(m)?)`.
    pub fn modulo(m: u64) -> Result<Self> {
        Ok(CoeffRing::Mod(Modulus::new(m)?))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            CoeffRing::Exact => None,
            CoeffRing::Mod(m) => Some(m.get()),
        }
    }

    pub(crate) fn check_same(self, other: CoeffRing) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Exact => write!(f, "exact"),
            CoeffRing::Mod(m) => write!(f, "mod {}", m.get()),
        }
    }
}

/// Element-level operations shared by the series kernels.
pub(crate) trait Arith {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn embed(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, v: &Self::Elem) -> bool;
    fn is_one(&self, v: &Self::Elem) -> bool;
    fn add_assign(&self, acc: &mut Self::Elem, x: &Self::Elem);
    /// `acc += a * b`
    fn mul_add(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ExactArith;

impl Arith for ExactArith {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn embed(&self, v: &BigInt) -> BigInt {
        v.clone()
    }

    fn is_zero(&self, v: &BigInt) -> bool {
        v.is_zero()
    }

    fn is_one(&self, v: &BigInt) -> bool {
        v.is_one()
    }

    fn add_assign(&self, acc: &mut BigInt, x: &BigInt) {
        *acc += x;
    }

    fn mul_add(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *acc += a * b;
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ModArith(pub u64);

impl ModArith {
    #[inline(always)]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        if self.0 <= 1 << 63 {
            let s = a + b;
            return s.min(s.wrapping_sub(self.0));
        }
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= self.0 {
            s.wrapping_sub(self.0)
        } else {
            s
        }
    }
}

impl Arith for ModArith {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn embed(&self, v: &BigInt) -> u64 {
        reduce_bigint(v, self.0)
    }

    fn is_zero(&self, v: &u64) -> bool {
        *v == 0
    }

    fn is_one(&self, v: &u64) -> bool {
        *v == 1
    }

    #[inline(always)]
    fn add_assign(&self, acc: &mut u64, x: &u64) {
        *acc = self.add(*acc, *x);
    }

    #[inline(always)]
    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64) {
        if self.0 <= 1 << 32 {
            *acc = (*acc + *a * *b) % self.0;
            return;
        }
        let prod = (*a as u128 * *b as u128 % self.0 as u128) as u64;
        *acc = self.add(*acc, prod);
    }
}

/// Canonical nonnegative residue of `v` modulo `m`.
pub fn reduce_bigint(v: &BigInt, m: u64) -> u64 {
    let modulus = BigInt::from(m);
    let mut r = v % &modulus;
    if r.sign() == Sign::Minus {
        r += &modulus;
    }
    r.to_u64().expect("residue below a u64 modulus fits in u64")
}

/// Binomial coefficients `C(n, 0..=n)`.
pub(crate) fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 1..=n {
        c = c * BigInt::from(n - i + 1) / BigInt::from(i);
        row.push(c.clone());
    }
    row
}

/// Deterministic primality test by trial division; moduli here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Digits of `n` in base `b`, least significant first. `n = 0` yields `[]`.
pub fn base_digits(mut n: u64, b: u64) -> Vec<u64> {
    assert!(b >= 2, "base must be at least 2");
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % b);
        n /= b;
    }
    digits
}
