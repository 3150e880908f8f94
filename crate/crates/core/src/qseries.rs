//! Truncated power series in `q` over a [`CoeffRing`].
//!
//! A [`QSeries`] with truncation `T` tracks the coefficients of
//! `q^0 ..= q^T` densely; everything of higher degree is discarded.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{reduce_bigint, Arith, CoeffRing, ExactArith, ModArith};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coeffs {
    Exact(Vec<BigInt>),
    Modular(Vec<u64>),
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Modular(v) => v.len(),
        }
    }
}

/// A power series in `q`, truncated after `q^T` (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    ring: CoeffRing,
    coeffs: Coeffs,
}

impl QSeries {
    pub fn zero(ring: CoeffRing, trunc: usize) -> Self {
        let coeffs = match ring {
            CoeffRing::Exact => Coeffs::Exact(vec![BigInt::zero(); trunc + 1]),
            CoeffRing::Mod(_) => Coeffs::Modular(vec![0; trunc + 1]),
        };
        QSeries { ring, coeffs }
    }

    pub fn one(ring: CoeffRing, trunc: usize) -> Self {
        let mut s = Self::zero(ring, trunc);
        match &mut s.coeffs {
            Coeffs::Exact(v) => v[0] = BigInt::one(),
            Coeffs::Modular(v) => v[0] = 1,
        }
        s
    }

    /// Builds a series from small integer coefficients; `trunc = coeffs.len() - 1`.
    ///
    /// Values are reduced into the ring.
    pub fn from_i64s(ring: CoeffRing, coeffs: &[i64]) -> Result<Self> {
        Self::from_bigints(ring, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds a series from exact coefficients; `trunc = coeffs.len() - 1`.
    pub fn from_bigints(ring: CoeffRing, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a series needs at least the q^0 coefficient".into()));
        }
        let coeffs = match ring {
            CoeffRing::Exact => Coeffs::Exact(coeffs),
            CoeffRing::Mod(m) => {
                Coeffs::Modular(coeffs.iter().map(|c| reduce_bigint(c, m.get())).collect())
            }
        };
        Ok(QSeries { ring, coeffs })
    }

    pub(crate) fn from_exact(coeffs: Vec<BigInt>) -> Self {
        debug_assert!(!coeffs.is_empty());
        QSeries { ring: CoeffRing::Exact, coeffs: Coeffs::Exact(coeffs) }
    }

    pub(crate) fn from_residues(ring: CoeffRing, coeffs: Vec<u64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(matches!(ring, CoeffRing::Mod(m) if coeffs.iter().all(|&c| c < m.get())));
        QSeries { ring, coeffs: Coeffs::Modular(coeffs) }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`; zero past the truncation.
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(v) => v.get(n).cloned().unwrap_or_default(),
            Coeffs::Modular(v) => BigInt::from(v.get(n).copied().unwrap_or(0)),
        }
    }

    /// All coefficients `c_0 ..= c_T`.
    pub fn coeffs(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Modular(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// The residues, if the series lives in a modular ring.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Modular(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().all(Zero::is_zero),
            Coeffs::Modular(v) => v.iter().all(|&c| c == 0),
        }
    }

    fn check_compatible(&self, other: &QSeries) -> Result<()> {
        self.ring.check_same(other.ring)?;
        if self.trunc() != other.trunc() {
            return Err(Error::TruncMismatch { left: self.trunc(), right: other.trunc() });
        }
        Ok(())
    }

    fn mod_arith(&self) -> ModArith {
        ModArith(self.ring.modulus().unwrap_or(0))
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.check_compatible(other)?;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(add_dense(&ExactArith, a, b)),
            (Coeffs::Modular(a), Coeffs::Modular(b)) => {
                Coeffs::Modular(add_dense(&self.mod_arith(), a, b))
            }
            _ => unreachable!("ring check guarantees matching storage"),
        };
        Ok(QSeries { ring: self.ring, coeffs })
    }

    /// Cauchy product truncated at `q^T`.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_compatible(other)?;
        let len = self.trunc() + 1;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(mul_dense(&ExactArith, a, b, len)),
            (Coeffs::Modular(a), Coeffs::Modular(b)) => {
                Coeffs::Modular(mul_dense(&self.mod_arith(), a, b, len))
            }
            _ => unreachable!("ring check guarantees matching storage"),
        };
        Ok(QSeries { ring: self.ring, coeffs })
    }

    /// `self^e` by repeated squaring, truncating after every product.
    pub fn pow(&self, mut e: u64) -> QSeries {
        let mut result = QSeries::one(self.ring, self.trunc());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same ring and truncation");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring and truncation");
            }
        }
        result
    }

    /// Reduces every coefficient into `[0, m)`.
    ///
    /// Exact series reduce directly. A series already modulo `m'` can be
    /// reduced further when `m` divides `m'`.
    pub fn reduce(&self, m: u64) -> Result<QSeries> {
        let ring = CoeffRing::modulo(m)?;
        let residues = match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|c| reduce_bigint(c, m)).collect(),
            Coeffs::Modular(v) => {
                let current = self.mod_arith().0;
                if !current.is_multiple_of(m) {
                    return Err(Error::Invalid(format!(
                        "cannot reduce a series mod {current} to mod {m}"
                    )));
                }
                v.iter().map(|&c| c % m).collect()
            }
        };
        Ok(QSeries::from_residues(ring, residues))
    }

    /// The same series with fewer tracked terms.
    pub fn truncated(&self, trunc: usize) -> QSeries {
        let keep = trunc.min(self.trunc()) + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[..keep].to_vec()),
            Coeffs::Modular(v) => Coeffs::Modular(v[..keep].to_vec()),
        };
        QSeries { ring: self.ring, coeffs }
    }

    /// `q^s * self`, keeping the truncation.
    pub fn shifted(&self, s: usize) -> QSeries {
        let len = self.trunc() + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, c) in v.iter().enumerate().take(len.saturating_sub(s)) {
                    out[i + s] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Modular(v) => {
                let mut out = vec![0; len];
                for (i, &c) in v.iter().enumerate().take(len.saturating_sub(s)) {
                    out[i + s] = c;
                }
                Coeffs::Modular(out)
            }
        };
        QSeries { ring: self.ring, coeffs }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{}) [{}]", self.trunc() + 1, self.ring)
    }
}

fn add_dense<A: Arith>(ar: &A, a: &[A::Elem], b: &[A::Elem]) -> Vec<A::Elem> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut s = x.clone();
            ar.add_assign(&mut s, y);
            s
        })
        .collect()
}

// Schoolbook; fine for the few-thousand-term series used here.
pub(crate) fn mul_dense<A: Arith>(ar: &A, a: &[A::Elem], b: &[A::Elem], len: usize) -> Vec<A::Elem> {
    let mut out = vec![ar.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if ar.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            ar.mul_add(&mut out[i + j], x, y);
        }
    }
    out
}

/// `sum p(n) q^n` for `n <= trunc`, from Euler's pentagonal-number recurrence.
pub fn partition_series(trunc: usize) -> QSeries {
    let mut p: Vec<BigInt> = Vec::with_capacity(trunc + 1);
    p.push(BigInt::one());
    for n in 1..=trunc {
        let mut total = BigInt::zero();
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = j * (3 * j + 1) / 2;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if j % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        p.push(total);
    }
    QSeries::from_exact(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact(c: &[i64]) -> QSeries {
        QSeries::from_i64s(CoeffRing::Exact, c).unwrap()
    }

    fn modular(m: u64, c: &[i64]) -> QSeries {
        QSeries::from_i64s(CoeffRing::modulo(m).unwrap(), c).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(exact(&[1, 1, 0]).add(&exact(&[1, 0, 2])).unwrap(), exact(&[2, 1, 2]));
        let a = exact(&[3, -1, 7]);
        assert_eq!(a.add(&QSeries::zero(CoeffRing::Exact, 2)).unwrap(), a);
        assert_eq!(modular(5, &[0, 4]).add(&modular(5, &[0, 3])).unwrap(), modular(5, &[0, 2]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(exact(&[1, 1, 0]).mul(&exact(&[1, 1, 0])).unwrap(), exact(&[1, 2, 1]));
        assert_eq!(exact(&[1, 1]).mul(&exact(&[1, 1])).unwrap(), exact(&[1, 2]));
        let a = exact(&[2, -3, 5, 1]);
        assert_eq!(a.mul(&QSeries::one(CoeffRing::Exact, 3)).unwrap(), a);
    }

    #[test]
    fn pow_examples() {
        let a = exact(&[1, 1, 0, 0]);
        assert_eq!(a.pow(0), QSeries::one(CoeffRing::Exact, 3));
        assert_eq!(a.pow(3), exact(&[1, 3, 3, 1]));
        assert_eq!(modular(3, &[1, 1, 0, 0]).pow(3), modular(3, &[1, 0, 0, 1]));
    }

    #[test]
    fn mismatches_are_rejected() {
        let a = exact(&[1, 1]);
        assert!(matches!(a.add(&exact(&[1, 1, 1])), Err(Error::TruncMismatch { .. })));
        assert!(matches!(a.mul(&modular(5, &[1, 1])), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(exact(&[5, 6]).reduce(5).unwrap(), modular(5, &[0, 1]));
        assert_eq!(exact(&[-1, 1]).reduce(5).unwrap().residues().unwrap(), &[4, 1]);
        assert_eq!(partition_series(4).reduce(5).unwrap().residues().unwrap(), &[1, 1, 2, 3, 0]);
        assert_eq!(exact(&[1]).reduce(1), Err(Error::InvalidModulus(1)));
        assert!(modular(15, &[7]).reduce(5).is_ok());
        assert!(modular(15, &[7]).reduce(7).is_err());
    }

    #[test]
    fn partition_numbers() {
        let expected: Vec<BigInt> = [1, 1, 2, 3, 5, 7].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(partition_series(5).coeffs(), expected);
        assert_eq!(partition_series(0).coeff(0), BigInt::one());
        assert_eq!(partition_series(100).coeff(100), "190569292".parse::<BigInt>().unwrap());
        assert_eq!(
            partition_series(200).coeff(200),
            "3972999029388".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn partition_numbers_positive_and_nondecreasing() {
        let p = partition_series(300).coeffs();
        assert!(p.iter().all(|c| *c > BigInt::zero()));
        assert!(p[1..].windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn display() {
        assert_eq!(exact(&[1, 0, -2]).to_string(), "1 + -2q^2 + O(q^3) [exact]");
    }

    fn small_series(len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-50i64..50, len)
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_homomorphism(
            (a, b) in (1usize..12).prop_flat_map(|n| (small_series(n), small_series(n))),
            m in 2u64..40,
            e in 0u64..5,
        ) {
            let (a, b) = (exact(&a), exact(&b));
            let r = |s: &QSeries| s.reduce(m).unwrap();
            prop_assert_eq!(r(&a.add(&b).unwrap()), r(&a).add(&r(&b)).unwrap());
            prop_assert_eq!(r(&a.mul(&b).unwrap()), r(&a).mul(&r(&b)).unwrap());
            prop_assert_eq!(r(&a.pow(e)), r(&a).pow(e));
        }

        #[test]
        fn truncation_commutes_with_products(
            (a, b) in (2usize..14).prop_flat_map(|n| (small_series(n), small_series(n))),
            cut in 0usize..14,
            e in 0u64..4,
        ) {
            let (a, b) = (exact(&a), exact(&b));
            let cut = cut.min(a.trunc());
            let direct = a.truncated(cut).mul(&b.truncated(cut)).unwrap();
            prop_assert_eq!(a.mul(&b).unwrap().truncated(cut), direct);
            prop_assert_eq!(a.pow(e).truncated(cut), a.truncated(cut).pow(e));
        }

        #[test]
        fn pow_matches_repeated_multiplication(c in small_series(8), e in 0u64..=8) {
            let a = exact(&c);
            let mut naive = QSeries::one(CoeffRing::Exact, a.trunc());
            for _ in 0..e {
                naive = naive.mul(&a).unwrap();
            }
            prop_assert_eq!(a.pow(e), naive);
        }
    }
}
