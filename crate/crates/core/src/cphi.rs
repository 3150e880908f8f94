//! Tables of `cφ_k(n)` computed along several independent paths.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ctengine::{
    base_factors, build_base_product, constant_term_of_product, window_bounds, BinomialFactor,
    WindowBudget, ZWindow, ZWindowSeries,
};
use crate::error::{Error, Result};
use crate::qseries::{partition_series, QSeries};
use crate::ring::{base_digits, is_prime, CoeffRing};

/// Largest truncation accepted by [`cphi_unpruned`].
pub const UNPRUNED_MAX_TRUNC: usize = 12;
/// Largest color count accepted by [`cphi_unpruned`].
pub const UNPRUNED_MAX_COLORS: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Descent,
    Theta,
    Unpruned,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Direct => "direct",
            Method::Descent => "descent",
            Method::Theta => "theta",
            Method::Unpruned => "unpruned",
        };
        f.write_str(s)
    }
}

/// `cφ_k(0) ..= cφ_k(T)` in some ring, tagged with the path that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CphiTable {
    k: u64,
    method: Method,
    values: QSeries,
}

impl CphiTable {
    fn new(k: u64, method: Method, values: QSeries) -> Result<Self> {
        if values.coeff(0) != BigInt::from(1) {
            return Err(Error::Internal(format!(
                "cφ_{k}(0) came out as {} via {method}",
                values.coeff(0)
            )));
        }
        Ok(CphiTable { k, method, values })
    }

    pub fn colors(&self) -> u64 {
        self.k
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn ring(&self) -> CoeffRing {
        self.values.ring()
    }

    pub fn trunc(&self) -> usize {
        self.values.trunc()
    }

    /// `cφ_k(n)` in the table's ring.
    pub fn value(&self, n: usize) -> BigInt {
        self.values.coeff(n)
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.values.coeffs()
    }

    /// The generating function as a series.
    pub fn series(&self) -> &QSeries {
        &self.values
    }
}

fn check_colors(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::ZeroColors)
    } else {
        Ok(())
    }
}

/// Constant term of the windowed `k`-colored product.
pub fn cphi_direct(k: u64, trunc: usize, ring: CoeffRing) -> Result<CphiTable> {
    check_colors(k)?;
    let product = build_base_product(k, trunc, ring)?;
    CphiTable::new(k, Method::Direct, product.constant_term())
}

/// Factors of `prod_i P(z^{p^i}, q^{p^i})^{k_i}` where `k = sum k_i p^i` and
/// `P` is the one-color product. Each digit contributes the one-color factor
/// list at truncation `T / p^i`, re-indexed by `p^i`.
pub(crate) fn descent_factors(k: u64, trunc: usize, p: u64) -> Vec<BinomialFactor> {
    let mut factors = Vec::new();
    let mut scale = 1u64;
    for (i, digit) in base_digits(k, p).into_iter().enumerate() {
        if i > 0 {
            scale *= p;
        }
        if digit == 0 {
            continue;
        }
        let sub_trunc = trunc / scale as usize;
        for f in base_factors(digit, sub_trunc, sub_trunc) {
            factors.push(BinomialFactor {
                z_step: f.z_step * scale as i64,
                q_step: f.q_step * scale as usize,
                power: f.power,
            });
        }
    }
    factors
}

/// `cφ_k(n) mod p` via `(1 + x)^p ≡ 1 + x^p (mod p)` applied to the base-`p`
/// digits of `k`. Each digit only costs factors of degree `< p`, so the work
/// grows with `log_p k` rather than with `k`.
pub fn cphi_mod_descent(k: u64, trunc: usize, p: u64) -> Result<CphiTable> {
    check_colors(k)?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let ring = CoeffRing::modulo(p)?;
    // The clip is the window for the full color count k, not per digit.
    let budget = WindowBudget::new(k, trunc)?;
    let values = constant_term_of_product(ring, budget, &descent_factors(k, trunc, p));
    CphiTable::new(k, Method::Descent, values)
}

/// Terms `z^m q^{m(m+1)/2}` of the theta series with `q`-degree `<= trunc`.
pub(crate) fn theta_terms(trunc: usize) -> Vec<(i64, usize, BigInt)> {
    let mut terms = Vec::new();
    // z^{-m} q^{m(m-1)/2} is never more expensive than z^m q^{m(m+1)/2}.
    for m in 0i64.. {
        let neg = (m * (m - 1) / 2) as usize;
        if m > 0 && neg > trunc {
            break;
        }
        let pos = (m * (m + 1) / 2) as usize;
        if pos <= trunc {
            terms.push((m, pos, BigInt::from(1)));
        }
        if m > 0 {
            terms.push((-m, neg, BigInt::from(1)));
        }
    }
    terms
}

/// Second path through the triple product: the one-color product equals
/// `(sum_m z^m q^{m(m+1)/2}) / prod (1 - q^{n+1})`, so `cφ_k` is the `z^0`
/// row of the theta series to the `k`-th power times `(sum p(n) q^n)^k`.
pub fn cphi_theta(k: u64, trunc: usize, ring: CoeffRing) -> Result<CphiTable> {
    check_colors(k)?;
    let window = window_bounds(k, trunc)?;
    let theta = theta_terms(trunc);
    let mut power = ZWindowSeries::one(ring, trunc, window);
    for _ in 0..k {
        power.mul_sparse(&theta);
    }
    let mut euler_inverse = partition_series(trunc);
    if let Some(m) = ring.modulus() {
        euler_inverse = euler_inverse.reduce(m)?;
    }
    let values = power.constant_term().mul(&euler_inverse.pow(k))?;
    CphiTable::new(k, Method::Theta, values)
}

/// Brute-force oracle: the full product with no window pruning, factors in
/// reverse order, every binomial power applied as `k` separate products.
pub fn cphi_unpruned(k: u64, trunc: usize) -> Result<CphiTable> {
    check_colors(k)?;
    if trunc > UNPRUNED_MAX_TRUNC || k > UNPRUNED_MAX_COLORS {
        return Err(Error::Bounds(format!(
            "unpruned oracle needs T <= {UNPRUNED_MAX_TRUNC} and k <= {UNPRUNED_MAX_COLORS}, got T = {trunc}, k = {k}"
        )));
    }
    let ring = CoeffRing::Exact;
    let reach = k as i64 * (trunc as i64 + 1);
    let full = ZWindow::new(-reach, reach)?;
    let mut acc = ZWindowSeries::one(ring, trunc, full);
    let mut factors = base_factors(1, trunc, trunc);
    factors.reverse();
    for f in factors {
        let mut x = vec![0i64; trunc + 1];
        x[f.q_step] = 1;
        let factor = ZWindowSeries::from_rows(
            ring,
            trunc,
            ZWindow::new(-1, 1)?,
            &[
                (0, QSeries::one(ring, trunc)),
                (f.z_step, QSeries::from_i64s(ring, &x)?),
            ],
        )?;
        for _ in 0..k {
            acc = acc.mul(&factor, full)?;
        }
    }
    CphiTable::new(k, Method::Unpruned, acc.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctengine::base_factors;

    fn ints(t: &CphiTable) -> Vec<i64> {
        t.values().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn direct_examples() {
        let t = cphi_direct(1, 10, CoeffRing::Exact).unwrap();
        assert_eq!(t.series(), &partition_series(10));
        assert_eq!(t.method(), Method::Direct);
        assert_eq!(ints(&cphi_direct(2, 1, CoeffRing::Exact).unwrap()), vec![1, 4]);
        assert_eq!(ints(&cphi_direct(3, 1, CoeffRing::Exact).unwrap()), vec![1, 9]);
        for k in 1..=8 {
            assert_eq!(cphi_direct(k, 0, CoeffRing::Exact).unwrap().value(0), BigInt::from(1));
            assert_eq!(cphi_direct(k, 1, CoeffRing::Exact).unwrap().value(1), BigInt::from(k * k));
        }
        assert_eq!(cphi_direct(0, 3, CoeffRing::Exact), Err(Error::ZeroColors));
    }

    #[test]
    fn descent_examples() {
        assert_eq!(base_digits(7, 5), vec![2, 1]);
        let t = cphi_mod_descent(1, 10, 5).unwrap();
        assert_eq!(t.series(), &partition_series(10).reduce(5).unwrap());
        let t = cphi_mod_descent(2, 8, 5).unwrap();
        assert_eq!(t.value(3), BigInt::from(0));
        assert_eq!(t.value(8), BigInt::from(0));
        assert_eq!(cphi_mod_descent(3, 5, 6), Err(Error::NotPrime(6)));
        assert_eq!(cphi_mod_descent(0, 5, 5), Err(Error::ZeroColors));
    }

    #[test]
    fn descent_of_seven_colors_mod_five() {
        // P(z,q)^2 * P(z^5,q^5), assembled from materialized, re-indexed factors.
        let t = 20;
        let ring = CoeffRing::modulo(5).unwrap();
        let wide = ZWindow::new(-7 * 21, 7 * 21).unwrap();
        let low = ZWindowSeries::product(ring, t, wide, &base_factors(2, t, t));
        let sub = t / 5;
        let sub_window = ZWindow::new(-(sub as i64 + 1), sub as i64).unwrap();
        let high = ZWindowSeries::product(ring, sub, sub_window, &base_factors(1, sub, sub))
            .reindexed(5, t, wide)
            .unwrap();
        let expected = low.mul(&high, wide).unwrap().constant_term();
        assert_eq!(cphi_mod_descent(7, t, 5).unwrap().series(), &expected);
    }

    #[test]
    fn materialized_descent_agrees() {
        for p in [2u64, 3, 5] {
            for k in 1..=12u64 {
                let t = 16;
                let ring = CoeffRing::modulo(p).unwrap();
                let reach = k as i64 * (t as i64 + 1);
                let wide = ZWindow::new(-reach, reach).unwrap();
                let mut acc = ZWindowSeries::one(ring, t, wide);
                let mut scale = 1u64;
                for (i, digit) in base_digits(k, p).into_iter().enumerate() {
                    if i > 0 {
                        scale *= p;
                    }
                    if digit == 0 {
                        continue;
                    }
                    let sub = t / scale as usize;
                    let r = digit as i64 * (sub as i64 + 1);
                    let sub_window = ZWindow::new(-r, r).unwrap();
                    let factor =
                        ZWindowSeries::product(ring, sub, sub_window, &base_factors(digit, sub, sub))
                            .reindexed(scale, t, wide)
                            .unwrap();
                    acc = acc.mul(&factor, wide).unwrap();
                }
                assert_eq!(
                    cphi_mod_descent(k, t, p).unwrap().series(),
                    &acc.constant_term(),
                    "k={k} p={p}"
                );
            }
        }
    }

    #[test]
    fn single_digit_descent_is_plain_reduction() {
        for p in [5u64, 7, 11] {
            for k in 1..p {
                let direct = cphi_direct(k, 30, CoeffRing::Exact).unwrap();
                assert_eq!(
                    descent_factors(k, 30, p),
                    base_factors(k, 30, 30),
                    "a single digit needs no substitution"
                );
                assert_eq!(
                    direct.series().reduce(p).unwrap(),
                    *cphi_mod_descent(k, 30, p).unwrap().series()
                );
            }
        }
    }

    #[test]
    fn theta_terms_exponents() {
        let terms = theta_terms(3);
        let mut got: Vec<(i64, usize)> = terms.iter().map(|(m, d, _)| (*m, *d)).collect();
        got.sort();
        assert_eq!(got, vec![(-3, 3), (-2, 1), (-1, 0), (0, 0), (1, 1), (2, 3)]);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(
            cphi_theta(1, 10, CoeffRing::Exact).unwrap().series(),
            cphi_direct(1, 10, CoeffRing::Exact).unwrap().series()
        );
        assert_eq!(
            cphi_theta(3, 20, CoeffRing::Exact).unwrap().series(),
            cphi_direct(3, 20, CoeffRing::Exact).unwrap().series()
        );
        let ring = CoeffRing::modulo(7).unwrap();
        assert_eq!(
            cphi_theta(4, 25, ring).unwrap().series(),
            cphi_direct(4, 25, ring).unwrap().series()
        );
    }

    #[test]
    fn unpruned_examples() {
        assert_eq!(ints(&cphi_unpruned(2, 1).unwrap()), vec![1, 4]);
        assert_eq!(ints(&cphi_unpruned(1, 4).unwrap()), vec![1, 1, 2, 3, 5]);
        assert_eq!(ints(&cphi_unpruned(4, 0).unwrap()), vec![1]);
        assert!(matches!(cphi_unpruned(7, 3), Err(Error::Bounds(_))));
        assert!(matches!(cphi_unpruned(2, 13), Err(Error::Bounds(_))));
        assert_eq!(cphi_unpruned(2, 3).unwrap().method(), Method::Unpruned);
    }

    #[test]
    fn dominates_partition_numbers() {
        let p = partition_series(30).coeffs();
        for k in 1..=6 {
            let t = cphi_direct(k, 30, CoeffRing::Exact).unwrap();
            for (v, pn) in t.values().iter().zip(&p) {
                assert!(v >= pn);
            }
        }
    }
}
