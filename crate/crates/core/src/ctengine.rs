//! Two-variable products and constant-term extraction.
//!
//! The generating function for `cφ_k(n)` is the `z^0` coefficient of
//!
//! ```text
//!   prod_{n>=0} (1 + z q^{n+1})^k (1 + z^{-1} q^n)^k
//! ```
//!
//! A [`ZWindowSeries`] stores such an object as a dense block of rows, one
//! [`QSeries`]-shaped row per `z` exponent in a window `[lo, hi]`. Factors are
//! multiplied in one at a time and anything landing outside the window is
//! dropped. [`window_bounds`] picks a window wide enough that the dropped
//! monomials can never reach the `z^0` row at `q`-degree `<= T`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::ring::{binomial_row, Arith, CoeffRing, ExactArith, ModArith};

/// An inclusive range of `z` exponents that always contains 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZWindow {
    lo: i64,
    hi: i64,
}

impl ZWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > 0 || hi < 0 {
            return Err(Error::Invalid(format!(
                "z-window [{lo}, {hi}] must contain the exponent 0"
            )));
        }
        Ok(ZWindow { lo, hi })
    }

    pub fn lo(self) -> i64 {
        self.lo
    }

    pub fn hi(self) -> i64 {
        self.hi
    }

    pub fn contains(self, e: i64) -> bool {
        self.lo <= e && e <= self.hi
    }

    pub fn len(self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn exponents(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    fn index(self, e: i64) -> usize {
        (e - self.lo) as usize
    }
}

/// Lower bounds on the `q`-degree needed to build up a net power of `z`
/// from the factors of the `k`-colored product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowBudget {
    k: u64,
    trunc: usize,
}

impl WindowBudget {
    pub fn new(k: u64, trunc: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroColors);
        }
        Ok(WindowBudget { k, trunc })
    }

    /// Minimum `q`-degree of `z^a` using only the `(1 + z q^{n+1})^k` factors:
    /// `sum_{i=1}^{a} ceil(i / k)`.
    pub fn poscost(self, a: u64) -> u128 {
        let (k, q, r) = (self.k as u128, (a / self.k) as u128, (a % self.k) as u128);
        k * q * (q + 1) / 2 + r * (q + 1)
    }

    /// Minimum `q`-degree of `z^{-b}` using only the `(1 + z^{-1} q^n)^k`
    /// factors: `sum_{i=1}^{b} floor((i - 1) / k)`. The first `k` are free.
    pub fn negcost(self, b: u64) -> u128 {
        let (k, q, r) = (self.k as u128, (b / self.k) as u128, (b % self.k) as u128);
        k * q * q.saturating_sub(1) / 2 + r * q
    }

    /// Degrees of row `z^e` that can still reach the `z^0` row at degree
    /// `<= T`: at least the cost of building `z^e`, at most `T` minus the
    /// cost of cancelling it. `None` when the range is empty.
    pub fn useful_degrees(self, e: i64) -> Option<(usize, usize)> {
        let b = e.unsigned_abs();
        let (build, cancel) = if e >= 0 {
            (self.poscost(b), self.negcost(b))
        } else {
            (self.negcost(b), self.poscost(b))
        };
        let t = self.trunc as u128;
        if cancel > t || build > t - cancel {
            return None;
        }
        Some((build as usize, (t - cancel) as usize))
    }

    /// See [`window_bounds`].
    pub fn window(self) -> ZWindow {
        let budget = self.trunc as u128;
        let largest = |cost: &dyn Fn(u64) -> u128| {
            let mut a = 0u64;
            while cost(a + 1) <= budget {
                a += 1;
            }
            a as i64
        };
        // A positive z-power is only useful if the negative factors can cancel
        // it within budget, and vice versa.
        let hi = largest(&|a| self.negcost(a));
        let lo = -largest(&|b| self.poscost(b));
        ZWindow { lo, hi }
    }
}

/// Window of `z` exponents that can influence the `z^0` row of the
/// `k`-colored product at `q`-degree `<= trunc`.
pub fn window_bounds(k: u64, trunc: usize) -> Result<ZWindow> {
    Ok(WindowBudget::new(k, trunc)?.window())
}

/// The factor `(1 + z^z_step q^q_step)^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinomialFactor {
    pub z_step: i64,
    pub q_step: usize,
    pub power: u64,
}

/// Factors of the `k`-colored product that are not identically 1 below
/// `q^{trunc+1}`, for `n = 0 ..= last_n`.
pub fn base_factors(k: u64, trunc: usize, last_n: usize) -> Vec<BinomialFactor> {
    let mut factors = Vec::new();
    for n in 0..=last_n {
        factors.push(BinomialFactor { z_step: -1, q_step: n, power: k });
        if n < trunc {
            factors.push(BinomialFactor { z_step: 1, q_step: n + 1, power: k });
        }
    }
    factors
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Grid {
    Exact(Vec<BigInt>),
    Modular(Vec<u64>),
}

/// A truncated bivariate series: `z` exponents in a window, `q` degrees `0..=T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZWindowSeries {
    ring: CoeffRing,
    trunc: usize,
    window: ZWindow,
    grid: Grid,
}

impl ZWindowSeries {
    pub fn zero(ring: CoeffRing, trunc: usize, window: ZWindow) -> Self {
        let cells = window.len() * (trunc + 1);
        let grid = match ring {
            CoeffRing::Exact => Grid::Exact(vec![BigInt::zero(); cells]),
            CoeffRing::Mod(_) => Grid::Modular(vec![0; cells]),
        };
        ZWindowSeries { ring, trunc, window, grid }
    }

    pub fn one(ring: CoeffRing, trunc: usize, window: ZWindow) -> Self {
        let mut s = Self::zero(ring, trunc, window);
        let at = window.index(0) * (trunc + 1);
        match &mut s.grid {
            Grid::Exact(v) => v[at] = BigInt::from(1),
            Grid::Modular(v) => v[at] = 1,
        }
        s
    }

    /// Builds a series from explicit rows; rows not listed are zero.
    pub fn from_rows(
        ring: CoeffRing,
        trunc: usize,
        window: ZWindow,
        rows: &[(i64, QSeries)],
    ) -> Result<Self> {
        let mut s = Self::zero(ring, trunc, window);
        let width = trunc + 1;
        for (e, row) in rows {
            ring.check_same(row.ring())?;
            if row.trunc() != trunc {
                return Err(Error::TruncMismatch { left: trunc, right: row.trunc() });
            }
            if !window.contains(*e) {
                return Err(Error::Invalid(format!("row z^{e} lies outside the window")));
            }
            let at = window.index(*e) * width;
            match &mut s.grid {
                Grid::Exact(v) => v[at..at + width].clone_from_slice(&row.coeffs()),
                Grid::Modular(v) => {
                    v[at..at + width].copy_from_slice(row.residues().expect("modular row"))
                }
            }
        }
        Ok(s)
    }

    /// `prod factors`, clipped to `window` after every factor.
    pub fn product(
        ring: CoeffRing,
        trunc: usize,
        window: ZWindow,
        factors: &[BinomialFactor],
    ) -> Self {
        let mut s = Self::one(ring, trunc, window);
        for f in factors {
            s.apply_binomial(*f);
        }
        s
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn window(&self) -> ZWindow {
        self.window
    }

    /// The `z^0` row.
    pub fn constant_term(&self) -> QSeries {
        self.z_coefficient(0)
    }

    /// The `z^m` row, or the zero series when `m` is outside the window.
    ///
    /// Clipping only protects the `z^0` row: rows close to the window edge
    /// can miss terms that were dropped and would have been shifted back in.
    /// Use [`build_product_for_rows`] when other rows must be exact.
    pub fn z_coefficient(&self, m: i64) -> QSeries {
        if !self.window.contains(m) {
            return QSeries::zero(self.ring, self.trunc);
        }
        let width = self.trunc + 1;
        let at = self.window.index(m) * width;
        match &self.grid {
            Grid::Exact(v) => QSeries::from_exact(v[at..at + width].to_vec()),
            Grid::Modular(v) => QSeries::from_residues(self.ring, v[at..at + width].to_vec()),
        }
    }

    /// Multiplies in place by `(1 + z^z_step q^q_step)^power`, expanded by the
    /// binomial theorem and clipped to the window.
    pub fn apply_binomial(&mut self, f: BinomialFactor) {
        self.apply_binomial_within(f, None)
    }

    fn apply_binomial_within(&mut self, f: BinomialFactor, ranges: Option<&[Option<(usize, usize)>]>) {
        assert!(f.z_step != 0, "binomial factors must carry a power of z");
        if f.power == 0 {
            return;
        }
        // Terms past the truncation vanish.
        let max_i = match self.trunc.checked_div(f.q_step) {
            Some(reach) => f.power.min(reach as u64),
            None => f.power,
        };
        if max_i == 0 {
            return;
        }
        let binom = &binomial_row(f.power)[..=max_i as usize];
        let width = self.trunc + 1;
        match &mut self.grid {
            Grid::Exact(v) => {
                let c: Vec<BigInt> = binom.to_vec();
                apply_poly(&ExactArith, v, width, self.window, f.z_step, f.q_step, &c, ranges)
            }
            Grid::Modular(v) => {
                let ar = ModArith(self.ring.modulus().expect("modular grid"));
                let c: Vec<u64> = binom.iter().map(|b| ar.embed(b)).collect();
                apply_poly(&ar, v, width, self.window, f.z_step, f.q_step, &c, ranges)
            }
        }
    }

    /// Multiplies in place by the sparse series `sum c * z^e q^d`, clipped to
    /// the window.
    pub(crate) fn mul_sparse(&mut self, terms: &[(i64, usize, BigInt)]) {
        let width = self.trunc + 1;
        let window = self.window;
        match &mut self.grid {
            Grid::Exact(v) => {
                let t: Vec<_> = terms.iter().map(|(e, d, c)| (*e, *d, c.clone())).collect();
                *v = mul_sparse_grid(&ExactArith, v, width, window, &t);
            }
            Grid::Modular(v) => {
                let ar = ModArith(self.ring.modulus().expect("modular grid"));
                let t: Vec<_> = terms.iter().map(|(e, d, c)| (*e, *d, ar.embed(c))).collect();
                *v = mul_sparse_grid(&ar, v, width, window, &t);
            }
        }
    }

    /// Bivariate Cauchy product with rows clipped to `clip`.
    pub fn mul(&self, other: &ZWindowSeries, clip: ZWindow) -> Result<ZWindowSeries> {
        self.ring.check_same(other.ring)?;
        if self.trunc != other.trunc {
            return Err(Error::TruncMismatch { left: self.trunc, right: other.trunc });
        }
        let mut out = ZWindowSeries::zero(self.ring, self.trunc, clip);
        let width = self.trunc + 1;
        let (wa, wb) = (self.window, other.window);
        match (&self.grid, &other.grid, &mut out.grid) {
            (Grid::Exact(a), Grid::Exact(b), Grid::Exact(o)) => {
                mul_grids(&ExactArith, a, wa, b, wb, o, clip, width)
            }
            (Grid::Modular(a), Grid::Modular(b), Grid::Modular(o)) => {
                let ar = ModArith(self.ring.modulus().expect("modular grid"));
                mul_grids(&ar, a, wa, b, wb, o, clip, width)
            }
            _ => unreachable!("ring check guarantees matching storage"),
        }
        Ok(out)
    }

    /// Substitutes `z -> z^scale`, `q -> q^scale`: row `e` moves to row
    /// `scale * e` and degree `d` to `scale * d`. Entries that leave `clip`
    /// or exceed `trunc` are dropped.
    pub fn reindexed(&self, scale: u64, trunc: usize, clip: ZWindow) -> Result<ZWindowSeries> {
        if scale == 0 {
            return Err(Error::Invalid("re-indexing scale must be positive".into()));
        }
        let mut out = ZWindowSeries::zero(self.ring, trunc, clip);
        let (w_in, w_out) = (self.trunc + 1, trunc + 1);
        let s = scale as i64;
        for e in self.window.exponents() {
            let target = e * s;
            if !clip.contains(target) {
                continue;
            }
            let (src, dst) = (self.window.index(e) * w_in, clip.index(target) * w_out);
            for d in 0..w_in {
                let td = d * scale as usize;
                if td > trunc {
                    break;
                }
                match (&self.grid, &mut out.grid) {
                    (Grid::Exact(a), Grid::Exact(o)) => o[dst + td] = a[src + d].clone(),
                    (Grid::Modular(a), Grid::Modular(o)) => o[dst + td] = a[src + d],
                    _ => unreachable!(),
                }
            }
        }
        Ok(out)
    }
}

/// The `z^0` row of `prod factors`, where the factors multiply out to
/// (something congruent to) the `budget`'s `k`-colored product.
///
/// Only the cells of each row listed by [`WindowBudget::useful_degrees`] are
/// maintained, so the other rows are not meaningful and are not returned.
pub fn constant_term_of_product(
    ring: CoeffRing,
    budget: WindowBudget,
    factors: &[BinomialFactor],
) -> QSeries {
    let window = budget.window();
    let ranges: Vec<Option<(usize, usize)>> =
        window.exponents().map(|e| budget.useful_degrees(e)).collect();
    let mut s = ZWindowSeries::one(ring, budget.trunc, window);
    for f in factors {
        s.apply_binomial_within(*f, Some(&ranges));
    }
    s.constant_term()
}

/// Build the `k`-colored product `prod_{n=0}^{T} (1+zq^{n+1})^k (1+z^{-1}q^n)^k`
/// truncated at `q^T` over the window from [`window_bounds`].
pub fn build_base_product(k: u64, trunc: usize, ring: CoeffRing) -> Result<ZWindowSeries> {
    let window = window_bounds(k, trunc)?;
    Ok(ZWindowSeries::product(ring, trunc, window, &base_factors(k, trunc, trunc)))
}

/// The `k`-colored product with every row `z^m`, `m` in `rows`, exact.
///
/// The window is `rows` widened by the reach of [`window_bounds`] on both
/// sides: a monomial further out would need more than `T` in `q`-degree to
/// move back into `rows`.
pub fn build_product_for_rows(
    k: u64,
    trunc: usize,
    ring: CoeffRing,
    rows: (i64, i64),
) -> Result<ZWindowSeries> {
    let reach = window_bounds(k, trunc)?;
    let (lo, hi) = (rows.0.min(0), rows.1.max(0));
    let window = ZWindow::new(lo + reach.lo(), hi + reach.hi())?;
    Ok(ZWindowSeries::product(ring, trunc, window, &base_factors(k, trunc, trunc)))
}

/// `new[e][t] = old[e][t] + sum_{i>=1} c_i old[e - i*z_step][t - i*q_step]`,
/// in place. Rows are visited so that every source row is read before it is
/// overwritten. With `ranges`, only the listed degrees of each target row are
/// updated.
#[allow(clippy::too_many_arguments)]
fn apply_poly<A: Arith>(
    ar: &A,
    data: &mut [A::Elem],
    width: usize,
    window: ZWindow,
    z_step: i64,
    q_step: usize,
    c: &[A::Elem],
    ranges: Option<&[Option<(usize, usize)>]>,
) {
    debug_assert!(ar.is_one(&c[0]));
    let rows = window.len() as i64;
    let order: Box<dyn Iterator<Item = i64>> = if z_step > 0 {
        Box::new((0..rows).rev())
    } else {
        Box::new(0..rows)
    };
    for target in order {
        let (lo, hi) = match ranges {
            Some(r) => match r[target as usize] {
                Some(range) => range,
                None => continue,
            },
            None => (0, width - 1),
        };
        for (i, ci) in c.iter().enumerate().skip(1) {
            if ar.is_zero(ci) {
                continue;
            }
            let src = target - i as i64 * z_step;
            if src < 0 || src >= rows {
                // Moving further away only leaves the window faster.
                break;
            }
            let shift = i * q_step;
            if shift > hi {
                break;
            }
            let start = lo.max(shift);
            let (t, s) = (target as usize, src as usize);
            let (dst_row, src_row) = if s < t {
                let (head, tail) = data.split_at_mut(t * width);
                (&mut tail[..width], &head[s * width..(s + 1) * width])
            } else {
                let (head, tail) = data.split_at_mut(s * width);
                (&mut head[t * width..(t + 1) * width], &tail[..width])
            };
            let dst_row = &mut dst_row[start..=hi];
            let src_row = &src_row[start - shift..=hi - shift];
            if ar.is_one(ci) {
                for (d, x) in dst_row.iter_mut().zip(src_row) {
                    ar.add_assign(d, x);
                }
            } else {
                for (d, x) in dst_row.iter_mut().zip(src_row) {
                    ar.mul_add(d, ci, x);
                }
            }
        }
    }
}

fn mul_sparse_grid<A: Arith>(
    ar: &A,
    data: &[A::Elem],
    width: usize,
    window: ZWindow,
    terms: &[(i64, usize, A::Elem)],
) -> Vec<A::Elem> {
    let mut out = vec![ar.zero(); data.len()];
    for e in window.exponents() {
        let src = &data[window.index(e) * width..][..width];
        if src.iter().all(|x| ar.is_zero(x)) {
            continue;
        }
        for (ze, qd, c) in terms {
            let target = e + ze;
            if !window.contains(target) || *qd >= width || ar.is_zero(c) {
                continue;
            }
            let dst = &mut out[window.index(target) * width..][..width];
            for (d, x) in dst[*qd..].iter_mut().zip(src) {
                ar.mul_add(d, c, x);
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn mul_grids<A: Arith>(
    ar: &A,
    a: &[A::Elem],
    wa: ZWindow,
    b: &[A::Elem],
    wb: ZWindow,
    out: &mut [A::Elem],
    clip: ZWindow,
    width: usize,
) {
    let nonzero = |g: &[A::Elem], w: ZWindow| -> Vec<i64> {
        w.exponents()
            .filter(|&e| g[w.index(e) * width..][..width].iter().any(|x| !ar.is_zero(x)))
            .collect()
    };
    let (rows_a, rows_b) = (nonzero(a, wa), nonzero(b, wb));
    for &ea in &rows_a {
        let ra = &a[wa.index(ea) * width..][..width];
        for &eb in &rows_b {
            let e = ea + eb;
            if !clip.contains(e) {
                continue;
            }
            let rb = &b[wb.index(eb) * width..][..width];
            let dst = &mut out[clip.index(e) * width..][..width];
            for (i, x) in ra.iter().enumerate() {
                if ar.is_zero(x) {
                    continue;
                }
                for (d, y) in dst[i..].iter_mut().zip(rb) {
                    ar.mul_add(d, x, y);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::partition_series;

    fn exact(c: &[i64]) -> QSeries {
        QSeries::from_i64s(CoeffRing::Exact, c).unwrap()
    }

    fn unclipped(k: u64, trunc: usize) -> ZWindow {
        let k = k as i64;
        ZWindow::new(-k * (trunc as i64 + 1), k * trunc as i64).unwrap()
    }

    #[test]
    fn cost_closed_forms_match_sums() {
        for k in 1..6u64 {
            let b = WindowBudget::new(k, 0).unwrap();
            let (mut pos, mut neg) = (0u128, 0u128);
            for i in 1..40u64 {
                pos += i.div_ceil(k) as u128;
                neg += ((i - 1) / k) as u128;
                assert_eq!(b.poscost(i), pos, "poscost k={k} a={i}");
                assert_eq!(b.negcost(i), neg, "negcost k={k} b={i}");
                assert!(b.negcost(i) <= b.poscost(i));
            }
        }
    }

    #[test]
    fn window_examples() {
        let w = window_bounds(1, 0).unwrap();
        assert_eq!((w.lo(), w.hi()), (0, 1));
        let w = window_bounds(2, 3).unwrap();
        assert_eq!((w.lo(), w.hi()), (-2, 4));
        let w = window_bounds(1002, 908).unwrap();
        assert_eq!((w.lo(), w.hi()), (-908, 1910));
        assert_eq!(window_bounds(0, 3), Err(Error::ZeroColors));
        for k in 1..8 {
            for t in 0..40 {
                assert!(window_bounds(k, t).unwrap().contains(0));
            }
        }
    }

    #[test]
    fn base_product_small_cases() {
        let s = build_base_product(1, 0, CoeffRing::Exact).unwrap();
        assert_eq!(s.constant_term(), exact(&[1]));
        let s = build_base_product(1, 5, CoeffRing::Exact).unwrap();
        assert_eq!(s.constant_term(), exact(&[1, 1, 2, 3, 5, 7]));
        assert_eq!(s.constant_term(), partition_series(5));
        let s = build_base_product(2, 1, CoeffRing::Exact).unwrap();
        assert_eq!(s.constant_term(), exact(&[1, 4]));
        assert_eq!(build_base_product(0, 1, CoeffRing::Exact), Err(Error::ZeroColors));
    }

    #[test]
    fn kolitsch_coefficient() {
        let s = build_base_product(3, 2, CoeffRing::Exact).unwrap();
        let c = s.constant_term().coeff(2);
        assert_eq!(&c % 3, BigInt::zero());
    }

    #[test]
    fn empty_product_has_unit_constant_term() {
        let w = ZWindow::new(-2, 2).unwrap();
        let s = ZWindowSeries::one(CoeffRing::Exact, 4, w);
        assert_eq!(s.constant_term(), QSeries::one(CoeffRing::Exact, 4));
    }

    #[test]
    fn z_coefficient_contract() {
        let s = build_base_product(1, 5, CoeffRing::Exact).unwrap();
        assert_eq!(s.z_coefficient(0), s.constant_term());
        assert_eq!(s.z_coefficient(1), s.z_coefficient(-1).shifted(1));
        assert!(s.z_coefficient(s.window().hi() + 1).is_zero());
        assert!(s.z_coefficient(s.window().lo() - 7).is_zero());
    }

    #[test]
    fn zw_mul_examples() {
        let w = ZWindow::new(-1, 1).unwrap();
        let a = build_base_product(2, 4, CoeffRing::Exact).unwrap();
        let one = ZWindowSeries::one(CoeffRing::Exact, 4, w);
        assert_eq!(a.mul(&one, a.window()).unwrap(), a);

        let x = ZWindowSeries::from_rows(CoeffRing::Exact, 1, w, &[(1, exact(&[0, 1]))]).unwrap();
        let y = ZWindowSeries::from_rows(CoeffRing::Exact, 1, w, &[(-1, exact(&[1, 0]))]).unwrap();
        let prod = x.mul(&y, ZWindow::new(0, 0).unwrap()).unwrap();
        assert_eq!(prod.constant_term(), exact(&[0, 1]));

        let m = ZWindowSeries::one(CoeffRing::modulo(5).unwrap(), 4, w);
        assert!(matches!(a.mul(&m, w), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn wide_clip_does_not_change_constant_term() {
        for k in 1..=3u64 {
            for t in 0..=12usize {
                let tight = build_base_product(k, t, CoeffRing::Exact).unwrap();
                let wide = ZWindowSeries::product(
                    CoeffRing::Exact,
                    t,
                    unclipped(k, t),
                    &base_factors(k, t, t),
                );
                let id = ZWindowSeries::one(CoeffRing::Exact, t, ZWindow::new(0, 0).unwrap());
                let w = tight.window();
                let clip = ZWindow::new(w.lo() - 2, w.hi() + 3).unwrap();
                assert_eq!(wide.mul(&id, clip).unwrap().constant_term(), tight.constant_term());
                assert_eq!(wide.constant_term(), tight.constant_term(), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn widened_window_gives_exact_rows() {
        for k in 1..=3u64 {
            for t in [5usize, 9, 12] {
                let full = ZWindowSeries::product(
                    CoeffRing::Exact,
                    t,
                    unclipped(k, t),
                    &base_factors(k, t, t),
                );
                let s = build_product_for_rows(k, t, CoeffRing::Exact, (-8, 8)).unwrap();
                for m in -8..=8 {
                    assert_eq!(s.z_coefficient(m), full.z_coefficient(m), "k={k} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn budgeted_constant_term_matches_full_product() {
        for k in 1..=6u64 {
            for t in [0usize, 1, 7, 25] {
                for ring in [CoeffRing::Exact, CoeffRing::modulo(7).unwrap()] {
                    let budget = WindowBudget::new(k, t).unwrap();
                    let ct = constant_term_of_product(ring, budget, &base_factors(k, t, t));
                    assert_eq!(ct, build_base_product(k, t, ring).unwrap().constant_term());
                }
            }
        }
    }

    #[test]
    fn useful_degrees_ranges() {
        let b = WindowBudget::new(2, 3).unwrap();
        assert_eq!(b.useful_degrees(0), Some((0, 3)));
        // z^2 costs at least 1 + 1 to build and nothing to cancel.
        assert_eq!(b.useful_degrees(2), Some((2, 3)));
        // z^-3 costs 1 + 1 + 2 to cancel.
        assert_eq!(b.useful_degrees(-3), None);
        assert_eq!(b.useful_degrees(-2), Some((0, 1)));
    }

    #[test]
    fn extra_factors_change_nothing() {
        for k in 1..=3u64 {
            let t = 10;
            let w = window_bounds(k, t).unwrap();
            let base = ZWindowSeries::product(CoeffRing::Exact, t, w, &base_factors(k, t, t));
            let extended =
                ZWindowSeries::product(CoeffRing::Exact, t, w, &base_factors(k, t, t + 5));
            assert_eq!(base, extended);
        }
    }

    #[test]
    fn factor_order_is_irrelevant() {
        for k in 1..=4u64 {
            let t = 15;
            let w = window_bounds(k, t).unwrap();
            let mut factors = base_factors(k, t, t);
            let forward = ZWindowSeries::product(CoeffRing::Exact, t, w, &factors);
            factors.reverse();
            let backward = ZWindowSeries::product(CoeffRing::Exact, t, w, &factors);
            assert_eq!(forward.constant_term(), backward.constant_term());
        }
    }

    #[test]
    fn symmetry_under_z_to_inverse_zq() {
        for k in 1..=4u64 {
            let t = 30;
            let s = build_base_product(k, t, CoeffRing::Exact).unwrap();
            for m in 0..=6i64 {
                if s.window().contains(m) && s.window().contains(-m) {
                    let lhs = s.z_coefficient(m);
                    let rhs = s.z_coefficient(-m).shifted(m as usize);
                    assert_eq!(lhs, rhs, "k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn modular_build_matches_reduced_exact() {
        for k in 1..=5u64 {
            for m in [2u64, 6, 7] {
                let ring = CoeffRing::modulo(m).unwrap();
                let e = build_base_product(k, 20, CoeffRing::Exact).unwrap();
                let r = build_base_product(k, 20, ring).unwrap();
                for z in r.window().exponents() {
                    assert_eq!(e.z_coefficient(z).reduce(m).unwrap(), r.z_coefficient(z));
                }
            }
        }
    }

    #[test]
    fn reindex_moves_rows_and_degrees() {
        let w = ZWindow::new(-1, 1).unwrap();
        let s = ZWindowSeries::from_rows(
            CoeffRing::Exact,
            2,
            w,
            &[(1, exact(&[0, 1, 2])), (-1, exact(&[1, 0, 0]))],
        )
        .unwrap();
        let r = s.reindexed(3, 6, ZWindow::new(-3, 3).unwrap()).unwrap();
        assert_eq!(r.z_coefficient(3), exact(&[0, 0, 0, 1, 0, 0, 2]));
        assert_eq!(r.z_coefficient(-3), exact(&[1, 0, 0, 0, 0, 0, 0]));
        assert!(r.z_coefficient(1).is_zero());
    }
}
