//! Ramanujan-type congruences `cφ_k(pn + r) ≡ 0 (mod p)`.
//!
//! A congruence that holds for `k` colors also holds for `pN + k` colors,
//! since `(1 + x)^{pN+k} ≡ (1 + x^p)^N (1 + x)^k (mod p)` and the first factor
//! only involves `q^p`. [`lift_family`] records that implication,
//! [`verify_family`] checks members numerically, and [`crt_combine`] glues
//! families for distinct primes into one composite congruence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cphi::{cphi_direct, cphi_mod_descent, CphiTable};
use crate::ctengine::{build_product_for_rows, window_bounds};
use crate::error::{Error, Result};
use crate::ring::{is_prime, CoeffRing};

/// Members with more colors than this are always checked by descent.
pub const DIRECT_MAX_COLORS: u64 = 64;

/// Smallest scan depth accepted by [`search`].
pub const SEARCH_MIN_SCAN: u64 = 25;

/// How residues `cφ_k(n) mod p` are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMethod {
    Direct,
    Descent,
}

impl VerifyMethod {
    fn other(self) -> Self {
        match self {
            VerifyMethod::Direct => VerifyMethod::Descent,
            VerifyMethod::Descent => VerifyMethod::Direct,
        }
    }
}

impl fmt::Display for VerifyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyMethod::Direct => f.write_str("direct"),
            VerifyMethod::Descent => f.write_str("descent"),
        }
    }
}

/// `cφ_k(n) mod p` for `n <= trunc`.
pub fn residues(k: u64, trunc: usize, p: u64, method: VerifyMethod) -> Result<CphiTable> {
    match method {
        VerifyMethod::Direct => {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            cphi_direct(k, trunc, CoeffRing::modulo(p)?)
        }
        VerifyMethod::Descent => cphi_mod_descent(k, trunc, p),
    }
}

fn check_hypothesis(p: u64, r: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 || r >= p {
        return Err(Error::ResidueOutOfRange { p, r });
    }
    Ok(())
}

/// `cφ_{k0 + step*N}(p*n + r) ≡ 0 (mod p)` for all `N, n >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFamily {
    pub k0: u64,
    pub p: u64,
    pub r: u64,
    /// Color stride; `p` for lifted families, 0 for a single color count.
    pub step: u64,
    pub label: String,
}

impl CongruenceFamily {
    pub fn new(k0: u64, p: u64, r: u64, step: u64, label: impl Into<String>) -> Result<Self> {
        if k0 == 0 {
            return Err(Error::ZeroColors);
        }
        check_hypothesis(p, r)?;
        Ok(CongruenceFamily { k0, p, r, step, label: label.into() })
    }

    /// The congruence for `k` colors alone.
    pub fn single(k: u64, p: u64, r: u64) -> Result<Self> {
        Self::new(k, p, r, 0, "single color count")
    }

    /// Color count of member `N`.
    pub fn colors(&self, big_n: u64) -> u64 {
        self.k0 + self.step * big_n
    }
}

impl fmt::Display for CongruenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.step == 0 {
            self.k0.to_string()
        } else {
            format!("{}N+{}", self.step, self.k0)
        };
        write!(f, "cφ_{{{k}}}({}n+{}) ≡ 0 (mod {})", self.p, self.r, self.p)
    }
}

/// A failing instance: `cφ_colors(argument) ≡ residue ≢ 0 (mod modulus)`
/// with `argument = modulus * n + r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub colors: u64,
    pub n: u64,
    pub argument: u64,
    pub modulus: u64,
    pub residue: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// Largest `n` checked; -1 for an empty range.
    pub checked_n_max: i64,
    /// Largest family index `N` checked; -1 for an empty range.
    #[serde(rename = "checked_N_max")]
    pub checked_big_n_max: i64,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn holds(checked_n_max: i64, checked_big_n_max: i64) -> Self {
        Verdict { holds: true, checked_n_max, checked_big_n_max, counterexample: None }
    }

    fn vacuous() -> Self {
        Self::holds(-1, -1)
    }
}

fn residue_u64(v: &BigInt) -> u64 {
    v.to_u64().expect("residues are below a u64 modulus")
}

/// First `n` in `0..=n_max` with `table[p*n + r] != 0`.
fn first_failure(table: &CphiTable, modulus: u64, r: u64, n_max: u64) -> Option<(u64, u64)> {
    (0..=n_max).find_map(|n| {
        let v = table.value((modulus * n + r) as usize);
        (!v.is_zero()).then(|| (n, residue_u64(&v)))
    })
}

/// Recomputes `cφ_k(argument) mod p` along the other path; a mismatch means a
/// bug, never a counterexample.
fn confirm(k: u64, argument: u64, p: u64, residue: u64, used: VerifyMethod) -> Result<()> {
    let other = used.other();
    let again = residue_u64(&residues(k, argument as usize, p, other)?.value(argument as usize));
    if again != residue {
        return Err(Error::Internal(format!(
            "cφ_{k}({argument}) mod {p}: {used} gave {residue}, {other} gave {again}"
        )));
    }
    Ok(())
}

/// Checks `cφ_k(p*n + r) ≡ 0 (mod p)` for `0 <= n <= n_max`.
pub fn verify_single(k: u64, p: u64, r: u64, n_max: i64, method: VerifyMethod) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::ZeroColors);
    }
    check_hypothesis(p, r)?;
    if n_max < 0 {
        return Ok(Verdict::vacuous());
    }
    let n_max_u = n_max as u64;
    let table = residues(k, (p * n_max_u + r) as usize, p, method)?;
    match first_failure(&table, p, r, n_max_u) {
        None => Ok(Verdict::holds(n_max, 0)),
        Some((n, residue)) => {
            let argument = p * n + r;
            confirm(k, argument, p, residue, method)?;
            Ok(Verdict {
                holds: false,
                checked_n_max: n_max,
                checked_big_n_max: 0,
                counterexample: Some(Counterexample { colors: k, n, argument, modulus: p, residue }),
            })
        }
    }
}

/// The family `cφ_{pN+k}(pn + r) ≡ 0 (mod p)` implied by the congruence for
/// `k` colors. Nothing is verified here.
pub fn lift_family(k: u64, p: u64, r: u64) -> Result<CongruenceFamily> {
    CongruenceFamily::new(k, p, r, p, format!("lifted from cφ_{k}({p}n+{r}) ≡ 0 (mod {p})"))
}

/// The lifted families whose base cases are classical results.
pub fn known_families() -> Vec<CongruenceFamily> {
    let family = |k, p, r, label: &str| {
        let mut f = lift_family(k, p, r).expect("valid classical family");
        f.label = label.to_string();
        f
    };
    vec![
        family(1, 5, 4, "cφ_1 = p(n); Ramanujan's congruence mod 5"),
        family(1, 7, 5, "cφ_1 = p(n); Ramanujan's congruence mod 7"),
        family(1, 11, 6, "cφ_1 = p(n); Ramanujan's congruence mod 11"),
        family(2, 5, 3, "Andrews: cφ_2(5n+3) ≡ 0 (mod 5)"),
        // k = 3, 6, 9, ...
        family(3, 3, 2, "Kolitsch: cφ_3(3n+2) ≡ 0 (mod 3)"),
    ]
}

/// Checks members `N = 0..=big_n_max` of a family for `n <= n_max`, stopping
/// at the first failure (ordered by `N`, then `n`).
pub fn verify_family(
    family: &CongruenceFamily,
    big_n_max: i64,
    n_max: i64,
    method: VerifyMethod,
) -> Result<Verdict> {
    CongruenceFamily::new(family.k0, family.p, family.r, family.step, "")?;
    if big_n_max < 0 || n_max < 0 {
        return Ok(Verdict::vacuous());
    }
    let members = if family.step == 0 { 0 } else { big_n_max as u64 };
    for big_n in 0..=members {
        let k = family.colors(big_n);
        let m = if k > DIRECT_MAX_COLORS { VerifyMethod::Descent } else { method };
        let v = verify_single(k, family.p, family.r, n_max, m)?;
        if !v.holds {
            return Ok(Verdict { checked_big_n_max: big_n_max, ..v });
        }
    }
    Ok(Verdict::holds(n_max, big_n_max))
}

/// `cφ_{M*N + k_residue}(M*n + n_residue) ≡ 0 (mod M)` for `N, n >= 0`,
/// restricted to color counts of at least `min_colors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeCongruence {
    pub k_residue: u64,
    pub k_modulus: u64,
    pub n_residue: u64,
    pub n_modulus: u64,
    pub modulus: u64,
    /// Largest base color count among the members; smaller `k` are not covered.
    pub min_colors: u64,
    pub members: Vec<CongruenceFamily>,
}

impl CompositeCongruence {
    pub fn primes(&self) -> Vec<u64> {
        self.members.iter().map(|f| f.p).collect()
    }
}

impl fmt::Display for CompositeCongruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cφ_{{{}N+{}}}({}n+{}) ≡ 0 (mod {})",
            self.k_modulus, self.k_residue, self.n_modulus, self.n_residue, self.modulus
        )
    }
}

/// `(g, x)` with `a*x ≡ g (mod m)`, `g = gcd(a, m)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Solves `x ≡ a_i (mod m_i)` for pairwise coprime moduli; returns `(x, M)`
/// with `0 <= x < M`.
pub fn crt(congruences: &[(u64, u64)]) -> Result<(u64, u64)> {
    let (mut x, mut m) = (0i128, 1i128);
    for &(a, mi) in congruences {
        let mi = mi as i128;
        let (g, inv, _) = ext_gcd(m.rem_euclid(mi), mi);
        if g != 1 {
            return Err(Error::Invalid(format!("moduli {m} and {mi} are not coprime")));
        }
        // x + m*t ≡ a (mod mi)
        let t = ((a as i128 - x).rem_euclid(mi) * inv.rem_euclid(mi)).rem_euclid(mi);
        x += m * t;
        m = m
            .checked_mul(mi)
            .filter(|&v| v <= u64::MAX as i128)
            .ok_or_else(|| Error::Bounds("combined modulus exceeds 64 bits".into()))?;
        x = x.rem_euclid(m);
    }
    Ok((x as u64, m as u64))
}

/// Combines lifted families for pairwise distinct primes.
pub fn crt_combine(families: &[CongruenceFamily]) -> Result<CompositeCongruence> {
    if families.len() < 2 {
        return Err(Error::Invalid("combining needs at least two families".into()));
    }
    for (i, f) in families.iter().enumerate() {
        CongruenceFamily::new(f.k0, f.p, f.r, f.step, "")?;
        if f.step != f.p {
            return Err(Error::Invalid(format!(
                "family {f} has color step {} but combining needs step = p",
                f.step
            )));
        }
        if families[..i].iter().any(|g| g.p == f.p) {
            return Err(Error::Invalid(format!("prime {} appears more than once", f.p)));
        }
    }
    let (k_residue, modulus) = crt(&families.iter().map(|f| (f.k0 % f.p, f.p)).collect::<Vec<_>>())?;
    let (n_residue, _) = crt(&families.iter().map(|f| (f.r, f.p)).collect::<Vec<_>>())?;
    Ok(CompositeCongruence {
        k_residue,
        k_modulus: modulus,
        n_residue,
        n_modulus: modulus,
        modulus,
        min_colors: families.iter().map(|f| f.k0).max().unwrap_or(1),
        members: families.to_vec(),
    })
}

/// Checks the composite for `N <= big_n_max`, `n <= n_max`, one descent per
/// member prime.
pub fn verify_composite(c: &CompositeCongruence, big_n_max: i64, n_max: i64) -> Result<Verdict> {
    if big_n_max < 0 || n_max < 0 {
        return Ok(Verdict::vacuous());
    }
    let trunc = c.modulus * n_max as u64 + c.n_residue;
    for big_n in 0..=big_n_max as u64 {
        let k = c.modulus * big_n + c.k_residue;
        if k < c.min_colors {
            continue;
        }
        for p in c.primes() {
            let table = cphi_mod_descent(k, trunc as usize, p)?;
            if let Some((n, residue)) = first_failure(&table, c.modulus, c.n_residue, n_max as u64) {
                let argument = c.modulus * n + c.n_residue;
                confirm(k, argument, p, residue, VerifyMethod::Descent)?;
                return Ok(Verdict {
                    holds: false,
                    checked_n_max: n_max,
                    checked_big_n_max: big_n_max,
                    counterexample: Some(Counterexample {
                        colors: k,
                        n,
                        argument,
                        modulus: p,
                        residue,
                    }),
                });
            }
        }
    }
    Ok(Verdict::holds(n_max, big_n_max))
}

/// A scan survivor. Not a theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub colors: u64,
    pub residue: u64,
    pub status: String,
}

/// All `(k, r)` with `k` in `colors` and `0 < r < p` such that
/// `cφ_k(p*n + r) ≡ 0 (mod p)` for every `n <= n_scan`.
pub fn search(p: u64, colors: std::ops::RangeInclusive<u64>, n_scan: u64) -> Result<Vec<Candidate>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n_scan < SEARCH_MIN_SCAN {
        return Err(Error::Bounds(format!("scan depth {n_scan} is below {SEARCH_MIN_SCAN}")));
    }
    let mut found = Vec::new();
    let trunc = (p * n_scan + p - 1) as usize;
    for k in colors {
        let table = cphi_mod_descent(k, trunc, p)?;
        for r in 1..p {
            if first_failure(&table, p, r, n_scan).is_none() {
                found.push(Candidate { colors: k, residue: r, status: "empirical".into() });
            }
        }
    }
    Ok(found)
}

/// Vanishing of `[q^{pn+r}] B_{pj}(q) mod p`, where `B_m` is the `z^m` row of
/// the `k`-colored product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionRow {
    pub j: i64,
    pub z_exponent: i64,
    /// False when `z^{pj}` lies outside the window that can affect `z^0`.
    pub in_window: bool,
    pub vanishes: bool,
    /// First `(n, residue)` with a nonzero coefficient.
    pub witness: Option<(u64, u64)>,
}

impl DissectionRow {
    pub fn status(&self) -> &'static str {
        match (self.in_window, self.vanishes) {
            (false, _) => "vacuous (outside window)",
            (true, true) => "vanishes",
            (true, false) => "nonvanishing",
        }
    }
}

/// Reports, for `|j| <= j_max`, whether the rows `B_{pj}` of the `k`-colored
/// product vanish on the progression `pn + r` modulo `p`. Row `j = 0` is the
/// generating function of `cφ_k` itself.
pub fn verify_dissection_ingredients(
    k: u64,
    p: u64,
    r: u64,
    j_max: u64,
    n_max: u64,
) -> Result<Vec<DissectionRow>> {
    if k == 0 {
        return Err(Error::ZeroColors);
    }
    check_hypothesis(p, r)?;
    let trunc = (p * n_max + r) as usize;
    let window = window_bounds(k, trunc)?;
    let j_max = j_max as i64;
    let reach = (p as i64 * j_max).clamp(0, window.lo().abs().max(window.hi()));
    let product = build_product_for_rows(k, trunc, CoeffRing::modulo(p)?, (-reach, reach))?;
    let mut report = Vec::new();
    for j in -j_max..=j_max {
        let m = p as i64 * j;
        let in_window = window.contains(m);
        let witness = if in_window {
            let row = product.z_coefficient(m);
            (0..=n_max).find_map(|n| {
                let v = row.coeff((p * n + r) as usize);
                (!v.is_zero()).then(|| (n, residue_u64(&v)))
            })
        } else {
            None
        };
        report.push(DissectionRow {
            j,
            z_exponent: m,
            in_window,
            vanishes: witness.is_none(),
            witness,
        });
    }
    Ok(report)
}
