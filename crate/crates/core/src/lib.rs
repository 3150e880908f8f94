//! k-colored generalized Frobenius partition numbers `cφ_k(n)` and their
//! Ramanujan-type congruences `cφ_k(pn + r) ≡ 0 (mod p)`.
//!
//! - [`qseries`]: truncated power series in `q` and the partition numbers
//! - [`ctengine`]: the two-variable product and its constant term
//! - [`cphi`]: `cφ_k(n)` exactly, modulo `m`, or modulo a prime by descent
//! - [`congruence`]: verification, lifting, CRT combination and search
//! - [`cli`]: the `cphi` command-line front end

pub mod cli;
pub mod congruence;
pub mod cphi;
pub mod ctengine;
pub mod error;
pub mod qseries;
pub mod ring;

pub use cphi::{cphi_direct, cphi_mod_descent, cphi_theta, cphi_unpruned, CphiTable, Method};
pub use ctengine::{
    build_base_product, build_product_for_rows, constant_term_of_product, window_bounds,     WindowBudget, ZWindow, ZWindowSeries,
};
pub use error::{Error, Result};
pub use qseries::{partition_series, QSeries};
pub use ring::{CoeffRing, Modulus};
