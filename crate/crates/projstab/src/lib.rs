//! Exact stability calculations for projective bundles over polarised surfaces.
//!
//! Everything here runs over arbitrary-precision rationals: intersection
//! numbers on a surface with a chosen Néron–Severi basis, Riemann–Roch Euler
//! characteristics, slope and Gieseker comparisons of sheaf data, and the
//! Futaki invariant of the degeneration of a rank-2 bundle `E` to `F ⊕ E/F`
//! induced by a line subbundle `F`, computed on the projectivisation with
//! polarisations `O(1) ⊗ L^k`.
//!
//! The expansion route (Riemann–Roch plus closed power sums) is the ground
//! truth for all coefficients; the closed-form coefficient formulas are
//! evaluated alongside it and any divergence is reported, never silently
//! resolved.
//!
//! Start with the runnable examples (`cargo run --example futaki_report`) or
//! the [`family`] module, which builds the ruled-surface family used
//! throughout the test suite.

pub mod chern;
pub mod cli;
pub mod config;
pub mod family;
pub mod faulhaber;
pub mod futaki;
pub mod poly;
pub mod rat;
pub mod report;
pub mod stability;
pub mod suite;

pub use chern::{NsClass, SheafData, SurfaceGeometry, SymPowerChern};
pub use faulhaber::{faulhaber, sum_over_i};
pub use poly::{asymptotic_sign, Poly, Sign, Var};
pub use rat::Rat;
