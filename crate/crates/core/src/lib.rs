//! Moment calculus with the Dunkl realization.
//!
//! The Dunkl operator `Λ_α f = f′ + ((2α+1)/2)(f(z) − f(−z))/z` is the moment
//! derivative attached to the Dunkl factorials `γ_{p,α}`. This crate builds on
//! that identification:
//!
//! - [`moment_seq`]: moment sequences, quotients, strong-regularity checks and
//!   the growth function `M(t)`.
//! - [`series`]: truncated power series with moment derivatives, the direct
//!   Dunkl operator, `m`-translations and even translations.
//! - [`entire`]: generalized exponentials `E_m`, the Dunkl exponential and its
//!   even/odd parts, chain functions `E_{α,h}`, growth and decay scans.
//! - [`linear_systems`]: fundamental systems of `∂_γ y = A y` from Jordan chains.
//! - [`functional_eq`]: translation equations solved through zeros of
//!   generalized exponential polynomials.
//! - [`bessel`]: modified Bessel `K`, the Hamburger weight and moment quadrature.
//! - [`cli`]: the `dunkl-moment` command line.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod cli;
pub mod entire;
pub mod error;
pub mod functional_eq;
pub mod linear_systems;
pub mod moment_seq;
pub mod numeric;
pub mod series;

pub use error::{Error, Result};
pub use moment_seq::{MomentSequence, SrCheckReport};
pub use num_complex::Complex64;
pub use series::TruncatedSeries;
