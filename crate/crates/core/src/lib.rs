//! Exact arithmetic for the elliptic curves
//!
//! ```text
//! E : y² = x(x + a)(x + b) + m⁶
//! ```
//!
//! where `(X, Y) = (n, m)` solves the Pell equation `X² − (a+b)Y² = −ab`.
//! Each such curve carries the rational points `P = (−a, m³)`,
//! `Q = (−b, m³)` and `R = (−m², mn)`; the crate proves `rank E(ℚ) ≥ 3` by
//! showing that no nonempty combination of them is a double.
//!
//! Modules, bottom up:
//!
//! - [`pell`]: continued fractions, fundamental units, solution ladders.
//! - [`poly`]: sparse multivariate polynomials over ℚ, rational roots,
//!   factor-degree patterns mod p and irreducibility certificates.
//! - [`curve`]: Weierstrass models, the chord-tangent law and point counts over F_p.
//! - [`descent`]: halving tests, the obstruction polynomials F, G, H and rank certificates.
//! - [`heights`]: canonical heights and the regulator of `{P, Q, R}` as a numeric cross-check.
//! - [`heuristics`]: Mestre–Nagao sums and family ranking.
//! - [`cli`]: the `pellrank` command line.
//!
//! The `examples/` directory of this crate has one runnable program per capability.

pub mod cli;
pub mod curve;
pub mod descent;
mod error;
pub mod heights;
pub mod heuristics;
pub mod json;
pub mod pell;
pub mod poly;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
