//! Exact minimization of fixed-degree homogeneous polynomials over the
//! standard simplex by evaluation on the regular grid
//! `Δ(n,r) = { x ∈ Δ_n : r·x ∈ ℕⁿ }`.
//!
//! Everything here is exact: values are [`Rational`]s, error bounds are
//! reported as rational coefficients of the range `f̄ − f̲`, and unknown
//! extrema are carried as certified [`Enclosure`]s.
//!
//! Modules:
//! - [`poly`]: homogeneous polynomials, Bernstein coefficients, degree elevation.
//! - [`combin`]: binomials, multinomials, falling factorials, Stirling numbers.
//! - [`grid`]: composition enumeration and grid minimization.
//! - [`hypergeom`]: the multivariate hypergeometric distribution and its moments.
//! - [`bounds`]: convergence-rate coefficients and bound witnesses.
//! - [`identities`]: exact verification of the combinatorial identities behind the bounds.
//! - [`stableset`]: the Motzkin–Straus quadratic form and stability-number bounds.

pub mod bounds;
pub mod combin;
mod error;
pub mod grid;
pub mod hypergeom;
pub mod identities;
pub mod poly;
pub mod rational;
pub mod stableset;

pub use error::{Error, Result};
pub use grid::{grid_maximize, grid_minimize, Enclosure, GridMinResult, GridSpec};
pub use hypergeom::HypergeomParams;
pub use poly::{Exponent, HomogeneousPolynomial, Polynomial};
pub use rational::Rational;
