//! Computational harmonic analysis on compact Lie groups.
//!
//! The crate is organised around the pipeline that shows a function on a
//! compact group with lacunary spectrum cannot vanish on an open set:
//!
//! * [`roots`]: root systems, weights in doubled coordinates and Weyl groups
//!   for SU(2) and U(n), n ≤ 4;
//! * [`character`]: the Weyl character formula as exact Laurent arithmetic;
//! * [`lacuna`]: Q-thin / Hadamard-lacunary predicates, minimal lacunary
//!   covers and the product-box spectral condition;
//! * [`torus`]: sparse Fourier series on the torus, DFT analysis and
//!   zero-set box scanning;
//! * [`su2`]: a numerical SU(2) laboratory (Haar quadrature, irreducible
//!   representations, operator Fourier transform, central averages).

pub mod character;
pub mod error;
pub mod lacuna;
pub mod laurent;
pub mod roots;
pub mod series;
pub mod su2;
pub mod torus;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use roots::{GroupId, RootSystem, SpectrumSet, Weight, WeylElement};
pub use series::TorusSeries;

pub use num_complex::Complex64;
pub use num_rational::Rational64;

/// Coefficients below this magnitude are treated as zero and pruned.
pub const ZERO_THRESHOLD: f64 = 1e-12;
