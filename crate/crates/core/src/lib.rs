//! Exact arithmetic for studying the ℓ-adic behaviour of Frobenius
//! characteristic polynomials along towers of curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: fixed-precision ℓ-adic integers, valuations, `exp`/`log`.
//! * [`cyclotomic`]: the rings `Z[ζ_{ℓⁿ}]` (modulo `ℓᴺ` or exact) and the
//!   bi-cyclotomic ring `Z[ζ_p, ζ_{ℓⁿ}]` that Gauss sums live in.
//! * [`matrix`], [`poly`]: dense matrices and polynomials over any
//!   commutative ring, including the division-free Berkowitz characteristic
//!   polynomial.
//! * [`matrix_fermat`]: trace and characteristic polynomial congruences for
//!   powers `A^{ℓⁿ}` of integer matrices.
//! * [`tower`]: orbit structure of a twist matrix `Q`, twisted Frobenius
//!   products, their characteristic polynomials and the convergence checks.
//! * [`char_sums`]: explicit finite fields, Gauss and Jacobi sums, point
//!   counts and Weil polynomials of Fermat and Artin–Schreier curves.

pub mod char_sums;
pub mod cyclotomic;
pub mod decimal;
pub mod error;
pub mod matrix;
pub mod matrix_fermat;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod tower;
mod util;

pub use error::{Error, Result};
