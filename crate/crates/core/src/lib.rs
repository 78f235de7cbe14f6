//! Exact combinatorics of square-free matroidal monomial ideals.
//!
//! The combinatorial layer (ideals, exchange checks, quotients, primes,
//! Schmitt–Vogel partitions) works on bitset monomials. The polynomial
//! oracle in [`poly`] is generic over the coefficient field; [`RationalPoly`]
//! fixes it to exact rationals.

pub mod decomposition;
pub mod error;
pub mod explorer;
pub mod ideal;
pub mod matroid;
pub mod poly;
pub mod quotients;
pub mod report;
pub mod sv_rank;

use num_rational::BigRational;

pub use error::{Error, Result};
pub use ideal::{Ideal, Monomial, VarSet};
pub use matroid::{check_matroidal, MatroidalIdeal};

/// Polynomials over `Q`, the certificate oracle's working type.
pub type RationalPoly = poly::Poly<BigRational>;
pub type RationalCertificate = sv_rank::RadicalCertificate<BigRational>;
