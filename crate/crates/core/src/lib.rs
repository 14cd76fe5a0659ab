//! Non-commutative rank-2 cluster variables.
//!
//! The elements `x_k` obtained by alternately applying the automorphisms
//! `F_r: (x, y) -> (x y x^-1, (1 + y^r) x^-1)` of the free skew field are
//! non-commutative Laurent polynomials with non-negative coefficients. This
//! crate computes them exactly as weighted sums over collections of colored
//! subpaths of a maximal Dyck path, and checks the results against two
//! independent oracles: the commutative rank-2 recurrence, and randomized
//! evaluation of the automorphism recursion on matrices over a prime field.
//!
//! Arithmetic is generic over the coefficient ring (any signed integer type
//! from `num-traits`); the aliases below fix the arbitrary-precision choice
//! used throughout the model.

pub mod chebyshev;
pub mod classify;
pub mod collect;
pub mod dyckpath;
pub mod error;
pub mod ncalgebra;
pub mod oracle;
pub mod weight;

use num_bigint::BigInt;

pub use chebyshev::{ChebTable, Params, Parity};
pub use classify::SubpathLabel;
pub use collect::{Admissible, Collection, Family};
pub use dyckpath::{DyckPath, Hook, Step};
pub use error::{Error, Result};
pub use ncalgebra::{Factor, Gen, ModMatrix, NcLaurentPoly, PrimeField, ReducedWord};
pub use oracle::{CommLaurentPoly, ExprGraph, ExprId, Verdict, VerifyConfig};
pub use weight::{WeightCase, WeightRules, XVarOptions};

/// Non-commutative Laurent polynomial with arbitrary-precision coefficients.
pub type NcPoly = NcLaurentPoly<BigInt>;
/// Commutative Laurent polynomial with arbitrary-precision coefficients.
pub type CommPoly = CommLaurentPoly<BigInt>;
/// Chebyshev table with arbitrary-precision entries.
pub type Cheb = ChebTable<BigInt>;
/// Small-coefficient variant, handy for property tests.
pub type NcPolyI64 = NcLaurentPoly<i64>;
