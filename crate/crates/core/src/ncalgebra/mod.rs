//! Exact arithmetic for Laurent monomials and polynomials in two
//! non-commuting variables, plus evaluation on matrices over `F_p`.

mod format;
mod matrix;
mod poly;
mod word;

pub use format::{PolyJson, TermJson};
pub use matrix::{ModMatrix, PrimeField, MERSENNE_31};
pub use poly::{Coeff, NcLaurentPoly};
pub use word::{Factor, Gen, ReducedWord, WordBuf};
