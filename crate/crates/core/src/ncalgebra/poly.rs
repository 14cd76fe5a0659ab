use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use ahash::AHashMap;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use super::matrix::{ModMatrix, PrimeField};
use super::word::{Factor, Gen, ReducedWord};
use crate::error::{Error, Result};
use crate::oracle::CommLaurentPoly;

/// Coefficient ring of the polynomials: any signed integer type.
pub trait Coeff:
    Clone + fmt::Debug + fmt::Display + FromStr + Integer + Signed + FromPrimitive + ToPrimitive
{
    /// Residue in `[0, p)`.
    fn residue(&self, p: u64) -> u64 {
        let m = Self::from_u64(p).expect("modulus fits the coefficient type");
        self.mod_floor(&m).to_u64().expect("residue is below the modulus")
    }
}

impl<T> Coeff for T where
    T: Clone + fmt::Debug + fmt::Display + FromStr + Integer + Signed + FromPrimitive + ToPrimitive
{
}

/// A finite `C`-linear combination of reduced words. Zero coefficients are
/// never stored, so equality is equality of the term maps.
#[derive(Clone, PartialEq, Eq)]
pub struct NcLaurentPoly<C> {
    terms: AHashMap<ReducedWord, C>,
}

impl<C: Coeff> Default for NcLaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> NcLaurentPoly<C> {
    pub fn zero() -> Self {
        NcLaurentPoly { terms: AHashMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(ReducedWord::identity())
    }

    pub fn monomial(word: ReducedWord) -> Self {
        Self::term(word, C::one())
    }

    pub fn term(word: ReducedWord, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn constant(c: C) -> Self {
        Self::term(ReducedWord::identity(), c)
    }

    pub fn x() -> Self {
        Self::monomial(ReducedWord::x(1))
    }

    pub fn y() -> Self {
        Self::monomial(ReducedWord::y(1))
    }

    /// Sums repeated words.
    pub fn from_terms<I: IntoIterator<Item = (ReducedWord, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub(crate) fn from_map_unchecked(terms: AHashMap<ReducedWord, C>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        NcLaurentPoly { terms }
    }

    pub fn add_term(&mut self, word: ReducedWord, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let v = o.get().clone() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &ReducedWord) -> C {
        self.terms.get(word).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReducedWord, &C)> {
        self.terms.iter()
    }

    /// Terms in canonical (graded lexicographic) order.
    pub fn canonical_terms(&self) -> Vec<(&ReducedWord, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_unstable_by(|a, b| a.0.canonical_cmp(b.0));
        v
    }

    pub fn sum_of_coeffs(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// True iff every stored coefficient is at least 1.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NcLaurentPoly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Sends each word to its total exponents; `q` maps to 1.
    pub fn abelianize(&self) -> CommLaurentPoly<C> {
        CommLaurentPoly::from_terms(
            self.terms.iter().map(|(w, c)| (w.abelian_exponents(), c.clone())),
        )
    }

    pub fn eval_matrices(
        &self,
        field: &PrimeField,
        mx: &ModMatrix,
        my: &ModMatrix,
    ) -> Result<ModMatrix> {
        let mut out = self.eval_matrices_many(field, &[(mx.clone(), my.clone())])?;
        Ok(out.pop().expect("one pair in, one matrix out"))
    }

    /// Evaluates at several matrix pairs in one pass. Terms are visited in
    /// lexicographic factor order so that shared prefixes are multiplied
    /// once per pair.
    pub fn eval_matrices_many(
        &self,
        field: &PrimeField,
        pairs: &[(ModMatrix, ModMatrix)],
    ) -> Result<Vec<ModMatrix>> {
        let Some(dim) = pairs.first().map(|(mx, _)| mx.dim()) else {
            return Ok(Vec::new());
        };
        let mut evals = Vec::with_capacity(pairs.len());
        for (mx, my) in pairs {
            if mx.dim() != dim || my.dim() != dim {
                return Err(Error::InvalidParams("matrix dimensions differ".into()));
            }
            evals.push(FactorPowers::new(field, mx, my)?);
        }

        let mut sorted: Vec<(&ReducedWord, &C)> = self.terms.iter().collect();
        sorted.sort_unstable_by(|a, b| a.0.factors().cmp(b.0.factors()));

        let p = field.modulus();
        let mut acc: Vec<ModMatrix> = vec![ModMatrix::zero(dim); pairs.len()];
        // stack[d][t]: product of the first d factors of the current word at pair t
        let mut stack: Vec<Vec<ModMatrix>> = vec![vec![ModMatrix::identity(dim); pairs.len()]];
        let mut prev: &[Factor] = &[];
        for (word, c) in sorted {
            let f = word.factors();
            let lcp = prev.iter().zip(f).take_while(|(a, b)| a == b).count();
            stack.truncate(lcp + 1);
            for &factor in &f[lcp..] {
                let top = stack.last().expect("stack holds the identity");
                let next: Vec<ModMatrix> = top
                    .iter()
                    .zip(evals.iter_mut())
                    .map(|(m, ev)| field.mul(m, ev.power(field, factor)))
                    .collect();
                stack.push(next);
            }
            let r = c.residue(p);
            for (a, m) in acc.iter_mut().zip(stack.last().expect("non-empty")) {
                field.add_scaled_assign(a, m, r);
            }
            prev = f;
        }
        Ok(acc)
    }

    pub fn to_latex(&self) -> String {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (w, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if w.is_identity() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                }
                s.push_str(&w.to_latex());
            }
        }
        s
    }

    /// One `coeff<TAB>word` line per term, canonical order.
    pub fn to_text(&self) -> String {
        self.canonical_terms()
            .iter()
            .map(|(w, c)| format!("{c}\t{w}\n"))
            .collect()
    }
}

/// Cached matrix powers of `x^{±1}`, `y^{±1}` for one evaluation point.
struct FactorPowers {
    base: [ModMatrix; 4],
    cache: AHashMap<Factor, ModMatrix>,
}

impl FactorPowers {
    fn new(field: &PrimeField, mx: &ModMatrix, my: &ModMatrix) -> Result<Self> {
        let xi = field.inverse(mx)?;
        let yi = field.inverse(my)?;
        Ok(FactorPowers { base: [mx.clone(), xi, my.clone(), yi], cache: AHashMap::new() })
    }

    fn power(&mut self, field: &PrimeField, f: Factor) -> &ModMatrix {
        let base = &self.base;
        self.cache.entry(f).or_insert_with(|| {
            let idx = match (f.gen(), f.exp() > 0) {
                (Gen::X, true) => 0,
                (Gen::X, false) => 1,
                (Gen::Y, true) => 2,
                (Gen::Y, false) => 3,
            };
            field.pow(&base[idx], u64::from(f.exp().unsigned_abs()))
        })
    }
}

impl<C: Coeff> fmt::Debug for NcLaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NcLaurentPoly[")?;
        for (i, (w, c)) in self.canonical_terms().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}*({w})")?;
        }
        f.write_str("]")
    }
}

impl<C: Coeff> fmt::Display for NcLaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*({w})")?;
        }
        Ok(())
    }
}

impl<C: Coeff> Add for &NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn add(self, rhs: Self) -> NcLaurentPoly<C> {
        let mut out = self.clone();
        for (w, c) in rhs.terms.iter() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn sub(self, rhs: Self) -> NcLaurentPoly<C> {
        let mut out = self.clone();
        for (w, c) in rhs.terms.iter() {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn neg(self) -> NcLaurentPoly<C> {
        NcLaurentPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

impl<C: Coeff> Mul for &NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn mul(self, rhs: Self) -> NcLaurentPoly<C> {
        let mut out = NcLaurentPoly::zero();
        for (a, ca) in self.terms.iter() {
            for (b, cb) in rhs.terms.iter() {
                out.add_term(a.mul(b), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Add for NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for NcLaurentPoly<C> {
    type Output = NcLaurentPoly<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}
