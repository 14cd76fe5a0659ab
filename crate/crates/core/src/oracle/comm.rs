use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chebyshev::Params;
use crate::error::{Error, Result};
use crate::ncalgebra::Coeff;

/// Exponent pair `(dx, dy)`, ordered graded-lex: total degree first, then
/// `dx`. The order is compatible with multiplication, which is what exact
/// division needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Exp(i64, i64);

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0 + self.1, self.0).cmp(&(other.0 + other.1, other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Laurent polynomial in commuting `x, y`. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommLaurentPoly<C> {
    terms: BTreeMap<Exp, C>,
}

impl<C: Coeff> Default for CommLaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> CommLaurentPoly<C> {
    pub fn zero() -> Self {
        CommLaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0)
    }

    pub fn monomial(dx: i64, dy: i64) -> Self {
        Self::term(dx, dy, C::one())
    }

    pub fn term(dx: i64, dy: i64, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(dx, dy, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for ((dx, dy), c) in terms {
            p.add_term(dx, dy, c);
        }
        p
    }

    pub fn add_term(&mut self, dx: i64, dy: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let key = Exp(dx, dy);
        let slot = self.terms.entry(key).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&key);
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

    pub fn coeff(&self, dx: i64, dy: i64) -> C {
        self.terms.get(&Exp(dx, dy)).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in increasing graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &C)> {
        self.terms.iter().map(|(e, c)| ((e.0, e.1), c))
    }

    fn leading(&self) -> Option<(Exp, &C)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    fn lowest(&self) -> Option<Exp> {
        self.terms.keys().next().copied()
    }

    /// Value at `x = y = 1`.
    pub fn eval_at_one(&self) -> C {
        self.terms.values().fold(C::zero(), |a, c| a + c.clone())
    }

    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`. Cancels the divisor's leading term
    /// against the dividend; a quotient term below `low(self) / low(divisor)`
    /// can only come from an inexact division.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (lead, lead_c) = divisor.leading().ok_or(Error::InexactDivision)?;
        let lead_c = lead_c.clone();
        let floor = match (self.lowest(), divisor.lowest()) {
            (Some(a), Some(b)) => Exp(a.0 - b.0, a.1 - b.1),
            _ => return Ok(Self::zero()),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((top, c)) = rem.leading() {
            let t = Exp(top.0 - lead.0, top.1 - lead.1);
            let (qc, r) = c.div_rem(&lead_c);
            if t < floor || !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (e, dc) in &divisor.terms {
                rem.add_term(t.0 + e.0, t.1 + e.1, -(qc.clone() * dc.clone()));
            }
            quot.add_term(t.0, t.1, qc);
        }
        Ok(quot)
    }
}

impl<C: Coeff> Add for &CommLaurentPoly<C> {
    type Output = CommLaurentPoly<C>;

    fn add(self, rhs: Self) -> CommLaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.0, e.1, c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &CommLaurentPoly<C> {
    type Output = CommLaurentPoly<C>;

    fn neg(self) -> CommLaurentPoly<C> {
        CommLaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<C: Coeff> Sub for &CommLaurentPoly<C> {
    type Output = CommLaurentPoly<C>;

    fn sub(self, rhs: Self) -> CommLaurentPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &CommLaurentPoly<C> {
    type Output = CommLaurentPoly<C>;

    fn mul(self, rhs: Self) -> CommLaurentPoly<C> {
        let mut out = CommLaurentPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.0 + b.0, a.1 + b.1, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for CommLaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff> fmt::Display for CommLaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if e.0 != 0 {
                write!(f, "*x^{}", e.0)?;
            }
            if e.1 != 0 {
                write!(f, "*y^{}", e.1)?;
            }
        }
        Ok(())
    }
}

/// The commutative shadow `c_k` of `x_k`: `c_0 = x`, `c_1 = y`,
/// `c_{k+1} c_{k-1} = 1 + c_k^{r_k}`.
pub fn comm_cluster(params: Params, k: u32) -> Result<CommLaurentPoly<BigInt>> {
    let mut prev = CommLaurentPoly::x();
    let mut cur = CommLaurentPoly::y();
    if k == 0 {
        return Ok(prev);
    }
    for j in 1..k {
        let num = &CommLaurentPoly::one() + &cur.pow(params.r(i64::from(j)));
        let next = num.div_exact(&prev)?;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `c_0, ..., c_k` at `x = y = 1`, by the integer recurrence.
pub fn comm_cluster_values(params: Params, k: u32) -> Result<Vec<BigInt>> {
    let mut v = vec![BigInt::one(), BigInt::one()];
    for j in 1..k as usize {
        let num = BigInt::one() + num_traits::pow(v[j].clone(), params.r(j as i64) as usize);
        let (q, r) = num_integer::Integer::div_rem(&num, &v[j - 1]);
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        v.push(q);
    }
    v.truncate(k as usize + 1);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = CommLaurentPoly<BigInt>;

    fn params(r1: u32, r2: u32) -> Params {
        Params::new(r1, r2).unwrap()
    }

    #[test]
    fn first_terms() {
        let p = params(2, 3);
        assert_eq!(comm_cluster(p, 0).unwrap(), P::x());
        assert_eq!(comm_cluster(p, 1).unwrap(), P::y());
        let c2 = P::from_terms([((-1, 0), BigInt::from(1)), ((-1, 2), BigInt::from(1))]);
        assert_eq!(comm_cluster(p, 2).unwrap(), c2);
    }

    #[test]
    fn c3_closed_form() {
        for (r1, r2) in [(2, 3), (3, 2), (5, 1), (1, 5)] {
            let y_inv = P::monomial(0, -1);
            let one_plus = &P::one() + &P::monomial(0, r1 as i64);
            let expected =
                &y_inv + &(&(&one_plus.pow(r2) * &P::monomial(-(r2 as i64), 0)) * &y_inv);
            assert_eq!(comm_cluster(params(r1, r2), 3).unwrap(), expected);
        }
    }

    #[test]
    fn counts_at_one() {
        let p = params(2, 3);
        assert_eq!(comm_cluster(p, 4).unwrap().eval_at_one(), BigInt::from(41));
        let v = comm_cluster_values(p, 5).unwrap();
        assert_eq!(v, [1, 1, 2, 9, 41, 7658].map(BigInt::from));
        for k in 0..=6 {
            let c = comm_cluster(params(3, 2), k).unwrap();
            assert_eq!(c.eval_at_one(), comm_cluster_values(params(3, 2), k).unwrap()[k as usize]);
            assert!(c.is_nonneg());
        }
    }

    #[test]
    fn periodic_small_cases() {
        // r1 r2 < 4 gives a finite-type recurrence: (1, 1) has period 5
        let p = params(1, 1);
        assert_eq!(comm_cluster(p, 5).unwrap(), P::x());
        assert_eq!(comm_cluster(p, 6).unwrap(), P::y());
    }

    #[test]
    fn inexact_division_is_reported() {
        let a = &P::one() + &P::x();
        let b = &P::one() + &P::y();
        assert_eq!(a.div_exact(&b), Err(Error::InexactDivision));
        assert_eq!(P::x().div_exact(&P::zero()), Err(Error::InexactDivision));
    }

    fn arb() -> impl Strategy<Value = P> {
        prop::collection::vec(((-3i64..4, -3i64..4), -4i64..5), 1..6).prop_map(|ts| {
            P::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn division_inverts_multiplication(a in arb(), b in arb()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.div_exact(&b).unwrap(), a);
        }

        #[test]
        fn no_zero_coefficients(a in arb(), b in arb()) {
            let s = &(&a * &b) - &(&b * &a);
            prop_assert!(s.is_zero());
            prop_assert!((&a - &a).is_zero());
        }
    }
}
