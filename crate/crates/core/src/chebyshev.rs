//! The two-parameter Chebyshev recursion
//! `U_{-1,j} = 0`, `U_{0,j} = 1`, `U_{k+1,j+1} = r_j U_{k,j} - U_{k-1,j-1}`,
//! with `r_j = r1` for odd `j` and `r2` for even `j`, and the correction
//! terms `epsilon_k`, `delta_k`.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// The pair `(r1, r2)` of positive exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub r1: u32,
    pub r2: u32,
}

impl Params {
    pub fn new(r1: u32, r2: u32) -> Result<Self> {
        if r1 == 0 || r2 == 0 {
            return Err(Error::InvalidParams(format!("r1 = {r1}, r2 = {r2} must be positive")));
        }
        Ok(Params { r1, r2 })
    }

    /// `r_j`: `r1` for odd `j`, `r2` for even `j`.
    pub fn r(&self, j: i64) -> u32 {
        match Parity::of(j) {
            Parity::Odd => self.r1,
            Parity::Even => self.r2,
        }
    }

    /// Parameters with every `r_k` replaced by `r_{k+shift}`.
    pub fn shifted(&self, shift: i64) -> Params {
        match Parity::of(shift) {
            Parity::Even => *self,
            Parity::Odd => Params { r1: self.r2, r2: self.r1 },
        }
    }

    /// `epsilon_k = max(0, 2 - r_{k-1})`.
    pub fn epsilon(&self, k: i64) -> i64 {
        (2 - i64::from(self.r(k - 1))).max(0)
    }

    /// `delta_k = epsilon_k + 2 epsilon_{k-1} + 1`.
    pub fn delta(&self, k: i64) -> i64 {
        self.epsilon(k) + 2 * self.epsilon(k - 1) + 1
    }

    pub fn in_model_domain(&self) -> bool {
        u64::from(self.r1) * u64::from(self.r2) >= 5
    }

    pub fn require_model_domain(&self) -> Result<()> {
        if self.in_model_domain() {
            Ok(())
        } else {
            Err(Error::ModelDomain { r1: self.r1, r2: self.r2 })
        }
    }
}

/// Parity of the second Chebyshev index; `U_{k,j}` only depends on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(j: i64) -> Parity {
        if j.rem_euclid(2) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

/// Scalar type able to hold Chebyshev values.
pub trait ChebScalar: Clone + Signed + Ord + FromPrimitive + ToPrimitive + std::fmt::Display {}

impl<T> ChebScalar for T where T: Clone + Signed + Ord + FromPrimitive + ToPrimitive + std::fmt::Display {}

/// Memo table of `U_{k,j}` for `-2 <= k <= kmax`, built eagerly.
#[derive(Clone, Debug)]
pub struct ChebTable<T> {
    params: Params,
    kmax: i64,
    odd: Vec<T>,
    even: Vec<T>,
}

impl<T: ChebScalar> ChebTable<T> {
    pub fn build(params: Params, kmax: i64) -> Self {
        let kmax = kmax.max(0);
        let len = (kmax + 3) as usize;
        let mut odd = Vec::with_capacity(len);
        let mut even = Vec::with_capacity(len);
        for v in [-1i64, 0, 1] {
            odd.push(T::from_i64(v).expect("small constants fit"));
            even.push(T::from_i64(v).expect("small constants fit"));
        }
        let r_odd = T::from_u32(params.r1).expect("r fits");
        let r_even = T::from_u32(params.r2).expect("r fits");
        // U_{k,j} = r_{j-1} U_{k-1,j-1} - U_{k-2,j-2}
        for idx in 3..len {
            let o = r_even.clone() * even[idx - 1].clone() - odd[idx - 2].clone();
            let e = r_odd.clone() * odd[idx - 1].clone() - even[idx - 2].clone();
            odd.push(o);
            even.push(e);
        }
        odd.truncate(len);
        even.truncate(len);
        ChebTable { params, kmax, odd, even }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn kmax(&self) -> i64 {
        self.kmax
    }

    pub fn get(&self, k: i64, parity: Parity) -> Result<&T> {
        if k < -2 {
            return Err(Error::UnsupportedIndex { what: "Chebyshev index below -2", index: k });
        }
        if k > self.kmax {
            return Err(Error::UnsupportedIndex { what: "Chebyshev index beyond table", index: k });
        }
        let idx = (k + 2) as usize;
        Ok(match parity {
            Parity::Odd => &self.odd[idx],
            Parity::Even => &self.even[idx],
        })
    }

    /// `U_{k,j}`.
    pub fn u(&self, k: i64, j: i64) -> Result<&T> {
        self.get(k, Parity::of(j))
    }

    /// Corner `(W, H) = (U_{n-3,1} - U_{n-4,2}, U_{n-4,2})` of `R_n`.
    pub fn rect(&self, n: i64) -> Result<(T, T)> {
        if n < 2 {
            return Err(Error::UnsupportedIndex { what: "rectangle index below 2", index: n });
        }
        let a = self.u(n - 3, 1)?.clone();
        let h = self.u(n - 4, 2)?.clone();
        Ok((a - h.clone(), h))
    }

    /// `max(|U_{n-3,1}|, |U_{n-4,2}|)`, the number of edges of `D_n`.
    pub fn edge_count(&self, n: i64) -> Result<T> {
        if n < 2 {
            return Err(Error::UnsupportedIndex { what: "rectangle index below 2", index: n });
        }
        Ok(self.u(n - 3, 1)?.abs().max(self.u(n - 4, 2)?.abs()))
    }

    /// Re-checks the defining recursion at every stored index.
    pub fn check_recursion(&self) -> bool {
        let base = |v: &[T]| {
            v[0] == T::from_i64(-1).unwrap() && v[1].is_zero() && v[2] == T::from_i64(1).unwrap()
        };
        if !base(&self.odd) || !base(&self.even) {
            return false;
        }
        let r_odd = T::from_u32(self.params.r1).unwrap();
        let r_even = T::from_u32(self.params.r2).unwrap();
        (1..=self.kmax).all(|k| {
            let i = (k + 2) as usize;
            self.odd[i] == r_even.clone() * self.even[i - 1].clone() - self.odd[i - 2].clone()
                && self.even[i] == r_odd.clone() * self.odd[i - 1].clone() - self.even[i - 2].clone()
        })
    }

    /// `(k, U_{k,odd}, U_{k,even})` rows.
    pub fn rows(&self) -> impl Iterator<Item = (i64, &T, &T)> {
        (-2..=self.kmax).map(move |k| {
            let i = (k + 2) as usize;
            (k, &self.odd[i], &self.even[i])
        })
    }
}

/// One-shot lookup of `U_{k,j}` for the given parity.
pub fn cheb(params: Params, k: i64, parity: Parity) -> Result<BigInt> {
    ChebTable::<BigInt>::build(params, k).get(k, parity).cloned()
}
