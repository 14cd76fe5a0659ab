use rand::Rng;

use crate::error::{Error, Result};

/// `2^31 - 1`, the default evaluation prime.
pub const MERSENNE_31: u64 = (1 << 31) - 1;

/// Dense square matrix with entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    dim: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(dim: usize) -> Self {
        ModMatrix { dim, data: vec![0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }
}

/// The prime field `F_p` for `p < 2^32`, with the matrix operations the
/// oracles need.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    // number of products (each < p^2) that can be summed in a u64 before reducing
    lazy_terms: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 32).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidParams(format!(
                "modulus {p} must be a prime below 2^32"
            )));
        }
        let sq = (p - 1) * (p - 1);
        let lazy_terms = (u64::MAX - (p - 1)).checked_div(sq).map_or(u64::MAX, |t| t.max(1));
        Ok(PrimeField { p, lazy_terms })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn from_matrix_rows(&self, rows: &[Vec<u64>]) -> Result<ModMatrix> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParams("matrix must be square".into()));
        }
        Ok(ModMatrix {
            dim,
            data: rows.iter().flatten().map(|v| v % self.p).collect(),
        })
    }

    pub fn scalar(&self, dim: usize, c: u64) -> ModMatrix {
        let mut m = ModMatrix::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c % self.p;
        }
        m
    }

    pub fn diagonal(&self, entries: &[u64]) -> ModMatrix {
        let dim = entries.len();
        let mut m = ModMatrix::zero(dim);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * dim + i] = e % self.p;
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> ModMatrix {
        ModMatrix {
            dim,
            data: (0..dim * dim).map(|_| rng.gen_range(0..self.p)).collect(),
        }
    }

    fn pow_mod(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }

    pub fn inv_scalar(&self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.p)).then(|| self.pow_mod(a, self.p - 2))
    }

    pub fn add(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        let mut out = a.clone();
        self.add_scaled_assign(&mut out, b, 1);
        out
    }

    pub fn sub(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        let mut out = a.clone();
        self.add_scaled_assign(&mut out, b, self.p - 1);
        out
    }

    /// `acc += c * b`.
    pub fn add_scaled_assign(&self, acc: &mut ModMatrix, b: &ModMatrix, c: u64) {
        debug_assert_eq!(acc.dim, b.dim);
        let c = c % self.p;
        for (x, y) in acc.data.iter_mut().zip(&b.data) {
            *x = (*x + y * c % self.p) % self.p;
        }
    }

    pub fn mul(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        let mut out = ModMatrix::zero(a.dim);
        self.mul_into(a, b, &mut out);
        out
    }

    pub fn mul_into(&self, a: &ModMatrix, b: &ModMatrix, out: &mut ModMatrix) {
        let d = a.dim;
        debug_assert_eq!(d, b.dim);
        out.dim = d;
        out.data.resize(d * d, 0);
        for i in 0..d {
            let row = &a.data[i * d..(i + 1) * d];
            for j in 0..d {
                let mut acc = 0u64;
                let mut pending = 0u64;
                for (k, &aik) in row.iter().enumerate() {
                    if pending == self.lazy_terms {
                        acc %= self.p;
                        pending = 0;
                    }
                    acc += aik * b.data[k * d + j];
                    pending += 1;
                }
                out.data[i * d + j] = acc % self.p;
            }
        }
    }

    pub fn pow(&self, a: &ModMatrix, mut e: u64) -> ModMatrix {
        let mut acc = ModMatrix::identity(a.dim);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn det(&self, a: &ModMatrix) -> u64 {
        let d = a.dim;
        let mut m = a.data.clone();
        let mut det = 1u64;
        for c in 0..d {
            let Some(piv) = (c..d).find(|&r| m[r * d + c] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..d {
                    m.swap(piv * d + j, c * d + j);
                }
                det = (self.p - det) % self.p;
            }
            let pv = m[c * d + c];
            det = det * pv % self.p;
            let inv = self.pow_mod(pv, self.p - 2);
            for r in c + 1..d {
                let f = m[r * d + c] * inv % self.p;
                if f == 0 {
                    continue;
                }
                for j in c..d {
                    let sub = f * m[c * d + j] % self.p;
                    m[r * d + j] = (m[r * d + j] + self.p - sub) % self.p;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, a: &ModMatrix) -> Result<ModMatrix> {
        let d = a.dim;
        let mut m = a.data.clone();
        let mut inv = ModMatrix::identity(d).data;
        for c in 0..d {
            let piv = (c..d).find(|&r| m[r * d + c] != 0).ok_or(Error::SingularMatrix)?;
            if piv != c {
                for j in 0..d {
                    m.swap(piv * d + j, c * d + j);
                    inv.swap(piv * d + j, c * d + j);
                }
            }
            let s = self.pow_mod(m[c * d + c], self.p - 2);
            for j in 0..d {
                m[c * d + j] = m[c * d + j] * s % self.p;
                inv[c * d + j] = inv[c * d + j] * s % self.p;
            }
            for r in 0..d {
                let f = m[r * d + c];
                if r == c || f == 0 {
                    continue;
                }
                for j in 0..d {
                    m[r * d + j] = (m[r * d + j] + self.p - f * m[c * d + j] % self.p) % self.p;
                    inv[r * d + j] =
                        (inv[r * d + j] + self.p - f * inv[c * d + j] % self.p) % self.p;
                }
            }
        }
        Ok(ModMatrix { dim: d, data: inv })
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(1 << 32).is_err());
        assert!(PrimeField::new(MERSENNE_31).is_ok());
        assert!(PrimeField::new(4_294_967_291).is_ok());
    }

    #[test]
    fn inverse_and_det() {
        for p in [7u64, 65_521, MERSENNE_31, 4_294_967_291] {
            let f = PrimeField::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for dim in [1, 2, 4, 6] {
                let a = f.random(dim, &mut rng);
                match f.inverse(&a) {
                    Ok(ai) => {
                        assert_ne!(f.det(&a), 0);
                        assert_eq!(f.mul(&a, &ai), ModMatrix::identity(dim));
                        assert_eq!(f.mul(&ai, &a), ModMatrix::identity(dim));
                    }
                    Err(e) => {
                        assert_eq!(e, Error::SingularMatrix);
                        assert_eq!(f.det(&a), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn singular_is_reported() {
        let f = PrimeField::new(MERSENNE_31).unwrap();
        let a = f.from_matrix_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(f.det(&a), 0);
        assert_eq!(f.inverse(&a), Err(Error::SingularMatrix));
    }

    #[test]
    fn lazy_reduction_matches_naive() {
        let f = PrimeField::new(4_294_967_291).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = f.random(9, &mut rng);
        let b = f.random(9, &mut rng);
        let c = f.mul(&a, &b);
        for i in 0..9 {
            for j in 0..9 {
                let naive = (0..9)
                    .map(|k| a.get(i, k) as u128 * b.get(k, j) as u128)
                    .sum::<u128>()
                    % f.modulus() as u128;
                assert_eq!(c.get(i, j) as u128, naive);
            }
        }
    }

    #[test]
    fn power_matches_repeated_product() {
        let f = PrimeField::new(MERSENNE_31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = f.random(4, &mut rng);
        let mut acc = ModMatrix::identity(4);
        for e in 0..9u64 {
            assert_eq!(f.pow(&a, e), acc);
            acc = f.mul(&acc, &a);
        }
    }
}
