use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator of the free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    X,
    Y,
}

impl Gen {
    pub fn symbol(self) -> char {
        match self {
            Gen::X => 'x',
            Gen::Y => 'y',
        }
    }
}

/// A factor `g^e` with `e != 0`, packed as `e << 1 | g` into one `i32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Factor(i32);

impl Factor {
    pub const MAX_EXP: i32 = i32::MAX >> 1;

    /// Panics if `exp` is zero or does not fit in 30 bits.
    pub fn new(gen: Gen, exp: i32) -> Self {
        assert!(
            exp != 0 && (-Self::MAX_EXP..=Self::MAX_EXP).contains(&exp),
            "factor exponent {exp} out of range"
        );
        Factor((exp << 1) | gen as i32)
    }

    pub fn gen(self) -> Gen {
        if self.0 & 1 == 0 {
            Gen::X
        } else {
            Gen::Y
        }
    }

    pub fn exp(self) -> i32 {
        self.0 >> 1
    }

    pub fn inv(self) -> Self {
        Factor::new(self.gen(), -self.exp())
    }

    /// Key of the canonical factor order: x before y, positive before
    /// negative, then smaller magnitude first.
    fn canonical_key(self) -> (Gen, bool, u32) {
        (self.gen(), self.exp() < 0, self.exp().unsigned_abs())
    }
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.gen().symbol(), self.exp())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp() {
            1 => write!(f, "{}", self.gen().symbol()),
            e => write!(f, "{}^{}", self.gen().symbol(), e),
        }
    }
}

/// Growable scratch word, kept freely reduced by [`WordBuf::push`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordBuf(Vec<Factor>);

impl WordBuf {
    pub fn new() -> Self {
        WordBuf(Vec::new())
    }

    pub fn clear(&mut self) {
        self.0.clear();
    }

    pub fn as_slice(&self) -> &[Factor] {
        &self.0
    }

    /// Right-multiply by one factor, merging or cancelling with the tail.
    pub fn push(&mut self, f: Factor) {
        match self.0.last() {
            Some(last) if last.gen() == f.gen() => {
                let e = last.exp() + f.exp();
                self.0.pop();
                if e != 0 {
                    self.0.push(Factor::new(f.gen(), e));
                }
            }
            _ => self.0.push(f),
        }
    }

    pub fn extend(&mut self, factors: &[Factor]) {
        for &f in factors {
            self.push(f);
        }
    }

    pub fn copy_from(&mut self, other: &WordBuf) {
        self.0.clear();
        self.0.extend_from_slice(&other.0);
    }

    pub fn to_word(&self) -> ReducedWord {
        ReducedWord(self.0.clone().into_boxed_slice())
    }
}

/// A freely reduced word in `x, y` and their inverses: a Laurent monomial
/// in non-commuting variables. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord(Box<[Factor]>);

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Box::new([]))
    }

    pub fn gen_pow(gen: Gen, exp: i32) -> Self {
        if exp == 0 {
            Self::identity()
        } else {
            ReducedWord(Box::new([Factor::new(gen, exp)]))
        }
    }

    pub fn x(exp: i32) -> Self {
        Self::gen_pow(Gen::X, exp)
    }

    pub fn y(exp: i32) -> Self {
        Self::gen_pow(Gen::Y, exp)
    }

    /// Builds a word from `(generator, exponent)` pairs, reducing as it goes.
    pub fn from_pairs<I: IntoIterator<Item = (Gen, i32)>>(pairs: I) -> Self {
        let mut buf = WordBuf::new();
        for (g, e) in pairs {
            if e != 0 {
                buf.push(Factor::new(g, e));
            }
        }
        ReducedWord(buf.0.into_boxed_slice())
    }

    /// `q = x y x^-1 y^-1`.
    pub fn commutator() -> Self {
        Self::from_pairs([(Gen::X, 1), (Gen::Y, 1), (Gen::X, -1), (Gen::Y, -1)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut buf = WordBuf(Vec::with_capacity(self.len() + other.len()));
        buf.0.extend_from_slice(&self.0);
        buf.extend(&other.0);
        ReducedWord(buf.0.into_boxed_slice())
    }

    pub fn inv(&self) -> ReducedWord {
        ReducedWord(self.0.iter().rev().map(|f| f.inv()).collect())
    }

    pub fn pow(&self, e: u32) -> ReducedWord {
        (0..e).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Sum of absolute exponents.
    pub fn grade(&self) -> u64 {
        self.0.iter().map(|f| u64::from(f.exp().unsigned_abs())).sum()
    }

    /// Total x-degree and y-degree.
    pub fn abelian_exponents(&self) -> (i64, i64) {
        let mut dx = 0i64;
        let mut dy = 0i64;
        for f in self.0.iter() {
            match f.gen() {
                Gen::X => dx += i64::from(f.exp()),
                Gen::Y => dy += i64::from(f.exp()),
            }
        }
        (dx, dy)
    }

    /// Graded lexicographic order used for serialization and display.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            self.0
                .iter()
                .map(|f| f.canonical_key())
                .cmp(other.0.iter().map(|f| f.canonical_key()))
        })
    }

    /// LaTeX rendering, e.g. `xy^{-1}x^{-1}`; the identity renders as `1`.
    pub fn to_latex(&self) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        let mut s = String::new();
        for f in self.0.iter() {
            match f.exp() {
                1 => s.push(f.gen().symbol()),
                e => {
                    s.push(f.gen().symbol());
                    s.push_str(&format!("^{{{e}}}"));
                }
            }
        }
        s
    }
}

impl Borrow<[Factor]> for ReducedWord {
    fn borrow(&self) -> &[Factor] {
        &self.0
    }
}

impl From<&[Factor]> for ReducedWord {
    fn from(factors: &[Factor]) -> Self {
        let mut buf = WordBuf::new();
        buf.extend(factors);
        ReducedWord(buf.0.into_boxed_slice())
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        for (idx, factor) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({self})")
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    /// Accepts the display format (`x y^-1 x^-1`, `1` for the identity).
    /// Unreduced input is reduced.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::identity());
        }
        if s.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        let mut pairs = Vec::new();
        for token in s.split_whitespace() {
            let (g, e) = match token.split_once('^') {
                Some((g, e)) => {
                    let e: i32 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
                    (g, e)
                }
                None => (token, 1),
            };
            let gen = match g {
                "x" => Gen::X,
                "y" => Gen::Y,
                _ => return Err(Error::Parse(format!("unknown generator in {token:?}"))),
            };
            if e == 0 || e.unsigned_abs() > Factor::MAX_EXP as u32 {
                return Err(Error::Parse(format!("exponent out of range in {token:?}")));
            }
            pairs.push((gen, e));
        }
        Ok(Self::from_pairs(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn factor_packing() {
        for g in [Gen::X, Gen::Y] {
            for e in [-7, -1, 1, 3, Factor::MAX_EXP, -Factor::MAX_EXP] {
                let f = Factor::new(g, e);
                assert_eq!((f.gen(), f.exp()), (g, e));
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(w("x").mul(&w("x^-1")), ReducedWord::identity());
        assert_eq!(w("x y").mul(&w("y^-1 x")), w("x^2"));
        let q = ReducedWord::commutator();
        assert_eq!(q.inv(), w("y x y^-1 x^-1"));
        assert_eq!(q.mul(&w("y x y^-1 x^-1")), ReducedWord::identity());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ReducedWord::identity().inv(), ReducedWord::identity());
        assert_eq!(w("x y^-1 x^-1").inv(), w("x y x^-1"));
        assert_eq!(w("x^3").inv(), w("x^-3"));
    }

    #[test]
    fn display_is_bit_exact() {
        assert_eq!(w("x y^-1 x^-1").to_string(), "x y^-1 x^-1");
        assert_eq!(ReducedWord::identity().to_string(), "1");
        assert_eq!(w("x^1 y^2").to_string(), "x y^2");
        assert_eq!(w("x y x^-1 x y^-1").to_string(), "x");
        assert_eq!(w("y^-2 x^3").to_latex(), "y^{-2}x^{3}");
    }

    #[test]
    fn parse_errors() {
        assert!("z".parse::<ReducedWord>().is_err());
        assert!("x^0".parse::<ReducedWord>().is_err());
        assert!("x^a".parse::<ReducedWord>().is_err());
        assert!("".parse::<ReducedWord>().is_err());
    }

    #[test]
    fn canonical_order() {
        // Grade first, then factor by factor: x < y, positive < negative,
        // small |e| first.
        let mut v = [w("y"), w("x^-1"), w("x"), w("x^2"), w("x y"), w("1"), w("y^-1"), w("x^-2")];
        v.sort();
        let shown: Vec<String> = v.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["1", "x", "x^-1", "y", "y^-1", "x y", "x^2", "x^-2"]);
    }

    fn arb_word() -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec((prop::bool::ANY, -3i32..=3), 0..8).prop_map(|v| {
            ReducedWord::from_pairs(
                v.into_iter()
                    .map(|(g, e)| (if g { Gen::X } else { Gen::Y }, e)),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn mul_is_associative(a in arb_word(), b in arb_word(), c in arb_word()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn words_stay_reduced(a in arb_word(), b in arb_word()) {
            let p = a.mul(&b);
            for pair in p.factors().windows(2) {
                prop_assert_ne!(pair[0].gen(), pair[1].gen());
            }
            prop_assert!(p.factors().iter().all(|f| f.exp() != 0));
        }

        #[test]
        fn inverse_law(a in arb_word()) {
            prop_assert!(a.mul(&a.inv()).is_identity());
            prop_assert!(a.inv().mul(&a).is_identity());
        }

        #[test]
        fn display_roundtrip(a in arb_word()) {
            prop_assert_eq!(a.to_string().parse::<ReducedWord>().unwrap(), a);
        }
    }
}
