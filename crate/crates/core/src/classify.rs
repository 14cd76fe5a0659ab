//! Coloring of the admissible subpaths `alpha(i, k)` between `nu`-vertices:
//! Dyck prefix, `(m, w)`-Dyck suffix, or short suffix.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::chebyshev::{ChebTable, Params};
use crate::dyckpath::DyckPath;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubpathLabel {
    Prefix,
    DyckSuffix { m: i64, w: i64 },
    ShortSuffix,
}

impl SubpathLabel {
    pub fn is_prefix(self) -> bool {
        self == SubpathLabel::Prefix
    }
}

impl fmt::Display for SubpathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubpathLabel::Prefix => f.write_str("prefix"),
            SubpathLabel::ShortSuffix => f.write_str("short_suffix"),
            SubpathLabel::DyckSuffix { m, w } => write!(f, "dyck_suffix({m},{w})"),
        }
    }
}

/// One admissible `(m, w)` pair with its ν-offset
/// `U_{m,2} - w U_{m-1-eps_{m-1},2}` and the number of preceding edges
/// `U_{m-1,1} - w U_{m-2-eps_{m-1},1}` that the C3 condition inspects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixWitness {
    pub m: i64,
    pub w: i64,
    pub offset: BigInt,
    pub lookback: BigInt,
}

/// Range of `w` for a given `m`: `1 <= w < r_{m - eps_{m-1}} - delta_m`.
pub fn w_range(params: Params, m: i64) -> std::ops::Range<i64> {
    let hi = i64::from(params.r(m - params.epsilon(m - 1))) - params.delta(m);
    1..hi.max(1)
}

/// Every admissible `(m, w)` with `m` in `ms`, in ascending `(m, w)` order.
pub fn suffix_witnesses(
    params: Params,
    ms: std::ops::RangeInclusive<i64>,
) -> Result<Vec<SuffixWitness>> {
    let table = ChebTable::<BigInt>::build(params, (*ms.end()).max(0));
    let mut out = Vec::new();
    for m in ms {
        let eps = params.epsilon(m - 1);
        for w in w_range(params, m) {
            let wb = BigInt::from(w);
            let offset = table.u(m, 2)? - &wb * table.u(m - 1 - eps, 2)?;
            let lookback = table.u(m - 1, 1)? - &wb * table.u(m - 2 - eps, 1)?;
            out.push(SuffixWitness { m, w, offset, lookback });
        }
    }
    Ok(out)
}

/// Precomputed witnesses for `1 <= m <= n - 4`, used to label every
/// subpath of one path.
#[derive(Clone, Debug)]
pub struct Classifier {
    witnesses: Vec<SuffixWitness>,
}

impl Classifier {
    pub fn new(path: &DyckPath) -> Result<Self> {
        let top = i64::from(path.n()) - 4;
        let witnesses = if top >= 1 { suffix_witnesses(path.params(), 1..=top)? } else { Vec::new() };
        Ok(Classifier { witnesses })
    }

    pub fn witnesses(&self) -> &[SuffixWitness] {
        &self.witnesses
    }

    /// First witness (smallest `m`, then smallest `w`) with the given offset.
    pub fn match_offset(&self, offset: i64) -> Option<&SuffixWitness> {
        self.witnesses.iter().find(|wit| wit.offset == BigInt::from(offset))
    }

    pub fn classify(&self, path: &DyckPath, i: usize, k: usize) -> Result<SubpathLabel> {
        if i >= k || k > path.max_nu() {
            return Err(Error::IndexOutOfRange { i, k, height: path.height() });
        }
        Ok(match first_steep(path, i, k) {
            None => SubpathLabel::Prefix,
            Some(t) => match self.match_offset((t - i) as i64) {
                Some(wit) => SubpathLabel::DyckSuffix { m: wit.m, w: wit.w },
                None => SubpathLabel::ShortSuffix,
            },
        })
    }

    /// Number of preceding non-diagonal edges C3 inspects for `(m, w)`,
    /// clamped at zero.
    pub fn lookback(&self, m: i64, w: i64) -> Option<usize> {
        self.witnesses.iter().find(|wit| wit.m == m && wit.w == w).map(|wit| {
            if wit.lookback.sign() == num_bigint::Sign::Minus {
                0
            } else {
                wit.lookback.to_usize().unwrap_or(usize::MAX)
            }
        })
    }
}

/// Smallest `t` in `(i, k]` with the slope from `nu_i` to `nu_t` above the
/// main diagonal.
pub fn first_steep(path: &DyckPath, i: usize, k: usize) -> Option<usize> {
    let from = path.nu_point(i);
    (i + 1..=k).find(|&t| path.steeper_than_diagonal(from, path.nu_point(t)))
}

/// Labels `alpha(i, k)` on `path`.
pub fn classify(path: &DyckPath, i: usize, k: usize) -> Result<SubpathLabel> {
    Classifier::new(path)?.classify(path, i, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(r1: u32, r2: u32, n: u32) -> DyckPath {
        DyckPath::build_greedy(Params::new(r1, r2).unwrap(), n).unwrap()
    }

    #[test]
    fn worked_example_labels() {
        let d = path(2, 3, 5);
        assert_eq!(classify(&d, 0, 2).unwrap(), SubpathLabel::Prefix);
        assert_eq!(classify(&d, 1, 2).unwrap(), SubpathLabel::ShortSuffix);
        assert_eq!(classify(&d, 0, 1).unwrap(), SubpathLabel::Prefix);
        assert!(matches!(classify(&d, 1, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(classify(&d, 0, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn dyck_suffix_appears_at_n6() {
        // (2, 3): only even m admits w = 1; m = 2 has offset U_{2,2} - U_{1,2} = 3.
        let d = path(2, 3, 6);
        let c = Classifier::new(&d).unwrap();
        assert_eq!(c.witnesses().len(), 1);
        assert_eq!(c.witnesses()[0].offset, BigInt::from(3));
        assert_eq!(c.witnesses()[0].lookback, BigInt::from(2));
        assert_eq!(c.classify(&d, 2, 5).unwrap(), SubpathLabel::DyckSuffix { m: 2, w: 1 });
    }

    #[test]
    fn full_path_is_a_prefix() {
        for (r1, r2) in [(2, 3), (3, 2), (3, 3), (2, 4), (5, 1), (1, 5)] {
            for n in 4..=9 {
                let d = path(r1, r2, n);
                assert_eq!(classify(&d, 0, d.max_nu()).unwrap(), SubpathLabel::Prefix);
            }
        }
    }

    #[test]
    fn no_witness_at_or_beyond_n_minus_3() {
        // Holds when both parameters are at least 2. With a parameter equal
        // to 1 there are hits, e.g. (5, 1), n = 5, i = 2 matches m = 2; the
        // classifier never looks at those levels.
        for (r1, r2) in [(2, 3), (3, 2), (3, 3), (2, 4), (4, 2), (2, 5), (5, 2)] {
            let params = Params::new(r1, r2).unwrap();
            for n in 4..=9u32 {
                let d = path(r1, r2, n);
                let lo = i64::from(n) - 3;
                let big = suffix_witnesses(params, lo..=lo + 6).unwrap();
                for i in 0..d.max_nu() {
                    if let Some(t) = first_steep(&d, i, d.max_nu()) {
                        let off = BigInt::from((t - i) as i64);
                        assert!(big.iter().all(|wit| wit.offset != off), "({r1},{r2}) n={n} i={i}");
                    }
                }
            }
        }
        let d = path(5, 1, 5);
        let wit = suffix_witnesses(d.params(), 2..=2).unwrap();
        assert_eq!(first_steep(&d, 2, d.max_nu()), Some(5));
        assert_eq!(wit[0].offset, BigInt::from(3));
    }

    #[test]
    fn dyck_suffix_levels_stay_below_n_minus_3() {
        for (r1, r2) in [(2, 3), (3, 2), (3, 3), (2, 4), (4, 2), (5, 1), (1, 5), (6, 1)] {
            for n in 4..=9u32 {
                let d = path(r1, r2, n);
                let c = Classifier::new(&d).unwrap();
                for i in 0..d.max_nu() {
                    for k in i + 1..=d.max_nu() {
                        if let SubpathLabel::DyckSuffix { m, .. } = c.classify(&d, i, k).unwrap() {
                            assert!((1..=i64::from(n) - 4).contains(&m), "({r1},{r2}) n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn w_ranges() {
        let a = Params::new(2, 3).unwrap();
        assert!(w_range(a, 1).is_empty());
        assert_eq!(w_range(a, 2), 1..2);
        let b = Params::new(5, 1).unwrap();
        assert_eq!(w_range(b, 3), 1..3);
        assert_eq!(w_range(b, 4), 1..2);
    }
}
