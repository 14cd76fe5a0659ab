//! Edge weights and the collection sum for `x_{n-1}`.
//!
//! An edge gets one of six monomials depending on how a collection covers
//! it. A collection's weight is `q = x y x^-1 y^-1` times the edge weights
//! in path order, and `x_{n-1}` is the sum of the weights over `F(D_n)`.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use ahash::AHashMap;
use num_bigint::BigInt;

use crate::chebyshev::Params;
use crate::classify::{suffix_witnesses, w_range};
use crate::collect::{
    is_overlapping, preceding_straight_edges, Admissible, Collection, CollectionView,
    Enumeration, Family, Placement, Visitor, DEFAULT_BUDGET,
};
use crate::dyckpath::{DyckPath, Step};
use crate::error::{Error, Result};
use crate::ncalgebra::{Factor, Gen, NcLaurentPoly, ReducedWord, WordBuf};
use crate::NcPoly;

/// The six rows of the weight table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightCase {
    /// Edge outside the support: `y^{r1 - eps} x^-1`.
    Unsupported,
    /// Single `E` or `N` edge: `y^{-eps} x^-1`.
    SingleStraight,
    /// Single `U` edge: `x y^-1 x^-1`.
    SingleUpDiagonal,
    /// Single `D` edge: `y`.
    SingleDownDiagonal,
    /// `E` edge inside a colored subpath: `1`.
    ColoredHorizontal,
    /// Last edge of a hook of type `h` inside a colored subpath: `x^h y^-1 x^-1`.
    HookEnd,
}

impl WeightCase {
    pub const ALL: [WeightCase; 6] = [
        WeightCase::Unsupported,
        WeightCase::SingleStraight,
        WeightCase::SingleUpDiagonal,
        WeightCase::SingleDownDiagonal,
        WeightCase::ColoredHorizontal,
        WeightCase::HookEnd,
    ];
}

/// How a `U` edge that ends a hook inside a colored subpath is weighted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ColoredUpRule {
    /// `x^h y^-1 x^-1` with `h` the hook type, like any other hook end.
    #[default]
    HookType,
    /// `x y^-1 x^-1`, as for a single `U` edge. Kept only so the oracle
    /// can reject it: on `(5, 1)` and `(6, 1)` this reading disagrees with
    /// the automorphism recursion.
    Singleton,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightRules {
    pub colored_up: ColoredUpRule,
    /// Negative control: right-multiply this case's weight by `y`.
    pub corrupted: Option<WeightCase>,
}

impl WeightRules {
    pub fn corrupt(case: WeightCase) -> Self {
        WeightRules { corrupted: Some(case), ..Self::default() }
    }

    fn word(&self, case: WeightCase, factors: &[(Gen, i32)]) -> ReducedWord {
        let w = ReducedWord::from_pairs(factors.iter().copied());
        if self.corrupted == Some(case) {
            w.mul(&ReducedWord::y(1))
        } else {
            w
        }
    }

    fn unsupported(&self, r1: u32, step: Step) -> ReducedWord {
        let eps = i32::from(step == Step::N);
        let r1 = i32::try_from(r1).expect("r1 fits in i32");
        self.word(WeightCase::Unsupported, &[(Gen::Y, r1 - eps), (Gen::X, -1)])
    }

    fn single(&self, step: Step) -> ReducedWord {
        match step {
            Step::E => self.word(WeightCase::SingleStraight, &[(Gen::X, -1)]),
            Step::N => self.word(WeightCase::SingleStraight, &[(Gen::Y, -1), (Gen::X, -1)]),
            Step::U => {
                self.word(WeightCase::SingleUpDiagonal, &[(Gen::X, 1), (Gen::Y, -1), (Gen::X, -1)])
            }
            Step::D => self.word(WeightCase::SingleDownDiagonal, &[(Gen::Y, 1)]),
        }
    }

    fn colored(&self, step: Step, hook_type: Option<u8>, edge: usize) -> Result<ReducedWord> {
        match (step, hook_type) {
            (Step::E, _) => Ok(self.word(WeightCase::ColoredHorizontal, &[])),
            (Step::U, Some(_)) if self.colored_up == ColoredUpRule::Singleton => {
                Ok(self.word(WeightCase::HookEnd, &[(Gen::X, 1), (Gen::Y, -1), (Gen::X, -1)]))
            }
            (Step::N | Step::U, Some(h)) => {
                Ok(self.word(WeightCase::HookEnd, &[(Gen::X, i32::from(h)), (Gen::Y, -1), (Gen::X, -1)]))
            }
            _ => Err(Error::UncoveredCase { edge }),
        }
    }
}

/// Hook type indexed by the hook's last edge.
fn hook_ends(path: &DyckPath) -> Result<Vec<Option<u8>>> {
    let mut ends = vec![None; path.len() + 1];
    for h in path.hooks()? {
        ends[h.last_edge] = Some(h.htype);
    }
    Ok(ends)
}

/// The weight `beta_[e]` of edge `e` under collection `c`.
pub fn edge_weight(path: &DyckPath, c: &Collection, e: usize) -> Result<ReducedWord> {
    edge_weight_with(path, c, e, &WeightRules::default())
}

pub fn edge_weight_with(
    path: &DyckPath,
    c: &Collection,
    e: usize,
    rules: &WeightRules,
) -> Result<ReducedWord> {
    if e == 0 || e > path.len() {
        return Err(Error::InvalidRange(format!("edge {e} not in 1..={}", path.len())));
    }
    let step = path.edge(e);
    let inside = |col: &crate::collect::ColoredSubpath| {
        (path.nu_vertex(col.i) + 1..=path.nu_vertex(col.k)).contains(&e)
    };
    if c.colored.iter().any(inside) {
        let ends = hook_ends(path)?;
        rules.colored(step, ends[e], e)
    } else if c.singles.contains(&e) {
        Ok(rules.single(step))
    } else {
        Ok(rules.unsupported(path.params().r1, step))
    }
}

/// `q` times the edge weights in path order.
pub fn collection_weight(path: &DyckPath, c: &Collection) -> Result<ReducedWord> {
    collection_weight_with(path, c, &WeightRules::default())
}

pub fn collection_weight_with(
    path: &DyckPath,
    c: &Collection,
    rules: &WeightRules,
) -> Result<ReducedWord> {
    let adm = Admissible::new(path)?;
    if is_overlapping(&adm, c) {
        return Err(Error::InvalidRange("overlapping collection".into()));
    }
    let mut buf = WordBuf::new();
    buf.extend(ReducedWord::commutator().factors());
    for e in 1..=path.len() {
        buf.extend(edge_weight_with(path, c, e, rules)?.factors());
    }
    Ok(buf.to_word())
}

/// Words for every placement the enumeration walk can make.
struct PlacementWords {
    missing: Vec<ReducedWord>,
    single: Vec<ReducedWord>,
    stride: usize,
    colored: Vec<Option<ReducedWord>>,
}

impl PlacementWords {
    fn new(path: &DyckPath, rules: &WeightRules) -> Result<Self> {
        let r1 = path.params().r1;
        let mut missing = vec![ReducedWord::identity()];
        let mut single = vec![ReducedWord::identity()];
        for e in 1..=path.len() {
            missing.push(rules.unsupported(r1, path.edge(e)));
            single.push(rules.single(path.edge(e)));
        }
        let top = path.max_nu();
        let stride = top + 1;
        let mut colored = vec![None; stride * stride];
        if top > 0 {
            let ends = hook_ends(path)?;
            let mut edge_words = vec![ReducedWord::identity()];
            for (e, &end) in ends.iter().enumerate().skip(1) {
                edge_words.push(rules.colored(path.edge(e), end, e)?);
            }
            for i in 0..top {
                let mut buf = WordBuf::new();
                for k in i + 1..=top {
                    for word in &edge_words[path.nu_vertex(k - 1) + 1..=path.nu_vertex(k)] {
                        buf.extend(word.factors());
                    }
                    colored[i * stride + k] = Some(buf.to_word());
                }
            }
        }
        Ok(PlacementWords { missing, single, stride, colored })
    }

    fn get(&self, p: Placement) -> &[Factor] {
        match p {
            Placement::Missing(e) => self.missing[e].factors(),
            Placement::Single(e) => self.single[e].factors(),
            Placement::Colored { i, k } => {
                self.colored[i * self.stride + k].as_ref().expect("i < k").factors()
            }
        }
    }
}

/// Running product along the walk, one buffer per depth.
struct WeightSum<'a> {
    words: &'a PlacementWords,
    stack: Vec<WordBuf>,
    depth: usize,
    terms: AHashMap<ReducedWord, u64>,
}

impl<'a> WeightSum<'a> {
    fn new(words: &'a PlacementWords, path_len: usize) -> Self {
        let mut stack = vec![WordBuf::new(); path_len + 2];
        stack[0].extend(ReducedWord::commutator().factors());
        WeightSum { words, stack, depth: 0, terms: AHashMap::new() }
    }
}

impl Visitor for WeightSum<'_> {
    fn enter(&mut self, placement: Placement) {
        let (lo, hi) = self.stack.split_at_mut(self.depth + 1);
        let next = &mut hi[0];
        next.copy_from(&lo[self.depth]);
        next.extend(self.words.get(placement));
        self.depth += 1;
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn collection(&mut self, _view: &CollectionView<'_, '_>) {
        let word = self.stack[self.depth].as_slice();
        if let Some(c) = self.terms.get_mut(word) {
            *c += 1;
        } else {
            self.terms.insert(ReducedWord::from(word), 1);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XVarOptions {
    pub rules: WeightRules,
    pub budget: u64,
    pub threads: usize,
}

impl Default for XVarOptions {
    fn default() -> Self {
        XVarOptions { rules: WeightRules::default(), budget: DEFAULT_BUDGET, threads: 1 }
    }
}

/// Sum of collection weights over one family of collections on `path`.
pub fn family_sum(path: &DyckPath, family: Family, opts: &XVarOptions) -> Result<NcPoly> {
    let adm = Admissible::new(path)?;
    let words = PlacementWords::new(path, &opts.rules)?;
    let enumeration = Enumeration::new(&adm, family).with_budget(opts.budget);
    let roots = enumeration.roots();
    let threads = opts.threads.clamp(1, roots.len().max(1));

    let terms = if threads == 1 {
        let mut sum = WeightSum::new(&words, path.len());
        enumeration.for_each(&mut sum)?;
        sum.terms
    } else {
        let counter = AtomicU64::new(0);
        let next = AtomicUsize::new(0);
        let shards: Vec<Result<AHashMap<ReducedWord, u64>>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|_| {
                    s.spawn(|| {
                        let mut sum = WeightSum::new(&words, path.len());
                        loop {
                            let r = next.fetch_add(1, Ordering::Relaxed);
                            let Some(&root) = roots.get(r) else { break };
                            enumeration.for_each_under(root, &mut sum, &counter)?;
                        }
                        Ok(sum.terms)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut merged: AHashMap<ReducedWord, u64> = AHashMap::new();
        for shard in shards {
            for (w, c) in shard? {
                *merged.entry(w).or_insert(0) += c;
            }
        }
        merged
    };
    Ok(NcLaurentPoly::from_map_unchecked(terms.into_iter().map(|(w, c)| (w, BigInt::from(c))).collect()))
}

/// `x_{n-1}` as the weighted sum over `F(D_n)`.
pub fn x_var(params: Params, n: u32) -> Result<NcPoly> {
    x_var_with(params, n, &XVarOptions::default())
}

pub fn x_var_with(params: Params, n: u32, opts: &XVarOptions) -> Result<NcPoly> {
    params.require_model_domain()?;
    let path = DyckPath::build_greedy(params, n)?;
    family_sum(&path, Family::F, opts)
}

/// The weight of an `(m, w)`-Dyck suffix preceded by its lookback of
/// missing non-diagonal edges (diagonal edges in between taken as singles).
/// The configuration is read off the end of the smallest `D_n` that
/// contains it.
pub fn suffix_weight_config(params: Params, m: i64, w: i64) -> Result<NcPoly> {
    let valid = m >= 1 && m - params.delta(m) >= 0 && w_range(params, m).contains(&w);
    if !valid {
        return Err(Error::InvalidRange(format!("(m, w) = ({m}, {w}) for r = ({}, {})", params.r1, params.r2)));
    }
    let wit = suffix_witnesses(params, m..=m)?
        .into_iter()
        .find(|x| x.w == w)
        .expect("w in range has a witness");
    let too_big = || Error::TooLarge(format!("suffix ({m}, {w})"));
    let offset = usize::try_from(&wit.offset).map_err(|_| too_big())?;
    let lookback = if wit.lookback.sign() == num_bigint::Sign::Minus {
        0
    } else {
        usize::try_from(&wit.lookback).map_err(|_| too_big())?
    };
    let rules = WeightRules::default();
    let base = u32::try_from(m + 4).map_err(|_| too_big())?;
    for n in base..base + 8 {
        let path = DyckPath::build_greedy(params, n)?;
        let top = path.max_nu();
        if offset > top {
            continue;
        }
        let i = top - offset;
        let start_vertex = path.nu_vertex(i);
        let before = preceding_straight_edges(&path, start_vertex);
        if before.len() < lookback {
            continue;
        }
        let first = if lookback == 0 { start_vertex + 1 } else { before[lookback - 1] };
        let mut buf = WordBuf::new();
        for e in first..=start_vertex {
            let step = path.edge(e);
            let word =
                if step.is_diagonal() { rules.single(step) } else { rules.unsupported(params.r1, step) };
            buf.extend(word.factors());
        }
        let words = PlacementWords::new(&path, &rules)?;
        buf.extend(words.get(Placement::Colored { i, k: top }));
        return Ok(NcLaurentPoly::monomial(buf.to_word()));
    }
    Err(too_big())
}
