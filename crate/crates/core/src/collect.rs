//! Collections of colored subpaths and single edges, the conditions C1-C3,
//! and enumeration of the families `F`, `F~` and `T^{>=u}`.
//!
//! Enumeration is a depth-first walk along the path. At each vertex the
//! next edge is either left out, taken as a single edge, or, when the
//! vertex is some `nu_i`, covered by a colored subpath `alpha(i, k)`. Every
//! condition only looks at edges before the start of a colored subpath, so
//! it can be decided when the subpath is placed and each leaf of the walk
//! is a valid collection.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::classify::{Classifier, SubpathLabel};
use crate::dyckpath::DyckPath;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Which family of collections to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Non-overlapping collections satisfying C1, C2 and C3.
    F,
    /// Non-overlapping collections satisfying C1 and C2.
    FTilde,
    /// Members of `F~` violating C3 through some `(m, w)`-suffix with `m >= u`.
    TGe(i64),
}

impl std::str::FromStr for Family {
    type Err = Error;

    /// `F`, `Ftilde`, or `Tge:<u>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" => Ok(Family::F),
            "Ftilde" => Ok(Family::FTilde),
            _ => s
                .strip_prefix("Tge:")
                .and_then(|u| u.parse().ok())
                .map(Family::TGe)
                .ok_or_else(|| Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColoredSubpath {
    pub i: usize,
    pub k: usize,
    pub label: SubpathLabel,
}

/// A collection `beta`: colored subpaths (sorted by `i`) and single edges
/// (sorted).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Collection {
    pub colored: Vec<ColoredSubpath>,
    pub singles: Vec<usize>,
}

impl Collection {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a collection, labelling the colored pairs from `adm`.
    pub fn new(adm: &Admissible<'_>, colored: &[(usize, usize)], singles: &[usize]) -> Result<Self> {
        let mut colored = colored
            .iter()
            .map(|&(i, k)| Ok(ColoredSubpath { i, k, label: adm.label(i, k)? }))
            .collect::<Result<Vec<_>>>()?;
        colored.sort_by_key(|c| (c.i, c.k));
        let mut singles = singles.to_vec();
        singles.sort_unstable();
        singles.dedup();
        Ok(Collection { colored, singles })
    }

    /// `{"colored":[[i,k,"label"],...],"singles":[...]}`
    pub fn to_json(&self) -> String {
        let colored: Vec<serde_json::Value> = self
            .colored
            .iter()
            .map(|c| serde_json::json!([c.i, c.k, c.label.to_string()]))
            .collect();
        serde_json::json!({ "colored": colored, "singles": self.singles }).to_string()
    }
}

/// What C2 or C3 asks of the edges before a colored subpath: at least one
/// of `edges` must be supported.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Requirement {
    None,
    /// C2 for a short suffix.
    ShortSuffix { edges: Vec<usize> },
    /// C3 for an `(m, w)`-Dyck suffix.
    DyckSuffix { m: i64, edges: Vec<usize> },
}

/// The admissible subpaths of one path, with labels and requirements.
#[derive(Clone, Debug)]
pub struct Admissible<'p> {
    path: &'p DyckPath,
    classifier: Classifier,
    stride: usize,
    labels: Vec<Option<SubpathLabel>>,
    requirements: Vec<Requirement>,
    nu_at_vertex: Vec<Option<usize>>,
}

impl<'p> Admissible<'p> {
    pub fn new(path: &'p DyckPath) -> Result<Self> {
        let classifier = Classifier::new(path)?;
        let top = path.max_nu();
        let stride = top + 1;
        let mut labels = vec![None; stride * stride];
        let mut requirements = vec![Requirement::None; stride * stride];
        for i in 0..top {
            let before = preceding_straight_edges(path, path.nu_vertex(i));
            for k in i + 1..=top {
                let label = classifier.classify(path, i, k)?;
                labels[i * stride + k] = Some(label);
                requirements[i * stride + k] = match label {
                    SubpathLabel::Prefix => Requirement::None,
                    SubpathLabel::ShortSuffix => {
                        Requirement::ShortSuffix { edges: before.iter().take(1).copied().collect() }
                    }
                    SubpathLabel::DyckSuffix { m, w } => {
                        let look = classifier.lookback(m, w).expect("label comes from a witness");
                        Requirement::DyckSuffix { m, edges: before.iter().take(look).copied().collect() }
                    }
                };
            }
        }
        let mut nu_at_vertex = vec![None; path.len() + 1];
        for j in 0..=top {
            nu_at_vertex[path.nu_vertex(j)] = Some(j);
        }
        Ok(Admissible { path, classifier, stride, labels, requirements, nu_at_vertex })
    }

    pub fn path(&self) -> &'p DyckPath {
        self.path
    }

    pub fn classifier(&self) -> &Classifier {
        &self.classifier
    }

    pub fn label(&self, i: usize, k: usize) -> Result<SubpathLabel> {
        if i >= k || k > self.path.max_nu() {
            return Err(Error::IndexOutOfRange { i, k, height: self.path.height() });
        }
        Ok(self.labels[i * self.stride + k].expect("filled for i < k"))
    }

    /// All `(i, k, label)` in lexicographic order.
    pub fn subpaths(&self) -> Vec<ColoredSubpath> {
        let top = self.path.max_nu();
        (0..top)
            .flat_map(|i| (i + 1..=top).map(move |k| (i, k)))
            .map(|(i, k)| ColoredSubpath { i, k, label: self.labels[i * self.stride + k].unwrap() })
            .collect()
    }

    /// Edge range `first..=last` of `alpha(i, k)`.
    pub fn edge_range(&self, i: usize, k: usize) -> std::ops::RangeInclusive<usize> {
        self.path.nu_vertex(i) + 1..=self.path.nu_vertex(k)
    }

    fn requirement(&self, i: usize, k: usize) -> &Requirement {
        &self.requirements[i * self.stride + k]
    }
}

/// Non-diagonal edges ending at or before vertex `v`, nearest first.
pub(crate) fn preceding_straight_edges(path: &DyckPath, v: usize) -> Vec<usize> {
    (1..=v).rev().filter(|&e| !path.edge(e).is_diagonal()).collect()
}

/// Union of single edges and the edges of colored subpaths.
pub fn support(adm: &Admissible<'_>, c: &Collection) -> BTreeSet<usize> {
    let mut s: BTreeSet<usize> = c.singles.iter().copied().collect();
    for col in &c.colored {
        s.extend(adm.edge_range(col.i, col.k));
    }
    s
}

/// True if two colored subpaths share a vertex, or a single edge lies on a
/// colored subpath. Malformed entries also count as overlapping.
pub fn is_overlapping(adm: &Admissible<'_>, c: &Collection) -> bool {
    let path = adm.path();
    let top = path.max_nu();
    if c.colored.iter().any(|col| col.i >= col.k || col.k > top)
        || c.singles.iter().any(|&e| e == 0 || e > path.len())
    {
        return true;
    }
    for (a, x) in c.colored.iter().enumerate() {
        for y in &c.colored[a + 1..] {
            if x.i <= y.k && y.i <= x.k {
                return true;
            }
        }
    }
    c.singles
        .iter()
        .any(|e| c.colored.iter().any(|col| adm.edge_range(col.i, col.k).contains(e)))
}

/// Levels `m` of the Dyck suffixes in `c` whose C3 lookback edges are all
/// unsupported.
pub fn c3_violations(adm: &Admissible<'_>, c: &Collection) -> Vec<i64> {
    let supp = support(adm, c);
    c.colored
        .iter()
        .filter_map(|col| match adm.requirement(col.i, col.k) {
            Requirement::DyckSuffix { m, edges } if !edges.iter().any(|e| supp.contains(e)) => {
                Some(*m)
            }
            _ => None,
        })
        .collect()
}

/// C1 (diagonal edges supported) and C2 (short suffixes preceded by a
/// supported non-diagonal edge).
pub fn check_c1_c2(adm: &Admissible<'_>, c: &Collection) -> bool {
    let path = adm.path();
    let supp = support(adm, c);
    let c1 = (1..=path.len()).all(|e| !path.edge(e).is_diagonal() || supp.contains(&e));
    let c2 = c.colored.iter().all(|col| match adm.requirement(col.i, col.k) {
        Requirement::ShortSuffix { edges } => edges.iter().any(|e| supp.contains(e)),
        _ => true,
    });
    c1 && c2
}

/// C1, C2 and C3 for a non-overlapping collection.
pub fn check_conditions(adm: &Admissible<'_>, c: &Collection) -> bool {
    check_c1_c2(adm, c) && c3_violations(adm, c).is_empty()
}

/// Family membership checked directly from the definitions.
pub fn in_family(adm: &Admissible<'_>, family: Family, c: &Collection) -> bool {
    if is_overlapping(adm, c) || !check_c1_c2(adm, c) {
        return false;
    }
    let v = c3_violations(adm, c);
    match family {
        Family::F => v.is_empty(),
        Family::FTilde => true,
        Family::TGe(u) => v.iter().any(|&m| m >= u),
    }
}

/// One decision of the enumeration walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// Edge left out of the support.
    Missing(usize),
    /// Edge taken as a single.
    Single(usize),
    /// Colored subpath `alpha(i, k)`.
    Colored { i: usize, k: usize },
}

/// Borrowed view of the collection at a leaf of the walk.
pub struct CollectionView<'v, 'p> {
    pub adm: &'v Admissible<'p>,
    pub colored: &'v [(usize, usize)],
    pub singles: &'v [usize],
}

impl CollectionView<'_, '_> {
    pub fn to_collection(&self) -> Collection {
        Collection::new(self.adm, self.colored, self.singles).expect("walk only places valid pairs")
    }
}

/// Receives the walk. `enter`/`leave` bracket every placement, in path
/// order, so a visitor can maintain running products.
pub trait Visitor {
    fn enter(&mut self, _placement: Placement) {}
    fn leave(&mut self) {}
    fn collection(&mut self, view: &CollectionView<'_, '_>);
}

impl<F: FnMut(&CollectionView<'_, '_>)> Visitor for F {
    fn collection(&mut self, view: &CollectionView<'_, '_>) {
        self(view)
    }
}

/// A deterministic stream of the collections in one family.
pub struct Enumeration<'a, 'p> {
    adm: &'a Admissible<'p>,
    family: Family,
    budget: u64,
}

impl<'a, 'p> Enumeration<'a, 'p> {
    pub fn new(adm: &'a Admissible<'p>, family: Family) -> Self {
        Enumeration { adm, family, budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The choices available at the origin. The subtrees below them
    /// partition the stream, in order.
    pub fn roots(&self) -> Vec<Placement> {
        let path = self.adm.path();
        if path.is_empty() {
            return Vec::new();
        }
        let mut r = Vec::new();
        if !path.edge(1).is_diagonal() {
            r.push(Placement::Missing(1));
        }
        r.push(Placement::Single(1));
        r.extend((1..=path.max_nu()).map(|k| Placement::Colored { i: 0, k }));
        r
    }

    /// Walks every collection; returns how many were visited.
    pub fn for_each<V: Visitor>(&self, visitor: &mut V) -> Result<u64> {
        let counter = AtomicU64::new(0);
        self.walk(None, visitor, &counter)
    }

    /// Walks the subtree below one root placement. `counter` is shared
    /// between partitions so the budget applies to the whole stream.
    pub fn for_each_under<V: Visitor>(
        &self,
        root: Placement,
        visitor: &mut V,
        counter: &AtomicU64,
    ) -> Result<u64> {
        self.walk(Some(root), visitor, counter)
    }

    pub fn count(&self) -> Result<u64> {
        self.for_each(&mut |_: &CollectionView<'_, '_>| {})
    }

    /// Materializes the stream; intended for small paths.
    pub fn collect_vec(&self) -> Result<Vec<Collection>> {
        let mut out = Vec::new();
        self.for_each(&mut |v: &CollectionView<'_, '_>| out.push(v.to_collection()))?;
        Ok(out)
    }

    fn walk<V: Visitor>(
        &self,
        root: Option<Placement>,
        visitor: &mut V,
        counter: &AtomicU64,
    ) -> Result<u64> {
        let path = self.adm.path();
        let top = path.max_nu();
        // For T^{>=u}: can a level->=u Dyck suffix still start at or after vertex v?
        let mut violation_ahead = vec![false; path.len() + 2];
        if let Family::TGe(u) = self.family {
            for v in (0..=path.len()).rev() {
                let here = self.adm.nu_at_vertex[v].is_some_and(|i| {
                    (i + 1..=top).any(|k| {
                        matches!(self.adm.requirement(i, k), Requirement::DyckSuffix { m, .. } if *m >= u)
                    })
                });
                violation_ahead[v] = here || violation_ahead[v + 1];
            }
        }
        let mut walker = Walker {
            adm: self.adm,
            family: self.family,
            budget: self.budget,
            counter,
            visitor,
            supported: vec![false; path.len() + 1],
            colored: Vec::new(),
            singles: Vec::new(),
            violations: 0,
            violation_ahead,
            visited: 0,
        };
        walker.walk(0, false, root)?;
        Ok(walker.visited)
    }
}

struct Walker<'w, 'p, V> {
    adm: &'w Admissible<'p>,
    family: Family,
    budget: u64,
    counter: &'w AtomicU64,
    visitor: &'w mut V,
    supported: Vec<bool>,
    colored: Vec<(usize, usize)>,
    singles: Vec<usize>,
    violations: usize,
    violation_ahead: Vec<bool>,
    visited: u64,
}

impl<V: Visitor> Walker<'_, '_, V> {
    fn walk(&mut self, v: usize, just_closed: bool, only: Option<Placement>) -> Result<()> {
        let path = self.adm.path();
        if matches!(self.family, Family::TGe(_)) && self.violations == 0 && !self.violation_ahead[v] {
            return Ok(());
        }
        if v == path.len() {
            return self.emit();
        }
        let allowed = |p: Placement| only.is_none_or(|o| o == p);
        let e = v + 1;
        if !path.edge(e).is_diagonal() && allowed(Placement::Missing(e)) {
            self.visitor.enter(Placement::Missing(e));
            self.walk(v + 1, false, None)?;
            self.visitor.leave();
        }
        if allowed(Placement::Single(e)) {
            self.supported[e] = true;
            self.singles.push(e);
            self.visitor.enter(Placement::Single(e));
            self.walk(v + 1, false, None)?;
            self.visitor.leave();
            self.singles.pop();
            self.supported[e] = false;
        }
        if just_closed {
            return Ok(());
        }
        let Some(i) = self.adm.nu_at_vertex[v] else {
            return Ok(());
        };
        for k in i + 1..=path.max_nu() {
            let placement = Placement::Colored { i, k };
            if !allowed(placement) {
                continue;
            }
            let violation = match self.adm.requirement(i, k) {
                Requirement::None => false,
                Requirement::ShortSuffix { edges } => {
                    if !edges.iter().any(|&e| self.supported[e]) {
                        continue;
                    }
                    false
                }
                Requirement::DyckSuffix { m, edges } => {
                    if edges.iter().any(|&e| self.supported[e]) {
                        false
                    } else {
                        match self.family {
                            Family::F => continue,
                            Family::FTilde => false,
                            Family::TGe(u) => *m >= u,
                        }
                    }
                }
            };
            let range = self.adm.edge_range(i, k);
            let end = *range.end();
            for e in range.clone() {
                self.supported[e] = true;
            }
            self.colored.push((i, k));
            self.violations += usize::from(violation);
            self.visitor.enter(placement);
            self.walk(end, true, None)?;
            self.visitor.leave();
            self.violations -= usize::from(violation);
            self.colored.pop();
            for e in range {
                self.supported[e] = false;
            }
        }
        Ok(())
    }

    fn emit(&mut self) -> Result<()> {
        if matches!(self.family, Family::TGe(_)) && self.violations == 0 {
            return Ok(());
        }
        let seen = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        if seen > self.budget {
            return Err(Error::EnumerationBudgetExceeded { budget: self.budget });
        }
        self.visited += 1;
        let view = CollectionView { adm: self.adm, colored: &self.colored, singles: &self.singles };
        self.visitor.collection(&view);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::Params;
    use std::collections::HashSet;

    fn path(r1: u32, r2: u32, n: u32) -> DyckPath {
        DyckPath::build_greedy(Params::new(r1, r2).unwrap(), n).unwrap()
    }

    /// Every subset of colored pairs and single edges, filtered by the
    /// definitions directly.
    fn brute_force(adm: &Admissible<'_>, family: Family) -> HashSet<Collection> {
        let path = adm.path();
        let pairs: Vec<(usize, usize)> = adm.subpaths().iter().map(|c| (c.i, c.k)).collect();
        assert!(pairs.len() + path.len() <= 22, "brute force too large");
        let mut out = HashSet::new();
        for pmask in 0u32..(1 << pairs.len()) {
            let colored: Vec<(usize, usize)> =
                (0..pairs.len()).filter(|b| pmask >> b & 1 == 1).map(|b| pairs[b]).collect();
            for smask in 0u32..(1 << path.len()) {
                let singles: Vec<usize> =
                    (0..path.len()).filter(|b| smask >> b & 1 == 1).map(|b| b + 1).collect();
                let c = Collection::new(adm, &colored, &singles).unwrap();
                if in_family(adm, family, &c) {
                    out.insert(c);
                }
            }
        }
        out
    }

    #[test]
    fn support_examples() {
        let d = path(2, 3, 5);
        let adm = Admissible::new(&d).unwrap();
        let c = Collection::new(&adm, &[(0, 1)], &[4]).unwrap();
        assert_eq!(support(&adm, &c), BTreeSet::from([1, 2, 3, 4]));
        assert!(support(&adm, &Collection::empty()).is_empty());
        let full = Collection::new(&adm, &[(0, 2)], &[]).unwrap();
        assert_eq!(support(&adm, &full), (1..=5).collect());
    }

    #[test]
    fn overlap_rule() {
        let d = path(2, 3, 5);
        let adm = Admissible::new(&d).unwrap();
        // sharing nu_1
        assert!(is_overlapping(&adm, &Collection::new(&adm, &[(0, 1), (1, 2)], &[]).unwrap()));
        // single edge inside alpha(0, 1)
        assert!(is_overlapping(&adm, &Collection::new(&adm, &[(0, 1)], &[2]).unwrap()));
        // single edge touching the endpoint nu_1 from the right is fine
        assert!(!is_overlapping(&adm, &Collection::new(&adm, &[(0, 1)], &[4]).unwrap()));
        // edge 3 ends at nu_1 where alpha(1, 2) starts
        assert!(!is_overlapping(&adm, &Collection::new(&adm, &[(1, 2)], &[3]).unwrap()));
    }

    #[test]
    fn condition_examples() {
        let d = path(2, 3, 5);
        let adm = Admissible::new(&d).unwrap();
        assert!(check_conditions(&adm, &Collection::new(&adm, &[(1, 2)], &[3]).unwrap()));
        assert!(!check_conditions(&adm, &Collection::new(&adm, &[(1, 2)], &[]).unwrap()));

        let d2 = path(2, 3, 2);
        let adm2 = Admissible::new(&d2).unwrap();
        assert!(check_conditions(&adm2, &Collection::new(&adm2, &[], &[1]).unwrap()));
        assert!(!check_conditions(&adm2, &Collection::empty()));
    }

    #[test]
    fn counts() {
        let d = path(2, 3, 5);
        let adm = Admissible::new(&d).unwrap();
        assert_eq!(Enumeration::new(&adm, Family::F).count().unwrap(), 41);
        let d2 = path(3, 3, 2);
        let adm2 = Admissible::new(&d2).unwrap();
        assert_eq!(Enumeration::new(&adm2, Family::F).count().unwrap(), 1);
    }

    #[test]
    fn walk_matches_brute_force() {
        let cases = [(2, 3, 5), (3, 2, 5), (2, 3, 4), (5, 1, 5), (5, 1, 6), (1, 5, 5), (3, 3, 4), (2, 3, 3)];
        for (r1, r2, n) in cases {
            let d = path(r1, r2, n);
            let adm = Admissible::new(&d).unwrap();
            for family in [Family::F, Family::FTilde, Family::TGe(1), Family::TGe(2)] {
                let walked = Enumeration::new(&adm, family).collect_vec().unwrap();
                let set: HashSet<Collection> = walked.iter().cloned().collect();
                assert_eq!(set.len(), walked.len(), "duplicates for ({r1},{r2},{n})");
                assert_eq!(set, brute_force(&adm, family), "({r1},{r2},{n}) {family:?}");
            }
        }
    }

    #[test]
    fn walk_matches_definitions_with_dyck_suffixes() {
        // D_6 for (2, 3) has (2, 1)-Dyck suffixes; too big for brute force,
        // so check every walked collection against the definitions and the
        // F = F~ \ T^{>=1} split.
        let d = path(2, 3, 6);
        let adm = Admissible::new(&d).unwrap();
        let f = Enumeration::new(&adm, Family::F).collect_vec().unwrap();
        let ft = Enumeration::new(&adm, Family::FTilde).collect_vec().unwrap();
        let t1 = Enumeration::new(&adm, Family::TGe(1)).collect_vec().unwrap();
        assert!(f.iter().all(|c| in_family(&adm, Family::F, c)));
        assert!(t1.iter().all(|c| in_family(&adm, Family::TGe(1), c)));
        assert!(!t1.is_empty());
        assert_eq!(f.len() + t1.len(), ft.len());
        let fset: HashSet<_> = f.into_iter().collect();
        let tset: HashSet<_> = t1.into_iter().collect();
        assert!(fset.is_disjoint(&tset));
        assert_eq!(fset.len(), 7658);
    }

    #[test]
    fn roots_partition_the_stream() {
        let d = path(3, 2, 6);
        let adm = Admissible::new(&d).unwrap();
        let e = Enumeration::new(&adm, Family::F);
        let whole = e.collect_vec().unwrap();
        let counter = AtomicU64::new(0);
        let mut parts = Vec::new();
        for root in e.roots() {
            e.for_each_under(root, &mut |v: &CollectionView<'_, '_>| parts.push(v.to_collection()), &counter)
                .unwrap();
        }
        assert_eq!(parts, whole);
    }

    #[test]
    fn budget_is_enforced() {
        let d = path(2, 3, 5);
        let adm = Admissible::new(&d).unwrap();
        assert_eq!(Enumeration::new(&adm, Family::F).with_budget(41).count().unwrap(), 41);
        assert_eq!(
            Enumeration::new(&adm, Family::F).with_budget(40).count(),
            Err(Error::EnumerationBudgetExceeded { budget: 40 })
        );
    }

    #[test]
    fn family_parsing() {
        assert_eq!("F".parse::<Family>().unwrap(), Family::F);
        assert_eq!("Ftilde".parse::<Family>().unwrap(), Family::FTilde);
        assert_eq!("Tge:3".parse::<Family>().unwrap(), Family::TGe(3));
        assert!("T".parse::<Family>().is_err());
    }

    #[test]
    fn json_line() {
        let d = path(2, 3, 5);
        let adm = Admissible::new(&d).unwrap();
        let c = Collection::new(&adm, &[(1, 2)], &[3]).unwrap();
        assert_eq!(c.to_json(), r#"{"colored":[[1,2,"short_suffix"]],"singles":[3]}"#);
    }
}
