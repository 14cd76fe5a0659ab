//! Maximal Dyck paths `D_n` in the rectangles `R_n`.
//!
//! A vertex `(a, b)` is admissible when `b * W <= a * H`, which is the
//! cross-multiplied "on or below the main diagonal" condition in both the
//! first quadrant (`W >= 0`) and the second (`W < 0`).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::chebyshev::{ChebTable, Params};
use crate::error::{Error, Result};

/// Longest path we are willing to materialize.
pub const MAX_EDGES: i64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// `(1, 0)`
    E,
    /// `(0, 1)`
    N,
    /// `(-1, 1)`, second quadrant only
    U,
    /// `(1, -1)`, only in `D_2`
    D,
}

impl Step {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Step::E => (1, 0),
            Step::N => (0, 1),
            Step::U => (-1, 1),
            Step::D => (1, -1),
        }
    }

    /// Edges with y-displacement `+1`.
    pub fn is_up(self) -> bool {
        matches!(self, Step::N | Step::U)
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, Step::U | Step::D)
    }

    pub fn is_vertical(self) -> bool {
        self == Step::N
    }

    pub fn is_horizontal(self) -> bool {
        self == Step::E
    }

    pub fn letter(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
            Step::U => 'U',
            Step::D => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Step> {
        match c {
            'E' => Some(Step::E),
            'N' => Some(Step::N),
            'U' => Some(Step::U),
            'D' => Some(Step::D),
            _ => None,
        }
    }
}

/// The support of `alpha(k, k+1)`: edges `first_edge..=last_edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hook {
    pub from_nu: usize,
    pub first_edge: usize,
    pub last_edge: usize,
    pub htype: u8,
}

/// A lattice path `D_n`. Edges are numbered `1..=len`, vertices `0..=len`;
/// edge `i` joins vertex `i - 1` to vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyckPath {
    params: Params,
    n: u32,
    width: i64,
    height: i64,
    steps: Vec<Step>,
    vertices: Vec<(i64, i64)>,
    up_edges: Vec<usize>,
}

/// Rectangle corner and edge count for `D_n` as machine integers.
pub fn rect_dims(params: Params, n: u32) -> Result<(i64, i64, i64)> {
    if n < 2 {
        return Err(Error::UnsupportedIndex { what: "path index below 2", index: i64::from(n) });
    }
    let table = ChebTable::<BigInt>::build(params, i64::from(n));
    let (w, h) = table.rect(i64::from(n))?;
    let e = table.edge_count(i64::from(n))?;
    let fit = |v: &BigInt| {
        v.to_i64()
            .filter(|v| v.abs() <= MAX_EDGES)
            .ok_or_else(|| Error::TooLarge(format!("D_{n} for {params:?} has a coordinate {v}")))
    };
    Ok((fit(&w)?, fit(&h)?, fit(&e)?))
}

impl DyckPath {
    /// Wraps an explicit step list, checking that it ends at the corner of
    /// `R_n` and has the expected number of edges.
    pub fn from_steps(params: Params, n: u32, steps: Vec<Step>) -> Result<Self> {
        let (width, height, edges) = rect_dims(params, n)?;
        let mut vertices = Vec::with_capacity(steps.len() + 1);
        vertices.push((0i64, 0i64));
        let mut up_edges = Vec::new();
        for (idx, s) in steps.iter().enumerate() {
            let (a, b) = *vertices.last().expect("non-empty");
            let (dx, dy) = s.delta();
            vertices.push((a + dx, b + dy));
            if s.is_up() {
                up_edges.push(idx + 1);
            }
        }
        let end = *vertices.last().expect("non-empty");
        if end != (width, height) || steps.len() as i64 != edges {
            return Err(Error::BaseCaseMissing(format!(
                "steps for D_{n} end at {end:?} after {} edges, expected ({width}, {height}) after {edges}",
                steps.len()
            )));
        }
        Ok(DyckPath { params, n, width, height, steps, vertices, up_edges })
    }

    /// Greedy construction of the maximal path: at every vertex take the
    /// step that moves toward the diagonal when the target stays admissible
    /// (`N` before `E` in the first quadrant, `U` before `N` in the second).
    pub fn build_greedy(params: Params, n: u32) -> Result<Self> {
        params.require_model_domain()?;
        let (width, height, _) = rect_dims(params, n)?;
        if n == 2 {
            return Self::from_steps(params, n, vec![Step::D]);
        }
        if n == 3 {
            return Self::from_steps(params, n, vec![Step::E]);
        }
        let (preferred, fallback) = if width >= 0 && height >= 0 {
            (Step::N, Step::E)
        } else if width < 0 && height > 0 {
            (Step::U, Step::N)
        } else {
            return Err(Error::QuadrantUnsupported { n, width, height });
        };
        let admissible = |a: i64, b: i64| b * width <= a * height;
        let mut steps = Vec::new();
        let (mut a, mut b) = (0i64, 0i64);
        while (a, b) != (width, height) {
            let (dx, dy) = preferred.delta();
            let step = if admissible(a + dx, b + dy) { preferred } else { fallback };
            let (dx, dy) = step.delta();
            a += dx;
            b += dy;
            steps.push(step);
            if b > height || steps.len() as i64 > width.abs() + height {
                return Err(Error::QuadrantUnsupported { n, width, height });
            }
        }
        Self::from_steps(params, n, steps)
    }

    /// Recursive assembly: when `k - delta_k >= 4`, `D_k` is made of
    /// `r_{k - eps_{k-1}} - delta_k + 1` blocks, each a copy of
    /// `D_{k-1-eps_{k-1}}`, except that the last block has its leading
    /// `D_{k-1-delta_k}` removed. Smaller indices fall back to
    /// [`DyckPath::build_greedy`].
    pub fn build_recursive(params: Params, k: u32) -> Result<Self> {
        params.require_model_domain()?;
        let ki = i64::from(k);
        if ki - params.delta(ki) < 4 {
            return Self::build_greedy(params, k);
        }
        let eps = params.epsilon(ki - 1);
        let block_idx = (ki - 1 - eps) as u32;
        let removed_idx = (ki - 1 - params.delta(ki)) as u32;
        let block = Self::build_recursive(params, block_idx)?;
        let removed = Self::build_recursive(params, removed_idx)?;
        let blocks = i64::from(params.r(ki - eps)) - params.delta(ki) + 1;
        if blocks < 1 {
            return Err(Error::BaseCaseMissing(format!(
                "D_{k} would consist of {blocks} blocks"
            )));
        }
        let tail = strip_leading(&block, &removed)?;
        let mut steps = Vec::with_capacity(block.len() * blocks as usize);
        for _ in 1..blocks {
            steps.extend_from_slice(&block.steps);
        }
        steps.extend(tail);
        Self::from_steps(params, k, steps)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step of edge `e` (1-based).
    pub fn edge(&self, e: usize) -> Step {
        self.steps[e - 1]
    }

    pub fn vertex(&self, v: usize) -> (i64, i64) {
        self.vertices[v]
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    /// Edge indices `i_1 < i_2 < ...` of the upward steps.
    pub fn nu_indices(&self) -> &[usize] {
        &self.up_edges
    }

    /// Largest `nu` index, i.e. the number of upward steps.
    pub fn max_nu(&self) -> usize {
        self.up_edges.len()
    }

    /// Vertex index of `nu_j` (`nu_0` is the origin).
    pub fn nu_vertex(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.up_edges[j - 1]
        }
    }

    pub fn nu_point(&self, j: usize) -> (i64, i64) {
        self.vertices[self.nu_vertex(j)]
    }

    pub fn is_admissible(&self, (a, b): (i64, i64)) -> bool {
        b * self.width <= a * self.height
    }

    /// Is the segment from `p` to `q` (with `q` above `p`) steeper than the
    /// main diagonal?
    pub fn steeper_than_diagonal(&self, p: (i64, i64), q: (i64, i64)) -> bool {
        let (a, b) = (q.0 - p.0, q.1 - p.1);
        b * self.width > a * self.height
    }

    /// Hooks `alpha(k, k+1)` for `0 <= k < H`; empty when `H < 1`. The type
    /// is `r2` minus the horizontal displacement across the hook.
    pub fn hooks(&self) -> Result<Vec<Hook>> {
        let r2 = i64::from(self.params.r2);
        (0..self.up_edges.len())
            .map(|k| {
                let displacement = self.nu_point(k + 1).0 - self.nu_point(k).0;
                let htype = r2 - displacement;
                if !(1..=3).contains(&htype) {
                    return Err(Error::HookTypeOutOfRange { from_nu: k, displacement, htype });
                }
                Ok(Hook {
                    from_nu: k,
                    first_edge: self.nu_vertex(k) + 1,
                    last_edge: self.nu_vertex(k + 1),
                    htype: htype as u8,
                })
            })
            .collect()
    }

    pub fn step_string(&self) -> String {
        self.steps.iter().map(|s| s.letter()).collect()
    }

    /// Character drawing of the rectangle, its diagonal and the path.
    pub fn render_ascii(&self) -> String {
        let xs = self.vertices.iter().map(|v| v.0);
        let ys = self.vertices.iter().map(|v| v.1);
        let (xmin, xmax) = (xs.clone().min().unwrap().min(0), xs.max().unwrap().max(self.width));
        let (ymin, ymax) = (ys.clone().min().unwrap().min(0), ys.max().unwrap().max(self.height));
        let cols = ((xmax - xmin) * 2 + 1) as usize;
        let rows = ((ymax - ymin) * 2 + 1) as usize;
        let mut grid = vec![vec![' '; cols]; rows];
        let cell = |x: i64, y: i64| (((ymax - y) * 2) as usize, ((x - xmin) * 2) as usize);
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                let (r, c) = cell(x, y);
                grid[r][c] = '.';
            }
        }
        // Diagonal: mark lattice-free sample points on the segment.
        let samples = 4 * (self.width.abs() + self.height.abs()).max(1);
        for s in 0..=samples {
            let fx = self.width as f64 * s as f64 / samples as f64;
            let fy = self.height as f64 * s as f64 / samples as f64;
            let r = ((ymax as f64 - fy) * 2.0).round() as usize;
            let c = ((fx - xmin as f64) * 2.0).round() as usize;
            if r < rows && c < cols && grid[r][c] == ' ' {
                grid[r][c] = if (self.width >= 0) == (self.height >= 0) { '/' } else { '\\' };
            }
        }
        for (i, s) in self.steps.iter().enumerate() {
            let (x0, y0) = self.vertices[i];
            let (r, c) = cell(x0, y0);
            let (mr, mc) = match s {
                Step::E => (r, c + 1),
                Step::N => (r - 1, c),
                Step::U => (r - 1, c - 1),
                Step::D => (r + 1, c + 1),
            };
            grid[mr][mc] = match s {
                Step::E => '-',
                Step::N => '|',
                Step::U => '\\',
                Step::D => '\\',
            };
        }
        for &(x, y) in &self.vertices {
            let (r, c) = cell(x, y);
            grid[r][c] = 'o';
        }
        let mut out = String::new();
        for row in grid {
            let line: String = row.into_iter().collect();
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// TikZ picture in the style of a quarter-centimetre grid.
    pub fn render_tikz(&self) -> String {
        let unit = 0.25;
        let (x0, x1) = (self.width.min(0), self.width.max(0));
        let (y0, y1) = (self.height.min(0), self.height.max(0));
        let mut s = String::from("\\begin{tikzpicture}\n");
        let _ = writeln!(
            s,
            "  \\draw[step={unit}cm,color=gray] ({},{}) grid ({},{});",
            x0 as f64 * unit,
            y0 as f64 * unit,
            x1 as f64 * unit,
            y1 as f64 * unit
        );
        let _ = writeln!(
            s,
            "  \\draw[color=gray] (0,0) -- ({},{});",
            self.width as f64 * unit,
            self.height as f64 * unit
        );
        let path: Vec<String> = self
            .vertices
            .iter()
            .map(|(x, y)| format!("({},{})", *x as f64 * unit, *y as f64 * unit))
            .collect();
        let _ = writeln!(s, "  \\draw[thick] {};", path.join(" -- "));
        for (x, y) in &self.vertices {
            let _ = writeln!(
                s,
                "  \\draw[fill=black] ({},{}) circle (1.1pt);",
                *x as f64 * unit,
                *y as f64 * unit
            );
        }
        s.push_str("\\end{tikzpicture}\n");
        s
    }
}

/// `block` with its leading copy of `removed` dropped. Two index-2 cases are
/// conventions rather than prefixes: `D_3` minus `D_2` is a single `N`, and
/// a one-edge `D_4 = N` (when `eps_3 = 1`) minus `D_2` is `N` then `U`.
fn strip_leading(block: &DyckPath, removed: &DyckPath) -> Result<Vec<Step>> {
    if removed.n == 2 {
        return match (block.n, block.steps.as_slice()) {
            (3, _) => Ok(vec![Step::N]),
            (4, [Step::N]) if block.params.epsilon(3) == 1 => Ok(vec![Step::N, Step::U]),
            _ => Err(Error::BaseCaseMissing(format!(
                "no convention for removing D_2 from D_{}",
                block.n
            ))),
        };
    }
    block
        .steps
        .strip_prefix(removed.steps.as_slice())
        .map(<[Step]>::to_vec)
        .ok_or_else(|| {
            Error::BaseCaseMissing(format!(
                "D_{} does not start with D_{}",
                block.n, removed.n
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r1: u32, r2: u32) -> Params {
        Params::new(r1, r2).unwrap()
    }

    fn greedy(r1: u32, r2: u32, n: u32) -> DyckPath {
        DyckPath::build_greedy(p(r1, r2), n).unwrap()
    }

    #[test]
    fn worked_example_path() {
        let d = greedy(2, 3, 5);
        assert_eq!(d.step_string(), "EENEN");
        assert_eq!((d.width(), d.height()), (3, 2));
        assert_eq!(d.nu_indices(), &[3, 5]);
    }

    #[test]
    fn small_indices() {
        for params in [p(2, 3), p(5, 1), p(1, 5), p(3, 3)] {
            assert_eq!(DyckPath::build_greedy(params, 2).unwrap().steps(), &[Step::D]);
            assert_eq!(DyckPath::build_greedy(params, 3).unwrap().steps(), &[Step::E]);
        }
        assert_eq!(greedy(2, 3, 4).step_string(), "EEN");
    }

    #[test]
    fn model_domain_is_enforced() {
        assert!(matches!(
            DyckPath::build_greedy(p(2, 2), 5),
            Err(Error::ModelDomain { .. })
        ));
        assert!(DyckPath::build_greedy(p(2, 3), 1).is_err());
    }

    #[test]
    fn second_quadrant_paths() {
        assert_eq!(greedy(5, 1, 5).step_string(), "NNNNU");
        let d7 = greedy(5, 1, 7);
        assert_eq!((d7.width(), d7.height(), d7.len()), (-4, 15, 15));
        assert_eq!(d7.step_string(), "NNNUNNNUNNNUNNU");
    }

    #[test]
    fn recursive_matches_greedy() {
        let d = DyckPath::build_recursive(p(2, 3), 5).unwrap();
        assert_eq!(d.step_string(), "EENEN");
        let d6 = DyckPath::build_recursive(p(2, 3), 6).unwrap();
        assert_eq!((d6.len(), d6.vertex(12)), (12, (7, 5)));
        assert_eq!(d6, greedy(2, 3, 6));
        for params in [p(5, 1), p(1, 5), p(6, 1), p(1, 6)] {
            for n in 5..=9 {
                assert_eq!(
                    DyckPath::build_recursive(params, n).unwrap(),
                    DyckPath::build_greedy(params, n).unwrap(),
                    "{params:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn removal_conventions() {
        let d2 = greedy(2, 3, 2);
        let d3 = greedy(2, 3, 3);
        assert_eq!(strip_leading(&d3, &d2).unwrap(), vec![Step::N]);
        let d2b = greedy(5, 1, 2);
        let d4 = greedy(5, 1, 4);
        assert_eq!(d4.steps(), &[Step::N]);
        assert_eq!(strip_leading(&d4, &d2b).unwrap(), vec![Step::N, Step::U]);
        let d5 = greedy(2, 3, 5);
        assert!(strip_leading(&d5, &d2).is_err());
    }

    #[test]
    fn vertices_stay_admissible() {
        for (r1, r2) in [(2, 3), (3, 2), (3, 3), (2, 4), (5, 1), (1, 5), (4, 7)] {
            for n in 2..=10 {
                let d = greedy(r1, r2, n);
                assert!(d.vertices().iter().all(|&v| d.is_admissible(v)), "({r1},{r2}) n={n}");
                if d.height() >= 0 {
                    assert_eq!(d.max_nu() as i64, d.height());
                }
            }
        }
    }

    #[test]
    fn hook_examples() {
        let hooks = greedy(2, 3, 5).hooks().unwrap();
        assert_eq!(
            hooks,
            vec![
                Hook { from_nu: 0, first_edge: 1, last_edge: 3, htype: 1 },
                Hook { from_nu: 1, first_edge: 4, last_edge: 5, htype: 2 },
            ]
        );
        assert_eq!(greedy(2, 3, 4).hooks().unwrap().iter().map(|h| h.htype).collect::<Vec<_>>(), [1]);
        for h in greedy(5, 1, 7).hooks().unwrap() {
            assert_eq!(h.first_edge, h.last_edge);
            let step = greedy(5, 1, 7).edge(h.last_edge);
            assert_eq!(h.htype, if step == Step::N { 1 } else { 2 });
        }
        assert!(greedy(2, 3, 3).hooks().unwrap().is_empty());
        assert!(greedy(2, 3, 2).hooks().unwrap().is_empty());
    }

    #[test]
    fn hooks_tile_the_path() {
        for (r1, r2) in [(2, 3), (3, 2), (3, 3), (2, 4), (5, 1), (1, 5)] {
            for n in 4..=9 {
                let d = greedy(r1, r2, n);
                let hooks = d.hooks().unwrap();
                let mut next = 1;
                let mut rise = 0;
                for h in &hooks {
                    assert_eq!(h.first_edge, next);
                    next = h.last_edge + 1;
                    rise += d.nu_point(h.from_nu + 1).1 - d.nu_point(h.from_nu).1;
                }
                assert_eq!(next, d.len() + 1);
                assert_eq!(rise, d.height());
            }
        }
    }

    #[test]
    fn hook_type_out_of_range_is_reported() {
        // hand-built path whose only hook is wider than r2 - 1
        let d = DyckPath {
            params: p(2, 3),
            n: 9,
            width: 5,
            height: 1,
            steps: vec![Step::E, Step::E, Step::E, Step::E, Step::E, Step::N],
            vertices: vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (5, 1)],
            up_edges: vec![6],
        };
        assert!(matches!(d.hooks(), Err(Error::HookTypeOutOfRange { htype: -2, .. })));
    }

    #[test]
    fn renderers_mention_every_vertex() {
        let d = greedy(2, 3, 5);
        let ascii = d.render_ascii();
        assert_eq!(ascii.matches('o').count(), 6);
        let tikz = d.render_tikz();
        assert_eq!(tikz.matches("circle").count(), 6);
        assert!(tikz.contains("grid (0.75,0.5)"));
        let q2 = greedy(5, 1, 5).render_ascii();
        assert_eq!(q2.matches('o').count(), 6);
    }
}
