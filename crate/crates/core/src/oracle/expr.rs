//! Rational expressions in the free skew field, stored as a DAG.

use ahash::AHashMap;

use crate::chebyshev::Params;
use crate::error::{Error, Result};
use crate::ncalgebra::{Coeff, Gen, ModMatrix, NcLaurentPoly, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExprId(u32);

impl ExprId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    VarX,
    VarY,
    Const(i64),
    Sum(Vec<ExprId>),
    /// Ordered product.
    Prod(Vec<ExprId>),
    Inverse(ExprId),
    Power(ExprId, u32),
}

/// Arena of hash-consed nodes. Children always precede their parents, so
/// index order is a topological order.
#[derive(Clone, Debug, Default)]
pub struct ExprGraph {
    nodes: Vec<Node>,
    index: AHashMap<Node, ExprId>,
}

impl ExprGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: ExprId) -> &Node {
        &self.nodes[id.index()]
    }

    fn add(&mut self, node: Node) -> ExprId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = ExprId(u32::try_from(self.nodes.len()).expect("expression graph overflow"));
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn var_x(&mut self) -> ExprId {
        self.add(Node::VarX)
    }

    pub fn var_y(&mut self) -> ExprId {
        self.add(Node::VarY)
    }

    pub fn var(&mut self, g: Gen) -> ExprId {
        match g {
            Gen::X => self.var_x(),
            Gen::Y => self.var_y(),
        }
    }

    pub fn constant(&mut self, c: i64) -> ExprId {
        self.add(Node::Const(c))
    }

    pub fn sum(&mut self, children: Vec<ExprId>) -> ExprId {
        self.add(Node::Sum(children))
    }

    pub fn prod(&mut self, children: Vec<ExprId>) -> ExprId {
        self.add(Node::Prod(children))
    }

    pub fn inverse(&mut self, e: ExprId) -> ExprId {
        self.add(Node::Inverse(e))
    }

    pub fn power(&mut self, e: ExprId, k: u32) -> ExprId {
        self.add(Node::Power(e, k))
    }

    /// `x y x^-1` and `(1 + y^r) x^-1` over the given `x`, `y`.
    pub fn f_step(&mut self, x: ExprId, y: ExprId, r: u32) -> (ExprId, ExprId) {
        let xi = self.inverse(x);
        let one = self.constant(1);
        let yr = self.power(y, r);
        let s = self.sum(vec![one, yr]);
        (self.prod(vec![x, y, xi]), self.prod(vec![s, xi]))
    }

    /// Replaces `x` by `x y x^-1` and `y` by `(1 + y^r) x^-1` throughout `e`.
    pub fn subst_f(&mut self, e: ExprId, r: u32) -> ExprId {
        let x = self.var_x();
        let y = self.var_y();
        let (fx, fy) = self.f_step(x, y, r);
        let mut memo: AHashMap<ExprId, ExprId> = AHashMap::new();
        for id in self.reachable(e) {
            let new = match self.node(id).clone() {
                Node::VarX => fx,
                Node::VarY => fy,
                Node::Const(c) => self.constant(c),
                Node::Sum(ch) => {
                    let ch = ch.iter().map(|c| memo[c]).collect();
                    self.sum(ch)
                }
                Node::Prod(ch) => {
                    let ch = ch.iter().map(|c| memo[c]).collect();
                    self.prod(ch)
                }
                Node::Inverse(c) => self.inverse(memo[&c]),
                Node::Power(c, k) => self.power(memo[&c], k),
            };
            memo.insert(id, new);
        }
        memo[&e]
    }

    /// A polynomial as a sum of coefficient-scaled words.
    pub fn from_poly<C: Coeff>(&mut self, p: &NcLaurentPoly<C>) -> Result<ExprId> {
        let mut terms = Vec::with_capacity(p.len());
        for (w, c) in p.canonical_terms() {
            let c = c
                .to_i64()
                .ok_or_else(|| Error::TooLarge(format!("coefficient {c} in expression")))?;
            let mut factors = vec![self.constant(c)];
            for f in w.factors() {
                let v = self.var(f.gen());
                let base = if f.exp() < 0 { self.inverse(v) } else { v };
                factors.push(self.power(base, f.exp().unsigned_abs()));
            }
            terms.push(self.prod(factors));
        }
        Ok(self.sum(terms))
    }

    /// Node ids reachable from `root`, in increasing (topological) order.
    fn reachable(&self, root: ExprId) -> Vec<ExprId> {
        let mut seen = vec![false; root.index() + 1];
        let mut todo = vec![root];
        while let Some(id) = todo.pop() {
            if std::mem::replace(&mut seen[id.index()], true) {
                continue;
            }
            match self.node(id) {
                Node::Sum(ch) | Node::Prod(ch) => todo.extend(ch),
                Node::Inverse(c) | Node::Power(c, _) => todo.push(*c),
                Node::VarX | Node::VarY | Node::Const(_) => {}
            }
        }
        (0..=root.index()).filter(|&i| seen[i]).map(|i| ExprId(i as u32)).collect()
    }

    /// Bottom-up evaluation at `x = mx`, `y = my`. A singular `Inverse`
    /// argument yields `SingularIntermediate`.
    pub fn eval(
        &self,
        root: ExprId,
        field: &PrimeField,
        mx: &ModMatrix,
        my: &ModMatrix,
    ) -> Result<ModMatrix> {
        let dim = mx.dim();
        let p = field.modulus();
        let mut vals: AHashMap<ExprId, ModMatrix> = AHashMap::new();
        for id in self.reachable(root) {
            let v = match self.node(id) {
                Node::VarX => mx.clone(),
                Node::VarY => my.clone(),
                Node::Const(c) => field.scalar(dim, c.rem_euclid(p as i64) as u64),
                Node::Sum(ch) => {
                    let mut acc = ModMatrix::zero(dim);
                    for c in ch {
                        field.add_scaled_assign(&mut acc, &vals[c], 1);
                    }
                    acc
                }
                Node::Prod(ch) => {
                    let mut acc = ModMatrix::identity(dim);
                    for c in ch {
                        acc = field.mul(&acc, &vals[c]);
                    }
                    acc
                }
                Node::Inverse(c) => field.inverse(&vals[c]).map_err(|e| match e {
                    Error::SingularMatrix => Error::SingularIntermediate,
                    e => e,
                })?,
                Node::Power(c, k) => field.pow(&vals[c], u64::from(*k)),
            };
            vals.insert(id, v);
        }
        Ok(vals.remove(&root).expect("root is reachable"))
    }
}

/// DAGs for `(x_k, y_k)`: `x_{j+1} = x_j y_j x_j^-1`,
/// `y_{j+1} = (1 + y_j^rho) x_j^-1` with `rho = r1` for odd `j + 1`.
pub fn seq_xy(graph: &mut ExprGraph, params: Params, k: u32) -> (ExprId, ExprId) {
    let mut x = graph.var_x();
    let mut y = graph.var_y();
    for j in 1..=k {
        (x, y) = graph.f_step(x, y, params.r(i64::from(j)));
    }
    (x, y)
}
