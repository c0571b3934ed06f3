//! The word graphs underlying the pencil construction, their edge-weight
//! rules, weighted Laplacians, and brute-force spanning-tree enumeration for
//! small graphs.
//!
//! For parameters `(n, k)` the graph has a source `s`, a sink `z`, and one
//! vertex per word of 1..k distinct letters from `{1,..,n}`. Edges join `s`
//! to the single letters, each word to its one-letter extensions, and the
//! length-k words to `z`. Vertex and edge order are canonical (words in
//! length-then-lex order, edges by rule class then endpoints) so everything
//! built from a graph is reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::SymRatMatrix;
use crate::poly::{elem_sym_ratio, Monomial, Polynomial, RationalFunction};
use crate::util::{factorial, full_set};
use crate::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Vertex {
    /// The source vertex `s`.
    Source,
    /// A word of pairwise-distinct letters from `{1,..,n}`.
    Word(Vec<u32>),
    /// The sink vertex `z`.
    Sink,
}

impl Vertex {
    pub fn word(letters: &[u32]) -> Self {
        Vertex::Word(letters.to_vec())
    }

    pub fn letters(&self) -> &[u32] {
        match self {
            Vertex::Word(w) => w,
            _ => &[],
        }
    }
}

impl Ord for Vertex {
    /// `s` first, then words in length-then-lex order, `z` last.
    fn cmp(&self, other: &Self) -> Ordering {
        use Vertex::*;
        match (self, other) {
            (Source, Source) | (Sink, Sink) => Ordering::Equal,
            (Source, _) | (_, Sink) => Ordering::Less,
            (_, Source) | (Sink, _) => Ordering::Greater,
            (Word(a), Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        }
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Source => write!(f, "s"),
            Vertex::Sink => write!(f, "z"),
            Vertex::Word(w) => {
                if w.iter().all(|&l| l <= 9) {
                    for l in w {
                        write!(f, "{l}")?;
                    }
                    Ok(())
                } else {
                    write!(f, "{}", w.iter().map(u32::to_string).join("."))
                }
            }
        }
    }
}

/// Which of the three construction rules created an edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeRule {
    /// `s` to a single-letter word.
    SourceToLetter,
    /// A word to a one-letter extension of it.
    WordExtension,
    /// A maximal word to `z` (for `k = 0`, `s` itself plays the empty word).
    WordToSink,
}

impl EdgeRule {
    pub fn class(self) -> u8 {
        match self {
            EdgeRule::SourceToLetter => 1,
            EdgeRule::WordExtension => 2,
            EdgeRule::WordToSink => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Canonical index of the endpoint closer to `s`.
    pub a: usize,
    /// Canonical index of the endpoint closer to `z`.
    pub b: usize,
    pub rule: EdgeRule,
    pub id: usize,
}

/// The graph for parameters `(n, k)`, with canonical vertex and edge order.
#[derive(Clone, Debug)]
pub struct WordGraph {
    n: usize,
    k: usize,
    vertices: Vec<Vertex>,
    index: BTreeMap<Vertex, usize>,
    edges: Vec<Edge>,
}

impl WordGraph {
    pub fn build(n: usize, k: usize) -> Result<Self> {
        if n < 1 || k + 1 > n {
            return Err(Error::KOutOfRange {
                n,
                k,
                min: 0,
                max: n.saturating_sub(1),
            });
        }
        let mut vertices = vec![Vertex::Source];
        for len in 1..=k {
            let mut words = Vec::new();
            collect_words(n, len, &mut Vec::new(), &mut words);
            vertices.extend(words.into_iter().map(Vertex::Word));
        }
        vertices.push(Vertex::Sink);
        let index: BTreeMap<Vertex, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        let mut edges: Vec<Edge> = Vec::new();
        fn push(edges: &mut Vec<Edge>, a: usize, b: usize, rule: EdgeRule) {
            let id = edges.len();
            edges.push(Edge { a, b, rule, id });
        }
        if k == 0 {
            push(&mut edges, 0, 1, EdgeRule::WordToSink);
        } else {
            for i in 1..=n as u32 {
                let b = index[&Vertex::word(&[i])];
                push(&mut edges, 0, b, EdgeRule::SourceToLetter);
            }
            for len in 2..=k {
                let mut words = Vec::new();
                collect_words(n, len, &mut Vec::new(), &mut words);
                for w in words {
                    let a = index[&Vertex::word(&w[..len - 1])];
                    let b = index[&Vertex::word(&w)];
                    push(&mut edges, a, b, EdgeRule::WordExtension);
                }
            }
            let z = vertices.len() - 1;
            let mut words = Vec::new();
            collect_words(n, k, &mut Vec::new(), &mut words);
            for w in words {
                let a = index[&Vertex::word(&w)];
                push(&mut edges, a, z, EdgeRule::WordToSink);
            }
        }
        Ok(WordGraph {
            n,
            k,
            vertices,
            index,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn sink_index(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertex_labels(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.to_string()).collect()
    }

    /// Forgets labels and rules; for spanning-tree enumeration.
    pub fn skeleton(&self) -> MultiGraph {
        MultiGraph {
            num_vertices: self.vertices.len(),
            edges: self.edges.iter().map(|e| (e.a, e.b)).collect(),
        }
    }

    /// Edge weights for parameter `r >= k`: a depth-`i` tree edge gets
    /// `(r-i+1)! x_{w_i}` (the `s` edges are depth 1), and the edge from a
    /// word `w` to `z` gets `(r-k+1)! q_{r-k+1}` over the complementary
    /// letters. At `r = k` every weight is a linear form.
    pub fn edge_weights(&self, r: usize) -> Result<EdgeWeights> {
        if r < self.k {
            return Err(Error::WeightParamTooSmall { r, k: self.k });
        }
        let n = self.n;
        let mut weights = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let w = match e.rule {
                EdgeRule::SourceToLetter | EdgeRule::WordExtension => {
                    let child = self.vertices[e.b].letters();
                    let depth = child.len();
                    let last = *child.last().expect("tree edge child has letters");
                    let coef = Rat::from_integer(factorial(r - depth + 1));
                    let var = Polynomial::variable(n, last)?;
                    RationalFunction::from_poly(var.scaled(&coef))
                }
                EdgeRule::WordToSink => {
                    let word = self.vertices[e.a].letters();
                    let used: BTreeSet<u32> = word.iter().copied().collect();
                    let complement: BTreeSet<u32> =
                        full_set(n).difference(&used).copied().collect();
                    let order = r - word.len() + 1;
                    let coef = Rat::from_integer(factorial(order));
                    elem_sym_ratio(n, &complement, order)?.scaled(&coef)
                }
            };
            weights.push(w);
        }
        Ok(EdgeWeights { r, weights })
    }

    /// Symbolic weighted Laplacian. Only sensible when the weights are
    /// polynomials (`r = k`) or the graph is tiny; for pointwise work use
    /// [`laplacian_value_at`].
    pub fn laplacian(&self, w: &EdgeWeights) -> Laplacian {
        assert_eq!(w.weights.len(), self.edges.len(), "weights from this graph");
        let mut lap = Laplacian::zero(self.vertices.len(), self.n, self.vertex_labels());
        for e in &self.edges {
            lap.add_edge(e.a, e.b, &w.weights[e.id]);
        }
        lap
    }
}

fn collect_words(n: usize, len: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for letter in 1..=n as u32 {
        if prefix.contains(&letter) {
            continue;
        }
        prefix.push(letter);
        collect_words(n, len, prefix, out);
        prefix.pop();
    }
}

/// Expected vertex count `2 + sum_{l=1..k} n!/(n-l)!`.
pub fn expected_vertex_count(n: usize, k: usize) -> usize {
    2 + (1..=k).map(|l| falling_factorial(n, l)).sum::<usize>()
}

/// Expected edge count: `n` source edges, the word extensions, and one sink
/// edge per maximal word. For `k = 0` there is the single `s`-`z` edge.
pub fn expected_edge_count(n: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    n + (2..=k).map(|i| falling_factorial(n, i)).sum::<usize>() + falling_factorial(n, k)
}

fn falling_factorial(n: usize, l: usize) -> usize {
    (0..l).map(|t| n - t).product()
}

/// Edge weights for one parameter `r`, indexed by edge id.
#[derive(Clone, Debug)]
pub struct EdgeWeights {
    pub r: usize,
    weights: Vec<RationalFunction>,
}

impl EdgeWeights {
    pub fn weight(&self, edge_id: usize) -> &RationalFunction {
        &self.weights[edge_id]
    }

    pub fn all(&self) -> &[RationalFunction] {
        &self.weights
    }

    /// True when every weight is a linear form with denominator 1, which
    /// happens exactly at `r = k`.
    pub fn all_linear_forms(&self) -> bool {
        self.weights.iter().all(RationalFunction::is_linear_form)
    }
}

/// Evaluates every edge weight at a point and assembles the weighted
/// Laplacian numerically. Fails with a pole when some weight denominator
/// vanishes at the point.
pub fn laplacian_value_at(g: &WordGraph, w: &EdgeWeights, point: &[Rat]) -> Result<SymRatMatrix> {
    let mut m = SymRatMatrix::zeros(g.vertex_count());
    for e in g.edges() {
        let val = w.weight(e.id).eval(point)?;
        add_laplacian_entry(&mut m, e.a, e.b, &val);
    }
    Ok(m)
}

/// Same, with one row/column (usually the sink) deleted.
pub fn reduced_laplacian_value_at(
    g: &WordGraph,
    w: &EdgeWeights,
    point: &[Rat],
    deleted: usize,
) -> Result<SymRatMatrix> {
    let size = g.vertex_count();
    assert!(deleted < size);
    let map = |i: usize| if i > deleted { i - 1 } else { i };
    let mut m = SymRatMatrix::zeros(size - 1);
    for e in g.edges() {
        let val = w.weight(e.id).eval(point)?;
        match (e.a == deleted, e.b == deleted) {
            (false, false) => add_laplacian_entry(&mut m, map(e.a), map(e.b), &val),
            (true, false) => m.add_sym(map(e.b), map(e.b), &val),
            (false, true) => m.add_sym(map(e.a), map(e.a), &val),
            (true, true) => unreachable!("loop edge"),
        }
    }
    Ok(m)
}

fn add_laplacian_entry(m: &mut SymRatMatrix, a: usize, b: usize, val: &Rat) {
    m.add_sym(a, a, val);
    m.add_sym(b, b, val);
    let neg = -val.clone();
    m.add_sym(a, b, &neg);
}

/// Symbolic weighted Laplacian: symmetric, rows sum to zero.
#[derive(Clone, Debug)]
pub struct Laplacian {
    ambient_dim: usize,
    entries: Vec<Vec<RationalFunction>>,
    labels: Vec<String>,
}

impl Laplacian {
    fn zero(size: usize, ambient_dim: usize, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), size);
        Laplacian {
            ambient_dim,
            entries: vec![vec![RationalFunction::zero(ambient_dim); size]; size],
            labels,
        }
    }

    fn add_edge(&mut self, a: usize, b: usize, w: &RationalFunction) {
        self.entries[a][a] = &self.entries[a][a] + w;
        self.entries[b][b] = &self.entries[b][b] + w;
        self.entries[a][b] = &self.entries[a][b] - w;
        self.entries[b][a] = &self.entries[b][a] - w;
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i][j]
    }

    pub fn row_sums_are_zero(&self) -> bool {
        self.entries.iter().all(|row| {
            let mut acc = RationalFunction::zero(self.ambient_dim);
            for e in row {
                acc = &acc + e;
            }
            acc.is_zero()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Deletes the row and column of one vertex, preserving order otherwise.
    pub fn reduced(&self, deleted: usize) -> Result<Laplacian> {
        if deleted >= self.size() {
            return Err(Error::UnknownVertex(format!("index {deleted}")));
        }
        let keep: Vec<usize> = (0..self.size()).filter(|&i| i != deleted).collect();
        Ok(Laplacian {
            ambient_dim: self.ambient_dim,
            entries: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
        })
    }

    pub fn reduced_by_label(&self, label: &str) -> Result<Laplacian> {
        let idx = self
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
        self.reduced(idx)
    }

    /// The entries as plain polynomials, when every denominator is 1.
    pub fn try_polynomial_matrix(&self) -> Option<Vec<Vec<Polynomial>>> {
        let mut out = Vec::with_capacity(self.size());
        for row in &self.entries {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                if !e.is_polynomial() {
                    return None;
                }
                r.push(e.numerator().clone());
            }
            out.push(r);
        }
        Some(out)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<SymRatMatrix> {
        let mut rows = Vec::with_capacity(self.size());
        for row in &self.entries {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                r.push(e.eval(point)?);
            }
            rows.push(r);
        }
        SymRatMatrix::from_dense(&rows)
    }
}

/// A plain multigraph on `{0,..,num_vertices-1}`; used for spanning-tree
/// enumeration and for graphs that are not word graphs.
#[derive(Clone, Debug)]
pub struct MultiGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

const TREE_ENUM_EDGE_LIMIT: usize = 25;

impl MultiGraph {
    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All spanning trees as sorted lists of edge indices. Guarded: refuses
    /// more than 25 edges, where the subset enumeration stops being a toy.
    pub fn spanning_trees(&self) -> Result<Vec<Vec<usize>>> {
        let m = self.edges.len();
        if m > TREE_ENUM_EDGE_LIMIT {
            return Err(Error::EdgeBudgetExceeded {
                edges: m,
                limit: TREE_ENUM_EDGE_LIMIT,
            });
        }
        let need = self.num_vertices - 1;
        let mut out = Vec::new();
        for subset in (0..m).combinations(need) {
            let mut uf = UnionFind::new(self.num_vertices);
            let mut acyclic = true;
            for &e in &subset {
                let (a, b) = self.edges[e];
                if !uf.union(a, b) {
                    acyclic = false;
                    break;
                }
            }
            if acyclic && uf.components == 1 {
                out.push(subset);
            }
        }
        Ok(out)
    }

    /// The generating polynomial of spanning trees in one variable per edge
    /// (edge `i` gets variable `x_{i+1}`).
    pub fn spanning_tree_polynomial(&self) -> Result<Polynomial> {
        let trees = self.spanning_trees()?;
        let mut p = Polynomial::zero(self.edges.len());
        for tree in trees {
            let pairs: Vec<(u32, u32)> = tree.iter().map(|&e| (e as u32 + 1, 1)).collect();
            p.add_term(Monomial::from_pairs(&pairs), Rat::one());
        }
        Ok(p)
    }

    /// Laplacian over edge variables, one variable per edge.
    pub fn laplacian_edge_vars(&self, labels: Option<Vec<String>>) -> Laplacian {
        let labels =
            labels.unwrap_or_else(|| (0..self.num_vertices).map(|i| i.to_string()).collect());
        let m = self.edges.len();
        let mut lap = Laplacian::zero(self.num_vertices, m, labels);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let var = Polynomial::variable(m, i as u32 + 1).expect("edge variable in range");
            let w = RationalFunction::from_poly(var);
            lap.add_edge(a, b, &w);
        }
        lap
    }
}

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Returns false when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }
}
