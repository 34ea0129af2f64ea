use std::fmt;

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::vector::SignedVector;

/// Undirected simple graph with one bitset row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph { n, words, rows: vec![vec![0; words]; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Add `{u, v}`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u][v / 64] |= 1 << (v % 64);
        self.rows[v][u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u][v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(v, u))
    }

    /// Subgraph induced on `keep` (in that order); vertex `i` of the result
    /// is `keep[i]` here.
    pub fn induced(&self, keep: &[usize]) -> BitGraph {
        let mut g = BitGraph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Whether `vs` is pairwise adjacent.
    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }
}

impl fmt::Debug for BitGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitGraph({} vertices, {} edges)", self.n, self.edge_count())
    }
}

/// Pairwise condition a compatibility graph encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// `<v, w> >= l`.
    AtLeast(i64),
    /// `<v, w> != p`.
    NotEqual(i64),
    /// `|A ∩ B| >= t`.
    IntersectAtLeast(usize),
    /// `|A ∪ B| <= s`.
    UnionAtMost(usize),
    /// Same side: `|A ∩ B| >= t`; opposite sides: `|A ∩ B| >= s`.
    CrossPair { t: usize, s: usize },
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::AtLeast(l) => write!(f, "<v,w> >= {l}"),
            Predicate::NotEqual(p) => write!(f, "<v,w> != {p}"),
            Predicate::IntersectAtLeast(t) => write!(f, "|A cap B| >= {t}"),
            Predicate::UnionAtMost(s) => write!(f, "|A cup B| <= {s}"),
            Predicate::CrossPair { t, s } => write!(f, "t = {t}, cross s = {s}"),
        }
    }
}

/// Something a [`Predicate`] can compare pairwise.
pub trait Vertex: Clone + Send + Sync {
    fn supports(predicate: &Predicate) -> bool;

    /// Only called with predicates for which `supports` holds.
    fn compatible(&self, other: &Self, predicate: &Predicate) -> bool;
}

impl Vertex for SignedVector {
    fn supports(predicate: &Predicate) -> bool {
        matches!(predicate, Predicate::AtLeast(_) | Predicate::NotEqual(_))
    }

    fn compatible(&self, other: &Self, predicate: &Predicate) -> bool {
        match *predicate {
            Predicate::AtLeast(l) => self.dot(other) >= l,
            Predicate::NotEqual(p) => self.dot(other) != p,
            _ => unreachable!("unsupported predicate for signed vectors"),
        }
    }
}

impl Vertex for Mask {
    fn supports(predicate: &Predicate) -> bool {
        matches!(predicate, Predicate::IntersectAtLeast(_) | Predicate::UnionAtMost(_))
    }

    fn compatible(&self, other: &Self, predicate: &Predicate) -> bool {
        match *predicate {
            Predicate::IntersectAtLeast(t) => self.intersection_len(other) >= t,
            Predicate::UnionAtMost(s) => self.union_len(other) <= s,
            _ => unreachable!("unsupported predicate for sets"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

/// A set tagged with the family of a cross pair it would join.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SidedSet {
    pub side: Side,
    pub set: Mask,
}

impl Vertex for SidedSet {
    fn supports(predicate: &Predicate) -> bool {
        matches!(predicate, Predicate::CrossPair { .. })
    }

    fn compatible(&self, other: &Self, predicate: &Predicate) -> bool {
        match *predicate {
            Predicate::CrossPair { t, s } => {
                let need = if self.side == other.side { t } else { s };
                self.set.intersection_len(&other.set) >= need
            }
            _ => unreachable!("unsupported predicate for sided sets"),
        }
    }
}

/// Vertices plus the graph of compatible pairs. Cliques are exactly the
/// subfamilies satisfying the predicate pairwise.
#[derive(Clone, Debug)]
pub struct CompatGraph<V> {
    vertices: Vec<V>,
    graph: BitGraph,
    predicate: Predicate,
}

impl<V: Vertex> CompatGraph<V> {
    /// Vertex `i` of the graph is `vertices[i]`. Every vertex must be
    /// compatible with itself; no self-loops are stored.
    pub fn build(vertices: Vec<V>, predicate: Predicate) -> Result<Self> {
        if !V::supports(&predicate) {
            return Err(Error::invalid(format!("predicate {predicate} does not apply to these vertices")));
        }
        if let Some(i) = vertices.iter().position(|v| !v.compatible(v, &predicate)) {
            return Err(Error::invalid(format!("vertex {i} is incompatible with itself under {predicate}")));
        }
        let mut graph = BitGraph::empty(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            for (j, w) in vertices.iter().enumerate().skip(i + 1) {
                if v.compatible(w, &predicate) {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok(CompatGraph { vertices, graph, predicate })
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn predicate(&self) -> Predicate {
        self.predicate
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}
