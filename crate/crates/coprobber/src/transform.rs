//! Cop-number-monotone graph operations: clique substitution, uniform edge
//! subdivision, the path-join construction that pads non-adjacent pairs, and
//! a girth lift built on subdivision.
//!
//! Every transform returns the output graph together with an origin map that
//! tells, for each output vertex, which input vertex or input pair produced
//! it. Output numbering is deterministic: surviving input vertices keep their
//! ids, and fresh vertices are appended in lexicographic order of their
//! source.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::metrics::{girth, CycleLen};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("vertex {0} is isolated; strip isolated vertices before clique substitution")]
    IsolatedVertex(usize),
    #[error("graph is acyclic; girth is already infinite, nothing to lift")]
    AcyclicInput,
    #[error("target girth must be at least 3, got {0}")]
    BadTargetGirth(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where an output vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// A surviving input vertex (or, for clique substitution, the vertex
    /// whose clique this output vertex belongs to).
    Vertex(usize),
    /// An internal vertex of a path standing in for the input pair `(u, v)`:
    /// an edge for subdivision, a non-adjacent pair for the path join.
    Pair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformResult {
    pub output: Graph,
    /// Indexed by output vertex; total by construction.
    pub origin: Vec<Origin>,
}

impl TransformResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transform result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Clique substitution G+: each vertex v becomes a clique on deg(v) vertices,
/// one per incident edge, and cliques of adjacent vertices are matched.
///
/// Output vertices are the pairs (v, u) with u in N(v), numbered in
/// lexicographic order of (v, u); two outputs are adjacent iff they share the
/// first coordinate or are the two orientations of one input edge.
pub fn clique_substitution(g: &Graph) -> Result<TransformResult, TransformError> {
    for v in g.vertices() {
        if g.degree(v) == 0 {
            return Err(TransformError::IsolatedVertex(v));
        }
    }
    let mut ids: Vec<(usize, usize)> = Vec::with_capacity(2 * g.m());
    let mut index_of = std::collections::HashMap::new();
    for v in g.vertices() {
        for &u in g.neighbors(v) {
            index_of.insert((v, u), ids.len());
            ids.push((v, u));
        }
    }
    let mut edges = Vec::new();
    for v in g.vertices() {
        let nbrs = g.neighbors(v);
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                edges.push((index_of[&(v, nbrs[i])], index_of[&(v, nbrs[j])]));
            }
        }
    }
    for &(u, v) in g.edges() {
        edges.push((index_of[&(u, v)], index_of[&(v, u)]));
    }
    let output = Graph::new(ids.len(), &edges)?;
    let origin = ids.iter().map(|&(v, _)| Origin::Vertex(v)).collect();
    Ok(TransformResult { output, origin })
}

/// Replaces every edge by a path with `r` internal vertices; `r = 0` is the
/// identity. Original vertices keep their ids; internal vertices are appended
/// edge by edge in lexicographic edge order.
pub fn subdivide(g: &Graph, r: usize) -> Result<TransformResult, TransformError> {
    let mut origin: Vec<Origin> = g.vertices().map(Origin::Vertex).collect();
    let mut edges = Vec::new();
    let mut next = g.n();
    for &(u, v) in g.edges() {
        let mut prev = u;
        for _ in 0..r {
            origin.push(Origin::Pair(u, v));
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, v));
    }
    let output = Graph::new(next, &edges)?;
    Ok(TransformResult { output, origin })
}

/// Joins every non-adjacent pair of vertices by a fresh path of length
/// 2n, where n is the vertex count at call time. Complete graphs pass
/// through unchanged.
pub fn hat_construction(g: &Graph) -> Result<TransformResult, TransformError> {
    let n = g.n();
    let mut origin: Vec<Origin> = g.vertices().map(Origin::Vertex).collect();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut next = n;
    let internal = 2 * n - 1; // a path of length 2n has 2n-1 internal vertices
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            let mut prev = u;
            for _ in 0..internal {
                origin.push(Origin::Pair(u, v));
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, v));
        }
    }
    let output = Graph::new(next, &edges)?;
    Ok(TransformResult { output, origin })
}

/// Subdivides uniformly just enough that the output girth reaches
/// `target_girth`: the least r >= 0 with girth(G) * (r + 1) >= target.
pub fn girth_lift(g: &Graph, target_girth: usize) -> Result<TransformResult, TransformError> {
    if target_girth < 3 {
        return Err(TransformError::BadTargetGirth(target_girth));
    }
    let base = match girth(g) {
        CycleLen::Finite(k) => k,
        CycleLen::Infinite => return Err(TransformError::AcyclicInput),
    };
    let r = target_girth.div_ceil(base) - 1;
    let result = subdivide(g, r)?;
    debug_assert!(matches!(girth(&result.output), CycleLen::Finite(k) if k >= target_girth));
    Ok(result)
}
