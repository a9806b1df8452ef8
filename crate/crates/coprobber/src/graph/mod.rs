//! Immutable simple undirected graphs with canonical adjacency, the edge-list
//! text format, and the breadth-first plumbing every other module leans on.
//!
//! Vertices are `0..n`. Neighbor lists are kept sorted ascending so that every
//! "some path" or "some embedding" answer downstream is deterministic.

pub mod generate;
pub mod metrics;
pub mod pattern;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance too large: n = {n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// A finite simple undirected graph in canonical form.
///
/// No loops, no parallel edges; `edges` sorted lexicographically with
/// `u < v`; neighbor lists sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, normalizing endpoint order.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n {
                return Err(GraphError::InvalidVertex(a));
            }
            if b >= n {
                return Err(GraphError::InvalidVertex(b));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    /// BFS distances from `src`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path hop count, or `None` if `u` and `v` lie in different
    /// components.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>, GraphError> {
        if u >= self.n {
            return Err(GraphError::InvalidVertex(u));
        }
        if v >= self.n {
            return Err(GraphError::InvalidVertex(v));
        }
        Ok(self.bfs_distances(u)[v])
    }

    /// Lexicographically least shortest path from `u` to `v`, as a vertex
    /// sequence including both endpoints.
    pub fn shortest_path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let dist_to_v = self.bfs_distances(v);
        dist_to_v[u]?;
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            let d = dist_to_v[cur].unwrap();
            // neighbor lists are sorted, so the first strictly-closer
            // neighbor gives the lexicographically least continuation
            let next = *self
                .neighbors(cur)
                .iter()
                .find(|&&w| dist_to_v[w] == Some(d - 1))
                .expect("BFS layer must contain a predecessor");
            path.push(next);
            cur = next;
        }
        Some(path)
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            parts.push(comp);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        // a simple graph is a forest iff m = n - #components
        self.m() + self.components().len() == self.n
    }

    /// Two-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in self.neighbors(u) {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Induced subgraph on `verts` (deduplicated, sorted). Returns the
    /// subgraph together with the map from new vertex ids to old ones.
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = verts.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut back = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            back[old] = new;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if back[u] != usize::MAX && back[v] != usize::MAX {
                edges.push((back[u], back[v]));
            }
        }
        let g = Graph::new(keep.len(), &edges).expect("induced subgraph of a valid graph");
        (g, keep)
    }

    /// Parses the edge-list document format: optional `#` comment lines, a
    /// header line `n m`, then `m` lines `u v`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut n = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let a: usize = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse {
                    line: line_no,
                    msg: format!("expected two integers, got {line:?}"),
                })?;
            let b: usize = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse {
                    line: line_no,
                    msg: format!("expected two integers, got {line:?}"),
                })?;
            if fields.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: format!("trailing fields in {line:?}"),
                });
            }
            match header {
                None => {
                    header = Some((a, b));
                    n = a;
                }
                Some(_) => {
                    if a >= n || b >= n {
                        return Err(GraphError::Parse {
                            line: line_no,
                            msg: format!("vertex out of range in {line:?} (n = {n})"),
                        });
                    }
                    if a == b {
                        return Err(GraphError::Parse {
                            line: line_no,
                            msg: format!("self-loop {a} {b}"),
                        });
                    }
                    let e = (a.min(b), a.max(b));
                    if edges.contains(&e) {
                        return Err(GraphError::Parse {
                            line: line_no,
                            msg: format!("duplicate edge {a} {b}"),
                        });
                    }
                    edges.push(e);
                }
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header line \"n m\"".into(),
        })?;
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, &edges)
    }

    /// Canonical edge-list rendering; `parse(render(g)) == g`.
    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Undirected DOT export with vertex ids as labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g {\n");
        for v in 0..self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// FNV-1a hash of the canonical rendering; used to stamp traces.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for byte in self.render().bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, m={})", self.n, self.m())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_p3() {
        let g = Graph::parse("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn parse_singleton() {
        let g = Graph::parse("1 0").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = Graph::parse("2 1\n0 0").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_rejects_duplicate_and_range() {
        assert!(Graph::parse("3 2\n0 1\n1 0").is_err());
        assert!(Graph::parse("2 1\n0 5").is_err());
        assert!(Graph::parse("2 2\n0 1").is_err());
    }

    #[test]
    fn parse_accepts_comments_and_reversed_endpoints() {
        let g = Graph::parse("# a path\n3 2\n1 0\n# middle\n2 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn distance_and_components() {
        let g = Graph::parse("5 4\n0 1\n1 2\n2 3\n3 4").unwrap();
        assert_eq!(g.distance(0, 4).unwrap(), Some(4));
        let h = Graph::new(5, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(h.distance(0, 3).unwrap(), None);
        assert_eq!(h.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn shortest_path_is_lex_least() {
        // two shortest 0-3 paths in C_4: 0-1-3? no; use a diamond
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(g.shortest_path(0, 3).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let (sub, map) = g.induced(&[1, 2, 4]);
        assert_eq!(map, vec![1, 2, 4]);
        assert_eq!(sub.edges(), &[(0, 1)]); // only 1-2 survives
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(n in 1usize..10, seed in 0u64..500) {
            let g = generate::gnp(n, 0.5, seed).unwrap();
            let back = Graph::parse(&g.render()).unwrap();
            prop_assert_eq!(g, back);
        }

        #[test]
        fn bfs_distance_symmetric(n in 2usize..9, seed in 0u64..200) {
            let g = generate::gnp(n, 0.4, seed).unwrap();
            for u in 0..n {
                for v in 0..n {
                    prop_assert_eq!(g.distance(u, v).unwrap(), g.distance(v, u).unwrap());
                }
            }
        }
    }
}
