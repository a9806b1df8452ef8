//! Graph family generators: paths, cycles, cliques, bipartite graphs, stars,
//! spiders, the Petersen graph, seeded G(n,p), and disjoint unions.
//!
//! The random family is a pure function of `(n, p, seed)`; it draws from a
//! splitmix64 stream so outputs are stable across toolchains.

use super::{Graph, GraphError};

/// Path on `n` vertices.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::InvalidParams("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::new(n, &edges)
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParams("cycle needs n >= 3".into()));
    }
    let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((n - 1, 0));
    Graph::new(n, &edges)
}

/// Complete graph K_n.
pub fn complete(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::InvalidParams("complete needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

/// Complete bipartite graph K_{a,b}; side A is `0..a`, side B is `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    if a < 1 || b < 1 {
        return Err(GraphError::InvalidParams("bipartite sides must be >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::new(a + b, &edges)
}

/// Star K_{1,leaves} with the center at vertex 0.
pub fn star(leaves: usize) -> Result<Graph, GraphError> {
    if leaves < 1 {
        return Err(GraphError::InvalidParams("star needs >= 1 leaf".into()));
    }
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::new(leaves + 1, &edges)
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes
/// i -- 5+i. 3-regular, girth 5.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::new(10, &edges).expect("petersen construction")
}

/// Spider tree: a center of degree `legs.len()` with paths of the given
/// lengths attached; each leg length must be >= 1.
pub fn spider(legs: &[usize]) -> Result<Graph, GraphError> {
    if legs.is_empty() || legs.iter().any(|&l| l < 1) {
        return Err(GraphError::InvalidParams("spider leg lengths must be >= 1".into()));
    }
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in legs {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::new(next, &edges)
}

/// Seeded Erdos-Renyi G(n,p). Pure in `(n, p, seed)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::InvalidParams("gnp needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParams(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Disjoint union; vertices of `b` are shifted by `a.n()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let mut edges: Vec<(usize, usize)> = a.edges().to_vec();
    let off = a.n();
    edges.extend(b.edges().iter().map(|&(u, v)| (u + off, v + off)));
    Graph::new(a.n() + b.n(), &edges).expect("disjoint union of valid graphs")
}

/// splitmix64: tiny, stable, seedable stream for reproducible corpora.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::metrics;

    #[test]
    fn path_is_a_tree() {
        let g = path(5).unwrap();
        assert_eq!((g.n(), g.m()), (5, 4));
        assert!(g.is_forest());
        assert_eq!(metrics::girth(&g), metrics::CycleLen::Infinite);
    }

    #[test]
    fn petersen_shape() {
        let g = petersen();
        assert_eq!((g.n(), g.m()), (10, 15));
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(metrics::girth(&g), metrics::CycleLen::Finite(5));
    }

    #[test]
    fn petersen_disjoint_k6() {
        let g = disjoint_union(&petersen(), &complete(6).unwrap());
        assert_eq!((g.n(), g.m()), (16, 30));
        assert_eq!(g.components().len(), 2);
        let sizes: Vec<usize> = g.components().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![10, 6]);
    }

    #[test]
    fn gnp_is_pure_in_seed() {
        let a = gnp(8, 0.4, 7).unwrap();
        let b = gnp(8, 0.4, 7).unwrap();
        let c = gnp(8, 0.4, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c); // overwhelmingly likely for these parameters
    }

    #[test]
    fn spider_center_degree() {
        let g = spider(&[2, 2, 2]).unwrap();
        assert_eq!(g.n(), 7);
        assert_eq!(g.degree(0), 3);
        assert!(g.is_forest());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(cycle(2).is_err());
        assert!(gnp(5, 1.5, 0).is_err());
        assert!(spider(&[0]).is_err());
    }
}
