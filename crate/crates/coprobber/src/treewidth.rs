//! Exact tree decompositions at desk scale.
//!
//! The solver runs a dynamic program over vertex subsets equivalent to
//! searching all elimination orderings: F(S) is the best achievable width
//! when the vertices of S are already eliminated, with
//! F(S) = min over v not in S of max(|Q(S,v)|, F(S + v)), where Q(S,v) is the
//! set of vertices outside S reachable from v through S. The witness order is
//! re-extracted lexicographically least among the optimal ones, so the
//! returned decomposition is reproducible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Default vertex cap for the exact algorithm (2^n states).
pub const DEFAULT_TREEWIDTH_CAP: usize = 20;

/// Hard limit: the subset DP uses u64 masks and 2^n bytes of table.
const DP_HARD_LIMIT: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreewidthError {
    #[error("instance too large: n = {n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("empty graph has no tree decomposition")]
    EmptyGraph,
    #[error("order is not a permutation of the vertices")]
    NotAPermutation,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A tree of bags over the vertices of some graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub tree: Graph,
    pub bags: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// Width: maximum bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// First violated decomposition axiom, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    BagCountMismatch { tree_nodes: usize, bags: usize },
    TreeNotConnected,
    TreeHasCycle,
    BagVertexOutOfRange { node: usize, vertex: usize },
    VertexUncovered { vertex: usize },
    EdgeUncovered { u: usize, v: usize },
    OccurrenceDisconnected { vertex: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::BagCountMismatch { tree_nodes, bags } => {
                write!(f, "{tree_nodes} tree nodes but {bags} bags")
            }
            Violation::TreeNotConnected => write!(f, "decomposition tree is not connected"),
            Violation::TreeHasCycle => write!(f, "decomposition tree contains a cycle"),
            Violation::BagVertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} names vertex {vertex} outside the graph")
            }
            Violation::VertexUncovered { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::EdgeUncovered { u, v } => write!(f, "edge {u} {v} is inside no bag"),
            Violation::OccurrenceDisconnected { vertex } => {
                write!(f, "bags containing vertex {vertex} do not induce a subtree")
            }
        }
    }
}

/// Checks the three decomposition axioms; never panics or errors.
pub fn validate_decomposition(g: &Graph, d: &TreeDecomposition) -> Result<(), Violation> {
    let t = &d.tree;
    if t.n() != d.bags.len() {
        return Err(Violation::BagCountMismatch { tree_nodes: t.n(), bags: d.bags.len() });
    }
    if t.n() == 0 {
        return Err(Violation::BagCountMismatch { tree_nodes: 0, bags: 0 });
    }
    if !t.is_connected() {
        return Err(Violation::TreeNotConnected);
    }
    if t.m() != t.n() - 1 {
        return Err(Violation::TreeHasCycle);
    }
    for (node, bag) in d.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= g.n()) {
            return Err(Violation::BagVertexOutOfRange { node, vertex: v });
        }
    }
    let mut covered = vec![false; g.n()];
    for bag in &d.bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Violation::VertexUncovered { vertex: v });
    }
    'edges: for &(u, v) in g.edges() {
        for bag in &d.bags {
            if bag.contains(&u) && bag.contains(&v) {
                continue 'edges;
            }
        }
        return Err(Violation::EdgeUncovered { u, v });
    }
    for v in g.vertices() {
        let nodes: Vec<usize> = (0..t.n()).filter(|&x| d.bags[x].contains(&v)).collect();
        let (sub, _) = t.induced(&nodes);
        if !sub.is_connected() {
            return Err(Violation::OccurrenceDisconnected { vertex: v });
        }
    }
    Ok(())
}

/// Builds the standard decomposition realized by an elimination order: the
/// bag of v is v plus its later neighbors in the fill graph, and each bag
/// hangs off the bag of its earliest-eliminated later neighbor.
pub fn decomposition_from_elimination_order(
    g: &Graph,
    order: &[usize],
) -> Result<TreeDecomposition, TreewidthError> {
    let n = g.n();
    if n == 0 {
        return Err(TreewidthError::EmptyGraph);
    }
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(TreewidthError::NotAPermutation);
    }
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut fill: Vec<std::collections::BTreeSet<usize>> =
        g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut eliminated = vec![false; n];
    for &v in order {
        let later: Vec<usize> = fill[v].iter().copied().filter(|&w| !eliminated[w]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in later[i + 1..].iter() {
                fill[a].insert(b);
                fill[b].insert(a);
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        eliminated[v] = true;
    }
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let parent = bags[i]
            .iter()
            .filter(|&&w| w != v)
            .min_by_key(|&&w| position[w])
            .map(|&w| position[w]);
        match parent {
            Some(p) => tree_edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for pair in roots.windows(2) {
        tree_edges.push((pair[0], pair[1]));
    }
    let tree = Graph::new(n, &tree_edges)?;
    Ok(TreeDecomposition { tree, bags })
}

/// Exact treewidth with a witness decomposition.
///
/// Disconnected inputs are decomposed per component and the component trees
/// are bridged; the width is the maximum over components.
pub fn exact_treewidth(g: &Graph, cap: usize) -> Result<(usize, TreeDecomposition), TreewidthError> {
    if g.n() == 0 {
        return Err(TreewidthError::EmptyGraph);
    }
    if g.n() > cap {
        return Err(TreewidthError::TooLarge { n: g.n(), cap });
    }
    let mut order: Vec<usize> = Vec::with_capacity(g.n());
    for comp in g.components() {
        let (sub, back) = g.induced(&comp);
        let sub_order = optimal_elimination_order(&sub)?;
        order.extend(sub_order.into_iter().map(|v| back[v]));
    }
    let decomposition = decomposition_from_elimination_order(g, &order)?;
    let width = decomposition.width();
    debug_assert_eq!(validate_decomposition(g, &decomposition), Ok(()));
    Ok((width, decomposition))
}

/// Lexicographically least elimination order achieving the exact treewidth
/// of a connected graph.
fn optimal_elimination_order(g: &Graph) -> Result<Vec<usize>, TreewidthError> {
    let n = g.n();
    if n > DP_HARD_LIMIT {
        return Err(TreewidthError::TooLarge { n, cap: DP_HARD_LIMIT });
    }
    let adj: Vec<u64> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let full: u64 = if n == 64 { !0 } else { (1 << n) - 1 };
    let mut table = vec![0u8; 1usize << n];
    for s in (0..full).rev() {
        let mut best = u8::MAX;
        for v in 0..n {
            if s & (1 << v) != 0 {
                continue;
            }
            let q = eliminate_degree(&adj, s, v, n);
            let rest = table[(s | 1 << v) as usize];
            best = best.min(q.max(rest));
        }
        table[s as usize] = best;
    }
    let target = table[0];
    let mut order = Vec::with_capacity(n);
    let mut s: u64 = 0;
    while s != full {
        let v = (0..n)
            .find(|&v| {
                s & (1 << v) == 0
                    && eliminate_degree(&adj, s, v, n) <= target
                    && table[(s | 1 << v) as usize] <= target
            })
            .expect("DP value is achievable");
        order.push(v);
        s |= 1 << v;
    }
    Ok(order)
}

/// |Q(S,v)|: vertices outside S reachable from v through S, i.e. the degree
/// of v at elimination time when S was eliminated first.
fn eliminate_degree(adj: &[u64], s: u64, v: usize, n: usize) -> u8 {
    let mut seen: u64 = 1 << v;
    let mut frontier: u64 = adj[v];
    let mut reached: u64 = 0;
    while frontier != 0 {
        let w = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        if seen & (1 << w) != 0 {
            continue;
        }
        seen |= 1 << w;
        if s & (1 << w) != 0 {
            frontier |= adj[w] & !seen;
        } else {
            reached |= 1 << w;
        }
    }
    debug_assert!(n <= 64);
    reached.count_ones() as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn trees_have_width_one() {
        for g in [generate::path(5).unwrap(), generate::spider(&[2, 3, 1]).unwrap()] {
            let (w, d) = exact_treewidth(&g, 20).unwrap();
            assert_eq!(w, 1);
            assert_eq!(validate_decomposition(&g, &d), Ok(()));
        }
    }

    #[test]
    fn cliques_have_width_n_minus_1() {
        for n in 1..=6 {
            let g = generate::complete(n).unwrap();
            let (w, _) = exact_treewidth(&g, 20).unwrap();
            assert_eq!(w, n - 1);
        }
    }

    #[test]
    fn petersen_has_width_4() {
        let (w, d) = exact_treewidth(&generate::petersen(), 20).unwrap();
        assert_eq!(w, 4);
        assert_eq!(validate_decomposition(&generate::petersen(), &d), Ok(()));
    }

    #[test]
    fn disconnected_takes_component_maximum() {
        let g = generate::disjoint_union(&generate::petersen(), &generate::complete(6).unwrap());
        let (w, d) = exact_treewidth(&g, 20).unwrap();
        assert_eq!(w, 5);
        assert_eq!(validate_decomposition(&g, &d), Ok(()));
    }

    #[test]
    fn elimination_order_examples() {
        let p3 = generate::path(3).unwrap();
        let d = decomposition_from_elimination_order(&p3, &[0, 2, 1]).unwrap();
        assert_eq!(d.width(), 1);
        assert_eq!(validate_decomposition(&p3, &d), Ok(()));

        let k3 = generate::complete(3).unwrap();
        for order in [[0, 1, 2], [2, 1, 0], [1, 0, 2]] {
            let d = decomposition_from_elimination_order(&k3, &order).unwrap();
            assert_eq!(d.width(), 2);
        }

        let c4 = generate::cycle(4).unwrap();
        let d = decomposition_from_elimination_order(&c4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(d.width(), 2); // eliminating a cycle vertex adds one chord
        assert_eq!(validate_decomposition(&c4, &d), Ok(()));

        assert!(decomposition_from_elimination_order(&c4, &[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn validation_catches_each_axiom() {
        let g = generate::path(4).unwrap();
        // valid path decomposition
        let good = TreeDecomposition {
            tree: generate::path(3).unwrap(),
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
        };
        assert_eq!(validate_decomposition(&g, &good), Ok(()));
        assert_eq!(good.width(), 1);

        // single bag with everything is always valid
        let single = TreeDecomposition { tree: generate::path(1).unwrap(), bags: vec![vec![0, 1, 2, 3]] };
        assert_eq!(validate_decomposition(&g, &single), Ok(()));
        assert_eq!(single.width(), 3);

        let missing_edge = TreeDecomposition {
            tree: generate::path(2).unwrap(),
            bags: vec![vec![0, 1, 2], vec![3]],
        };
        assert_eq!(
            validate_decomposition(&g, &missing_edge),
            Err(Violation::EdgeUncovered { u: 2, v: 3 })
        );

        let uncovered = TreeDecomposition {
            tree: generate::path(2).unwrap(),
            bags: vec![vec![0, 1], vec![1, 2]],
        };
        assert_eq!(
            validate_decomposition(&g, &uncovered),
            Err(Violation::VertexUncovered { vertex: 3 })
        );

        let disconnected_occurrence = TreeDecomposition {
            tree: generate::path(3).unwrap(),
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3, 0]],
        };
        assert_eq!(
            validate_decomposition(&g, &disconnected_occurrence),
            Err(Violation::OccurrenceDisconnected { vertex: 0 })
        );
    }

    #[test]
    fn cap_errors_are_explicit() {
        let g = generate::path(21).unwrap();
        assert!(matches!(
            exact_treewidth(&g, 20),
            Err(TreewidthError::TooLarge { n: 21, cap: 20 })
        ));
    }

    #[test]
    fn width_agrees_with_dp_and_validates_on_random_graphs() {
        for seed in 0..30u64 {
            let g = generate::gnp(8, 0.4, seed).unwrap();
            let (w, d) = exact_treewidth(&g, 20).unwrap();
            assert_eq!(validate_decomposition(&g, &d), Ok(()), "seed {seed}");
            assert_eq!(d.width(), w, "seed {seed}");
            // removing an edge never increases treewidth
            if let Some(&(u, v)) = g.edges().first() {
                let rest: Vec<_> = g.edges().iter().copied().filter(|&e| e != (u, v)).collect();
                let smaller = Graph::new(g.n(), &rest).unwrap();
                let (w2, _) = exact_treewidth(&smaller, 20).unwrap();
                assert!(w2 <= w, "seed {seed}: removing an edge raised width");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let (_, d) = exact_treewidth(&generate::cycle(5).unwrap(), 20).unwrap();
        let back = TreeDecomposition::from_json(&d.to_json()).unwrap();
        assert_eq!(d, back);
    }
}
