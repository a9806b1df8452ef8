//! Forest patterns and brute-force subgraph containment.
//!
//! A `ForestPattern` is an acyclic graph together with per-component
//! descriptors (leaf count, the unique degree-3 center when present, and the
//! center's eccentricity). Containment is as a subgraph, not induced.

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern graph contains a cycle")]
    NotAForest,
    #[error("component with vertex {0} has {1} vertices of degree >= 3")]
    TooManyBranchVertices(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternComponent {
    /// Sorted vertices of the component within the pattern graph.
    pub vertices: Vec<usize>,
    pub leaves: usize,
    /// The unique degree-3 vertex and its eccentricity inside the component,
    /// when the component has exactly one branch vertex.
    pub center: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestPattern {
    graph: Graph,
    components: Vec<PatternComponent>,
}

impl ForestPattern {
    pub fn new(graph: Graph) -> Result<Self, PatternError> {
        if !graph.is_forest() {
            return Err(PatternError::NotAForest);
        }
        let mut components = Vec::new();
        for verts in graph.components() {
            let leaves = verts.iter().filter(|&&v| graph.degree(v) <= 1).count();
            let branch: Vec<usize> = verts.iter().copied().filter(|&v| graph.degree(v) >= 3).collect();
            let center = match branch.len() {
                0 => None,
                1 => {
                    let c = branch[0];
                    let dist = graph.bfs_distances(c);
                    let ecc = verts.iter().filter_map(|&v| dist[v]).max().unwrap_or(0);
                    Some((c, ecc))
                }
                k => return Err(PatternError::TooManyBranchVertices(branch[0], k)),
            };
            components.push(PatternComponent { vertices: verts, leaves, center });
        }
        Ok(ForestPattern { graph, components })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn components(&self) -> &[PatternComponent] {
        &self.components
    }

    /// True when every component is a tree with at most three leaves, the
    /// shape the Theorem-2 machinery requires.
    pub fn at_most_three_leaves(&self) -> bool {
        self.components.iter().all(|c| c.leaves <= 3)
    }

    /// The claw K_{1,3}.
    pub fn claw() -> Self {
        ForestPattern::new(super::generate::star(3).unwrap()).unwrap()
    }

    /// Spider with the given leg lengths.
    pub fn spider(legs: &[usize]) -> Result<Self, PatternError> {
        Ok(ForestPattern::new(super::generate::spider(legs)?)?)
    }
}

/// Searches for `pattern` as a (not necessarily induced) subgraph of `g`.
///
/// Returns the lexicographically least embedding: the vector indexed by
/// pattern vertex ids, minimal in lexicographic order over all injective
/// maps whose edge images exist in `g`.
pub fn contains_forest_subgraph(
    g: &Graph,
    pattern: &ForestPattern,
    cap: usize,
) -> Result<Option<Vec<usize>>, GraphError> {
    if g.n() > cap {
        return Err(GraphError::TooLarge { n: g.n(), cap });
    }
    let h = pattern.graph();
    if h.n() > g.n() {
        return Ok(None);
    }
    let mut assign = vec![usize::MAX; h.n()];
    let mut used = vec![false; g.n()];
    if embed(g, h, 0, &mut assign, &mut used) {
        Ok(Some(assign))
    } else {
        Ok(None)
    }
}

fn embed(g: &Graph, h: &Graph, next: usize, assign: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if next == h.n() {
        return true;
    }
    'cand: for v in 0..g.n() {
        if used[v] || g.degree(v) < h.degree(next) {
            continue;
        }
        for &hn in h.neighbors(next) {
            if hn < next && !g.has_edge(assign[hn], v) {
                continue 'cand;
            }
        }
        assign[next] = v;
        used[v] = true;
        if embed(g, h, next + 1, assign, used) {
            return true;
        }
        assign[next] = usize::MAX;
        used[v] = false;
    }
    false
}

/// Searches for `h` as an induced subgraph of `g`: edges and non-edges of
/// `h` must both be preserved. Lexicographically least embedding.
pub fn contains_induced_subgraph(
    g: &Graph,
    h: &Graph,
    cap: usize,
) -> Result<Option<Vec<usize>>, GraphError> {
    if g.n() > cap {
        return Err(GraphError::TooLarge { n: g.n(), cap });
    }
    if h.n() > g.n() {
        return Ok(None);
    }
    let mut assign = vec![usize::MAX; h.n()];
    let mut used = vec![false; g.n()];
    if embed_induced(g, h, 0, &mut assign, &mut used) {
        Ok(Some(assign))
    } else {
        Ok(None)
    }
}

fn embed_induced(g: &Graph, h: &Graph, next: usize, assign: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if next == h.n() {
        return true;
    }
    'cand: for v in 0..g.n() {
        if used[v] || g.degree(v) < h.degree(next) {
            continue;
        }
        for prior in 0..next {
            if g.has_edge(assign[prior], v) != h.has_edge(prior, next) {
                continue 'cand;
            }
        }
        assign[next] = v;
        used[v] = true;
        if embed_induced(g, h, next + 1, assign, used) {
            return true;
        }
        assign[next] = usize::MAX;
        used[v] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    /// Oracle: exhaustive injective assignment without pruning.
    fn oracle_contains(g: &Graph, h: &Graph) -> bool {
        fn go(g: &Graph, h: &Graph, i: usize, assign: &mut Vec<usize>) -> bool {
            if i == h.n() {
                return h
                    .edges()
                    .iter()
                    .all(|&(a, b)| g.has_edge(assign[a], assign[b]));
            }
            for v in 0..g.n() {
                if assign[..i].contains(&v) {
                    continue;
                }
                assign.push(v);
                if go(g, h, i + 1, assign) {
                    return true;
                }
                assign.pop();
            }
            false
        }
        if h.n() > g.n() {
            return false;
        }
        go(g, h, 0, &mut Vec::new())
    }

    #[test]
    fn triangle_has_no_claw() {
        let g = generate::complete(3).unwrap();
        assert_eq!(contains_forest_subgraph(&g, &ForestPattern::claw(), 30).unwrap(), None);
    }

    #[test]
    fn claw_contains_itself_identically() {
        let g = generate::star(3).unwrap();
        let emb = contains_forest_subgraph(&g, &ForestPattern::claw(), 30)
            .unwrap()
            .unwrap();
        assert_eq!(emb, vec![0, 1, 2, 3]);
    }

    #[test]
    fn petersen_contains_spider_222() {
        let g = generate::petersen();
        let pat = ForestPattern::spider(&[2, 2, 2]).unwrap();
        let emb = contains_forest_subgraph(&g, &pat, 30).unwrap().unwrap();
        // check the embedding's edge images directly
        for &(a, b) in pat.graph().edges() {
            assert!(g.has_edge(emb[a], emb[b]));
        }
        assert!(oracle_contains(&g, pat.graph()));
    }

    #[test]
    fn pattern_descriptors() {
        let pat = ForestPattern::spider(&[2, 2, 2]).unwrap();
        assert_eq!(pat.components().len(), 1);
        assert_eq!(pat.components()[0].leaves, 3);
        assert_eq!(pat.components()[0].center, Some((0, 2)));
        assert!(pat.at_most_three_leaves());

        let four_star = ForestPattern::new(generate::star(4).unwrap()).unwrap();
        assert!(!four_star.at_most_three_leaves());

        assert!(ForestPattern::new(generate::cycle(4).unwrap()).is_err());
    }

    #[test]
    fn containment_matches_oracle_on_random_graphs() {
        let claw = ForestPattern::claw();
        let spider = ForestPattern::spider(&[2, 1, 1]).unwrap();
        for seed in 0..30u64 {
            let g = generate::gnp(7, 0.35, seed).unwrap();
            for pat in [&claw, &spider] {
                let found = contains_forest_subgraph(&g, pat, 30).unwrap().is_some();
                assert_eq!(found, oracle_contains(&g, pat.graph()), "seed {seed}");
            }
        }
    }

    #[test]
    fn induced_containment_differs_from_subgraph_containment() {
        // the net graph: triangle 0,1,2 with pendants 3,4,5; it has a claw
        // as a subgraph (any triangle corner) but no induced claw
        let net = Graph::new(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)]).unwrap();
        let claw = ForestPattern::claw();
        assert!(contains_forest_subgraph(&net, &claw, 30).unwrap().is_some());
        assert_eq!(contains_induced_subgraph(&net, claw.graph(), 30).unwrap(), None);
        // an induced claw maps exactly in a star
        let star = generate::star(3).unwrap();
        assert_eq!(
            contains_induced_subgraph(&star, claw.graph(), 30).unwrap(),
            Some(vec![0, 1, 2, 3])
        );
    }

    #[test]
    fn multi_component_pattern() {
        // P_2 together with a claw needs six vertices in two pieces
        let p2_claw = generate::disjoint_union(
            &generate::path(2).unwrap(),
            &generate::star(3).unwrap(),
        );
        let pat = ForestPattern::new(p2_claw).unwrap();
        assert_eq!(pat.components().len(), 2);
        let g = generate::star(3).unwrap(); // claw alone: no disjoint edge left
        assert_eq!(contains_forest_subgraph(&g, &pat, 30).unwrap(), None);
        let big = generate::disjoint_union(&generate::star(3).unwrap(), &generate::path(2).unwrap());
        assert!(contains_forest_subgraph(&big, &pat, 30).unwrap().is_some());
    }
}
