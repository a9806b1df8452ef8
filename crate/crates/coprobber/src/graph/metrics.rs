//! Structural metrics: girth, circumference, longest induced path, and the
//! forbidden-subgraph hypothesis detectors (P_l-freeness, long induced
//! cycles).
//!
//! Circumference and induced-path/cycle searches are exhaustive and guarded
//! by an explicit size cap; they error rather than approximate.

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Cycle length scale with a distinct infinity (forests have no cycles).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleLen {
    Finite(usize),
    Infinite,
}

impl CycleLen {
    pub fn finite(self) -> Option<usize> {
        match self {
            CycleLen::Finite(k) => Some(k),
            CycleLen::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, CycleLen::Finite(_))
    }
}

impl PartialOrd for CycleLen {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycleLen {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use CycleLen::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl std::fmt::Display for CycleLen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CycleLen::Finite(k) => write!(f, "{k}"),
            CycleLen::Infinite => write!(f, "inf"),
        }
    }
}

/// Default vertex cap for the exhaustive searches.
pub const DEFAULT_METRICS_CAP: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub girth: CycleLen,
    pub circumference: CycleLen,
    /// Vertex count of a longest induced path (0 only for the empty graph).
    pub longest_induced_path: usize,
    pub component_count: usize,
}

/// Computes all metrics at the given cap.
pub fn metrics_with_cap(g: &Graph, cap: usize) -> Result<GraphMetrics, GraphError> {
    if g.n() > cap {
        return Err(GraphError::TooLarge { n: g.n(), cap });
    }
    Ok(GraphMetrics {
        girth: girth(g),
        circumference: circumference(g),
        longest_induced_path: longest_induced_path(g),
        component_count: g.components().len(),
    })
}

pub fn metrics(g: &Graph) -> Result<GraphMetrics, GraphError> {
    metrics_with_cap(g, DEFAULT_METRICS_CAP)
}

/// Girth via BFS from every vertex. Polynomial; not subject to the cap.
pub fn girth(g: &Graph) -> CycleLen {
    let mut best: Option<usize> = None;
    for s in 0..g.n() {
        let mut dist = vec![usize::MAX; g.n()];
        let mut parent = vec![usize::MAX; g.n()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    // non-tree edge closes a walk of length dist[u]+dist[w]+1,
                    // which always contains a cycle no longer than that
                    let cand = dist[u] + dist[w] + 1;
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    match best {
        Some(k) => CycleLen::Finite(k),
        None => CycleLen::Infinite,
    }
}

/// Longest (not necessarily induced) cycle, exhaustively per component.
fn circumference(g: &Graph) -> CycleLen {
    let mut best: Option<usize> = None;
    for comp in g.components() {
        let (sub, _) = g.induced(&comp);
        if let Some(c) = longest_cycle_connected(&sub) {
            if best.map_or(true, |b| c > b) {
                best = Some(c);
            }
        }
    }
    match best {
        Some(k) => CycleLen::Finite(k),
        None => CycleLen::Infinite,
    }
}

fn longest_cycle_connected(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    // anchor each cycle at its minimum vertex; stop early at a Hamiltonian cycle
    for s in 0..n {
        if best == Some(n) {
            break;
        }
        let mut on_path = vec![false; n];
        on_path[s] = true;
        let mut path = vec![s];
        dfs_longest_cycle(g, s, &mut path, &mut on_path, &mut best);
    }
    best
}

fn dfs_longest_cycle(
    g: &Graph,
    s: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Option<usize>,
) {
    if *best == Some(g.n()) {
        return;
    }
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        if w == s && path.len() >= 3 {
            let len = path.len();
            if best.map_or(true, |b| len > b) {
                *best = Some(len);
            }
        }
        if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            dfs_longest_cycle(g, s, path, on_path, best);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Vertex count of a longest induced path.
pub fn longest_induced_path(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut best = 1;
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        dfs_induced_path(g, &mut path, &mut on_path, &mut best, n);
        path.pop();
        on_path[s] = false;
        if best == n {
            break;
        }
    }
    best
}

fn dfs_induced_path(
    g: &Graph,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut usize,
    stop_at: usize,
) {
    if *best == stop_at {
        return;
    }
    let last = *path.last().unwrap();
    'next: for &w in g.neighbors(last) {
        if on_path[w] {
            continue;
        }
        // w may touch only the current endpoint
        for &p in path[..path.len() - 1].iter() {
            if g.has_edge(p, w) {
                continue 'next;
            }
        }
        path.push(w);
        on_path[w] = true;
        if path.len() > *best {
            *best = path.len();
        }
        dfs_induced_path(g, path, on_path, best, stop_at);
        path.pop();
        on_path[w] = false;
    }
}

/// Lexicographically least induced path on exactly `len` vertices, if any.
pub fn find_induced_path(g: &Graph, len: usize) -> Option<Vec<usize>> {
    if len == 0 || len > g.n() {
        return None;
    }
    let mut on_path = vec![false; g.n()];
    let mut path = Vec::with_capacity(len);
    for s in 0..g.n() {
        path.push(s);
        on_path[s] = true;
        if dfs_find_path(g, &mut path, &mut on_path, len) {
            return Some(path);
        }
        path.pop();
        on_path[s] = false;
    }
    None
}

fn dfs_find_path(g: &Graph, path: &mut Vec<usize>, on_path: &mut [bool], len: usize) -> bool {
    if path.len() == len {
        return true;
    }
    let last = *path.last().unwrap();
    'next: for &w in g.neighbors(last) {
        if on_path[w] {
            continue;
        }
        for &p in path[..path.len() - 1].iter() {
            if g.has_edge(p, w) {
                continue 'next;
            }
        }
        path.push(w);
        on_path[w] = true;
        if dfs_find_path(g, path, on_path, len) {
            return true;
        }
        path.pop();
        on_path[w] = false;
    }
    false
}

/// True iff `g` has no induced path on `ell` vertices.
pub fn is_p_free(g: &Graph, ell: usize, cap: usize) -> Result<bool, GraphError> {
    if ell < 1 {
        return Err(GraphError::InvalidParams("is_p_free needs ell >= 1".into()));
    }
    if g.n() > cap {
        return Err(GraphError::TooLarge { n: g.n(), cap });
    }
    if ell == 1 {
        return Ok(g.n() == 0);
    }
    Ok(longest_induced_path(g) < ell)
}

/// True iff some induced cycle of length >= `ell` exists.
pub fn has_induced_cycle_at_least(g: &Graph, ell: usize, cap: usize) -> Result<bool, GraphError> {
    if ell < 3 {
        return Err(GraphError::InvalidParams(
            "has_induced_cycle_at_least needs ell >= 3".into(),
        ));
    }
    if g.n() > cap {
        return Err(GraphError::TooLarge { n: g.n(), cap });
    }
    Ok(max_induced_cycle(g).map_or(false, |c| c >= ell))
}

/// Length of a longest induced cycle, if any cycle exists.
pub fn max_induced_cycle(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        dfs_induced_cycle(g, s, &mut path, &mut on_path, &mut best);
        path.pop();
        on_path[s] = false;
    }
    best
}

fn dfs_induced_cycle(
    g: &Graph,
    s: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Option<usize>,
) {
    let last = *path.last().unwrap();
    'next: for &w in g.neighbors(last) {
        // anchor at the minimum vertex s; break reflection via path[1] < w at closure
        if w <= s || on_path[w] {
            continue;
        }
        // inner vertices touch only their predecessor and, when closing, s
        if path.len() >= 2 {
            for &p in path[1..path.len() - 1].iter() {
                if g.has_edge(p, w) {
                    continue 'next;
                }
            }
            if g.has_edge(w, s) {
                if path[1] < w {
                    let len = path.len() + 1;
                    if best.map_or(true, |b| len > b) {
                        *best = Some(len);
                    }
                }
                continue; // a chord to s forbids extending through w
            }
        }
        path.push(w);
        on_path[w] = true;
        dfs_induced_cycle(g, s, path, on_path, best);
        path.pop();
        on_path[w] = false;
    }
}
